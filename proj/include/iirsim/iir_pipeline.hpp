#pragma once

#include <array>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "iirsim/aggregation.hpp"
#include "iirsim/classifier.hpp"
#include "iirsim/core_model.hpp"
#include "iirsim/topology.hpp"

namespace iirsim {

/// Thresholds for the four filter stages. Value-denominated fields are in
/// field units.
struct PipelineConfig {
  double band_lo = 20.0;  // nominal band
  double band_hi = 30.0;
  double theta_p = 0.1;   // minimum out-of-band severity to keep
  std::size_t window_w = 4;
  double delta_o = 0.5;   // minimum deviation from history to be informative
  double range_lo = -40.0;  // physical plausibility
  double range_hi = 85.0;
  double tau_r = 2.0;     // peer agreement tolerance
  double quorum_q = 0.3;  // fraction of peers that must agree
  double rescue_score = 1.0;
  /// Without a trained model, decide by the rescue rule alone instead of
  /// raising UntrainedModel.
  bool symbolic_only = false;

  double band_width() const { return band_hi - band_lo; }
};

/// Throws InvalidScenario when the configuration breaks its invariants.
void validate(const PipelineConfig& cfg);

/// Forwarded values per source, newest last, at most `window` of them.
class HistoryIndex {
public:
  explicit HistoryIndex(std::size_t window = 4) : window_(window) {}

  void record(NodeId source, double value);
  std::optional<double> mean(NodeId source) const;
  std::span<const double> values(NodeId source) const;
  std::size_t window() const { return window_; }

private:
  std::size_t window_;
  std::map<NodeId, std::vector<double>> values_;
};

struct StageResult {
  std::vector<SensorReading> kept;
  std::vector<SensorReading> dropped;
};

double priority_score(double value, const PipelineConfig& cfg);
FeatureVector classifier_features(const SensorReading& r, const PipelineConfig& cfg);

StageResult priority_analysis(std::span<const SensorReading> readings, const PipelineConfig& cfg);

StageResult opinion_analysis(std::span<const SensorReading> readings, const HistoryIndex& history,
                             const PipelineConfig& cfg);

/// `round_context` holds every post-dedup reading of the round; peers of a
/// reading are the context readings whose source neighbors its own source.
StageResult review_analysis(std::span<const SensorReading> readings,
                            std::span<const SensorReading> round_context, const Topology& topology,
                            const PipelineConfig& cfg);

StageResult sentiment_classify(std::span<const SensorReading> readings,
                               const std::optional<ClassifierModel>& model,
                               const PipelineConfig& cfg);

/// Everything a stage may look at besides its input.
struct StageContext {
  const PipelineConfig& cfg;
  const HistoryIndex& history;
  std::span<const SensorReading> round_context;
  const Topology& topology;
  const std::optional<ClassifierModel>& model;
};

class FilterStage {
public:
  virtual ~FilterStage() = default;
  virtual StageResult apply(std::span<const SensorReading> readings, const StageContext& ctx) const = 0;
};

/// The default implementation of `stage`.
std::unique_ptr<FilterStage> make_default_stage(Stage stage);

struct DropRecord {
  NodeId source = 0;
  Round round = 0;
  double value = 0.0;
  Stage stage = Stage::Priority;

  friend bool operator==(const DropRecord&, const DropRecord&) = default;
};

struct StageTrace {
  std::array<std::size_t, kStageCount> input{};
  std::array<std::size_t, kStageCount> output{};
  std::vector<DropRecord> drops;

  friend bool operator==(const StageTrace&, const StageTrace&) = default;
};

struct PipelineOutput {
  std::vector<SensorReading> intelligent;
  std::vector<SensorReading> dropped;  // every reading removed, tagged with its stage
  StageTrace trace;
};

/// The staircase filter owned by a sub-sink: four stages applied strictly in
/// order, with the forwarded-value history carried between rounds.
class Pipeline {
public:
  Pipeline(PipelineConfig cfg, std::optional<ClassifierModel> model);

  void set_stage(Stage stage, std::unique_ptr<FilterStage> impl);

  /// Filters one round. Only the final survivors enter the history.
  PipelineOutput run(const RoundSnapshot& snapshot, std::span<const SensorReading> round_context,
                     const Topology& topology);

  /// Runs the first three stages only, without touching the history.
  std::vector<SensorReading> run_until_sentiment(const RoundSnapshot& snapshot,
                                                 std::span<const SensorReading> round_context,
                                                 const Topology& topology) const;

  const PipelineConfig& config() const { return cfg_; }
  const HistoryIndex& history() const { return history_; }
  HistoryIndex& history() { return history_; }
  const std::optional<ClassifierModel>& model() const { return model_; }

private:
  PipelineConfig cfg_;
  std::optional<ClassifierModel> model_;
  HistoryIndex history_;
  std::array<std::unique_ptr<FilterStage>, kStageCount> stages_;
};

/// One-shot form of Pipeline::run with an externally owned history.
PipelineOutput run_pipeline(const RoundSnapshot& snapshot,
                            std::span<const SensorReading> round_context, const Topology& topology,
                            const PipelineConfig& cfg, const std::optional<ClassifierModel>& model,
                            HistoryIndex& history);

}  // namespace iirsim
