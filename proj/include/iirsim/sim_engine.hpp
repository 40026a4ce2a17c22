#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "iirsim/aggregation.hpp"
#include "iirsim/classifier.hpp"
#include "iirsim/dissemination.hpp"
#include "iirsim/energy_radio.hpp"
#include "iirsim/iir_pipeline.hpp"
#include "iirsim/metrics_report.hpp"
#include "iirsim/rng.hpp"
#include "iirsim/scenario.hpp"
#include "iirsim/topology.hpp"

namespace iirsim {

struct FieldEvent {
  Position center;
  double magnitude = 0.0;
  Round remaining = 0;  // rounds still active, including the current one
};

/// Injected events and the nodes they influence. Filters never see this;
/// it only labels readings for training and accuracy metrics.
class GroundTruth {
public:
  GroundTruth() = default;
  GroundTruth(EventParams params, std::uint64_t seed, Position lo, Position hi);

  /// Retires expired events, then draws this round's new ones.
  void advance(Round round);

  const std::vector<FieldEvent>& active() const { return active_; }
  bool influenced(Position p) const;
  double offset(Position p) const;

private:
  EventParams params_;
  RandomStream rng_{0, StreamPurpose::Events};
  Position lo_, hi_;
  std::vector<FieldEvent> active_;
  bool started_ = false;
};

/// Noise-free field value plus event offsets at `node` in `round`.
double field_value(const Node& node, Round round, const FieldParams& field, const GroundTruth& truth);

/// One reading: the field value plus one gaussian draw from `noise`.
SensorReading sense(const Node& node, Round round, const FieldParams& field,
                    const GroundTruth& truth, RandomStream& noise);

struct RunOptions {
  bool keep_events = false;
  bool keep_delivered = false;
  /// Warm-up runs replace the classifier with a pass-through and collect
  /// (features, ground-truth label) for every review survivor.
  bool collect_training = false;
};

/// Reconciliation totals: per-event radio costs on one side, budget changes
/// on the other.
struct EnergyAudit {
  double event_energy = 0.0;      // sum of tx_energy + rx_energy over events
  double event_drained = 0.0;     // sum of tx_drained + rx_drained over events
  double ledger_drained = 0.0;    // sum of (initial - remaining) over finite nodes
  double unlimited_billed = 0.0;  // billed to the sink
  double overdraw = 0.0;          // clamped away when a debit exceeded the budget
  double min_remaining = 0.0;
};

struct RoundRecord {
  Round round = 0;
  RoundTally tally;
  StageTrace trace;
};

struct RunOutcome {
  MetricsReport report;
  EnergyAudit audit;
  std::vector<TransmissionEvent> events;
  std::vector<SensorReading> delivered;
  std::vector<RoundRecord> rounds;
  std::vector<TrainingExample> training;
  /// Round in which each node died, if it did.
  std::vector<std::optional<Round>> death_round;
};

/// Lock-step simulation of one scenario. The round loop is the only writer
/// of simulation state.
class Simulation {
public:
  Simulation(ScenarioConfig scenario, std::optional<ClassifierModel> model, RunOptions options = {});

  /// Executes the next round. Returns false once the run is over (all
  /// rounds done or the network has died).
  bool step_round();
  bool finished() const;

  RunOutcome finish() &&;

  const Topology& topology() const { return topology_; }
  const EnergyLedger& energy() const { return energy_; }
  Round next_round() const { return next_round_; }

private:
  void refresh_topology();
  bool network_alive() const;
  void account(DeliveryOutcome& leg);
  RoundTally run_framework(Round round, std::vector<SensorReading> sensed, StageTrace& trace);
  RoundTally run_baseline(std::vector<SensorReading> sensed);
  void note_deaths(Round round);

  ScenarioConfig scenario_;
  RunOptions options_;
  Topology topology_;
  EnergyLedger energy_;
  GroundTruth truth_;
  RandomStream noise_;
  Pipeline pipeline_;
  std::map<NodeId, SuppressionIndex> suppression_;  // per aggregator
  std::vector<bool> event_labeled_;  // this round, per node
  Round next_round_ = 0;
  bool network_dead_ = false;
  bool topology_stale_ = false;
  CompensatedSum event_energy_, event_drained_;
  RunOutcome outcome_;
};

/// Runs `scenario` to completion with the given classifier.
RunOutcome simulate(const ScenarioConfig& scenario, const std::optional<ClassifierModel>& model,
                    RunOptions options = {});

/// Labeled review survivors from a framework-mode warm-up run of `scenario`
/// under `seed`.
std::vector<TrainingExample> collect_training_examples(const ScenarioConfig& scenario,
                                                       std::uint64_t seed);

/// Seed of the warm-up run paired with a measurement run.
std::uint64_t warmup_seed(std::uint64_t seed);

/// Classifier for `scenario`: trained on its warm-up run, or the zero model
/// when the warm-up produced nothing to learn from.
ClassifierModel train_for_scenario(const ScenarioConfig& scenario);

/// Full run. Framework mode without a model and without symbolic_only
/// trains one on the warm-up run first.
MetricsReport run(const ScenarioConfig& scenario,
                  const std::optional<ClassifierModel>& model = std::nullopt);

}  // namespace iirsim
