#include "iirsim/iir_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "iirsim/errors.hpp"

namespace iirsim {

void validate(const PipelineConfig& cfg) {
  auto fail = [](const std::string& what) { throw InvalidScenario(what); };
  const double values[] = {cfg.band_lo, cfg.band_hi, cfg.theta_p,  cfg.delta_o,
                           cfg.range_lo, cfg.range_hi, cfg.tau_r, cfg.quorum_q, cfg.rescue_score};
  for (double v : values) {
    if (!std::isfinite(v)) fail("pipeline thresholds must be finite");
  }
  if (!(cfg.band_lo < cfg.band_hi)) fail("band_lo must be below band_hi");
  if (cfg.range_lo > cfg.band_lo || cfg.band_hi > cfg.range_hi) {
    fail("the nominal band must lie inside [range_lo, range_hi]");
  }
  if (cfg.theta_p < 0 || cfg.delta_o < 0 || cfg.tau_r < 0 || cfg.rescue_score < 0) {
    fail("pipeline thresholds must be non-negative");
  }
  if (cfg.quorum_q < 0 || cfg.quorum_q > 1) fail("quorum_q must lie in [0, 1]");
  if (cfg.window_w == 0) fail("window_w must be positive");
}

void HistoryIndex::record(NodeId source, double value) {
  auto& v = values_[source];
  v.push_back(value);
  if (v.size() > window_) v.erase(v.begin(), v.end() - std::ptrdiff_t(window_));
}

std::optional<double> HistoryIndex::mean(NodeId source) const {
  auto it = values_.find(source);
  if (it == values_.end() || it->second.empty()) return std::nullopt;
  double sum = 0.0;
  for (double v : it->second) sum += v;
  return sum / double(it->second.size());
}

std::span<const double> HistoryIndex::values(NodeId source) const {
  auto it = values_.find(source);
  if (it == values_.end()) return {};
  return it->second;
}

double priority_score(double value, const PipelineConfig& cfg) {
  const double width = cfg.band_width();
  return std::max({0.0, (value - cfg.band_hi) / width, (cfg.band_lo - value) / width});
}

FeatureVector classifier_features(const SensorReading& r, const PipelineConfig& cfg) {
  const double width = cfg.band_width();
  const auto& a = r.annotations;
  return {a.priority_score, a.opinion_deviation / width, a.consensus_ratio,
          (r.value - cfg.band_lo) / width, 1.0};
}

namespace {

void drop_into(StageResult& result, SensorReading r, Stage stage) {
  r.annotations.drop_stage = stage;
  result.dropped.push_back(std::move(r));
}

}  // namespace

StageResult priority_analysis(std::span<const SensorReading> readings, const PipelineConfig& cfg) {
  StageResult result;
  for (SensorReading r : readings) {
    r.annotations.priority_score = priority_score(r.value, cfg);
    if (r.annotations.priority_score >= cfg.theta_p) {
      result.kept.push_back(std::move(r));
    } else {
      drop_into(result, std::move(r), Stage::Priority);
    }
  }
  return result;
}

StageResult opinion_analysis(std::span<const SensorReading> readings, const HistoryIndex& history,
                             const PipelineConfig& cfg) {
  StageResult result;
  for (SensorReading r : readings) {
    if (r.value < cfg.range_lo || r.value > cfg.range_hi) {
      drop_into(result, std::move(r), Stage::Opinion);
      continue;
    }
    const auto predicted = history.mean(r.source);
    if (!predicted) {
      r.annotations.opinion_deviation = cfg.band_width();
      result.kept.push_back(std::move(r));
      continue;
    }
    r.annotations.opinion_deviation = std::abs(r.value - *predicted);
    if (r.annotations.opinion_deviation >= cfg.delta_o) {
      result.kept.push_back(std::move(r));
    } else {
      drop_into(result, std::move(r), Stage::Opinion);
    }
  }
  return result;
}

StageResult review_analysis(std::span<const SensorReading> readings,
                            std::span<const SensorReading> round_context, const Topology& topology,
                            const PipelineConfig& cfg) {
  StageResult result;
  for (SensorReading r : readings) {
    const auto neighbors = neighbors_in_round(topology, r.source);
    std::size_t peers = 0;
    std::size_t agreeing = 0;
    for (const auto& peer : round_context) {
      if (!std::binary_search(neighbors.begin(), neighbors.end(), peer.source)) continue;
      ++peers;
      if (std::abs(peer.value - r.value) <= cfg.tau_r) ++agreeing;
    }
    r.annotations.consensus_ratio = peers == 0 ? 1.0 : double(agreeing) / double(peers);
    if (r.annotations.consensus_ratio >= cfg.quorum_q) {
      result.kept.push_back(std::move(r));
    } else {
      drop_into(result, std::move(r), Stage::Review);
    }
  }
  return result;
}

StageResult sentiment_classify(std::span<const SensorReading> readings,
                               const std::optional<ClassifierModel>& model,
                               const PipelineConfig& cfg) {
  StageResult result;
  for (SensorReading r : readings) {
    Label label = Label::Discard;
    if (r.annotations.priority_score >= cfg.rescue_score) {
      label = Label::Forward;
      r.annotations.rule_forced = true;
    } else if (model) {
      label = model->decide(classifier_features(r, cfg));
    } else if (!cfg.symbolic_only) {
      throw UntrainedModel("sentiment stage has no classifier and symbolic_only is off");
    }
    r.annotations.class_label = label;
    if (label == Label::Forward) {
      result.kept.push_back(std::move(r));
    } else {
      drop_into(result, std::move(r), Stage::Sentiment);
    }
  }
  return result;
}

namespace {

class PriorityStage final : public FilterStage {
public:
  StageResult apply(std::span<const SensorReading> in, const StageContext& ctx) const override {
    return priority_analysis(in, ctx.cfg);
  }
};

class OpinionStage final : public FilterStage {
public:
  StageResult apply(std::span<const SensorReading> in, const StageContext& ctx) const override {
    return opinion_analysis(in, ctx.history, ctx.cfg);
  }
};

class ReviewStage final : public FilterStage {
public:
  StageResult apply(std::span<const SensorReading> in, const StageContext& ctx) const override {
    return review_analysis(in, ctx.round_context, ctx.topology, ctx.cfg);
  }
};

class SentimentStage final : public FilterStage {
public:
  StageResult apply(std::span<const SensorReading> in, const StageContext& ctx) const override {
    return sentiment_classify(in, ctx.model, ctx.cfg);
  }
};

using StageArray = std::array<std::unique_ptr<FilterStage>, kStageCount>;

StageArray default_stages() {
  StageArray stages;
  for (std::size_t i = 0; i < kStageCount; ++i) stages[i] = make_default_stage(Stage(i));
  return stages;
}

PipelineOutput run_stages(const StageArray& stages, std::size_t stage_count,
                          const RoundSnapshot& snapshot, const StageContext& ctx) {
  PipelineOutput out;
  std::vector<SensorReading> current = canonical_order(snapshot.readings);
  for (std::size_t i = 0; i < stage_count; ++i) {
    out.trace.input[i] = current.size();
    StageResult step = stages[i]->apply(current, ctx);
    for (auto& d : step.dropped) {
      // a stage may only tag what it removed itself
      d.annotations.drop_stage = Stage(i);
      out.trace.drops.push_back({d.source, d.round, d.value, Stage(i)});
      out.dropped.push_back(std::move(d));
    }
    current = std::move(step.kept);
    out.trace.output[i] = current.size();
  }
  out.intelligent = std::move(current);
  return out;
}

}  // namespace

std::unique_ptr<FilterStage> make_default_stage(Stage stage) {
  switch (stage) {
    case Stage::Priority: return std::make_unique<PriorityStage>();
    case Stage::Opinion: return std::make_unique<OpinionStage>();
    case Stage::Review: return std::make_unique<ReviewStage>();
    case Stage::Sentiment: return std::make_unique<SentimentStage>();
  }
  return nullptr;
}

Pipeline::Pipeline(PipelineConfig cfg, std::optional<ClassifierModel> model)
    : cfg_(cfg), model_(std::move(model)), history_(cfg.window_w), stages_(default_stages()) {
  validate(cfg_);
}

void Pipeline::set_stage(Stage stage, std::unique_ptr<FilterStage> impl) {
  stages_[std::size_t(stage)] = impl ? std::move(impl) : make_default_stage(stage);
}

PipelineOutput Pipeline::run(const RoundSnapshot& snapshot,
                             std::span<const SensorReading> round_context,
                             const Topology& topology) {
  const StageContext ctx{cfg_, history_, round_context, topology, model_};
  PipelineOutput out = run_stages(stages_, kStageCount, snapshot, ctx);
  for (const auto& r : out.intelligent) history_.record(r.source, r.value);
  return out;
}

std::vector<SensorReading> Pipeline::run_until_sentiment(
    const RoundSnapshot& snapshot, std::span<const SensorReading> round_context,
    const Topology& topology) const {
  const StageContext ctx{cfg_, history_, round_context, topology, model_};
  return run_stages(stages_, kStageCount - 1, snapshot, ctx).intelligent;
}

PipelineOutput run_pipeline(const RoundSnapshot& snapshot,
                            std::span<const SensorReading> round_context, const Topology& topology,
                            const PipelineConfig& cfg, const std::optional<ClassifierModel>& model,
                            HistoryIndex& history) {
  static const StageArray stages = default_stages();
  const StageContext ctx{cfg, history, round_context, topology, model};
  PipelineOutput out = run_stages(stages, kStageCount, snapshot, ctx);
  for (const auto& r : out.intelligent) history.record(r.source, r.value);
  return out;
}

}  // namespace iirsim
