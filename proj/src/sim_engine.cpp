#include "iirsim/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "iirsim/errors.hpp"

namespace iirsim {

GroundTruth::GroundTruth(EventParams params, std::uint64_t seed, Position lo, Position hi)
    : params_(params), rng_(seed, StreamPurpose::Events), lo_(lo), hi_(hi) {}

void GroundTruth::advance(Round) {
  if (started_) {
    for (auto& e : active_) --e.remaining;
    std::erase_if(active_, [](const FieldEvent& e) { return e.remaining == 0; });
  }
  started_ = true;

  const double whole = std::floor(params_.rate);
  auto count = static_cast<std::size_t>(whole);
  // one draw per round for the fractional part, even when it is zero
  if (rng_.uniform() < params_.rate - whole) ++count;
  for (std::size_t i = 0; i < count; ++i) {
    FieldEvent e;
    e.center.x = lo_.x + rng_.uniform() * (hi_.x - lo_.x);
    e.center.y = lo_.y + rng_.uniform() * (hi_.y - lo_.y);
    e.magnitude = params_.magnitude;
    e.remaining = params_.duration;
    if (e.remaining > 0) active_.push_back(e);
  }
}

bool GroundTruth::influenced(Position p) const {
  return std::any_of(active_.begin(), active_.end(),
                     [&](const FieldEvent& e) { return distance(e.center, p) <= params_.radius; });
}

double GroundTruth::offset(Position p) const {
  double total = 0.0;
  for (const auto& e : active_) {
    if (distance(e.center, p) <= params_.radius) total += e.magnitude;
  }
  return total;
}

double field_value(const Node& node, Round round, const FieldParams& field, const GroundTruth& truth) {
  const double phase = 2.0 * std::numbers::pi * double(round) / field.drift_period;
  return field.base + field.drift_amplitude * std::sin(phase) + truth.offset(node.position);
}

SensorReading sense(const Node& node, Round round, const FieldParams& field,
                    const GroundTruth& truth, RandomStream& noise) {
  const double n = noise.gaussian(0.0, field.noise_sigma);
  return {node.id, round, field_value(node, round, field, truth) + n, {}};
}

namespace {

class PassThroughStage final : public FilterStage {
public:
  StageResult apply(std::span<const SensorReading> in, const StageContext&) const override {
    StageResult out;
    out.kept.assign(in.begin(), in.end());
    for (auto& r : out.kept) r.annotations.class_label = Label::Forward;
    return out;
  }
};

std::pair<Position, Position> bounding_box(const Topology& t) {
  Position lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Position hi{-lo.x, -lo.y};
  for (const auto& n : t.nodes) {
    lo.x = std::min(lo.x, n.position.x);
    lo.y = std::min(lo.y, n.position.y);
    hi.x = std::max(hi.x, n.position.x);
    hi.y = std::max(hi.y, n.position.y);
  }
  return {lo, hi};
}

Topology validated_topology(const ScenarioConfig& scenario) {
  validate(scenario);
  return build_topology(scenario.layout, scenario.seed);
}

}  // namespace

Simulation::Simulation(ScenarioConfig scenario, std::optional<ClassifierModel> model,
                       RunOptions options)
    : scenario_(std::move(scenario)),
      options_(options),
      topology_(validated_topology(scenario_)),
      noise_(scenario_.seed, StreamPurpose::Noise),
      pipeline_(scenario_.pipeline, std::move(model)) {
  const NodeId sink = topology_.sink;
  energy_ = EnergyLedger(topology_.size(), scenario_.initial_energy, std::span(&sink, 1));
  const auto [lo, hi] = bounding_box(topology_);
  truth_ = GroundTruth(scenario_.events, scenario_.seed, lo, hi);
  event_labeled_.assign(topology_.size(), false);
  if (options_.collect_training) pipeline_.set_stage(Stage::Sentiment, std::make_unique<PassThroughStage>());
  outcome_.report.mode = scenario_.mode;
  outcome_.death_round.assign(topology_.size(), std::nullopt);
}

bool Simulation::finished() const {
  return network_dead_ || next_round_ >= scenario_.rounds;
}

void Simulation::refresh_topology() {
  topology_ = with_alive(topology_, energy_.alive_mask());
  topology_stale_ = false;
}

bool Simulation::network_alive() const {
  const auto& t = topology_;
  for (NodeId s = 0; s < t.size(); ++s) {
    if (t.role(s) != NodeRole::Sensor || !t.is_alive(s)) continue;
    if (scenario_.mode == Mode::Baseline) {
      if (!t.sink_routes[s].empty()) return true;
      continue;
    }
    const auto& to_agg = t.routes[s];
    if (to_agg.empty()) continue;
    const auto& to_subsink = t.routes[to_agg.back()];
    if (to_subsink.empty()) continue;
    if (!t.routes[to_subsink.back()].empty()) return true;
  }
  return false;
}

void Simulation::account(DeliveryOutcome& leg) {
  for (auto& ev : leg.events) {
    record(outcome_.report, ev);
    event_energy_.add(ev.tx_energy);
    event_energy_.add(ev.rx_energy);
    event_drained_.add(ev.tx_drained);
    event_drained_.add(ev.rx_drained);
    if (options_.keep_events) outcome_.events.push_back(std::move(ev));
  }
  leg.events.clear();
}

RoundTally Simulation::run_baseline(std::vector<SensorReading> sensed) {
  RoundTally tally;
  const LinkContext link{topology_, scenario_.radio, energy_, next_round_};
  DeliveryOutcome leg = baseline_forward_all(sensed, link, scenario_.batch_cap);
  account(leg);

  tally.after_dedup = sensed.size();
  tally.after_stage.fill(sensed.size());
  tally.lost = leg.lost.size();
  tally.delivered = leg.delivered.size();
  tally.delivered_hops = leg.delivered_hop_total;
  for (const auto& r : leg.delivered) {
    if (event_labeled_[r.source]) ++tally.event_delivered;
  }
  if (options_.keep_delivered) {
    std::move(leg.delivered.begin(), leg.delivered.end(), std::back_inserter(outcome_.delivered));
  }
  return tally;
}

RoundTally Simulation::run_framework(Round round, std::vector<SensorReading> sensed,
                                     StageTrace& trace) {
  RoundTally tally;
  const LinkContext link{topology_, scenario_.radio, energy_, round};
  std::map<NodeId, std::size_t> hops;  // per source, accumulated over legs

  // sensors -> their aggregator
  std::map<NodeId, std::vector<SensorReading>> agg_inbox;
  for (const auto& r : sensed) {
    const auto& route = topology_.routes[r.source];
    if (route.empty()) {
      ++tally.lost;
      continue;
    }
    DeliveryOutcome leg = send_along(route, std::span(&r, 1), link, scenario_.batch_cap);
    account(leg);
    tally.lost += leg.lost.size();
    hops[r.source] = leg.hops;
    auto& box = agg_inbox[route.back()];
    std::move(leg.delivered.begin(), leg.delivered.end(), std::back_inserter(box));
  }

  // aggregators: dedup, then on to the sub-sink
  std::vector<SensorReading> subsink_inbox;
  for (auto& [agg, inbox] : agg_inbox) {
    const auto& route = topology_.routes[agg];
    if (!energy_.alive(agg) || route.empty()) {
      tally.lost += inbox.size();
      continue;
    }
    RoundSnapshot snapshot = collect_round(inbox, round);
    if (scenario_.dedup_enabled) {
      snapshot = deduplicate(snapshot, scenario_.dedup_eps, suppression_[agg]);
    }
    tally.after_dedup += snapshot.readings.size();
    DeliveryOutcome leg = send_along(route, snapshot.readings, link, scenario_.batch_cap);
    account(leg);
    tally.lost += leg.lost.size();
    for (const auto& r : leg.delivered) hops[r.source] += leg.hops;
    std::move(leg.delivered.begin(), leg.delivered.end(), std::back_inserter(subsink_inbox));
  }

  // sub-sink: staircase filter, then the survivors to the sink
  const NodeId subsink = *topology_.subsink;
  const auto& route = topology_.routes[subsink];
  if (!energy_.alive(subsink) || route.empty()) {
    tally.lost += subsink_inbox.size();
    return tally;
  }
  const RoundSnapshot snapshot = collect_round(subsink_inbox, round);
  PipelineOutput filtered = pipeline_.run(snapshot, snapshot.readings, topology_);
  trace = filtered.trace;
  for (std::size_t i = 0; i < kStageCount; ++i) tally.after_stage[i] = trace.output[i];

  if (options_.collect_training) {
    for (const auto& r : filtered.intelligent) {
      outcome_.training.push_back({classifier_features(r, scenario_.pipeline),
                                   event_labeled_[r.source] ? Label::Forward : Label::Discard});
    }
  }

  DeliveryOutcome leg = send_along(route, filtered.intelligent, link, scenario_.batch_cap);
  account(leg);
  tally.lost += leg.lost.size();
  tally.delivered = leg.delivered.size();
  for (const auto& r : leg.delivered) {
    tally.delivered_hops += hops[r.source] + leg.hops;
    if (event_labeled_[r.source]) ++tally.event_delivered;
  }
  if (options_.keep_delivered) {
    std::move(leg.delivered.begin(), leg.delivered.end(), std::back_inserter(outcome_.delivered));
  }
  return tally;
}

void Simulation::note_deaths(Round round) {
  for (NodeId n = 0; n < energy_.size(); ++n) {
    if (!energy_.alive(n) && !outcome_.death_round[n]) {
      outcome_.death_round[n] = round;
      topology_stale_ = true;
      if (!outcome_.report.first_node_death_round) outcome_.report.first_node_death_round = round;
    }
  }
}

bool Simulation::step_round() {
  if (finished()) return false;
  const Round round = next_round_;
  if (topology_stale_) refresh_topology();
  truth_.advance(round);

  // every sensor draws its noise in id order, alive or not, so a death
  // never shifts another node's samples
  std::vector<SensorReading> sensed;
  std::uint64_t event_generated = 0;
  for (const auto& node : topology_.nodes) {
    if (node.role != NodeRole::Sensor) continue;
    SensorReading r = sense(node, round, scenario_.field, truth_, noise_);
    event_labeled_[node.id] = truth_.influenced(node.position);
    if (!energy_.alive(node.id)) continue;
    if (event_labeled_[node.id]) ++event_generated;
    sensed.push_back(r);
  }

  RoundRecord rec;
  rec.round = round;
  const std::size_t generated = sensed.size();
  rec.tally = scenario_.mode == Mode::Baseline ? run_baseline(std::move(sensed))
                                               : run_framework(round, std::move(sensed), rec.trace);
  rec.tally.generated = generated;
  rec.tally.event_generated = event_generated;
  record(outcome_.report, rec.tally);
  outcome_.rounds.push_back(std::move(rec));

  note_deaths(round);
  ++outcome_.report.rounds_completed;
  ++next_round_;
  if (topology_stale_) {
    refresh_topology();
    if (!network_alive()) {
      network_dead_ = true;
      outcome_.report.network_death_round = round;
    }
  }
  return true;
}

RunOutcome Simulation::finish() && {
  while (step_round()) {
  }
  outcome_.report.per_node_energy_remaining = energy_.remaining();
  // replaces the plain per-event sum kept by record()
  outcome_.report.total_energy_consumed = event_drained_.value();
  finalize(outcome_.report);
  auto& audit = outcome_.audit;
  audit.event_energy = event_energy_.value();
  audit.event_drained = event_drained_.value();
  audit.ledger_drained = energy_.drained();
  audit.unlimited_billed = energy_.unlimited_billed();
  audit.overdraw = energy_.overdraw();
  audit.min_remaining = std::numeric_limits<double>::infinity();
  for (double e : outcome_.report.per_node_energy_remaining) audit.min_remaining = std::min(audit.min_remaining, e);
  return std::move(outcome_);
}

RunOutcome simulate(const ScenarioConfig& scenario, const std::optional<ClassifierModel>& model,
                    RunOptions options) {
  return Simulation(scenario, model, options).finish();
}

std::uint64_t warmup_seed(std::uint64_t seed) { return derive_seed(seed, StreamPurpose::Warmup); }

std::vector<TrainingExample> collect_training_examples(const ScenarioConfig& scenario,
                                                       std::uint64_t seed) {
  ScenarioConfig warm = scenario;
  warm.seed = seed;
  warm.mode = Mode::Framework;
  RunOptions options;
  options.collect_training = true;
  return simulate(warm, std::nullopt, options).training;
}

ClassifierModel train_for_scenario(const ScenarioConfig& scenario) {
  const auto examples = collect_training_examples(scenario, warmup_seed(scenario.seed));
  if (examples.empty()) return ClassifierModel{};
  return train_classifier(examples);
}

MetricsReport run(const ScenarioConfig& scenario, const std::optional<ClassifierModel>& model) {
  std::optional<ClassifierModel> effective = model;
  if (!effective && scenario.mode == Mode::Framework && !scenario.pipeline.symbolic_only &&
      scenario.rounds > 0) {
    validate(scenario);
    effective = train_for_scenario(scenario);
  }
  return simulate(scenario, effective, {}).report;
}

}  // namespace iirsim
