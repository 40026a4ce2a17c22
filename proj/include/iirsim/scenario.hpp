#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "iirsim/core_model.hpp"
#include "iirsim/energy_radio.hpp"
#include "iirsim/iir_pipeline.hpp"
#include "iirsim/topology.hpp"

namespace iirsim {

/// Synthetic field: base + amplitude * sin(2*pi*round/period) + N(0, sigma).
struct FieldParams {
  double base = 25.0;
  double drift_amplitude = 2.0;
  double drift_period = 50.0;  // rounds
  double noise_sigma = 0.5;
};

/// Injected events raise every reading within `radius` of their center by
/// `magnitude` for `duration` rounds.
struct EventParams {
  double rate = 0.1;  // expected new events per round
  double radius = 15.0;
  double magnitude = 10.0;
  Round duration = 5;
};

/// A complete experiment definition. The defaults describe the reference
/// 10x10 grid scenario.
struct ScenarioConfig {
  LayoutConfig layout;
  Round rounds = 200;
  std::uint64_t seed = 1;
  RadioParams radio;
  double initial_energy = 0.5;  // J per finite node
  FieldParams field;
  EventParams events;
  bool dedup_enabled = true;
  double dedup_eps = 0.1;
  PipelineConfig pipeline;
  std::size_t batch_cap = 16;
  Mode mode = Mode::Framework;
};

/// Throws InvalidScenario naming the offending key.
void validate(const ScenarioConfig& cfg);

/// `key = value` lines; `#` starts a comment; blank lines are ignored.
/// Missing keys keep their defaults. Throws UnknownKey, MalformedLine or
/// InvalidValue, each naming the line number.
ScenarioConfig parse_scenario(std::string_view text);

/// Renders every key in the same format parse_scenario reads.
std::string format_scenario(const ScenarioConfig& cfg);

/// Pipeline that keeps every reading it is given: all thresholds zero,
/// quorum zero, rescue at zero score, unbounded plausibility range.
PipelineConfig permissive_pipeline(const PipelineConfig& base = {});

}  // namespace iirsim
