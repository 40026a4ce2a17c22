#include "iirsim/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace iirsim {

std::string_view to_string(NodeRole role) {
  switch (role) {
    case NodeRole::Sensor: return "sensor";
    case NodeRole::Aggregator: return "aggregator";
    case NodeRole::SubSink: return "subsink";
    case NodeRole::Sink: return "sink";
  }
  return "?";
}

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::Priority: return "priority";
    case Stage::Opinion: return "opinion";
    case Stage::Review: return "review";
    case Stage::Sentiment: return "sentiment";
  }
  return "?";
}

std::string_view to_string(Mode mode) {
  return mode == Mode::Baseline ? "baseline" : "framework";
}

bool identity_less(const SensorReading& a, const SensorReading& b) {
  return std::tie(a.round, a.source, a.value) < std::tie(b.round, b.source, b.value);
}

bool same_identity(const SensorReading& a, const SensorReading& b) {
  return a.round == b.round && a.source == b.source && a.value == b.value;
}

double distance(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::uint64_t packet_bits(std::size_t n_readings, PacketSizing sizing) {
  return sizing.header_bits + static_cast<std::uint64_t>(n_readings) * sizing.reading_bits;
}

std::vector<SensorReading> canonical_order(std::span<const SensorReading> readings) {
  std::vector<SensorReading> out(readings.begin(), readings.end());
  std::stable_sort(out.begin(), out.end(), identity_less);
  return out;
}

}  // namespace iirsim
