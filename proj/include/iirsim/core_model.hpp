#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace iirsim {

using NodeId = std::uint32_t;
using Round = std::uint32_t;

enum class NodeRole { Sensor, Aggregator, SubSink, Sink };

std::string_view to_string(NodeRole role);

/// The four filter stages, in the fixed order they are applied.
enum class Stage { Priority = 0, Opinion = 1, Review = 2, Sentiment = 3 };

inline constexpr std::size_t kStageCount = 4;

std::string_view to_string(Stage stage);

enum class Label { Forward, Discard };

/// Baseline forwards every reading to the sink; Framework aggregates,
/// filters at the sub-sink and forwards only the survivors.
enum class Mode { Baseline, Framework };

std::string_view to_string(Mode mode);

struct StageAnnotation {
  double priority_score = 0.0;
  double opinion_deviation = 0.0;
  double consensus_ratio = 0.0;
  std::optional<Label> class_label;
  std::optional<Stage> drop_stage;
  /// Set when the symbolic rescue rule, not the classifier, forwarded the
  /// reading.
  bool rule_forced = false;

  friend bool operator==(const StageAnnotation&, const StageAnnotation&) = default;
};

struct SensorReading {
  NodeId source = 0;
  Round round = 0;
  double value = 0.0;
  StageAnnotation annotations;

  /// Copy with annotations reset; identity is (source, round, value).
  SensorReading bare() const { return {source, round, value, {}}; }

  friend bool operator==(const SensorReading&, const SensorReading&) = default;
};

/// Orders by identity only; annotations do not participate.
bool identity_less(const SensorReading& a, const SensorReading& b);
bool same_identity(const SensorReading& a, const SensorReading& b);

struct Position {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

double distance(Position a, Position b);

struct Node {
  NodeId id = 0;
  NodeRole role = NodeRole::Sensor;
  Position position;

  friend bool operator==(const Node&, const Node&) = default;
};

struct PacketSizing {
  std::uint64_t header_bits = 64;
  std::uint64_t reading_bits = 64;
};

/// Size on the air of a packet carrying `n_readings` readings.
std::uint64_t packet_bits(std::size_t n_readings, PacketSizing sizing = {});

struct Packet {
  NodeId src = 0;
  NodeId dst = 0;
  std::vector<SensorReading> payload;
  std::uint64_t bits = 0;
};

/// Stable sort by (round, source, value). Returns a new sequence.
std::vector<SensorReading> canonical_order(std::span<const SensorReading> readings);

}  // namespace iirsim
