#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "iirsim/core_model.hpp"

namespace iirsim {

/// One aggregator's view of a round.
struct RoundSnapshot {
  Round round = 0;
  std::vector<SensorReading> readings;  // canonical order
  std::size_t input_count = 0;          // readings received before any removal
  std::size_t redundancy_removed = 0;

  friend bool operator==(const RoundSnapshot&, const RoundSnapshot&) = default;
};

/// Per-source keyed history of the values an aggregator has forwarded. Only
/// values from rounds strictly before the queried round are visible, so a
/// round can be deduplicated repeatedly with the same result.
class SuppressionIndex {
public:
  std::optional<double> reference(NodeId source, Round round) const;
  void record(NodeId source, Round round, double value);
  bool empty() const { return entries_.empty(); }

private:
  struct Entry {
    Round round;
    double value;
    std::optional<double> earlier;  // last value from a round before `round`
  };
  std::map<NodeId, Entry> entries_;
};

/// Throws StaleReading when a reading belongs to another round.
RoundSnapshot collect_round(std::span<const SensorReading> incoming, Round round);

/// Collapses exact duplicates, then suppresses any reading within `eps` of
/// the value its source last had forwarded in an earlier round. Retained
/// readings are recorded in `index`.
RoundSnapshot deduplicate(const RoundSnapshot& s, double eps, SuppressionIndex& index);

/// Fraction of the snapshot's input removed as redundant. Throws
/// EmptySnapshot for a snapshot that received nothing.
double redundancy_ratio(const RoundSnapshot& s);

}  // namespace iirsim
