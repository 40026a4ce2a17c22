#include "iirsim/aggregation.hpp"

#include <cmath>
#include <string>

#include "iirsim/errors.hpp"

namespace iirsim {

std::optional<double> SuppressionIndex::reference(NodeId source, Round round) const {
  auto it = entries_.find(source);
  if (it == entries_.end()) return std::nullopt;
  if (it->second.round < round) return it->second.value;
  return it->second.earlier;
}

void SuppressionIndex::record(NodeId source, Round round, double value) {
  auto [it, inserted] = entries_.try_emplace(source, Entry{round, value, std::nullopt});
  if (inserted) return;
  Entry& e = it->second;
  if (e.round < round) {
    e.earlier = e.value;
    e.round = round;
  }
  e.value = value;
}

RoundSnapshot collect_round(std::span<const SensorReading> incoming, Round round) {
  for (const auto& r : incoming) {
    if (r.round != round) {
      throw StaleReading("reading from node " + std::to_string(r.source) + " has round " +
                         std::to_string(r.round) + " but the current round is " +
                         std::to_string(round));
    }
  }
  RoundSnapshot s;
  s.round = round;
  s.readings = canonical_order(incoming);
  s.input_count = incoming.size();
  return s;
}

RoundSnapshot deduplicate(const RoundSnapshot& s, double eps, SuppressionIndex& index) {
  RoundSnapshot out;
  out.round = s.round;
  out.input_count = s.input_count;
  out.redundancy_removed = s.redundancy_removed;

  const auto ordered = canonical_order(s.readings);
  const SensorReading* previous = nullptr;
  for (const auto& r : ordered) {
    // canonical order puts exact duplicates next to each other
    if (previous != nullptr && same_identity(*previous, r)) {
      ++out.redundancy_removed;
      continue;
    }
    previous = &r;
    if (auto ref = index.reference(r.source, s.round); ref && std::abs(r.value - *ref) <= eps) {
      ++out.redundancy_removed;
      continue;
    }
    out.readings.push_back(r);
  }
  for (const auto& r : out.readings) index.record(r.source, r.round, r.value);
  return out;
}

double redundancy_ratio(const RoundSnapshot& s) {
  if (s.input_count == 0) throw EmptySnapshot("snapshot received no readings");
  return static_cast<double>(s.redundancy_removed) / static_cast<double>(s.input_count);
}

}  // namespace iirsim
