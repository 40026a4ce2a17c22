#include "iirsim/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "iirsim/errors.hpp"
#include "iirsim/rng.hpp"

namespace iirsim {
namespace {

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

std::vector<std::size_t> hop_distances(const Topology& t, const std::vector<NodeId>& targets) {
  std::vector<std::size_t> dist(t.size(), kUnreached);
  std::deque<NodeId> queue;
  for (NodeId target : targets) {
    if (target < t.size() && t.alive[target] && dist[target] == kUnreached) {
      dist[target] = 0;
      queue.push_back(target);
    }
  }
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    for (NodeId v : t.adjacency[u]) {
      if (t.alive[v] && dist[v] == kUnreached) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

std::vector<NodeId> extract_path(const Topology& t, const std::vector<std::size_t>& dist,
                                 NodeId from) {
  if (!t.alive[from] || dist[from] == kUnreached) return {};
  std::vector<NodeId> path{from};
  NodeId cur = from;
  while (dist[cur] != 0) {
    // adjacency is sorted, so the first match is the lowest-id next hop
    for (NodeId v : t.adjacency[cur]) {
      if (t.alive[v] && dist[v] + 1 == dist[cur]) {
        cur = v;
        break;
      }
    }
    path.push_back(cur);
  }
  return path;
}

std::vector<NodeId> collector_targets(const Topology& t, NodeId n) {
  switch (t.role(n)) {
    case NodeRole::Sensor: return t.aggregators;
    case NodeRole::Aggregator:
      return t.subsink ? std::vector<NodeId>{*t.subsink} : std::vector<NodeId>{};
    case NodeRole::SubSink:
    case NodeRole::Sink: return {t.sink};
  }
  return {};
}

void refresh_routes(Topology& t) {
  const auto to_sink = hop_distances(t, {t.sink});
  const auto to_agg = hop_distances(t, t.aggregators);
  const auto to_subsink =
      t.subsink ? hop_distances(t, {*t.subsink}) : std::vector<std::size_t>(t.size(), kUnreached);

  t.routes.assign(t.size(), {});
  t.sink_routes.assign(t.size(), {});
  for (NodeId n = 0; n < t.size(); ++n) {
    t.sink_routes[n] = extract_path(t, to_sink, n);
    switch (t.role(n)) {
      case NodeRole::Sensor: t.routes[n] = extract_path(t, to_agg, n); break;
      case NodeRole::Aggregator: t.routes[n] = extract_path(t, to_subsink, n); break;
      case NodeRole::SubSink:
      case NodeRole::Sink: t.routes[n] = t.sink_routes[n]; break;
    }
  }
}

std::vector<Position> place_nodes(const LayoutConfig& layout, std::uint64_t seed) {
  std::vector<Position> positions(layout.node_count);
  if (layout.placement == Placement::Grid) {
    std::size_t cols = layout.grid_cols;
    if (cols == 0) cols = static_cast<std::size_t>(std::ceil(std::sqrt(double(layout.node_count))));
    for (std::size_t i = 0; i < layout.node_count; ++i) {
      positions[i] = {double(i % cols) * layout.grid_spacing, double(i / cols) * layout.grid_spacing};
    }
  } else {
    RandomStream rng(seed, StreamPurpose::Placement);
    for (auto& p : positions) {
      p.x = rng.uniform() * layout.field_size;
      p.y = rng.uniform() * layout.field_size;
    }
  }
  return positions;
}

// Nearest unassigned node to `target`; ties go to the lowest id.
std::optional<NodeId> nearest_free(const std::vector<Position>& positions,
                                   const std::vector<bool>& taken, Position target) {
  std::optional<NodeId> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (NodeId i = 0; i < positions.size(); ++i) {
    if (taken[i]) continue;
    double d = distance(positions[i], target);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

}  // namespace

Topology make_topology(std::vector<Node> nodes, double comm_radius) {
  if (nodes.size() < 2) throw InvalidScenario("a topology needs at least 2 nodes");
  if (!(comm_radius > 0.0)) throw InvalidScenario("comm_radius must be positive");

  Topology t;
  t.comm_radius = comm_radius;
  std::size_t sinks = 0;
  std::size_t subsinks = 0;
  for (NodeId i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id != i) throw InvalidScenario("node ids must be dense and ordered");
    switch (nodes[i].role) {
      case NodeRole::Sink: ++sinks; t.sink = i; break;
      case NodeRole::SubSink: ++subsinks; t.subsink = i; break;
      case NodeRole::Aggregator: t.aggregators.push_back(i); break;
      case NodeRole::Sensor: break;
    }
  }
  if (sinks != 1) throw InvalidScenario("exactly one sink is required, got " + std::to_string(sinks));
  if (subsinks > 1) throw InvalidScenario("at most one sub-sink is supported");

  t.nodes = std::move(nodes);
  t.adjacency.assign(t.size(), {});
  for (NodeId a = 0; a < t.size(); ++a) {
    for (NodeId b = a + 1; b < t.size(); ++b) {
      if (distance(t.nodes[a].position, t.nodes[b].position) <= comm_radius) {
        t.adjacency[a].push_back(b);
        t.adjacency[b].push_back(a);
      }
    }
  }
  for (auto& adj : t.adjacency) std::sort(adj.begin(), adj.end());
  t.alive.assign(t.size(), true);
  refresh_routes(t);

  for (NodeId n = 0; n < t.size(); ++n) {
    if (t.sink_routes[n].empty()) {
      throw DisconnectedTopology("node " + std::to_string(n) + " has no path to sink " +
                                 std::to_string(t.sink));
    }
  }
  return t;
}

Topology build_topology(const LayoutConfig& layout, std::uint64_t seed) {
  const std::size_t n = layout.node_count;
  if (n < 2) throw InvalidScenario("node_count must be at least 2");
  if (layout.sink_id >= n) throw InvalidScenario("sink_id out of range");

  const auto positions = place_nodes(layout, seed);
  std::vector<NodeRole> roles(n, NodeRole::Sensor);
  std::vector<bool> taken(n, false);
  roles[layout.sink_id] = NodeRole::Sink;
  taken[layout.sink_id] = true;

  switch (layout.subsink_placement) {
    case SubSinkPlacement::None: break;
    case SubSinkPlacement::Fixed:
      if (layout.subsink_id >= n || layout.subsink_id == layout.sink_id) {
        throw InvalidScenario("subsink_id must be a valid non-sink node");
      }
      roles[layout.subsink_id] = NodeRole::SubSink;
      taken[layout.subsink_id] = true;
      break;
    case SubSinkPlacement::Central: {
      Position centroid;
      for (const auto& p : positions) {
        centroid.x += p.x / double(n);
        centroid.y += p.y / double(n);
      }
      NodeId id = *nearest_free(positions, taken, centroid);
      roles[id] = NodeRole::SubSink;
      taken[id] = true;
      break;
    }
  }

  auto assign_aggregator = [&](NodeId id) {
    if (id >= n) throw InvalidScenario("aggregator id " + std::to_string(id) + " out of range");
    if (taken[id]) {
      throw InvalidScenario("aggregator id " + std::to_string(id) + " already has a role");
    }
    roles[id] = NodeRole::Aggregator;
    taken[id] = true;
  };

  if (!layout.aggregators.empty()) {
    for (NodeId id : layout.aggregators) assign_aggregator(id);
  } else if (layout.aggregator_every > 0) {
    for (NodeId id = 0; id < n; id += NodeId(layout.aggregator_every)) {
      if (!taken[id]) assign_aggregator(id);
    }
  } else if (layout.aggregator_count > 0) {
    const std::size_t free_nodes =
        size_t(std::count(taken.begin(), taken.end(), false));
    if (layout.aggregator_count > free_nodes) {
      throw InvalidScenario("aggregator_count exceeds the number of available nodes");
    }
    double min_x = positions[0].x, max_x = min_x, min_y = positions[0].y, max_y = min_y;
    for (const auto& p : positions) {
      min_x = std::min(min_x, p.x);
      max_x = std::max(max_x, p.x);
      min_y = std::min(min_y, p.y);
      max_y = std::max(max_y, p.y);
    }
    const auto cells =
        static_cast<std::size_t>(std::ceil(std::sqrt(double(layout.aggregator_count))));
    const double cw = (max_x - min_x) / double(cells);
    const double ch = (max_y - min_y) / double(cells);
    for (std::size_t k = 0; k < layout.aggregator_count; ++k) {
      Position center{min_x + (double(k % cells) + 0.5) * cw, min_y + (double(k / cells) + 0.5) * ch};
      assign_aggregator(*nearest_free(positions, taken, center));
    }
  }

  std::vector<Node> nodes(n);
  for (NodeId i = 0; i < n; ++i) nodes[i] = {i, roles[i], positions[i]};
  return make_topology(std::move(nodes), layout.comm_radius);
}

Topology with_alive(const Topology& t, std::vector<bool> alive) {
  Topology out = t;
  out.alive = std::move(alive);
  out.alive.resize(out.size(), false);
  refresh_routes(out);
  return out;
}

std::vector<NodeId> shortest_route(const Topology& t, NodeId from,
                                   const std::vector<NodeId>& targets) {
  if (from >= t.size()) return {};
  return extract_path(t, hop_distances(t, targets), from);
}

std::vector<NodeId> route_to_collector(const Topology& t, NodeId n) {
  if (n >= t.size()) throw NoRoute("unknown node " + std::to_string(n));
  if (t.role(n) == NodeRole::Sink) return {n};
  auto path = shortest_route(t, n, collector_targets(t, n));
  if (path.empty()) {
    throw NoRoute("node " + std::to_string(n) + " (" + std::string(to_string(t.role(n))) +
                  ") cannot reach its collector");
  }
  return path;
}

std::vector<NodeId> route_to_sink(const Topology& t, NodeId n) {
  if (n >= t.size()) throw NoRoute("unknown node " + std::to_string(n));
  auto path = shortest_route(t, n, {t.sink});
  if (path.empty()) throw NoRoute("node " + std::to_string(n) + " cannot reach the sink");
  return path;
}

std::vector<NodeId> neighbors_in_round(const Topology& t, NodeId n) {
  std::vector<NodeId> out;
  if (n >= t.size()) return out;
  for (NodeId v : t.adjacency[n]) {
    if (v != n && t.alive[v]) out.push_back(v);
  }
  return out;
}

}  // namespace iirsim
