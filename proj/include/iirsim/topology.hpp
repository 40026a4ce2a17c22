#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "iirsim/core_model.hpp"

namespace iirsim {

enum class Placement { Grid, Uniform };

enum class SubSinkPlacement { Central, Fixed, None };

/// Node layout and role assignment. Aggregator roles come from, in order of
/// precedence: the explicit `aggregators` list, `aggregator_every`, then
/// `aggregator_count` nodes spread over a regular partition of the field.
struct LayoutConfig {
  std::size_t node_count = 100;
  Placement placement = Placement::Grid;
  double grid_spacing = 10.0;
  std::size_t grid_cols = 0;  // 0: ceil(sqrt(node_count))
  double field_size = 90.0;   // side of the square used by uniform placement
  double comm_radius = 15.0;
  NodeId sink_id = 0;
  SubSinkPlacement subsink_placement = SubSinkPlacement::Central;
  NodeId subsink_id = 0;  // used when subsink_placement == Fixed
  std::vector<NodeId> aggregators;
  std::size_t aggregator_every = 0;
  std::size_t aggregator_count = 9;
};

struct Topology {
  std::vector<Node> nodes;
  double comm_radius = 0.0;
  /// Sorted neighbor ids within comm_radius, over all nodes regardless of
  /// liveness.
  std::vector<std::vector<NodeId>> adjacency;
  std::vector<bool> alive;
  NodeId sink = 0;
  std::optional<NodeId> subsink;
  std::vector<NodeId> aggregators;
  /// Per node, hop path to its role's collector (empty when unreachable).
  std::vector<std::vector<NodeId>> routes;
  /// Per node, direct hop path to the sink (empty when unreachable).
  std::vector<std::vector<NodeId>> sink_routes;

  std::size_t size() const { return nodes.size(); }
  NodeRole role(NodeId n) const { return nodes.at(n).role; }
  bool is_alive(NodeId n) const { return alive.at(n); }
};

/// Builds adjacency and routes for an explicit node list. Node ids must be
/// dense 0..N-1 in order, with exactly one sink and at most one sub-sink.
/// Throws DisconnectedTopology when some node cannot reach the sink.
Topology make_topology(std::vector<Node> nodes, double comm_radius);

/// Places nodes, assigns roles and builds the topology. Deterministic in
/// (layout, seed); the seed only matters for uniform placement.
Topology build_topology(const LayoutConfig& layout, std::uint64_t seed);

/// Copy of `t` with the given liveness and freshly computed routes.
Topology with_alive(const Topology& t, std::vector<bool> alive);

/// Minimum-hop path over alive nodes from `from` to the nearest of
/// `targets`, breaking ties by the lowest next-hop id at every step.
/// Returns an empty path when no target is reachable.
std::vector<NodeId> shortest_route(const Topology& t, NodeId from,
                                   const std::vector<NodeId>& targets);

/// Sensor -> nearest aggregator, aggregator -> sub-sink, sub-sink -> sink,
/// sink -> [sink]. Throws NoRoute when the collector is unreachable.
std::vector<NodeId> route_to_collector(const Topology& t, NodeId n);

/// Direct minimum-hop path to the sink. Throws NoRoute when unreachable.
std::vector<NodeId> route_to_sink(const Topology& t, NodeId n);

/// Alive neighbors of `n`, excluding `n`, ascending.
std::vector<NodeId> neighbors_in_round(const Topology& t, NodeId n);

}  // namespace iirsim
