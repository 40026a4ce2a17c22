#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "iirsim/core_model.hpp"
#include "iirsim/energy_radio.hpp"
#include "iirsim/topology.hpp"

namespace iirsim {

struct TransmissionEvent {
  Round round = 0;
  Packet packet;     // end-to-end src/dst of the route it travels
  NodeId from = 0;   // this hop
  NodeId to = 0;
  double distance = 0.0;
  double tx_energy = 0.0;  // radio-model cost of the hop
  double rx_energy = 0.0;
  double tx_drained = 0.0;  // what actually left finite budgets
  double rx_drained = 0.0;
  bool sender_died = false;
  bool receiver_died = false;
};

struct DeliveryOutcome {
  std::vector<TransmissionEvent> events;
  std::vector<SensorReading> delivered;
  std::vector<SensorReading> lost;
  std::size_t packets_sent = 0;
  std::size_t packets_lost = 0;
  std::size_t hops = 0;  // route length of a single send_along call
  std::size_t delivered_hop_total = 0;  // sum over delivered readings of hops travelled

  void append(DeliveryOutcome&& other);
};

struct LinkContext {
  const Topology& topology;
  const RadioParams& radio;
  EnergyLedger& energy;
  Round round = 0;
  PacketSizing sizing{};
};

/// Carries `readings` hop by hop along `route` in packets of at most
/// `batch_cap` readings. Each hop bills tx to the sender and rx to the
/// receiver. A hop whose endpoint is already dead cancels the rest of that
/// packet's route and its readings count as lost. Throws NoRoute for an
/// empty route.
DeliveryOutcome send_along(std::span<const NodeId> route, std::span<const SensorReading> readings,
                           const LinkContext& link, std::size_t batch_cap);

/// Forwards every reading from its source straight to the sink, with no
/// aggregation or filtering. Readings whose source has no sink route are
/// lost.
DeliveryOutcome baseline_forward_all(std::span<const SensorReading> readings,
                                     const LinkContext& link, std::size_t batch_cap);

}  // namespace iirsim
