#include "iirsim/dissemination.hpp"

#include <algorithm>
#include <map>

#include "iirsim/errors.hpp"

namespace iirsim {

void DeliveryOutcome::append(DeliveryOutcome&& other) {
  std::move(other.events.begin(), other.events.end(), std::back_inserter(events));
  std::move(other.delivered.begin(), other.delivered.end(), std::back_inserter(delivered));
  std::move(other.lost.begin(), other.lost.end(), std::back_inserter(lost));
  packets_sent += other.packets_sent;
  packets_lost += other.packets_lost;
  delivered_hop_total += other.delivered_hop_total;
}

DeliveryOutcome send_along(std::span<const NodeId> route, std::span<const SensorReading> readings,
                           const LinkContext& link, std::size_t batch_cap) {
  if (route.empty()) throw NoRoute("empty route");
  if (batch_cap == 0) throw InvalidValue("batch_cap must be positive");

  DeliveryOutcome out;
  out.hops = route.size() - 1;
  for (std::size_t start = 0; start < readings.size(); start += batch_cap) {
    const std::size_t count = std::min(batch_cap, readings.size() - start);
    Packet packet;
    packet.src = route.front();
    packet.dst = route.back();
    packet.payload.assign(readings.begin() + std::ptrdiff_t(start),
                          readings.begin() + std::ptrdiff_t(start + count));
    packet.bits = packet_bits(count, link.sizing);

    bool arrived = true;
    for (std::size_t h = 0; h + 1 < route.size(); ++h) {
      const NodeId from = route[h];
      const NodeId to = route[h + 1];
      if (!link.energy.alive(from) || !link.energy.alive(to)) {
        arrived = false;
        break;
      }
      TransmissionEvent ev;
      ev.round = link.round;
      ev.from = from;
      ev.to = to;
      ev.distance = distance(link.topology.nodes.at(from).position, link.topology.nodes.at(to).position);
      ev.tx_energy = tx_cost(link.radio, packet.bits, ev.distance);
      ev.rx_energy = rx_cost(link.radio, packet.bits);

      const auto tx = link.energy.charge(from, ev.tx_energy);
      ev.tx_drained = tx.drained;
      ev.sender_died = tx.died;

      const auto rx = link.energy.charge(to, ev.rx_energy);
      ev.rx_drained = rx.drained;
      ev.receiver_died = rx.died;

      ev.packet = packet;
      out.events.push_back(std::move(ev));
    }
    ++out.packets_sent;
    auto& sink = arrived ? out.delivered : out.lost;
    std::move(packet.payload.begin(), packet.payload.end(), std::back_inserter(sink));
    if (arrived) {
      out.delivered_hop_total += count * out.hops;
    } else {
      ++out.packets_lost;
    }
  }
  return out;
}

DeliveryOutcome baseline_forward_all(std::span<const SensorReading> readings,
                                     const LinkContext& link, std::size_t batch_cap) {
  std::map<NodeId, std::vector<SensorReading>> by_source;
  for (const auto& r : readings) by_source[r.source].push_back(r);

  DeliveryOutcome out;
  for (auto& [source, batch] : by_source) {
    const auto& route = link.topology.sink_routes.at(source);
    if (route.empty() || !link.energy.alive(source)) {
      std::move(batch.begin(), batch.end(), std::back_inserter(out.lost));
      continue;
    }
    out.append(send_along(route, batch, link, batch_cap));
  }
  return out;
}

}  // namespace iirsim
