#include "iirsim/energy_radio.hpp"

#include <algorithm>
#include <cmath>

namespace iirsim {

double tx_cost(const RadioParams& p, std::uint64_t bits, double distance_m) {
  const double b = static_cast<double>(bits);
  return b * p.e_elec + b * p.e_amp * distance_m * distance_m;
}

double rx_cost(const RadioParams& p, std::uint64_t bits) {
  return static_cast<double>(bits) * p.e_elec;
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::fabs(sum_) >= std::fabs(x)) {
    carry_ += (sum_ - t) + x;
  } else {
    carry_ += (x - t) + sum_;
  }
  sum_ = t;
}

EnergyState debit(EnergyState state, double amount) {
  if (!state.finite()) return state;
  if (amount >= state.remaining) {
    state.spent.add(state.remaining);
    state.remaining = 0.0;
  } else {
    state.spent.add(amount);
    state.remaining = std::max(0.0, state.initial - state.spent.value());
  }
  state.alive = state.remaining > 0.0;
  return state;
}

EnergyLedger::EnergyLedger(std::size_t node_count, double initial_joules,
                           std::span<const NodeId> unlimited)
    : states_(node_count, EnergyState::full(initial_joules)) {
  for (NodeId n : unlimited) states_.at(n) = EnergyState::unlimited();
}

EnergyLedger::Charge EnergyLedger::charge(NodeId node, double amount) {
  EnergyState& s = states_.at(node);
  if (!s.finite()) {
    unlimited_billed_.add(amount);
    return {};
  }
  const bool was_alive = s.alive;
  Charge c;
  c.drained = std::min(amount, s.remaining);
  if (amount > s.remaining) overdraw_.add(amount - s.remaining);
  s = debit(s, amount);
  c.died = was_alive && !s.alive;
  return c;
}

std::vector<bool> EnergyLedger::alive_mask() const {
  std::vector<bool> mask(states_.size());
  for (std::size_t i = 0; i < states_.size(); ++i) mask[i] = states_[i].alive;
  return mask;
}

std::vector<double> EnergyLedger::remaining() const {
  std::vector<double> out(states_.size());
  for (std::size_t i = 0; i < states_.size(); ++i) out[i] = states_[i].remaining;
  return out;
}

double EnergyLedger::drained() const {
  CompensatedSum total;
  for (const auto& s : states_) {
    if (s.finite()) total.add(s.spent.value());
  }
  return total.value();
}

}  // namespace iirsim
