#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "iirsim/core_model.hpp"

namespace iirsim {

/// First-order radio model constants.
struct RadioParams {
  double e_elec = 50e-9;   // J/bit, electronics (tx and rx)
  double e_amp = 100e-12;  // J/bit/m^2, transmit amplifier
};

double tx_cost(const RadioParams& p, std::uint64_t bits, double distance_m);
double rx_cost(const RadioParams& p, std::uint64_t bits);

/// Neumaier-compensated running sum. Energy totals add millions of terms
/// around 1e-5 J; a plain sum drifts by more than 1e-12 relative.
class CompensatedSum {
public:
  void add(double x);
  double value() const { return sum_ + carry_; }

private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

/// `spent` accumulates every debit; `remaining` is derived from it so that
/// small debits against a large budget do not lose precision.
struct EnergyState {
  double initial = 0.0;
  double remaining = 0.0;
  CompensatedSum spent;
  bool alive = true;

  static EnergyState full(double joules) { return {joules, joules, {}, joules > 0.0}; }
  static EnergyState unlimited() {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {inf, inf, {}, true};
  }
  bool finite() const { return initial != std::numeric_limits<double>::infinity(); }
};

/// Removes `amount` from the budget. An overdraw still completes the event
/// that caused it; the node ends at exactly zero and is dead.
EnergyState debit(EnergyState state, double amount);

/// Per-node energy bookkeeping for one run. Besides the states it keeps the
/// totals needed to reconcile drained energy with the per-event costs.
class EnergyLedger {
public:
  EnergyLedger() = default;
  /// `unlimited` marks nodes (the sink) that never run out.
  EnergyLedger(std::size_t node_count, double initial_joules, std::span<const NodeId> unlimited);

  struct Charge {
    double drained = 0.0;  // taken from a finite budget
    bool died = false;     // this debit killed the node
  };
  Charge charge(NodeId node, double amount);

  const EnergyState& state(NodeId node) const { return states_.at(node); }
  bool alive(NodeId node) const { return states_.at(node).alive; }
  std::size_t size() const { return states_.size(); }
  std::vector<bool> alive_mask() const;
  std::vector<double> remaining() const;

  /// Energy actually drained from finite budgets: sum of `spent`, which is
  /// (initial - remaining) per node up to rounding of `remaining`.
  double drained() const;
  /// Energy billed to unlimited nodes (never drained from any budget).
  double unlimited_billed() const { return unlimited_billed_.value(); }
  /// Portion of overdrawing debits that exceeded the remaining budget.
  double overdraw() const { return overdraw_.value(); }

private:
  std::vector<EnergyState> states_;
  CompensatedSum unlimited_billed_;
  CompensatedSum overdraw_;
};

}  // namespace iirsim
