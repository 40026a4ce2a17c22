#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iirsim/core_model.hpp"
#include "iirsim/dissemination.hpp"

namespace iirsim {

/// Reading counts from one round, added into a report in one step.
struct RoundTally {
  std::uint64_t generated = 0;
  std::uint64_t event_generated = 0;
  std::uint64_t after_dedup = 0;
  std::array<std::uint64_t, kStageCount> after_stage{};
  std::uint64_t delivered = 0;
  std::uint64_t event_delivered = 0;
  std::uint64_t lost = 0;
  std::uint64_t delivered_hops = 0;
};

/// Per-run totals. Ratios stay empty ("undefined") until finalize() and
/// whenever their denominator is zero.
struct MetricsReport {
  Mode mode = Mode::Framework;
  std::uint64_t rounds_completed = 0;
  std::uint64_t readings_generated = 0;
  std::uint64_t readings_after_dedup = 0;
  std::array<std::uint64_t, kStageCount> readings_after_each_stage{};
  std::uint64_t readings_delivered_to_sink = 0;
  std::uint64_t readings_lost_in_transit = 0;
  std::uint64_t event_readings_generated = 0;
  std::uint64_t event_readings_delivered = 0;
  std::uint64_t transmission_events = 0;
  std::uint64_t total_bits_transmitted = 0;
  double total_energy_consumed = 0.0;  // J drained from finite budgets
  std::vector<double> per_node_energy_remaining;  // the sink reports +inf
  std::optional<Round> first_node_death_round;
  std::optional<Round> network_death_round;
  std::uint64_t delivered_hop_total = 0;
  std::optional<double> selectivity;
  std::optional<double> mean_hop_count;
  std::optional<double> event_recall;
  std::optional<double> false_forward_rate;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

void record(MetricsReport& report, const TransmissionEvent& event);
void record(MetricsReport& report, const RoundTally& tally);

/// Computes the derived ratios from the counters.
void finalize(MetricsReport& report);

enum class ReportFormat { Csv, Json };

std::string_view to_string(ReportFormat format);

/// Column order of the CSV form, also the field order of the JSON form.
const std::vector<std::string>& report_columns();

std::string serialize(const MetricsReport& report, ReportFormat format);

/// Reads back the JSON form. Throws MalformedLine on structural problems.
MetricsReport parse_report_json(std::string_view text);

}  // namespace iirsim
