#include "iirsim/metrics_report.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "iirsim/errors.hpp"
#include "iirsim/numeric_text.hpp"

namespace iirsim {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kUndefined = "undefined";
constexpr std::string_view kNone = "none";

std::optional<double> ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

std::string csv_ratio(const std::optional<double>& v) {
  return v ? format_real(*v) : std::string(kUndefined);
}

std::string csv_round(const std::optional<Round>& v) {
  return v ? std::to_string(*v) : std::string(kNone);
}

template <typename T>
ordered_json json_optional(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const ordered_json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

}  // namespace

void record(MetricsReport& report, const TransmissionEvent& event) {
  ++report.transmission_events;
  report.total_bits_transmitted += event.packet.bits;
  report.total_energy_consumed += event.tx_drained + event.rx_drained;
}

void record(MetricsReport& report, const RoundTally& tally) {
  report.readings_generated += tally.generated;
  report.event_readings_generated += tally.event_generated;
  report.readings_after_dedup += tally.after_dedup;
  for (std::size_t i = 0; i < kStageCount; ++i) {
    report.readings_after_each_stage[i] += tally.after_stage[i];
  }
  report.readings_delivered_to_sink += tally.delivered;
  report.event_readings_delivered += tally.event_delivered;
  report.readings_lost_in_transit += tally.lost;
  report.delivered_hop_total += tally.delivered_hops;
}

void finalize(MetricsReport& report) {
  report.selectivity = ratio(report.readings_delivered_to_sink, report.readings_generated);
  report.mean_hop_count = ratio(report.delivered_hop_total, report.readings_delivered_to_sink);
  report.event_recall = ratio(report.event_readings_delivered, report.event_readings_generated);
  report.false_forward_rate =
      ratio(report.readings_delivered_to_sink - report.event_readings_delivered,
            report.readings_delivered_to_sink);
}

std::string_view to_string(ReportFormat format) {
  return format == ReportFormat::Csv ? "csv" : "json";
}

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> columns = {
      "mode",
      "rounds_completed",
      "readings_generated",
      "readings_after_dedup",
      "readings_after_priority",
      "readings_after_opinion",
      "readings_after_review",
      "readings_after_sentiment",
      "readings_delivered_to_sink",
      "readings_lost_in_transit",
      "event_readings_generated",
      "event_readings_delivered",
      "transmission_events",
      "total_bits_transmitted",
      "total_energy_consumed",
      "first_node_death_round",
      "network_death_round",
      "delivered_hop_total",
      "selectivity",
      "mean_hop_count",
      "event_recall",
      "false_forward_rate",
      "per_node_energy_remaining",
  };
  return columns;
}

std::string serialize(const MetricsReport& r, ReportFormat format) {
  if (format == ReportFormat::Csv) {
    std::ostringstream out;
    const auto& cols = report_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';

    std::string energy;
    for (std::size_t i = 0; i < r.per_node_energy_remaining.size(); ++i) {
      if (i) energy += ';';
      energy += format_real(r.per_node_energy_remaining[i]);
    }
    const std::vector<std::string> fields = {
        std::string(to_string(r.mode)),
        std::to_string(r.rounds_completed),
        std::to_string(r.readings_generated),
        std::to_string(r.readings_after_dedup),
        std::to_string(r.readings_after_each_stage[0]),
        std::to_string(r.readings_after_each_stage[1]),
        std::to_string(r.readings_after_each_stage[2]),
        std::to_string(r.readings_after_each_stage[3]),
        std::to_string(r.readings_delivered_to_sink),
        std::to_string(r.readings_lost_in_transit),
        std::to_string(r.event_readings_generated),
        std::to_string(r.event_readings_delivered),
        std::to_string(r.transmission_events),
        std::to_string(r.total_bits_transmitted),
        format_real(r.total_energy_consumed),
        csv_round(r.first_node_death_round),
        csv_round(r.network_death_round),
        std::to_string(r.delivered_hop_total),
        csv_ratio(r.selectivity),
        csv_ratio(r.mean_hop_count),
        csv_ratio(r.event_recall),
        csv_ratio(r.false_forward_rate),
        energy,
    };
    for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << fields[i];
    out << '\n';
    return out.str();
  }

  ordered_json energy = ordered_json::array();
  for (double e : r.per_node_energy_remaining) {
    energy.push_back(std::isfinite(e) ? ordered_json(e) : ordered_json(nullptr));
  }
  ordered_json j;
  j["mode"] = to_string(r.mode);
  j["rounds_completed"] = r.rounds_completed;
  j["readings_generated"] = r.readings_generated;
  j["readings_after_dedup"] = r.readings_after_dedup;
  j["readings_after_each_stage"] = r.readings_after_each_stage;
  j["readings_delivered_to_sink"] = r.readings_delivered_to_sink;
  j["readings_lost_in_transit"] = r.readings_lost_in_transit;
  j["event_readings_generated"] = r.event_readings_generated;
  j["event_readings_delivered"] = r.event_readings_delivered;
  j["transmission_events"] = r.transmission_events;
  j["total_bits_transmitted"] = r.total_bits_transmitted;
  j["total_energy_consumed"] = r.total_energy_consumed;
  j["first_node_death_round"] = json_optional(r.first_node_death_round);
  j["network_death_round"] = json_optional(r.network_death_round);
  j["delivered_hop_total"] = r.delivered_hop_total;
  j["selectivity"] = json_optional(r.selectivity);
  j["mean_hop_count"] = json_optional(r.mean_hop_count);
  j["event_recall"] = json_optional(r.event_recall);
  j["false_forward_rate"] = json_optional(r.false_forward_rate);
  j["per_node_energy_remaining"] = std::move(energy);
  return j.dump(2) + "\n";
}

MetricsReport parse_report_json(std::string_view text) {
  MetricsReport r;
  try {
    const auto j = ordered_json::parse(text);
    const auto mode = j.at("mode").get<std::string>();
    if (mode == "baseline") r.mode = Mode::Baseline;
    else if (mode == "framework") r.mode = Mode::Framework;
    else throw MalformedLine("report mode '" + mode + "' is not baseline or framework");
    r.rounds_completed = j.at("rounds_completed").get<std::uint64_t>();
    r.readings_generated = j.at("readings_generated").get<std::uint64_t>();
    r.readings_after_dedup = j.at("readings_after_dedup").get<std::uint64_t>();
    r.readings_after_each_stage =
        j.at("readings_after_each_stage").get<std::array<std::uint64_t, kStageCount>>();
    r.readings_delivered_to_sink = j.at("readings_delivered_to_sink").get<std::uint64_t>();
    r.readings_lost_in_transit = j.at("readings_lost_in_transit").get<std::uint64_t>();
    r.event_readings_generated = j.at("event_readings_generated").get<std::uint64_t>();
    r.event_readings_delivered = j.at("event_readings_delivered").get<std::uint64_t>();
    r.transmission_events = j.at("transmission_events").get<std::uint64_t>();
    r.total_bits_transmitted = j.at("total_bits_transmitted").get<std::uint64_t>();
    r.total_energy_consumed = j.at("total_energy_consumed").get<double>();
    r.first_node_death_round = optional_from<Round>(j.at("first_node_death_round"));
    r.network_death_round = optional_from<Round>(j.at("network_death_round"));
    r.delivered_hop_total = j.at("delivered_hop_total").get<std::uint64_t>();
    r.selectivity = optional_from<double>(j.at("selectivity"));
    r.mean_hop_count = optional_from<double>(j.at("mean_hop_count"));
    r.event_recall = optional_from<double>(j.at("event_recall"));
    r.false_forward_rate = optional_from<double>(j.at("false_forward_rate"));
    for (const auto& e : j.at("per_node_energy_remaining")) {
      r.per_node_energy_remaining.push_back(
          e.is_null() ? std::numeric_limits<double>::infinity() : e.get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw MalformedLine(std::string("report JSON: ") + e.what());
  }
  return r;
}

}  // namespace iirsim
