#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "iirsim/metrics_report.hpp"
#include "iirsim/scenario.hpp"

namespace iirsim {

enum class Subcommand { Run, Compare, Train };

struct CliInvocation {
  Subcommand subcommand = Subcommand::Run;
  std::filesystem::path scenario;
  std::optional<std::uint64_t> seed;
  std::optional<Round> rounds;
  std::optional<Mode> mode;
  std::optional<std::filesystem::path> out;
  ReportFormat format = ReportFormat::Csv;
  std::optional<std::filesystem::path> model;
  bool quiet = false;
};

/// Reads the scenario file and applies the invocation's overrides.
ScenarioConfig load_scenario(const CliInvocation& inv);

struct ComparisonRow {
  std::string metric;
  std::optional<double> baseline;
  std::optional<double> framework;
  std::optional<double> ratio;  // framework / baseline
};

std::vector<ComparisonRow> compare_reports(const MetricsReport& baseline,
                                           const MetricsReport& framework);

/// CSV with columns metric,baseline,framework,ratio; missing values are
/// written as `undefined`.
std::string format_comparison(const std::vector<ComparisonRow>& rows);

/// The sub-commands. Each returns the process exit status and reports
/// errors on `err` with the error's name in the message.
int cmd_run(const CliInvocation& inv, std::ostream& out, std::ostream& err);
int cmd_compare(const CliInvocation& inv, std::ostream& out, std::ostream& err);
int cmd_train(const CliInvocation& inv, std::ostream& out, std::ostream& err);
int dispatch(const CliInvocation& inv, std::ostream& out, std::ostream& err);

}  // namespace iirsim
