// iirsim: batch front end for the sensor-network filtering simulator.
//
//   iirsim run     --scenario S1.txt [--seed N] [--rounds N] [--mode baseline|framework]
//                  [--out report.csv] [--format csv|json] [--model weights.txt] [--quiet]
//   iirsim compare --scenario S1.txt [--out prefix] ...
//   iirsim train   --scenario S1.txt [--out weights.txt]

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "iirsim/commands.hpp"

int main(int argc, char** argv) {
  using namespace iirsim;

  CLI::App app{"Wireless sensor network simulator with in-network staircase filtering"};
  app.require_subcommand(1);

  CliInvocation inv;
  std::string scenario;
  std::string mode;
  std::string format = "csv";
  std::string out;
  std::string model;
  std::uint64_t seed = 0;
  Round rounds = 0;

  const std::map<std::string, Subcommand> names = {
      {"run", Subcommand::Run}, {"compare", Subcommand::Compare}, {"train", Subcommand::Train}};
  const std::map<std::string, std::string> help = {
      {"run", "Run one simulation and write its metrics report"},
      {"compare", "Run baseline and framework modes on the same scenario and seed"},
      {"train", "Train the sentiment classifier on a labeled warm-up run"}};

  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, sub] : names) {
    CLI::App* cmd = app.add_subcommand(name, help.at(name));
    subs[name] = cmd;
    cmd->add_option("--scenario", scenario, "Scenario file (key = value lines)")->required();
    cmd->add_option("--seed", seed, "Override the scenario seed");
    cmd->add_option("--rounds", rounds, "Override the number of rounds");
    cmd->add_option("--mode", mode, "Override the mode")->check(CLI::IsMember({"baseline", "framework"}));
    cmd->add_option("--out", out, "Output path (prefix for compare)");
    cmd->add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--model", model, "Classifier weights file (one weight per line)");
    cmd->add_flag("--quiet", inv.quiet, "Suppress the summary line");
    cmd->callback([&inv, sub = sub] { inv.subcommand = sub; });
  }

  CLI11_PARSE(app, argc, argv);

  CLI::App* chosen = app.get_subcommands().front();
  inv.scenario = scenario;
  if (chosen->count("--seed")) inv.seed = seed;
  if (chosen->count("--rounds")) inv.rounds = rounds;
  if (!mode.empty()) inv.mode = mode == "baseline" ? Mode::Baseline : Mode::Framework;
  if (!out.empty()) inv.out = out;
  if (!model.empty()) inv.model = model;
  inv.format = format == "json" ? ReportFormat::Json : ReportFormat::Csv;

  return dispatch(inv, std::cout, std::cerr);
}
