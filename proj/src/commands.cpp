#include "iirsim/commands.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "iirsim/classifier.hpp"
#include "iirsim/errors.hpp"
#include "iirsim/file_io.hpp"
#include "iirsim/numeric_text.hpp"
#include "iirsim/sim_engine.hpp"

namespace iirsim {

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file_atomic(const std::filesystem::path& path, std::string_view text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(text.data(), std::streamsize(text.size()));
    if (!out) throw IoError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

ScenarioConfig load_scenario(const CliInvocation& inv) {
  ScenarioConfig cfg = parse_scenario(read_text_file(inv.scenario));
  if (inv.seed) cfg.seed = *inv.seed;
  if (inv.rounds) cfg.rounds = *inv.rounds;
  if (inv.mode) cfg.mode = *inv.mode;
  validate(cfg);
  return cfg;
}

namespace {

std::optional<ClassifierModel> model_for(const CliInvocation& inv) {
  if (inv.model) return load_model(*inv.model);
  return std::nullopt;
}

std::string summary_line(const MetricsReport& r) {
  std::ostringstream s;
  s << to_string(r.mode) << ": rounds=" << r.rounds_completed
    << " generated=" << r.readings_generated << " delivered=" << r.readings_delivered_to_sink
    << " bits=" << r.total_bits_transmitted
    << " energy_J=" << format_real(r.total_energy_consumed) << " selectivity="
    << (r.selectivity ? format_real(*r.selectivity) : "undefined");
  return s.str();
}

std::filesystem::path with_suffix(const std::filesystem::path& base, const std::string& suffix) {
  auto p = base;
  p += suffix;
  return p;
}

std::optional<double> as_real(const std::optional<Round>& r) {
  if (r) return double(*r);
  return std::nullopt;
}

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return 1;
}

}  // namespace

std::vector<ComparisonRow> compare_reports(const MetricsReport& baseline,
                                           const MetricsReport& framework) {
  std::vector<ComparisonRow> rows = {
      {"total_bits_transmitted", double(baseline.total_bits_transmitted),
       double(framework.total_bits_transmitted), {}},
      {"total_energy_consumed", baseline.total_energy_consumed, framework.total_energy_consumed, {}},
      {"readings_delivered_to_sink", double(baseline.readings_delivered_to_sink),
       double(framework.readings_delivered_to_sink), {}},
      {"first_node_death_round", as_real(baseline.first_node_death_round),
       as_real(framework.first_node_death_round), {}},
      {"network_death_round", as_real(baseline.network_death_round),
       as_real(framework.network_death_round), {}},
  };
  for (auto& row : rows) {
    if (row.baseline && row.framework && *row.baseline != 0.0) {
      row.ratio = *row.framework / *row.baseline;
    }
  }
  return rows;
}

std::string format_comparison(const std::vector<ComparisonRow>& rows) {
  auto cell = [](const std::optional<double>& v) { return v ? format_real(*v) : "undefined"; };
  std::ostringstream out;
  out << "metric,baseline,framework,ratio\n";
  for (const auto& row : rows) {
    out << row.metric << ',' << cell(row.baseline) << ',' << cell(row.framework) << ','
        << cell(row.ratio) << '\n';
  }
  return out.str();
}

int cmd_run(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ScenarioConfig cfg = load_scenario(inv);
    const MetricsReport report = run(cfg, model_for(inv));
    const std::string text = serialize(report, inv.format);
    if (inv.out) {
      write_text_file_atomic(*inv.out, text);
      if (!inv.quiet) out << summary_line(report) << '\n';
    } else {
      out << text;
      if (!inv.quiet) err << summary_line(report) << '\n';
    }
    return 0;
  });
}

int cmd_compare(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ScenarioConfig cfg = load_scenario(inv);
    const auto model = model_for(inv);

    cfg.mode = Mode::Baseline;
    const MetricsReport baseline = run(cfg, model);
    cfg.mode = Mode::Framework;
    validate(cfg);
    const MetricsReport framework = run(cfg, model);

    const std::string table = format_comparison(compare_reports(baseline, framework));
    if (inv.out) {
      const std::string ext = "." + std::string(to_string(inv.format));
      write_text_file_atomic(with_suffix(*inv.out, ".baseline" + ext), serialize(baseline, inv.format));
      write_text_file_atomic(with_suffix(*inv.out, ".framework" + ext), serialize(framework, inv.format));
      write_text_file_atomic(with_suffix(*inv.out, ".comparison.csv"), table);
    }
    if (!inv.quiet || !inv.out) out << table;
    return 0;
  });
}

int cmd_train(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ScenarioConfig cfg = load_scenario(inv);
    const auto examples = collect_training_examples(cfg, warmup_seed(cfg.seed));
    if (examples.empty()) {
      throw EmptyTrainingSet("the warm-up run produced no readings that survived review analysis");
    }
    TrainingStats stats;
    const ClassifierModel model = train_classifier(examples, &stats);
    const double accuracy = classification_accuracy(model, examples);
    std::ostringstream weights;
    write_model(weights, model);
    if (inv.out) {
      write_text_file_atomic(*inv.out, weights.str());
    } else {
      out << weights.str();
    }
    if (!inv.quiet) {
      (inv.out ? out : err) << "trained on " << examples.size() << " examples in " << stats.epochs
                            << " epochs" << (stats.converged ? "" : " (epoch cap)")
                            << ", training accuracy " << format_real(accuracy) << '\n';
    }
    return 0;
  });
}

int dispatch(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
  switch (inv.subcommand) {
    case Subcommand::Run: return cmd_run(inv, out, err);
    case Subcommand::Compare: return cmd_compare(inv, out, err);
    case Subcommand::Train: return cmd_train(inv, out, err);
  }
  return 1;
}

}  // namespace iirsim
