#include "iirsim/classifier.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "iirsim/errors.hpp"
#include "iirsim/file_io.hpp"
#include "iirsim/numeric_text.hpp"

namespace iirsim {

double ClassifierModel::score(const FeatureVector& x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < kFeatureCount; ++i) s += weights[i] * x[i];
  return s;
}

ClassifierModel train_classifier(std::span<const TrainingExample> examples, TrainingStats* stats,
                                 std::size_t max_epochs) {
  if (examples.empty()) throw EmptyTrainingSet("no labeled examples to train on");

  ClassifierModel model;
  TrainingStats local;
  while (local.epochs < max_epochs) {
    ++local.epochs;
    std::size_t epoch_updates = 0;
    for (const auto& ex : examples) {
      if (model.decide(ex.features) == ex.label) continue;
      const double sign = ex.label == Label::Forward ? 1.0 : -1.0;
      for (std::size_t i = 0; i < kFeatureCount; ++i) model.weights[i] += sign * ex.features[i];
      ++epoch_updates;
    }
    local.updates += epoch_updates;
    if (epoch_updates == 0) {
      local.converged = true;
      break;
    }
  }
  if (stats != nullptr) *stats = local;
  return model;
}

double classification_accuracy(const ClassifierModel& model,
                               std::span<const TrainingExample> examples) {
  if (examples.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& ex : examples) {
    if (model.decide(ex.features) == ex.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(examples.size());
}

void write_model(std::ostream& out, const ClassifierModel& model) {
  for (double w : model.weights) out << format_real(w) << '\n';
}

ClassifierModel read_model(std::istream& in) {
  ClassifierModel model;
  std::size_t count = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto w = parse_real(line);
    if (!w || !std::isfinite(*w)) {
      throw MalformedLine("model line " + std::to_string(line_no) + ": expected a finite real");
    }
    if (count == kFeatureCount) {
      throw MalformedLine("model line " + std::to_string(line_no) + ": more than " +
                          std::to_string(kFeatureCount) + " weights");
    }
    model.weights[count++] = *w;
  }
  if (count != kFeatureCount) {
    throw MalformedLine("model has " + std::to_string(count) + " weights, expected " +
                        std::to_string(kFeatureCount));
  }
  return model;
}

void save_model(const std::filesystem::path& path, const ClassifierModel& model) {
  std::ostringstream out;
  write_model(out, model);
  write_text_file_atomic(path, out.str());
}

ClassifierModel load_model(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  return read_model(in);
}

}  // namespace iirsim
