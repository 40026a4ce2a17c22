#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>

#include "iirsim/core_model.hpp"

namespace iirsim {

inline constexpr std::size_t kFeatureCount = 5;

/// (priority score, opinion deviation / band width, consensus ratio,
///  band-normalized value, bias)
using FeatureVector = std::array<double, kFeatureCount>;

struct ClassifierModel {
  std::array<double, kFeatureCount> weights{};

  double score(const FeatureVector& x) const;
  /// Strict: a zero score discards.
  Label decide(const FeatureVector& x) const { return score(x) > 0.0 ? Label::Forward : Label::Discard; }

  friend bool operator==(const ClassifierModel&, const ClassifierModel&) = default;
};

struct TrainingExample {
  FeatureVector features{};
  Label label = Label::Discard;
};

inline constexpr std::size_t kMaxTrainingEpochs = 100;

struct TrainingStats {
  std::size_t epochs = 0;
  std::size_t updates = 0;
  bool converged = false;  // last epoch made no update
};

/// Rosenblatt perceptron: zero initial weights, unit learning rate, examples
/// visited in the given order, stopping after an epoch with no update or
/// after `max_epochs`. Throws EmptyTrainingSet on no examples.
ClassifierModel train_classifier(std::span<const TrainingExample> examples,
                                 TrainingStats* stats = nullptr,
                                 std::size_t max_epochs = kMaxTrainingEpochs);

double classification_accuracy(const ClassifierModel& model,
                               std::span<const TrainingExample> examples);

/// Plain text, one weight per line in shortest round-trip form.
void write_model(std::ostream& out, const ClassifierModel& model);
ClassifierModel read_model(std::istream& in);
void save_model(const std::filesystem::path& path, const ClassifierModel& model);
ClassifierModel load_model(const std::filesystem::path& path);

}  // namespace iirsim
