#pragma once

#include <filesystem>
#include <vector>

#include "dfx/harness/config.hpp"
#include "dfx/rnn/train.hpp"

namespace dfx {

struct TrainingData {
  std::vector<LabeledSample> train;
  std::vector<LabeledSample> dev;
};

/// Training and dev sets for a language, drawn from streams derived from
/// the model seed.
TrainingData make_training_data(const TrainingSettings& settings, int language);

/// Summary of a finished training run, stored next to its checkpoints.
struct TrainingRecord {
  TrainingSettings settings;
  int best_epoch = 0;
  std::vector<EpochMetrics> metrics;

  /// Whether the best epoch reached 100% per-prefix dev accuracy.
  bool converged() const;
};

/// Per-epoch checkpoints under <root>/tomita<L>-seed<S>/. A directory
/// counts as trained only when its record matches the requested
/// training settings, so changing the config never reuses stale models.
class ModelStore {
 public:
  ModelStore(std::filesystem::path root, TrainingSettings settings, bool auto_train = true);

  std::filesystem::path directory(int language) const;
  std::filesystem::path checkpoint_path(int language, int epoch) const;
  bool trained(int language) const;

  /// Trains unconditionally and writes checkpoints, metrics.csv and
  /// training.json.
  TrainingRecord train(int language) const;
  /// The stored record, training first when allowed. Throws InputError
  /// when the model is missing and auto-training is off.
  TrainingRecord record(int language) const;
  /// Epoch 0 selects the best dev epoch.
  Checkpoint load(int language, int epoch) const;

  const TrainingSettings& settings() const { return settings_; }

 private:
  std::filesystem::path root_;
  TrainingSettings settings_;
  bool auto_train_;
};

}  // namespace dfx
