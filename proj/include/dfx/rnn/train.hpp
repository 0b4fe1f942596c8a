#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dfx/languages/sampling.hpp"
#include "dfx/rnn/adamw.hpp"
#include "dfx/rnn/model.hpp"

namespace dfx {

struct LossAndGradients {
  double loss = 0.0;  // summed over every prefix of every sequence
  RnnParams grads;    // gradient of `loss`
};

/// Softmax cross-entropy over the two classes at every prefix position,
/// summed over positions and sequences, with full backpropagation through
/// time. Sequences of equal length are processed together as one batch.
LossAndGradients loss_and_gradients(const RnnModel& model, std::span<const LabeledSample* const> batch);
LossAndGradients loss_and_gradients(const RnnModel& model, std::span<const LabeledSample> batch);

struct CheckpointMeta {
  int language = 0;  // 0 when not tied to a Tomita language
  int epoch = 0;
  std::uint64_t seed = 0;
  double dev_accuracy = 0.0;
  double param_norm = 0.0;

  friend bool operator==(const CheckpointMeta&, const CheckpointMeta&) = default;
};

struct Checkpoint {
  RnnModel model;
  CheckpointMeta meta;
};

struct EpochMetrics {
  int epoch = 0;
  double train_loss = 0.0;            // mean summed loss per sequence
  double dev_prefix_accuracy = 0.0;   // fraction of prefix decisions matching labels
  double dev_string_accuracy = 0.0;   // fraction of strings with every prefix right
  double param_norm = 0.0;
};

struct TrainConfig {
  int epochs = 10;
  std::size_t batch_size = 16;
  AdamWHyper hyper;
  /// Rescale the batch gradient to this global 2-norm when it is larger; 0 disables.
  double clip_norm = 0.0;
  // metadata recorded in checkpoints
  int language = 0;
  std::uint64_t seed = 0;
};

struct TrainResult {
  std::vector<Checkpoint> checkpoints;  // one per epoch, epochs 1..E
  std::vector<EpochMetrics> metrics;
  /// Highest epoch reaching the best dev prefix accuracy (1-based).
  int best_epoch = 0;

  const Checkpoint& best() const { return checkpoints.at(static_cast<std::size_t>(best_epoch - 1)); }
};

struct DevAccuracy {
  double prefix = 0.0;
  double string = 0.0;
};

DevAccuracy evaluate_accuracy(const RnnModel& model, std::span<const LabeledSample> samples);

using EpochCallback = std::function<void(const Checkpoint&, const EpochMetrics&)>;

/// Minibatch AdamW training. The training set is reshuffled with `rng`
/// each epoch. Throws TrainingError (with epoch and batch context) on a
/// non-finite loss or gradient.
TrainResult train(RnnModel model, std::span<const LabeledSample> train_set, std::span<const LabeledSample> dev_set,
                  const TrainConfig& config, Rng& rng, const EpochCallback& on_epoch = {});

}  // namespace dfx
