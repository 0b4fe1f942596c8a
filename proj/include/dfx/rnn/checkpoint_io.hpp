#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <span>

#include "dfx/rnn/train.hpp"

namespace dfx {

// Checkpoint text format, version 1:
//
//   dfx-checkpoint 1
//   meta language 2
//   meta epoch 5
//   meta seed 0
//   meta dev_accuracy 1
//   meta param_norm 31.41592653589793
//   alphabet ab
//   matrix embedding 3 10
//   <3 lines of 10 values>
//   matrix recurrent 100 100
//   ...
//   end
//
// Matrices are row-major, values printed with 17 significant digits so
// they parse back to the identical doubles. Matrix order: embedding,
// recurrent, input, head, head_bias.

void write_checkpoint(std::ostream& os, const Checkpoint& checkpoint);
Checkpoint read_checkpoint(std::istream& is);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// CSV with header "epoch,train_loss,dev_prefix_accuracy,dev_string_accuracy,param_norm".
void write_metrics_csv(std::ostream& os, std::span<const EpochMetrics> metrics);

}  // namespace dfx
