#pragma once

#include <cstdint>

#include "dfx/rnn/model.hpp"

namespace dfx {

struct AdamWHyper {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 1e-2;
};

struct AdamWState {
  RnnParams first_moment;
  RnnParams second_moment;
  std::int64_t step = 0;

  static AdamWState zeros_like(const RnnParams& params);
};

/// One AdamW update in place. Weight decay is applied to the parameters
/// directly (p <- p * (1 - lr * wd)) before the bias-corrected Adam step.
/// Throws TrainingError if any gradient entry is non-finite; parameters
/// and state are left untouched in that case.
void adamw_step(RnnParams& params, const RnnParams& grads, AdamWState& state, const AdamWHyper& hyper);

}  // namespace dfx
