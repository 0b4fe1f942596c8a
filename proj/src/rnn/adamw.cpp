#include "dfx/rnn/adamw.hpp"

#include <cmath>

#include "dfx/errors.hpp"

namespace dfx {

AdamWState AdamWState::zeros_like(const RnnParams& params) {
  return {params.zeros_like(), params.zeros_like(), 0};
}

void adamw_step(RnnParams& params, const RnnParams& grads, AdamWState& state, const AdamWHyper& hyper) {
  if (!grads.all_finite()) throw TrainingError("non-finite gradient");

  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(hyper.beta1, t);
  const double correction2 = 1.0 - std::pow(hyper.beta2, t);
  const double decay = 1.0 - hyper.lr * hyper.weight_decay;

  auto p = params.tensors();
  auto g = grads.tensors();
  auto m = state.first_moment.tensors();
  auto v = state.second_moment.tensors();
  for (std::size_t i = 0; i < RnnParams::kTensorCount; ++i) {
    *p[i] *= decay;
    *m[i] = hyper.beta1 * *m[i] + (1.0 - hyper.beta1) * *g[i];
    *v[i] = hyper.beta2 * *v[i] + (1.0 - hyper.beta2) * g[i]->cwiseAbs2();
    auto denom = ((*v[i] / correction2).array().sqrt() + hyper.eps).matrix();
    *p[i] -= (hyper.lr / correction1) * m[i]->cwiseQuotient(denom);
  }
}

}  // namespace dfx
