#include "dfx/rnn/train.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include <spdlog/spdlog.h>

#include "dfx/errors.hpp"
#include "dfx/kernels/parallel.hpp"

namespace dfx {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

/// Accumulates loss and gradients of equal-length sequences into `out`.
void accumulate_group(const RnnModel& model, std::span<const LabeledSample* const> group, LossAndGradients& out) {
  const auto& p = model.params();
  const auto batch = static_cast<Eigen::Index>(group.size());
  const std::size_t steps = group.front()->x.size() + 1;
  const Eigen::Index d = model.hidden_dim();
  const Eigen::Index e = model.embed_dim();

  std::vector<std::vector<std::size_t>> ids(steps, std::vector<std::size_t>(group.size()));
  for (std::size_t b = 0; b < group.size(); ++b) {
    const auto& sample = *group[b];
    if (sample.y.size() != sample.x.size() + 1) throw InputError("label vector must have |x| + 1 entries");
    auto encoded = model.encode(sample.x);
    for (std::size_t t = 0; t < steps; ++t) ids[t][b] = encoded[t];
  }
  auto gather = [&](std::size_t t) {
    RowMatrix x(batch, e);
    for (Eigen::Index b = 0; b < batch; ++b) x.row(b) = p.embedding.row(static_cast<Eigen::Index>(ids[t][static_cast<std::size_t>(b)]));
    return x;
  };

  const Eigen::MatrixXd recurrent_t = p.recurrent.transpose();
  const Eigen::MatrixXd input_t = p.input.transpose();
  const Eigen::MatrixXd head_t = p.head.transpose();
  const Eigen::RowVector2d bias = p.head_bias.col(0).transpose();

  std::vector<RowMatrix> hidden(steps);
  std::vector<RowMatrix> residual(steps);  // softmax minus one-hot, batch x 2
  RowMatrix previous = RowMatrix::Zero(batch, d);
  for (std::size_t t = 0; t < steps; ++t) {
    RowMatrix pre = previous * recurrent_t;
    pre.noalias() += gather(t) * input_t;
    hidden[t] = pre.array().tanh().matrix();
    RowMatrix logits = hidden[t] * head_t;
    logits.rowwise() += bias;
    residual[t].resize(batch, 2);
    for (Eigen::Index b = 0; b < batch; ++b) {
      const int target = group[static_cast<std::size_t>(b)]->y[t] ? 1 : 0;
      const double margin = logits(b, 1 - target) - logits(b, target);
      out.loss += softplus(margin);
      const double accept = 1.0 / (1.0 + std::exp(logits(b, 0) - logits(b, 1)));
      residual[t](b, 0) = (1.0 - accept) - (target == 0 ? 1.0 : 0.0);
      residual[t](b, 1) = accept - (target == 1 ? 1.0 : 0.0);
    }
    previous = hidden[t];
  }

  auto& g = out.grads;
  RowMatrix carry = RowMatrix::Zero(batch, d);
  for (std::size_t step = steps; step-- > 0;) {
    const RowMatrix& h = hidden[step];
    g.head.noalias() += residual[step].transpose() * h;
    g.head_bias += residual[step].colwise().sum().transpose();
    RowMatrix dh = residual[step] * p.head;
    dh += carry;
    RowMatrix da = dh.cwiseProduct((1.0 - h.array().square()).matrix());
    if (step > 0) g.recurrent.noalias() += da.transpose() * hidden[step - 1];
    const RowMatrix x = gather(step);
    g.input.noalias() += da.transpose() * x;
    RowMatrix dx = da * p.input;
    for (Eigen::Index b = 0; b < batch; ++b) {
      g.embedding.row(static_cast<Eigen::Index>(ids[step][static_cast<std::size_t>(b)])) += dx.row(b);
    }
    carry.noalias() = da * p.recurrent;
  }
}

}  // namespace

LossAndGradients loss_and_gradients(const RnnModel& model, std::span<const LabeledSample* const> batch) {
  LossAndGradients out{0.0, model.params().zeros_like()};
  std::map<std::size_t, std::vector<const LabeledSample*>> by_length;
  for (const auto* sample : batch) by_length[sample->x.size()].push_back(sample);
  for (const auto& [length, group] : by_length) accumulate_group(model, group, out);
  return out;
}

LossAndGradients loss_and_gradients(const RnnModel& model, std::span<const LabeledSample> batch) {
  std::vector<const LabeledSample*> pointers;
  pointers.reserve(batch.size());
  for (const auto& sample : batch) pointers.push_back(&sample);
  return loss_and_gradients(model, std::span<const LabeledSample* const>(pointers));
}

DevAccuracy evaluate_accuracy(const RnnModel& model, std::span<const LabeledSample> samples) {
  std::vector<std::string> strings;
  strings.reserve(samples.size());
  for (const auto& s : samples) strings.push_back(s.x);
  const auto predicted = kernels::decisions_all(model, strings);
  std::size_t prefixes = 0, prefix_hits = 0, string_hits = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    bool all = true;
    for (std::size_t t = 0; t < samples[i].y.size(); ++t) {
      bool hit = predicted[i][t] == samples[i].y[t];
      prefix_hits += hit ? 1 : 0;
      all = all && hit;
    }
    prefixes += samples[i].y.size();
    string_hits += all ? 1 : 0;
  }
  if (samples.empty()) return {};
  return {static_cast<double>(prefix_hits) / static_cast<double>(prefixes),
          static_cast<double>(string_hits) / static_cast<double>(samples.size())};
}

TrainResult train(RnnModel model, std::span<const LabeledSample> train_set, std::span<const LabeledSample> dev_set,
                  const TrainConfig& config, Rng& rng, const EpochCallback& on_epoch) {
  if (train_set.empty() || dev_set.empty()) throw InputError("training and dev sets must be nonempty");
  if (config.epochs < 1 || config.batch_size < 1) throw InputError("epochs and batch size must be positive");

  AdamWState optimizer = AdamWState::zeros_like(model.params());
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<const LabeledSample*> batch;
  TrainResult result;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size, ++batch_index) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      batch.clear();
      for (std::size_t k = start; k < stop; ++k) batch.push_back(&train_set[order[k]]);
      auto [loss, grads] = loss_and_gradients(model, std::span<const LabeledSample* const>(batch));
      const std::string where = "epoch " + std::to_string(epoch) + ", batch " + std::to_string(batch_index);
      if (!std::isfinite(loss)) throw TrainingError("training diverged (non-finite loss) at " + where);
      const double scale = 1.0 / static_cast<double>(batch.size());
      for (auto* t : grads.tensors()) *t *= scale;
      if (config.clip_norm > 0.0) {
        const double norm = grads.norm();
        if (norm > config.clip_norm) {
          for (auto* t : grads.tensors()) *t *= config.clip_norm / norm;
        }
      }
      try {
        adamw_step(model.params(), grads, optimizer, config.hyper);
      } catch (const TrainingError& e) {
        throw TrainingError(std::string(e.what()) + " at " + where);
      }
      epoch_loss += loss;
    }

    const auto dev = evaluate_accuracy(model, dev_set);
    EpochMetrics metrics{epoch, epoch_loss / static_cast<double>(train_set.size()), dev.prefix, dev.string,
                         model.params().norm()};
    Checkpoint checkpoint{model, {config.language, epoch, config.seed, dev.prefix, metrics.param_norm}};
    spdlog::info("epoch {:>3}  loss {:.6f}  dev prefix acc {:.6f}  dev string acc {:.4f}  |theta| {:.3f}", epoch,
                 metrics.train_loss, metrics.dev_prefix_accuracy, metrics.dev_string_accuracy, metrics.param_norm);
    if (on_epoch) on_epoch(checkpoint, metrics);
    result.metrics.push_back(metrics);
    result.checkpoints.push_back(std::move(checkpoint));
  }

  double best = -1.0;
  for (const auto& m : result.metrics) {
    if (m.dev_prefix_accuracy >= best) {
      best = m.dev_prefix_accuracy;
      result.best_epoch = m.epoch;
    }
  }
  return result;
}

}  // namespace dfx
