#include "dfx/rnn/model.hpp"

#include <cmath>

#include "dfx/errors.hpp"

namespace dfx {

RnnParams RnnParams::zeros_like() const {
  RnnParams out;
  auto dst = out.tensors();
  auto src = tensors();
  for (std::size_t i = 0; i < kTensorCount; ++i) *dst[i] = Eigen::MatrixXd::Zero(src[i]->rows(), src[i]->cols());
  return out;
}

double RnnParams::norm() const {
  double sq = 0.0;
  for (const auto* t : tensors()) sq += t->squaredNorm();
  return std::sqrt(sq);
}

bool RnnParams::all_finite() const {
  for (const auto* t : tensors()) {
    if (!t->allFinite()) return false;
  }
  return true;
}

RnnModel::RnnModel(Alphabet alphabet, RnnParams params) : alphabet_(std::move(alphabet)), params_(std::move(params)) {
  const auto d = params_.recurrent.rows();
  const auto e = params_.embedding.cols();
  const auto vocab = static_cast<Eigen::Index>(alphabet_.size() + 1);
  if (d < 1 || e < 1) throw InputError("hidden and embedding dimensions must be positive");
  if (params_.embedding.rows() != vocab || params_.recurrent.cols() != d || params_.input.rows() != d ||
      params_.input.cols() != e || params_.head.rows() != 2 || params_.head.cols() != d ||
      params_.head_bias.rows() != 2 || params_.head_bias.cols() != 1) {
    throw InputError("inconsistent RNN parameter shapes");
  }
}

std::vector<std::size_t> RnnModel::encode(std::string_view w) const {
  std::vector<std::size_t> ids;
  ids.reserve(w.size() + 1);
  ids.push_back(bos());
  for (char c : w) ids.push_back(alphabet_.require(c));
  return ids;
}

RnnModel init_model(const Alphabet& alphabet, Eigen::Index embed_dim, Eigen::Index hidden_dim, Rng& rng) {
  if (embed_dim < 1 || hidden_dim < 1) throw InputError("embedding and hidden dimensions must be >= 1");
  auto fill = [&rng](Eigen::Index rows, Eigen::Index cols, Eigen::Index fan_in) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    Eigen::MatrixXd m(rows, cols);
    // row-major fill order keeps the draw sequence independent of storage
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = dist(rng);
    }
    return m;
  };
  RnnParams p;
  p.embedding = fill(static_cast<Eigen::Index>(alphabet.size() + 1), embed_dim, 1);
  p.recurrent = fill(hidden_dim, hidden_dim, hidden_dim);
  p.input = fill(hidden_dim, embed_dim, embed_dim);
  p.head = fill(2, hidden_dim, hidden_dim);
  p.head_bias = fill(2, 1, hidden_dim);
  return RnnModel(alphabet, std::move(p));
}

ForwardResult forward(const RnnModel& model, std::string_view w) {
  const auto ids = model.encode(w);
  const auto& p = model.params();
  const auto steps = static_cast<Eigen::Index>(ids.size());
  ForwardResult out;
  out.hidden.resize(steps, model.hidden_dim());
  out.logits.resize(steps, 2);
  out.accept.resize(ids.size());

  Eigen::VectorXd h = Eigen::VectorXd::Zero(model.hidden_dim());
  for (Eigen::Index i = 0; i < steps; ++i) {
    const auto token = static_cast<Eigen::Index>(ids[static_cast<std::size_t>(i)]);
    h = (p.recurrent * h + p.input * p.embedding.row(token).transpose()).array().tanh().matrix();
    out.hidden.row(i) = h.transpose();
    Eigen::Vector2d logit = p.head * h + p.head_bias.col(0);
    out.logits.row(i) = logit.transpose();
    out.accept[static_cast<std::size_t>(i)] = 1.0 / (1.0 + std::exp(logit(0) - logit(1)));
  }
  return out;
}

std::vector<bool> decisions(const ForwardResult& result) {
  std::vector<bool> out(static_cast<std::size_t>(result.logits.rows()));
  for (Eigen::Index i = 0; i < result.logits.rows(); ++i) {
    out[static_cast<std::size_t>(i)] = result.logits(i, 1) > result.logits(i, 0);
  }
  return out;
}

std::vector<bool> decisions(const RnnModel& model, std::string_view w) { return decisions(forward(model, w)); }

std::vector<bool> decisions_from_probabilities(const std::vector<double>& accept) {
  std::vector<bool> out(accept.size());
  for (std::size_t i = 0; i < accept.size(); ++i) out[i] = accept[i] > 0.5;
  return out;
}

bool rnn_accepts(const RnnModel& model, std::string_view w) {
  const auto ids = model.encode(w);
  const auto& p = model.params();
  Eigen::VectorXd h = Eigen::VectorXd::Zero(model.hidden_dim());
  for (auto id : ids) {
    h = (p.recurrent * h + p.input * p.embedding.row(static_cast<Eigen::Index>(id)).transpose()).array().tanh().matrix();
  }
  Eigen::Vector2d logit = p.head * h + p.head_bias.col(0);
  return logit(1) > logit(0);
}

}  // namespace dfx
