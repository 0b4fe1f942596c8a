#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "dfx/automata/alphabet.hpp"
#include "dfx/languages/sampling.hpp"

namespace dfx {

/// Trainable tensors of the recognizer. The bias is stored as a 2x1
/// matrix so every tensor has the same type.
struct RnnParams {
  Eigen::MatrixXd embedding;  // (|alphabet| + 1) x embed_dim, last row is <bos>
  Eigen::MatrixXd recurrent;  // hidden x hidden
  Eigen::MatrixXd input;      // hidden x embed_dim
  Eigen::MatrixXd head;       // 2 x hidden, row 1 scores "accept"
  Eigen::MatrixXd head_bias;  // 2 x 1

  static constexpr std::size_t kTensorCount = 5;
  std::array<Eigen::MatrixXd*, kTensorCount> tensors() { return {&embedding, &recurrent, &input, &head, &head_bias}; }
  std::array<const Eigen::MatrixXd*, kTensorCount> tensors() const {
    return {&embedding, &recurrent, &input, &head, &head_bias};
  }

  /// Same shapes, all zeros.
  RnnParams zeros_like() const;
  /// Euclidean norm of all parameters taken together.
  double norm() const;
  bool all_finite() const;
};

/// Elman recognizer: h_{i+1} = tanh(U h_i + V x_{i+1}) with a two-way
/// linear head on every position. The state before <bos> is zero, so the
/// representation of epsilon is the state after consuming <bos>.
class RnnModel {
 public:
  RnnModel() = default;
  RnnModel(Alphabet alphabet, RnnParams params);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t bos() const { return alphabet_.size(); }
  Eigen::Index hidden_dim() const { return params_.recurrent.rows(); }
  Eigen::Index embed_dim() const { return params_.embedding.cols(); }

  const RnnParams& params() const { return params_; }
  RnnParams& params() { return params_; }

  /// Token indices for w, prefixed by <bos>. Throws InputError on tokens
  /// outside the alphabet.
  std::vector<std::size_t> encode(std::string_view w) const;

 private:
  Alphabet alphabet_;
  RnnParams params_;
};

/// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) per matrix; the embedding uses
/// fan_in = 1 and the head bias that of the head.
RnnModel init_model(const Alphabet& alphabet, Eigen::Index embed_dim, Eigen::Index hidden_dim, Rng& rng);

struct ForwardResult {
  Eigen::MatrixXd hidden;       // (n + 1) x hidden, row i is the state after w[:i]
  Eigen::MatrixXd logits;       // (n + 1) x 2
  std::vector<double> accept;   // probability that w[:i] is in the language
};

ForwardResult forward(const RnnModel& model, std::string_view w);

/// Argmax of the two logits per prefix; exact ties reject.
std::vector<bool> decisions(const RnnModel& model, std::string_view w);
std::vector<bool> decisions(const ForwardResult& result);
/// Thresholds probabilities at 0.5 (strictly greater accepts).
std::vector<bool> decisions_from_probabilities(const std::vector<double>& accept);

/// Verdict on the full string.
bool rnn_accepts(const RnnModel& model, std::string_view w);

}  // namespace dfx
