#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dfx/automata/dfa.hpp"
#include "dfx/languages/tomita.hpp"

namespace dfx {

using Rng = std::mt19937_64;

/// A string with the membership verdict of each of its prefixes;
/// y.size() == x.size() + 1 and y[0] is the verdict on epsilon.
struct LabeledSample {
  std::string x;
  std::vector<bool> y;

  friend bool operator==(const LabeledSample&, const LabeledSample&) = default;
};

LabeledSample label(LanguageId id, std::string x);

std::string sample_uniform_string(const Alphabet& alphabet, std::size_t length, Rng& rng);

/// Draws strings of a fixed length uniformly from L(dfa) restricted to
/// that length, using counts of accepting completions per state and
/// remaining length.
class PositiveSampler {
 public:
  PositiveSampler(const Dfa& dfa, std::size_t max_length);

  /// Number of accepted strings of exactly this length (as a double;
  /// exact below 2^53).
  double count(std::size_t length) const;
  bool feasible(std::size_t length) const { return count(length) > 0.0; }

  /// Throws InfeasibleError when no string of this length is accepted.
  std::string sample(std::size_t length, Rng& rng) const;

 private:
  double completions(StateId state, std::size_t remaining) const {
    return table_[remaining * states_ + static_cast<std::size_t>(state)];
  }

  const Dfa* dfa_;
  std::size_t states_;
  std::size_t max_length_;
  std::vector<double> table_;
};

std::string sample_uniform_positive(LanguageId id, std::size_t length, Rng& rng);

/// Training-set composition: ceil(m/2) uniform strings and floor(m/2)
/// uniform positives, all of length n, alternating starting with a uniform
/// one. Positive draws at infeasible lengths fall back to uniform strings
/// with a logged warning.
std::vector<LabeledSample> sample_balanced(LanguageId id, std::size_t length, std::size_t count, Rng& rng);

/// Fixed length; a fair coin per string chooses positive or uniform.
std::vector<LabeledSample> sample_coin_mixed(LanguageId id, std::size_t length, std::size_t count, Rng& rng);

/// Held-out set: each length uniform in [0, max_length], then a fair coin
/// chooses positive (when feasible at that length) or uniform.
std::vector<LabeledSample> sample_eval_set(LanguageId id, std::size_t count, std::size_t max_length, Rng& rng);

}  // namespace dfx
