#include "dfx/languages/sampling.hpp"

#include <cmath>

#include <spdlog/spdlog.h>

#include "dfx/errors.hpp"

namespace dfx {

namespace {

constexpr std::size_t kMaxSamplerLength = 1000;  // 2^1000 still fits a double

bool coin(Rng& rng) { return std::bernoulli_distribution(0.5)(rng); }

std::string positive_or_uniform(const PositiveSampler& sampler, std::size_t length, Rng& rng, std::size_t& fallbacks) {
  if (sampler.feasible(length)) return sampler.sample(length, rng);
  ++fallbacks;
  return sample_uniform_string(binary_alphabet(), length, rng);
}

}  // namespace

LabeledSample label(LanguageId id, std::string x) {
  auto y = prefix_decisions(gold_dfa(id), x);
  return {std::move(x), std::move(y)};
}

std::string sample_uniform_string(const Alphabet& alphabet, std::size_t length, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::string out(length, '\0');
  for (auto& c : out) c = alphabet.symbol(pick(rng));
  return out;
}

PositiveSampler::PositiveSampler(const Dfa& dfa, std::size_t max_length)
    : dfa_(&dfa), states_(dfa.size()), max_length_(max_length), table_((max_length + 1) * dfa.size(), 0.0) {
  if (max_length > kMaxSamplerLength) {
    throw InputError("positive sampling supports lengths up to " + std::to_string(kMaxSamplerLength));
  }
  for (std::size_t q = 0; q < states_; ++q) table_[q] = dfa.accepting(static_cast<StateId>(q)) ? 1.0 : 0.0;
  for (std::size_t r = 1; r <= max_length; ++r) {
    for (std::size_t q = 0; q < states_; ++q) {
      double total = 0.0;
      for (std::size_t t = 0; t < dfa.alphabet().size(); ++t) {
        StateId to = dfa.next(static_cast<StateId>(q), t);
        if (to != kUndefined) total += completions(to, r - 1);
      }
      table_[r * states_ + q] = total;
    }
  }
}

double PositiveSampler::count(std::size_t length) const {
  if (length > max_length_) throw InputError("length exceeds sampler capacity");
  return completions(dfa_->initial(), length);
}

std::string PositiveSampler::sample(std::size_t length, Rng& rng) const {
  if (!feasible(length)) {
    throw InfeasibleError("language has no string of length " + std::to_string(length));
  }
  std::string out;
  out.reserve(length);
  StateId state = dfa_->initial();
  for (std::size_t remaining = length; remaining > 0; --remaining) {
    double total = completions(state, remaining);
    double r = std::uniform_real_distribution<double>(0.0, total)(rng);
    StateId chosen = kUndefined;
    std::size_t chosen_token = 0;
    for (std::size_t t = 0; t < dfa_->alphabet().size(); ++t) {
      StateId to = dfa_->next(state, t);
      if (to == kUndefined) continue;
      double weight = completions(to, remaining - 1);
      if (weight <= 0.0) continue;
      chosen = to;
      chosen_token = t;
      if (r < weight) break;
      r -= weight;
    }
    out.push_back(dfa_->alphabet().symbol(chosen_token));
    state = chosen;
  }
  return out;
}

std::string sample_uniform_positive(LanguageId id, std::size_t length, Rng& rng) {
  return PositiveSampler(gold_dfa(id), length).sample(length, rng);
}

std::vector<LabeledSample> sample_balanced(LanguageId id, std::size_t length, std::size_t count, Rng& rng) {
  PositiveSampler sampler(gold_dfa(id), length);
  std::size_t fallbacks = 0;
  std::vector<LabeledSample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::string x = (i % 2 == 0) ? sample_uniform_string(binary_alphabet(), length, rng)
                                 : positive_or_uniform(sampler, length, rng, fallbacks);
    out.push_back(label(id, std::move(x)));
  }
  if (fallbacks > 0) {
    spdlog::warn("tomita {}: no positive strings of length {}; {} positive slots filled with uniform strings",
                 id.index(), length, fallbacks);
  }
  return out;
}

std::vector<LabeledSample> sample_coin_mixed(LanguageId id, std::size_t length, std::size_t count, Rng& rng) {
  PositiveSampler sampler(gold_dfa(id), length);
  std::size_t fallbacks = 0;
  std::vector<LabeledSample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::string x = coin(rng) ? positive_or_uniform(sampler, length, rng, fallbacks)
                              : sample_uniform_string(binary_alphabet(), length, rng);
    out.push_back(label(id, std::move(x)));
  }
  if (fallbacks > 0) {
    spdlog::warn("tomita {}: no positive strings of length {}; {} positive draws replaced by uniform strings",
                 id.index(), length, fallbacks);
  }
  return out;
}

std::vector<LabeledSample> sample_eval_set(LanguageId id, std::size_t count, std::size_t max_length, Rng& rng) {
  PositiveSampler sampler(gold_dfa(id), max_length);
  std::uniform_int_distribution<std::size_t> pick_length(0, max_length);
  std::size_t fallbacks = 0;
  std::vector<LabeledSample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t length = pick_length(rng);
    std::string x = coin(rng) ? positive_or_uniform(sampler, length, rng, fallbacks)
                              : sample_uniform_string(binary_alphabet(), length, rng);
    out.push_back(label(id, std::move(x)));
  }
  if (fallbacks > 0) {
    spdlog::debug("tomita {}: {} eval positives drawn at infeasible lengths fell back to uniform", id.index(),
                  fallbacks);
  }
  return out;
}

}  // namespace dfx
