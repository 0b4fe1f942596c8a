#pragma once

#include <random>
#include <string>
#include <vector>

#include "dfx/automata/dfa.hpp"
#include "dfx/automata/nfa.hpp"

namespace dfx::testing {

/// Every string over the alphabet of length <= max_length, shortest first.
inline std::vector<std::string> all_strings(const Alphabet& alphabet, std::size_t max_length) {
  std::vector<std::string> out{""};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_length; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (char c : alphabet.symbols()) out.push_back(out[i] + c);
    }
    begin = end;
  }
  return out;
}

/// The (ab)* machine: q0 accepting, q0 -a-> q1 -b-> q0, everything else
/// undefined.
inline Dfa figure1_dfa() {
  Dfa d(binary_alphabet(), 2, 0);
  d.set_accepting(0);
  d.set_transition(0, 'a', 1);
  d.set_transition(1, 'b', 0);
  return d;
}

/// Random partial DFA: each transition is undefined with probability
/// `hole`, each state accepting with probability 1/2.
inline Dfa random_dfa(std::mt19937_64& rng, std::size_t states, double hole = 0.15) {
  Dfa d(binary_alphabet(), states, 0);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(states) - 1);
  std::bernoulli_distribution coin(0.5), missing(hole);
  for (std::size_t q = 0; q < states; ++q) {
    d.set_accepting(static_cast<StateId>(q), coin(rng));
    for (std::size_t t = 0; t < 2; ++t) {
      d.set_transition(static_cast<StateId>(q), t, missing(rng) ? kUndefined : pick(rng));
    }
  }
  return d;
}

/// Random NFA: every (state, token, state) edge present with probability p.
inline Nfa random_nfa(std::mt19937_64& rng, std::size_t states, double p = 0.3) {
  Nfa n(binary_alphabet(), states, 0);
  std::bernoulli_distribution coin(0.5), edge(p);
  for (std::size_t q = 0; q < states; ++q) {
    n.set_accepting(static_cast<StateId>(q), coin(rng));
    for (std::size_t t = 0; t < 2; ++t) {
      for (std::size_t r = 0; r < states; ++r) {
        if (edge(rng)) n.add_transition(static_cast<StateId>(q), t, static_cast<StateId>(r));
      }
    }
  }
  return n;
}

}  // namespace dfx::testing
