#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "dfx/automata/dfa.hpp"

namespace dfx {

/// Nondeterministic automaton without epsilon moves. A string is accepted
/// iff some path from the initial state ends in an accepting state.
class Nfa {
 public:
  Nfa() = default;
  Nfa(Alphabet alphabet, std::size_t num_states, StateId initial = 0);
  explicit Nfa(const Dfa& dfa);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t size() const { return accepting_.size(); }
  StateId initial() const { return initial_; }
  void set_initial(StateId state);

  bool accepting(StateId state) const { return accepting_[check(state)]; }
  void set_accepting(StateId state, bool value = true) { accepting_[check(state)] = value; }

  /// Sorted, duplicate-free successor set.
  std::span<const StateId> targets(StateId state, std::size_t token) const {
    return delta_[check(state) * alphabet_.size() + token];
  }
  void add_transition(StateId from, std::size_t token, StateId to);
  void add_transition(StateId from, char token, StateId to) { add_transition(from, alphabet_.require(token), to); }

  std::size_t transition_count() const;
  /// True when no (state, token) pair has more than one successor.
  bool is_deterministic() const;

  StateId add_state(bool accepting = false);

  friend bool operator==(const Nfa&, const Nfa&) = default;

 private:
  std::size_t check(StateId state) const;

  Alphabet alphabet_;
  StateId initial_ = 0;
  std::vector<std::vector<StateId>> delta_;
  std::vector<bool> accepting_;
};

bool accepts(const Nfa& nfa, std::string_view w);

}  // namespace dfx
