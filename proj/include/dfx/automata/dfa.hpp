#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "dfx/automata/alphabet.hpp"

namespace dfx {

using StateId = int;

/// Marker for the undefined state. It is absorbing, never accepting and
/// is not counted among the states of a machine.
inline constexpr StateId kUndefined = -1;

/// Deterministic finite automaton with a partial transition function.
/// States are the integers [0, size()); a missing transition leads to the
/// undefined state.
class Dfa {
 public:
  Dfa() = default;
  Dfa(Alphabet alphabet, std::size_t num_states, StateId initial = 0);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t size() const { return accepting_.size(); }
  StateId initial() const { return initial_; }
  void set_initial(StateId state);

  bool accepting(StateId state) const { return state != kUndefined && accepting_[check(state)]; }
  void set_accepting(StateId state, bool value = true) { accepting_[check(state)] = value; }

  /// Successor on the token with the given alphabet index; the undefined
  /// state maps to itself.
  StateId next(StateId state, std::size_t token) const {
    if (state == kUndefined) return kUndefined;
    return delta_[static_cast<std::size_t>(state) * alphabet_.size() + token];
  }
  StateId next(StateId state, char token) const { return next(state, alphabet_.require(token)); }

  void set_transition(StateId from, std::size_t token, StateId to);
  void set_transition(StateId from, char token, StateId to) { set_transition(from, alphabet_.require(token), to); }

  /// Number of defined transitions.
  std::size_t transition_count() const;

  StateId add_state(bool accepting = false);

  friend bool operator==(const Dfa&, const Dfa&) = default;

 private:
  std::size_t check(StateId state) const;

  Alphabet alphabet_;
  StateId initial_ = 0;
  std::vector<StateId> delta_;
  std::vector<bool> accepting_;
};

struct RunTrace {
  /// n + 1 entries; kUndefined once the run falls off the machine.
  std::vector<StateId> states;
  bool accepted = false;
};

/// Executes the machine on w. Throws InputError for tokens outside the
/// alphabet.
RunTrace run(const Dfa& dfa, std::string_view w);

bool accepts(const Dfa& dfa, std::string_view w);

/// Entry i is the verdict on the prefix of length i; entry 0 is epsilon.
std::vector<bool> prefix_decisions(const Dfa& dfa, std::string_view w);

}  // namespace dfx
