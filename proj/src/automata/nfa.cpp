#include "dfx/automata/nfa.hpp"

#include <algorithm>
#include <string>

#include "dfx/errors.hpp"

namespace dfx {

Nfa::Nfa(Alphabet alphabet, std::size_t num_states, StateId initial)
    : alphabet_(std::move(alphabet)), delta_(num_states * alphabet_.size()), accepting_(num_states, false) {
  if (num_states == 0) throw InputError("an NFA needs at least one state");
  set_initial(initial);
}

Nfa::Nfa(const Dfa& dfa) : Nfa(dfa.alphabet(), dfa.size(), dfa.initial()) {
  for (std::size_t q = 0; q < dfa.size(); ++q) {
    auto state = static_cast<StateId>(q);
    set_accepting(state, dfa.accepting(state));
    for (std::size_t t = 0; t < alphabet_.size(); ++t) {
      if (StateId to = dfa.next(state, t); to != kUndefined) add_transition(state, t, to);
    }
  }
}

std::size_t Nfa::check(StateId state) const {
  if (state < 0 || static_cast<std::size_t>(state) >= size()) {
    throw InputError("state " + std::to_string(state) + " out of range [0, " + std::to_string(size()) + ")");
  }
  return static_cast<std::size_t>(state);
}

void Nfa::set_initial(StateId state) { initial_ = static_cast<StateId>(check(state)); }

void Nfa::add_transition(StateId from, std::size_t token, StateId to) {
  auto src = check(from);
  check(to);
  if (token >= alphabet_.size()) throw InputError("token index out of range");
  auto& set = delta_[src * alphabet_.size() + token];
  auto it = std::lower_bound(set.begin(), set.end(), to);
  if (it == set.end() || *it != to) set.insert(it, to);
}

std::size_t Nfa::transition_count() const {
  std::size_t total = 0;
  for (const auto& set : delta_) total += set.size();
  return total;
}

bool Nfa::is_deterministic() const {
  return std::all_of(delta_.begin(), delta_.end(), [](const auto& set) { return set.size() <= 1; });
}

StateId Nfa::add_state(bool accepting) {
  accepting_.push_back(accepting);
  delta_.resize(delta_.size() + alphabet_.size());
  return static_cast<StateId>(accepting_.size() - 1);
}

bool accepts(const Nfa& nfa, std::string_view w) {
  std::vector<char> current(nfa.size(), 0), next(nfa.size(), 0);
  current[static_cast<std::size_t>(nfa.initial())] = 1;
  for (char token : w) {
    auto t = nfa.alphabet().require(token);
    std::fill(next.begin(), next.end(), 0);
    bool any = false;
    for (std::size_t q = 0; q < nfa.size(); ++q) {
      if (!current[q]) continue;
      for (StateId to : nfa.targets(static_cast<StateId>(q), t)) {
        next[static_cast<std::size_t>(to)] = 1;
        any = true;
      }
    }
    if (!any) return false;
    current.swap(next);
  }
  for (std::size_t q = 0; q < nfa.size(); ++q) {
    if (current[q] && nfa.accepting(static_cast<StateId>(q))) return true;
  }
  return false;
}

}  // namespace dfx
