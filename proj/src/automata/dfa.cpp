#include "dfx/automata/dfa.hpp"

#include <algorithm>
#include <string>

#include "dfx/errors.hpp"

namespace dfx {

Dfa::Dfa(Alphabet alphabet, std::size_t num_states, StateId initial)
    : alphabet_(std::move(alphabet)),
      delta_(num_states * alphabet_.size(), kUndefined),
      accepting_(num_states, false) {
  if (num_states == 0) throw InputError("a DFA needs at least one state");
  set_initial(initial);
}

std::size_t Dfa::check(StateId state) const {
  if (state < 0 || static_cast<std::size_t>(state) >= size()) {
    throw InputError("state " + std::to_string(state) + " out of range [0, " + std::to_string(size()) + ")");
  }
  return static_cast<std::size_t>(state);
}

void Dfa::set_initial(StateId state) { initial_ = static_cast<StateId>(check(state)); }

void Dfa::set_transition(StateId from, std::size_t token, StateId to) {
  auto src = check(from);
  if (token >= alphabet_.size()) throw InputError("token index out of range");
  if (to != kUndefined) check(to);
  delta_[src * alphabet_.size() + token] = to;
}

std::size_t Dfa::transition_count() const {
  return static_cast<std::size_t>(std::count_if(delta_.begin(), delta_.end(), [](StateId s) { return s != kUndefined; }));
}

StateId Dfa::add_state(bool accepting) {
  accepting_.push_back(accepting);
  delta_.resize(delta_.size() + alphabet_.size(), kUndefined);
  return static_cast<StateId>(accepting_.size() - 1);
}

RunTrace run(const Dfa& dfa, std::string_view w) {
  RunTrace trace;
  trace.states.reserve(w.size() + 1);
  StateId state = dfa.initial();
  trace.states.push_back(state);
  for (char token : w) {
    state = dfa.next(state, dfa.alphabet().require(token));
    trace.states.push_back(state);
  }
  trace.accepted = dfa.accepting(state);
  return trace;
}

bool accepts(const Dfa& dfa, std::string_view w) {
  StateId state = dfa.initial();
  for (char token : w) state = dfa.next(state, dfa.alphabet().require(token));
  return dfa.accepting(state);
}

std::vector<bool> prefix_decisions(const Dfa& dfa, std::string_view w) {
  auto trace = run(dfa, w);
  std::vector<bool> out(trace.states.size());
  std::transform(trace.states.begin(), trace.states.end(), out.begin(), [&](StateId s) { return dfa.accepting(s); });
  return out;
}

}  // namespace dfx
