#pragma once

#include <optional>
#include <string>

#include "dfx/automata/dfa.hpp"
#include "dfx/automata/nfa.hpp"

namespace dfx {

/// Subset construction. Only subsets reachable from {initial} are built;
/// the empty subset becomes the undefined state.
Dfa determinize(const Nfa& nfa);

/// Drops unreachable states and renumbers the rest in breadth-first order
/// from the initial state (tokens in alphabet order). Two machines that
/// are isomorphic on their reachable parts have identical canonical forms.
Dfa canonicalize(const Dfa& dfa);

/// Minimal DFA for L(dfa) via Hopcroft partition refinement. The dead
/// class is folded into the undefined state and is not counted; an empty
/// language yields a single rejecting state without transitions.
Dfa minimize(const Dfa& dfa);

/// Shortest string on which the machines disagree, or nullopt when they
/// recognize the same language. Throws InputError on alphabet mismatch.
std::optional<std::string> distinguishing_string(const Dfa& a, const Dfa& b);

/// L(a) == L(b), by product-automaton reachability.
bool equivalent(const Dfa& a, const Dfa& b);

/// Structural equality of the reachable parts up to state renaming.
bool isomorphic(const Dfa& a, const Dfa& b);

}  // namespace dfx
