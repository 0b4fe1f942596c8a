#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <variant>

#include "dfx/automata/dfa.hpp"
#include "dfx/automata/nfa.hpp"

namespace dfx {

// Automaton text format, version 1. Line oriented; '#' starts a comment.
//
//   dfx-automaton 1
//   kind dfa                  (or nfa)
//   alphabet ab
//   states 2
//   initial 0
//   accepting 0               (space separated ids, possibly none)
//   transitions 2
//   0 a 1                     (src token dst), one per line
//   1 b 0
//   end
//
// Writers emit transitions sorted by (src, token order, dst), so equal
// machines serialize to identical bytes.

inline constexpr int kAutomatonFormatVersion = 1;

void write_automaton(std::ostream& os, const Dfa& dfa);
void write_automaton(std::ostream& os, const Nfa& nfa);
std::string to_text(const Dfa& dfa);
std::string to_text(const Nfa& nfa);

using Automaton = std::variant<Dfa, Nfa>;

/// Parses either kind. Throws FormatError on malformed input and on
/// nondeterministic transitions in a document declared `kind dfa`.
Automaton read_automaton(std::istream& is);
Dfa read_dfa(std::istream& is);
Dfa parse_dfa(const std::string& text);

void save_automaton(const std::filesystem::path& path, const Dfa& dfa);
void save_automaton(const std::filesystem::path& path, const Nfa& nfa);
Automaton load_automaton(const std::filesystem::path& path);

/// Graphviz rendering: one node per state (doublecircle when accepting),
/// one labeled edge per defined transition, a point node pointing at the
/// initial state. Undefined transitions are omitted.
std::string to_dot(const Dfa& dfa, const std::string& graph_name = "dfa");
std::string to_dot(const Nfa& nfa, const std::string& graph_name = "nfa");

}  // namespace dfx
