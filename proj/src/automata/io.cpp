#include "dfx/automata/io.hpp"

#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "dfx/errors.hpp"

namespace dfx {

namespace {

template <class Machine, class ForEachTarget>
void write_common(std::ostream& os, const Machine& m, const char* kind, ForEachTarget for_each_target) {
  os << "dfx-automaton " << kAutomatonFormatVersion << "\n";
  os << "kind " << kind << "\n";
  os << "alphabet " << m.alphabet().symbols() << "\n";
  os << "states " << m.size() << "\n";
  os << "initial " << m.initial() << "\n";
  os << "accepting";
  for (std::size_t q = 0; q < m.size(); ++q) {
    if (m.accepting(static_cast<StateId>(q))) os << ' ' << q;
  }
  os << "\n";
  os << "transitions " << m.transition_count() << "\n";
  for (std::size_t q = 0; q < m.size(); ++q) {
    for (std::size_t t = 0; t < m.alphabet().size(); ++t) {
      for_each_target(static_cast<StateId>(q), t, [&](StateId to) {
        os << q << ' ' << m.alphabet().symbol(t) << ' ' << to << "\n";
      });
    }
  }
  os << "end\n";
}

/// Next non-empty, non-comment line split into whitespace tokens.
std::optional<std::vector<std::string>> next_fields(std::istream& is, int& line_no) {
  std::string line;
  while (std::getline(is, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::vector<std::string> fields;
    for (std::string f; ss >> f;) fields.push_back(f);
    if (!fields.empty()) return fields;
  }
  return std::nullopt;
}

[[noreturn]] void fail(int line_no, const std::string& what) {
  throw FormatError("automaton file line " + std::to_string(line_no) + ": " + what);
}

std::vector<std::string> expect(std::istream& is, int& line_no, const std::string& key, std::size_t min_fields) {
  auto fields = next_fields(is, line_no);
  if (!fields) fail(line_no, "unexpected end of input, expected '" + key + "'");
  if ((*fields)[0] != key) fail(line_no, "expected '" + key + "', found '" + (*fields)[0] + "'");
  if (fields->size() < min_fields) fail(line_no, "too few fields for '" + key + "'");
  return *fields;
}

long parse_int(const std::string& text, int line_no) {
  try {
    std::size_t used = 0;
    long value = std::stol(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    fail(line_no, "not an integer: '" + text + "'");
  }
}

std::string dot_escape(char c) {
  if (c == '"' || c == '\\') return std::string("\\") + c;
  return std::string(1, c);
}

template <class Machine, class ForEachTarget>
std::string dot_common(const Machine& m, const std::string& graph_name, ForEachTarget for_each_target) {
  std::ostringstream os;
  os << "digraph \"" << graph_name << "\" {\n";
  os << "  rankdir=LR;\n";
  os << "  __start [shape=point, label=\"\"];\n";
  for (std::size_t q = 0; q < m.size(); ++q) {
    bool acc = m.accepting(static_cast<StateId>(q));
    os << "  " << q << " [shape=" << (acc ? "doublecircle" : "circle") << ", label=\"q" << q << "\"];\n";
  }
  os << "  __start -> " << m.initial() << ";\n";
  for (std::size_t q = 0; q < m.size(); ++q) {
    for (std::size_t t = 0; t < m.alphabet().size(); ++t) {
      for_each_target(static_cast<StateId>(q), t, [&](StateId to) {
        os << "  " << q << " -> " << to << " [label=\"" << dot_escape(m.alphabet().symbol(t)) << "\"];\n";
      });
    }
  }
  os << "}\n";
  return os.str();
}

auto dfa_targets(const Dfa& dfa) {
  return [&dfa](StateId q, std::size_t t, auto&& emit) {
    if (StateId to = dfa.next(q, t); to != kUndefined) emit(to);
  };
}

auto nfa_targets(const Nfa& nfa) {
  return [&nfa](StateId q, std::size_t t, auto&& emit) {
    for (StateId to : nfa.targets(q, t)) emit(to);
  };
}

}  // namespace

void write_automaton(std::ostream& os, const Dfa& dfa) { write_common(os, dfa, "dfa", dfa_targets(dfa)); }
void write_automaton(std::ostream& os, const Nfa& nfa) { write_common(os, nfa, "nfa", nfa_targets(nfa)); }

std::string to_text(const Dfa& dfa) {
  std::ostringstream os;
  write_automaton(os, dfa);
  return os.str();
}

std::string to_text(const Nfa& nfa) {
  std::ostringstream os;
  write_automaton(os, nfa);
  return os.str();
}

Automaton read_automaton(std::istream& is) {
  int line_no = 0;
  auto header = expect(is, line_no, "dfx-automaton", 2);
  if (parse_int(header[1], line_no) != kAutomatonFormatVersion) fail(line_no, "unsupported version " + header[1]);
  auto kind = expect(is, line_no, "kind", 2)[1];
  if (kind != "dfa" && kind != "nfa") fail(line_no, "unknown kind '" + kind + "'");
  auto alphabet_fields = expect(is, line_no, "alphabet", 1);
  Alphabet alphabet;
  try {
    alphabet = Alphabet(alphabet_fields.size() > 1 ? alphabet_fields[1] : "");
  } catch (const InputError& e) {
    fail(line_no, e.what());
  }
  long states = parse_int(expect(is, line_no, "states", 2)[1], line_no);
  if (states < 1) fail(line_no, "state count must be positive");
  long initial = parse_int(expect(is, line_no, "initial", 2)[1], line_no);
  if (initial < 0 || initial >= states) fail(line_no, "initial state out of range");

  Nfa nfa(alphabet, static_cast<std::size_t>(states), static_cast<StateId>(initial));
  auto accepting = expect(is, line_no, "accepting", 1);
  for (std::size_t i = 1; i < accepting.size(); ++i) {
    long q = parse_int(accepting[i], line_no);
    if (q < 0 || q >= states) fail(line_no, "accepting state out of range");
    nfa.set_accepting(static_cast<StateId>(q));
  }
  long count = parse_int(expect(is, line_no, "transitions", 2)[1], line_no);
  if (count < 0) fail(line_no, "negative transition count");
  for (long i = 0; i < count; ++i) {
    auto fields = next_fields(is, line_no);
    if (!fields || fields->size() != 3) fail(line_no, "expected 'src token dst'");
    long src = parse_int((*fields)[0], line_no);
    long dst = parse_int((*fields)[2], line_no);
    if (src < 0 || src >= states || dst < 0 || dst >= states) fail(line_no, "transition endpoint out of range");
    if ((*fields)[1].size() != 1 || !alphabet.contains((*fields)[1][0])) {
      fail(line_no, "token '" + (*fields)[1] + "' not in alphabet");
    }
    auto t = alphabet.require((*fields)[1][0]);
    if (kind == "dfa" && !nfa.targets(static_cast<StateId>(src), t).empty()) {
      fail(line_no, "second transition on the same (state, token) in a dfa");
    }
    nfa.add_transition(static_cast<StateId>(src), t, static_cast<StateId>(dst));
  }
  expect(is, line_no, "end", 1);

  if (kind == "nfa") return nfa;
  Dfa dfa(alphabet, nfa.size(), nfa.initial());
  for (std::size_t q = 0; q < nfa.size(); ++q) {
    auto state = static_cast<StateId>(q);
    dfa.set_accepting(state, nfa.accepting(state));
    for (std::size_t t = 0; t < alphabet.size(); ++t) {
      if (auto targets = nfa.targets(state, t); !targets.empty()) dfa.set_transition(state, t, targets.front());
    }
  }
  return dfa;
}

Dfa read_dfa(std::istream& is) {
  auto automaton = read_automaton(is);
  if (auto* dfa = std::get_if<Dfa>(&automaton)) return std::move(*dfa);
  throw FormatError("expected a dfa document, found kind nfa");
}

Dfa parse_dfa(const std::string& text) {
  std::istringstream is(text);
  return read_dfa(is);
}

void save_automaton(const std::filesystem::path& path, const Dfa& dfa) {
  std::ofstream os(path);
  if (!os) throw FormatError("cannot open " + path.string() + " for writing");
  write_automaton(os, dfa);
}

void save_automaton(const std::filesystem::path& path, const Nfa& nfa) {
  std::ofstream os(path);
  if (!os) throw FormatError("cannot open " + path.string() + " for writing");
  write_automaton(os, nfa);
}

Automaton load_automaton(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open " + path.string());
  return read_automaton(is);
}

std::string to_dot(const Dfa& dfa, const std::string& graph_name) { return dot_common(dfa, graph_name, dfa_targets(dfa)); }
std::string to_dot(const Nfa& nfa, const std::string& graph_name) { return dot_common(nfa, graph_name, nfa_targets(nfa)); }

}  // namespace dfx
