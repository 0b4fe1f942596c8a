#include "dfx/languages/tomita.hpp"

#include <array>
#include <string>

#include "dfx/errors.hpp"

namespace dfx {

LanguageId::LanguageId(int index) : index_(index) {
  if (index < kMin || index > kMax) {
    throw InputError("Tomita language id must be in [1, 7], got " + std::to_string(index));
  }
}

namespace {

struct Edge {
  StateId from;
  char token;
  StateId to;
};

Dfa make(std::size_t states, std::initializer_list<StateId> accepting, std::initializer_list<Edge> edges) {
  Dfa dfa(binary_alphabet(), states, 0);
  for (StateId q : accepting) dfa.set_accepting(q);
  for (const auto& e : edges) dfa.set_transition(e.from, e.token, e.to);
  return dfa;
}

std::array<Dfa, 7> build_gold() {
  return {
      // 1: a*
      make(1, {0}, {{0, 'a', 0}}),
      // 2: (ab)*
      make(2, {0}, {{0, 'a', 1}, {1, 'b', 0}}),
      // 3: 0 clean, 1 odd a-run, 2 odd a-run + odd b-run, 3 odd a-run + even b-run
      make(4, {0, 1, 3},
           {{0, 'a', 1}, {0, 'b', 0}, {1, 'a', 0}, {1, 'b', 2}, {2, 'b', 3}, {3, 'a', 1}, {3, 'b', 2}}),
      // 4: state = length of the trailing a-run
      make(3, {0, 1, 2}, {{0, 'a', 1}, {0, 'b', 0}, {1, 'a', 2}, {1, 'b', 0}, {2, 'b', 0}}),
      // 5: state = 2 * (#a mod 2) + (#b mod 2)
      make(4, {0},
           {{0, 'a', 2}, {0, 'b', 1}, {1, 'a', 3}, {1, 'b', 0}, {2, 'a', 0}, {2, 'b', 3}, {3, 'a', 1}, {3, 'b', 2}}),
      // 6: state = (#a - #b) mod 3
      make(3, {0}, {{0, 'a', 1}, {0, 'b', 2}, {1, 'a', 2}, {1, 'b', 0}, {2, 'a', 0}, {2, 'b', 1}}),
      // 7: b* a* b* a*, state = current block
      make(4, {0, 1, 2, 3},
           {{0, 'a', 1}, {0, 'b', 0}, {1, 'a', 1}, {1, 'b', 2}, {2, 'a', 3}, {2, 'b', 2}, {3, 'a', 3}}),
  };
}

}  // namespace

const Dfa& gold_dfa(LanguageId id) {
  static const std::array<Dfa, 7> gold = build_gold();
  return gold[static_cast<std::size_t>(id.index() - 1)];
}

bool membership(LanguageId id, std::string_view w) { return accepts(gold_dfa(id), w); }

}  // namespace dfx
