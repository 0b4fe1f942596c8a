#pragma once

#include <string_view>

#include "dfx/automata/dfa.hpp"

namespace dfx {

/// One of the seven Tomita languages over {a, b}:
///   1  a*
///   2  (ab)*
///   3  every maximal odd run of a's that is followed by b's is followed
///      by an even run of b's
///   4  no substring aaa
///   5  #a and #b both even
///   6  #a == #b (mod 3)
///   7  b*a*b*a*
class LanguageId {
 public:
  static constexpr int kMin = 1;
  static constexpr int kMax = 7;

  /// Throws InputError unless 1 <= index <= 7.
  explicit LanguageId(int index);

  int index() const { return index_; }
  friend auto operator<=>(const LanguageId&, const LanguageId&) = default;

 private:
  int index_;
};

/// Minimal DFA of the language, undefined state excluded. Sizes are
/// 1, 2, 4, 3, 4, 3, 4 for languages 1..7.
const Dfa& gold_dfa(LanguageId id);

/// Throws InputError on tokens outside {a, b}.
bool membership(LanguageId id, std::string_view w);

}  // namespace dfx
