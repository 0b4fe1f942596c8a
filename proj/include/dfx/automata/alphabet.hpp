#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace dfx {

/// Ordered set of single-character tokens. Token order defines the
/// canonical order used in numbering, serialization and DOT output.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::string_view symbols);

  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  char symbol(std::size_t index) const { return symbols_[index]; }
  const std::string& symbols() const { return symbols_; }

  std::optional<std::size_t> index_of(char token) const;
  /// Throws InputError for tokens outside the alphabet.
  std::size_t require(char token) const;
  bool contains(char token) const { return index_of(token).has_value(); }

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.symbols_ == b.symbols_; }

 private:
  std::string symbols_;
  std::array<int, 256> index_{};
};

/// The binary alphabet {a, b} shared by the Tomita languages.
const Alphabet& binary_alphabet();

}  // namespace dfx
