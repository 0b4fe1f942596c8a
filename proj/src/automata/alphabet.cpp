#include "dfx/automata/alphabet.hpp"

#include "dfx/errors.hpp"

namespace dfx {

Alphabet::Alphabet(std::string_view symbols) : symbols_(symbols) {
  index_.fill(-1);
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    auto slot = static_cast<unsigned char>(symbols_[i]);
    if (index_[slot] != -1) {
      throw InputError(std::string("duplicate alphabet token '") + symbols_[i] + "'");
    }
    if (symbols_[i] == '\n' || symbols_[i] == '\t' || symbols_[i] == ' ') {
      throw InputError("whitespace is not a valid alphabet token");
    }
    index_[slot] = static_cast<int>(i);
  }
}

std::optional<std::size_t> Alphabet::index_of(char token) const {
  if (symbols_.empty()) return std::nullopt;
  int slot = index_[static_cast<unsigned char>(token)];
  if (slot < 0) return std::nullopt;
  return static_cast<std::size_t>(slot);
}

std::size_t Alphabet::require(char token) const {
  auto index = index_of(token);
  if (!index) {
    throw InputError(std::string("token '") + token + "' is not in alphabet {" + symbols_ + "}");
  }
  return *index;
}

const Alphabet& binary_alphabet() {
  static const Alphabet alphabet("ab");
  return alphabet;
}

}  // namespace dfx
