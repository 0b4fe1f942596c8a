#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dfx/automata/dfa.hpp"
#include "dfx/kernels/parallel.hpp"
#include "dfx/rnn/model.hpp"

namespace dfx {

/// Trie over a finite set of strings. State 0 is the root (epsilon);
/// states are numbered breadth-first with children in alphabet order.
/// Each state carries the recognizer's verdict on its prefix and the
/// hidden state reached after reading that prefix.
struct PrefixTree {
  Alphabet alphabet;
  std::vector<StateId> parent;    // kUndefined for the root
  std::vector<char> via;          // token on the edge from the parent
  std::vector<std::size_t> depth;
  std::vector<StateId> children;  // size() x |alphabet|, kUndefined when absent
  std::vector<bool> accepting;
  Eigen::MatrixXd features;       // size() x hidden

  std::size_t size() const { return parent.size(); }
  StateId child(StateId q, std::size_t token) const {
    return children[static_cast<std::size_t>(q) * alphabet.size() + token];
  }
  std::string prefix(StateId q) const;
  /// State reached by w, or kUndefined when w is not a stored prefix.
  StateId find(std::string_view w) const;
  /// The tree read as a partial DFA.
  Dfa as_dfa() const;

  /// Structure only: labels false, no features.
  static PrefixTree from_strings(const Alphabet& alphabet, std::span<const std::string> strings);
};

/// One forward pass per string; labels come from the recognizer's
/// per-prefix decisions and features from its hidden states. A prefix
/// shared by several strings takes the values of the first string that
/// reaches it (later passes produce bitwise-identical values).
PrefixTree build_prefix_tree(const RnnModel& model, std::span<const std::string> strings,
                             kernels::Execution exec = kernels::Execution::kParallel);

}  // namespace dfx
