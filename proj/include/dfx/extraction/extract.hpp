#pragma once

#include <span>
#include <string>

#include "dfx/automata/dfa.hpp"
#include "dfx/automata/nfa.hpp"
#include "dfx/extraction/merging.hpp"
#include "dfx/extraction/prefix_tree.hpp"

namespace dfx {

struct ExtractionReport {
  PrefixTree tree;
  Nfa merged;         // after state merging, possibly nondeterministic
  Dfa determinized;   // subset construction of `merged`
  Dfa minimized;      // final machine
  std::size_t trie_states = 0;
  std::size_t merged_states = 0;
  std::size_t determinized_states = 0;
  std::size_t minimized_states = 0;
  /// Fraction of distinct training prefixes on which `minimized` agrees
  /// with the recognizer's decision.
  double train_fidelity = 0.0;
  std::size_t train_disagreements = 0;
  double kappa = 0.0;
  std::size_t data_count = 0;
};

/// Prefix tree -> state merging -> determinization -> minimization.
/// Logs a warning when the final machine disagrees with the recognizer on
/// a training prefix.
ExtractionReport extract(const RnnModel& model, std::span<const std::string> strings, const MergePolicy& policy,
                         kernels::Execution exec = kernels::Execution::kParallel);

/// Same pipeline on a tree whose labels and features are already set.
ExtractionReport extract_from_tree(PrefixTree tree, const MergePolicy& policy,
                                   kernels::Execution exec = kernels::Execution::kParallel);

/// Fraction of tree states whose label matches the machine's verdict on
/// the state's prefix; `disagreements` receives the mismatch count.
double tree_agreement(const PrefixTree& tree, const Dfa& dfa, std::size_t* disagreements = nullptr);

}  // namespace dfx
