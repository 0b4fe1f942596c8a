#pragma once

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "dfx/automata/nfa.hpp"
#include "dfx/extraction/prefix_tree.hpp"

namespace dfx {

/// Similarity tolerance kappa in (0, 1): two states with the same label
/// merge when the cosine of their features exceeds 1 - kappa.
class MergePolicy {
 public:
  explicit MergePolicy(double kappa);

  double kappa() const { return kappa_; }
  double cosine_threshold() const { return 1.0 - kappa_; }

 private:
  double kappa_;
};

/// Cosine similarity; nullopt when either vector has zero norm.
std::optional<double> cosine_similarity(const Eigen::Ref<const Eigen::VectorXd>& a,
                                        const Eigen::Ref<const Eigen::VectorXd>& b);

/// Automaton under construction during state merging. Starts as a copy of
/// a prefix tree; merges delete states and union their transitions into
/// the survivor, which may make the machine nondeterministic. State ids
/// stay those of the tree.
class MergeAutomaton {
 public:
  explicit MergeAutomaton(const PrefixTree& tree);

  const PrefixTree& tree() const { return *tree_; }
  std::size_t capacity() const { return live_.size(); }
  std::size_t live_count() const { return live_count_; }
  bool live(StateId q) const { return live_[static_cast<std::size_t>(q)] != 0; }
  StateId initial() const { return initial_; }
  bool accepting(StateId q) const { return tree_->accepting[static_cast<std::size_t>(q)]; }
  /// Features of a live state: those of the tree state with the same id.
  auto feature(StateId q) const { return tree_->features.row(q).transpose(); }

  const std::vector<StateId>& targets(StateId q, std::size_t token) const {
    return out_[static_cast<std::size_t>(q) * tree_->alphabet.size() + token];
  }

  /// Deletes `from`, reroutes its incoming edges to `into` and adds its
  /// outgoing edges to `into`. The survivor keeps its own label and
  /// features; the initial marker follows the merge. Throws InputError
  /// when either state is dead or they are the same state.
  void merge(StateId from, StateId into);

  /// Live states renumbered densely in increasing id order. If
  /// `numbering` is given it receives the new id of each tree state
  /// (kUndefined for deleted states).
  Nfa to_nfa(std::vector<StateId>* numbering = nullptr) const;

 private:
  void add_edge(StateId from, std::size_t token, StateId to);
  void remove_edge(StateId from, std::size_t token, StateId to);

  const PrefixTree* tree_;
  std::vector<char> live_;
  std::size_t live_count_;
  StateId initial_ = 0;
  std::vector<std::vector<StateId>> out_;                     // sorted targets per (state, token)
  std::vector<std::set<std::pair<StateId, std::size_t>>> in_;  // (source, token) per state
};

/// Consistency (equal labels) and similarity (cosine > 1 - kappa). Zero
/// feature vectors are never similar; a warning is logged.
bool should_merge(const MergeAutomaton& automaton, StateId a, StateId b, const MergePolicy& policy);

struct MergeOutcome {
  MergeAutomaton automaton;
  Nfa merged;                          // live states renumbered densely
  std::vector<StateId> tree_to_merged;  // survivor id in `merged` for every tree state
  std::size_t merges = 0;
};

/// Exhaustive merging in canonical order: candidates q_i run over states
/// from the deepest breadth-first id down, partners q_j over ids upward,
/// and the scan restarts after each merge until a pass merges nothing.
/// Because labels and features of survivors never change, this equals
/// merging each state into the smallest earlier state it is compatible
/// with, visited from the last state down; the partner search runs as a
/// data-parallel kernel.
MergeOutcome merge_all(const PrefixTree& tree, const MergePolicy& policy,
                       kernels::Execution exec = kernels::Execution::kParallel);

}  // namespace dfx
