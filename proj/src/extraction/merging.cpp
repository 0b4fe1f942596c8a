#include "dfx/extraction/merging.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <spdlog/spdlog.h>

#include "dfx/errors.hpp"

namespace dfx {

MergePolicy::MergePolicy(double kappa) : kappa_(kappa) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw InputError("kappa must lie in (0, 1), got " + std::to_string(kappa));
}

std::optional<double> cosine_similarity(const Eigen::Ref<const Eigen::VectorXd>& a,
                                        const Eigen::Ref<const Eigen::VectorXd>& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return std::nullopt;
  return a.dot(b) / (na * nb);
}

MergeAutomaton::MergeAutomaton(const PrefixTree& tree)
    : tree_(&tree),
      live_(tree.size(), 1),
      live_count_(tree.size()),
      out_(tree.size() * tree.alphabet.size()),
      in_(tree.size()) {
  for (std::size_t q = 0; q < tree.size(); ++q) {
    for (std::size_t t = 0; t < tree.alphabet.size(); ++t) {
      StateId child = tree.child(static_cast<StateId>(q), t);
      if (child != kUndefined) add_edge(static_cast<StateId>(q), t, child);
    }
  }
}

void MergeAutomaton::add_edge(StateId from, std::size_t token, StateId to) {
  auto& set = out_[static_cast<std::size_t>(from) * tree_->alphabet.size() + token];
  auto it = std::lower_bound(set.begin(), set.end(), to);
  if (it != set.end() && *it == to) return;
  set.insert(it, to);
  in_[static_cast<std::size_t>(to)].emplace(from, token);
}

void MergeAutomaton::remove_edge(StateId from, std::size_t token, StateId to) {
  auto& set = out_[static_cast<std::size_t>(from) * tree_->alphabet.size() + token];
  auto it = std::lower_bound(set.begin(), set.end(), to);
  if (it != set.end() && *it == to) set.erase(it);
  in_[static_cast<std::size_t>(to)].erase({from, token});
}

void MergeAutomaton::merge(StateId from, StateId into) {
  auto valid = [&](StateId q) { return q >= 0 && static_cast<std::size_t>(q) < live_.size() && live(q); };
  if (!valid(from) || !valid(into)) {
    throw InputError("cannot merge q" + std::to_string(from) + " into q" + std::to_string(into) +
                     ": state is not live");
  }
  if (from == into) throw InputError("cannot merge a state with itself");

  const std::size_t k = tree_->alphabet.size();
  std::vector<std::pair<std::size_t, StateId>> outgoing;
  for (std::size_t t = 0; t < k; ++t) {
    for (StateId to : targets(from, t)) outgoing.emplace_back(t, to);
  }
  const std::vector<std::pair<StateId, std::size_t>> incoming(in_[static_cast<std::size_t>(from)].begin(),
                                                              in_[static_cast<std::size_t>(from)].end());
  for (auto [t, to] : outgoing) remove_edge(from, t, to);
  for (auto [src, t] : incoming) remove_edge(src, t, from);

  for (auto [t, to] : outgoing) add_edge(into, t, to == from ? into : to);
  for (auto [src, t] : incoming) add_edge(src == from ? into : src, t, into);

  live_[static_cast<std::size_t>(from)] = 0;
  --live_count_;
  if (initial_ == from) initial_ = into;
}

Nfa MergeAutomaton::to_nfa(std::vector<StateId>* numbering) const {
  std::vector<StateId> rename(live_.size(), kUndefined);
  StateId next = 0;
  for (std::size_t q = 0; q < live_.size(); ++q) {
    if (live_[q]) rename[q] = next++;
  }
  Nfa nfa(tree_->alphabet, static_cast<std::size_t>(next), rename[static_cast<std::size_t>(initial_)]);
  for (std::size_t q = 0; q < live_.size(); ++q) {
    if (!live_[q]) continue;
    nfa.set_accepting(rename[q], tree_->accepting[q]);
    for (std::size_t t = 0; t < tree_->alphabet.size(); ++t) {
      for (StateId to : targets(static_cast<StateId>(q), t)) {
        nfa.add_transition(rename[q], t, rename[static_cast<std::size_t>(to)]);
      }
    }
  }
  if (numbering) *numbering = std::move(rename);
  return nfa;
}

bool should_merge(const MergeAutomaton& automaton, StateId a, StateId b, const MergePolicy& policy) {
  if (!automaton.live(a) || !automaton.live(b)) throw InputError("should_merge needs two live states");
  if (automaton.accepting(a) != automaton.accepting(b)) return false;
  auto cosine = cosine_similarity(automaton.feature(a), automaton.feature(b));
  if (!cosine) {
    spdlog::warn("zero feature vector on q{} or q{}; treated as dissimilar", a, b);
    return false;
  }
  return *cosine > policy.cosine_threshold();
}

MergeOutcome merge_all(const PrefixTree& tree, const MergePolicy& policy, kernels::Execution exec) {
  if (tree.features.rows() != static_cast<Eigen::Index>(tree.size())) {
    throw InputError("prefix tree has no feature vectors");
  }
  const Eigen::VectorXd norms = tree.features.rowwise().norm();
  if (auto zeros = (norms.array() == 0.0).count(); zeros > 0) {
    spdlog::warn("{} prefix-tree states have zero feature vectors and will not merge", zeros);
  }

  const auto partners = kernels::earliest_partners(tree.features, tree.accepting, policy.cosine_threshold(), exec);
  MergeAutomaton automaton(tree);
  std::size_t merges = 0;
  for (std::size_t q = tree.size(); q-- > 0;) {
    if (partners[q] == kUndefined) continue;
    automaton.merge(static_cast<StateId>(q), partners[q]);
    ++merges;
  }

  // Survivors form a forest pointing to smaller ids; follow it to the root.
  std::vector<StateId> survivor(tree.size());
  for (std::size_t q = 0; q < tree.size(); ++q) {
    survivor[q] = partners[q] == kUndefined ? static_cast<StateId>(q) : survivor[static_cast<std::size_t>(partners[q])];
  }
  std::vector<StateId> numbering;
  Nfa merged = automaton.to_nfa(&numbering);
  std::vector<StateId> tree_to_merged(tree.size());
  for (std::size_t q = 0; q < tree.size(); ++q) tree_to_merged[q] = numbering[static_cast<std::size_t>(survivor[q])];
  return {std::move(automaton), std::move(merged), std::move(tree_to_merged), merges};
}

}  // namespace dfx
