#include "dfx/extraction/prefix_tree.hpp"

#include <algorithm>

#include "dfx/errors.hpp"

namespace dfx {

std::string PrefixTree::prefix(StateId q) const {
  std::string out;
  for (StateId at = q; parent[static_cast<std::size_t>(at)] != kUndefined; at = parent[static_cast<std::size_t>(at)]) {
    out.push_back(via[static_cast<std::size_t>(at)]);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

StateId PrefixTree::find(std::string_view w) const {
  StateId q = 0;
  for (char c : w) {
    auto token = alphabet.index_of(c);
    if (!token) return kUndefined;
    q = child(q, *token);
    if (q == kUndefined) return kUndefined;
  }
  return q;
}

Dfa PrefixTree::as_dfa() const {
  Dfa dfa(alphabet, size(), 0);
  for (std::size_t q = 0; q < size(); ++q) {
    auto state = static_cast<StateId>(q);
    dfa.set_accepting(state, accepting[q]);
    for (std::size_t t = 0; t < alphabet.size(); ++t) dfa.set_transition(state, t, child(state, t));
  }
  return dfa;
}

PrefixTree PrefixTree::from_strings(const Alphabet& alphabet, std::span<const std::string> strings) {
  const std::size_t k = alphabet.size();
  // insertion-order trie first, renumbered breadth-first afterwards
  std::vector<StateId> raw_children(k, kUndefined);
  std::size_t raw_size = 1;
  for (const auto& w : strings) {
    std::size_t q = 0;
    for (char c : w) {
      const auto t = alphabet.require(c);
      StateId& slot = raw_children[q * k + t];
      if (slot == kUndefined) {
        slot = static_cast<StateId>(raw_size++);
        raw_children.resize(raw_size * k, kUndefined);
      }
      q = static_cast<std::size_t>(raw_children[q * k + t]);
    }
  }

  PrefixTree tree;
  tree.alphabet = alphabet;
  tree.parent.assign(raw_size, kUndefined);
  tree.via.assign(raw_size, '\0');
  tree.depth.assign(raw_size, 0);
  tree.children.assign(raw_size * k, kUndefined);
  tree.accepting.assign(raw_size, false);

  std::vector<std::size_t> order{0};  // raw ids in BFS order
  std::vector<StateId> rename(raw_size, kUndefined);
  rename[0] = 0;
  for (std::size_t cursor = 0; cursor < order.size(); ++cursor) {
    const std::size_t raw = order[cursor];
    const auto id = static_cast<std::size_t>(rename[raw]);
    for (std::size_t t = 0; t < k; ++t) {
      StateId raw_child = raw_children[raw * k + t];
      if (raw_child == kUndefined) continue;
      const auto child_id = static_cast<StateId>(order.size());
      rename[static_cast<std::size_t>(raw_child)] = child_id;
      order.push_back(static_cast<std::size_t>(raw_child));
      tree.children[id * k + t] = child_id;
      tree.parent[static_cast<std::size_t>(child_id)] = static_cast<StateId>(id);
      tree.via[static_cast<std::size_t>(child_id)] = alphabet.symbol(t);
      tree.depth[static_cast<std::size_t>(child_id)] = tree.depth[id] + 1;
    }
  }
  return tree;
}

PrefixTree build_prefix_tree(const RnnModel& model, std::span<const std::string> strings, kernels::Execution exec) {
  if (strings.empty()) throw InputError("build_prefix_tree needs at least one string");
  PrefixTree tree = PrefixTree::from_strings(model.alphabet(), strings);
  tree.features.resize(static_cast<Eigen::Index>(tree.size()), model.hidden_dim());

  const auto results = kernels::forward_all(model, strings, exec);
  std::vector<char> filled(tree.size(), 0);
  for (std::size_t s = 0; s < strings.size(); ++s) {
    const auto& r = results[s];
    StateId q = 0;
    for (std::size_t i = 0; i <= strings[s].size(); ++i) {
      if (i > 0) q = tree.child(q, model.alphabet().require(strings[s][i - 1]));
      const auto slot = static_cast<std::size_t>(q);
      if (filled[slot]) continue;
      filled[slot] = 1;
      const auto row = static_cast<Eigen::Index>(i);
      tree.features.row(q) = r.hidden.row(row);
      tree.accepting[slot] = r.logits(row, 1) > r.logits(row, 0);
    }
  }
  return tree;
}

}  // namespace dfx
