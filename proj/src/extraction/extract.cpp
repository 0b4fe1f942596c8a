#include "dfx/extraction/extract.hpp"

#include <spdlog/spdlog.h>

#include "dfx/automata/algorithms.hpp"

namespace dfx {

double tree_agreement(const PrefixTree& tree, const Dfa& dfa, std::size_t* disagreements) {
  // Walk tree and machine together; parents precede children in BFS order.
  std::vector<StateId> at(tree.size(), kUndefined);
  at[0] = dfa.initial();
  std::size_t misses = 0;
  for (std::size_t q = 0; q < tree.size(); ++q) {
    if (q > 0) {
      const auto parent = static_cast<std::size_t>(tree.parent[q]);
      at[q] = dfa.next(at[parent], tree.alphabet.require(tree.via[q]));
    }
    if (dfa.accepting(at[q]) != tree.accepting[q]) ++misses;
  }
  if (disagreements) *disagreements = misses;
  return 1.0 - static_cast<double>(misses) / static_cast<double>(tree.size());
}

ExtractionReport extract_from_tree(PrefixTree tree, const MergePolicy& policy, kernels::Execution exec) {
  ExtractionReport report;
  report.tree = std::move(tree);
  report.kappa = policy.kappa();
  report.trie_states = report.tree.size();

  auto outcome = merge_all(report.tree, policy, exec);
  report.merged = std::move(outcome.merged);
  report.merged_states = report.merged.size();
  report.determinized = determinize(report.merged);
  report.determinized_states = report.determinized.size();
  report.minimized = minimize(report.determinized);
  report.minimized_states = report.minimized.size();
  report.train_fidelity = tree_agreement(report.tree, report.minimized, &report.train_disagreements);
  if (report.train_disagreements > 0) {
    spdlog::warn("extracted machine disagrees with the recognizer on {} of {} training prefixes",
                 report.train_disagreements, report.tree.size());
  }
  return report;
}

ExtractionReport extract(const RnnModel& model, std::span<const std::string> strings, const MergePolicy& policy,
                         kernels::Execution exec) {
  auto report = extract_from_tree(build_prefix_tree(model, strings, exec), policy, exec);
  report.data_count = strings.size();
  return report;
}

}  // namespace dfx
