#include "dfx/automata/algorithms.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

#include "dfx/errors.hpp"

namespace dfx {

namespace {

/// Dense total transition table over states [0, n]; index n is the sink
/// standing in for the undefined state.
struct CompleteTable {
  std::size_t states = 0;  // including sink
  std::size_t tokens = 0;
  std::vector<std::size_t> delta;
  std::vector<bool> accepting;

  std::size_t next(std::size_t q, std::size_t t) const { return delta[q * tokens + t]; }
};

CompleteTable complete(const Dfa& dfa) {
  CompleteTable table;
  const std::size_t n = dfa.size();
  table.states = n + 1;
  table.tokens = dfa.alphabet().size();
  table.delta.assign(table.states * table.tokens, n);
  table.accepting.assign(table.states, false);
  for (std::size_t q = 0; q < n; ++q) {
    table.accepting[q] = dfa.accepting(static_cast<StateId>(q));
    for (std::size_t t = 0; t < table.tokens; ++t) {
      StateId to = dfa.next(static_cast<StateId>(q), t);
      if (to != kUndefined) table.delta[q * table.tokens + t] = static_cast<std::size_t>(to);
    }
  }
  return table;
}

/// Hopcroft's algorithm on a complete table. Returns the block index of
/// every state.
std::vector<std::size_t> hopcroft_blocks(const CompleteTable& table) {
  const std::size_t n = table.states;
  const std::size_t k = table.tokens;

  // inverse[t][q] = predecessors of q on token t
  std::vector<std::vector<std::vector<std::size_t>>> inverse(k, std::vector<std::vector<std::size_t>>(n));
  for (std::size_t q = 0; q < n; ++q) {
    for (std::size_t t = 0; t < k; ++t) inverse[t][table.next(q, t)].push_back(q);
  }

  std::vector<std::vector<std::size_t>> blocks;
  std::vector<std::size_t> block_of(n);
  {
    std::vector<std::size_t> acc, rej;
    for (std::size_t q = 0; q < n; ++q) (table.accepting[q] ? acc : rej).push_back(q);
    for (auto* part : {&acc, &rej}) {
      if (part->empty()) continue;
      for (auto q : *part) block_of[q] = blocks.size();
      blocks.push_back(std::move(*part));
    }
  }

  std::deque<std::size_t> worklist;
  std::vector<bool> in_worklist(blocks.size(), false);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    worklist.push_back(b);
    in_worklist[b] = true;
  }

  std::vector<char> marked(n, 0);
  std::vector<std::size_t> marked_count;
  std::vector<std::size_t> touched;

  while (!worklist.empty()) {
    std::size_t splitter = worklist.front();
    worklist.pop_front();
    in_worklist[splitter] = false;
    const std::vector<std::size_t> members = blocks[splitter];

    for (std::size_t t = 0; t < k; ++t) {
      marked_count.assign(blocks.size(), 0);
      touched.clear();
      for (auto target : members) {
        for (auto pred : inverse[t][target]) {
          if (marked[pred]) continue;
          marked[pred] = 1;
          auto b = block_of[pred];
          if (marked_count[b]++ == 0) touched.push_back(b);
        }
      }
      for (auto b : touched) {
        if (marked_count[b] == blocks[b].size()) continue;
        std::vector<std::size_t> inside, outside;
        for (auto q : blocks[b]) (marked[q] ? inside : outside).push_back(q);
        std::size_t fresh = blocks.size();
        // keep the larger half in place
        if (inside.size() > outside.size()) std::swap(inside, outside);
        blocks[b] = std::move(outside);
        for (auto q : inside) block_of[q] = fresh;
        blocks.push_back(std::move(inside));
        // If b is already queued both halves now are; otherwise queuing
        // the smaller half suffices.
        in_worklist.push_back(true);
        worklist.push_back(fresh);
      }
      for (auto target : members) {
        for (auto pred : inverse[t][target]) marked[pred] = 0;
      }
    }
  }
  return block_of;
}

}  // namespace

Dfa determinize(const Nfa& nfa) {
  const auto& alphabet = nfa.alphabet();
  std::map<std::vector<StateId>, StateId> index;
  std::vector<std::vector<StateId>> subsets;

  std::vector<StateId> start{nfa.initial()};
  index.emplace(start, 0);
  subsets.push_back(start);

  Dfa out(alphabet, 1, 0);
  std::vector<char> seen(nfa.size(), 0);
  for (std::size_t cursor = 0; cursor < subsets.size(); ++cursor) {
    const auto current = subsets[cursor];
    bool accepting = std::any_of(current.begin(), current.end(), [&](StateId q) { return nfa.accepting(q); });
    out.set_accepting(static_cast<StateId>(cursor), accepting);
    for (std::size_t t = 0; t < alphabet.size(); ++t) {
      std::vector<StateId> successor;
      for (StateId q : current) {
        for (StateId to : nfa.targets(q, t)) {
          if (!seen[static_cast<std::size_t>(to)]) {
            seen[static_cast<std::size_t>(to)] = 1;
            successor.push_back(to);
          }
        }
      }
      for (StateId q : successor) seen[static_cast<std::size_t>(q)] = 0;
      if (successor.empty()) continue;
      std::sort(successor.begin(), successor.end());
      auto [it, inserted] = index.emplace(successor, static_cast<StateId>(subsets.size()));
      if (inserted) {
        subsets.push_back(successor);
        out.add_state();
      }
      out.set_transition(static_cast<StateId>(cursor), t, it->second);
    }
  }
  return out;
}

Dfa canonicalize(const Dfa& dfa) {
  std::vector<StateId> order;
  std::vector<StateId> rename(dfa.size(), kUndefined);
  order.push_back(dfa.initial());
  rename[static_cast<std::size_t>(dfa.initial())] = 0;
  for (std::size_t cursor = 0; cursor < order.size(); ++cursor) {
    for (std::size_t t = 0; t < dfa.alphabet().size(); ++t) {
      StateId to = dfa.next(order[cursor], t);
      if (to == kUndefined || rename[static_cast<std::size_t>(to)] != kUndefined) continue;
      rename[static_cast<std::size_t>(to)] = static_cast<StateId>(order.size());
      order.push_back(to);
    }
  }
  Dfa out(dfa.alphabet(), order.size(), 0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto state = static_cast<StateId>(i);
    out.set_accepting(state, dfa.accepting(order[i]));
    for (std::size_t t = 0; t < dfa.alphabet().size(); ++t) {
      StateId to = dfa.next(order[i], t);
      if (to != kUndefined) out.set_transition(state, t, rename[static_cast<std::size_t>(to)]);
    }
  }
  return out;
}

Dfa minimize(const Dfa& dfa) {
  const Dfa reachable = canonicalize(dfa);
  const CompleteTable table = complete(reachable);
  const auto block_of = hopcroft_blocks(table);
  const std::size_t sink = table.states - 1;

  const std::size_t num_blocks = *std::max_element(block_of.begin(), block_of.end()) + 1;
  // The sink's block is exactly the set of states with an empty residual
  // language; it becomes the undefined state.
  const std::size_t dead = block_of[sink];
  const std::size_t initial_block = block_of[static_cast<std::size_t>(reachable.initial())];
  if (initial_block == dead) return Dfa(dfa.alphabet(), 1, 0);

  std::vector<StateId> block_state(num_blocks, kUndefined);
  StateId next_id = 0;
  for (std::size_t b = 0; b < num_blocks; ++b) {
    if (b != dead) block_state[b] = next_id++;
  }
  std::vector<std::size_t> representative(num_blocks, sink);
  for (std::size_t q = 0; q < sink; ++q) {
    if (representative[block_of[q]] == sink) representative[block_of[q]] = q;
  }

  Dfa quotient(dfa.alphabet(), static_cast<std::size_t>(next_id), block_state[initial_block]);
  for (std::size_t b = 0; b < num_blocks; ++b) {
    if (b == dead) continue;
    std::size_t rep = representative[b];
    quotient.set_accepting(block_state[b], table.accepting[rep]);
    for (std::size_t t = 0; t < table.tokens; ++t) {
      std::size_t to_block = block_of[table.next(rep, t)];
      quotient.set_transition(block_state[b], t, to_block == dead ? kUndefined : block_state[to_block]);
    }
  }
  return canonicalize(quotient);
}

std::optional<std::string> distinguishing_string(const Dfa& a, const Dfa& b) {
  if (!(a.alphabet() == b.alphabet())) {
    throw InputError("cannot compare automata over different alphabets {" + a.alphabet().symbols() + "} and {" +
                     b.alphabet().symbols() + "}");
  }
  const std::size_t na = a.size() + 1;
  const std::size_t nb = b.size() + 1;
  auto encode = [&](StateId p, StateId q) {
    std::size_t i = p == kUndefined ? a.size() : static_cast<std::size_t>(p);
    std::size_t j = q == kUndefined ? b.size() : static_cast<std::size_t>(q);
    return i * nb + j;
  };
  struct Visit {
    StateId p, q;
    std::size_t parent;
    char token;
  };
  std::vector<char> visited(na * nb, 0);
  std::vector<Visit> queue;
  queue.push_back({a.initial(), b.initial(), 0, 0});
  visited[encode(a.initial(), b.initial())] = 1;
  for (std::size_t cursor = 0; cursor < queue.size(); ++cursor) {
    const auto [p, q, parent, token] = queue[cursor];
    if (a.accepting(p) != b.accepting(q)) {
      std::string witness;
      for (std::size_t at = cursor; at != 0; at = queue[at].parent) witness.push_back(queue[at].token);
      std::reverse(witness.begin(), witness.end());
      return witness;
    }
    for (std::size_t t = 0; t < a.alphabet().size(); ++t) {
      StateId np = a.next(p, t), nq = b.next(q, t);
      if (np == kUndefined && nq == kUndefined) continue;
      auto key = encode(np, nq);
      if (visited[key]) continue;
      visited[key] = 1;
      queue.push_back({np, nq, cursor, a.alphabet().symbol(t)});
    }
  }
  return std::nullopt;
}

bool equivalent(const Dfa& a, const Dfa& b) { return !distinguishing_string(a, b).has_value(); }

bool isomorphic(const Dfa& a, const Dfa& b) {
  if (!(a.alphabet() == b.alphabet())) return false;
  return canonicalize(a) == canonicalize(b);
}

}  // namespace dfx
