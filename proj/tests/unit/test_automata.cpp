#include <map>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"

#include "../support.hpp"
#include "dfx/automata/algorithms.hpp"
#include "dfx/automata/io.hpp"
#include "dfx/errors.hpp"

using namespace dfx;
using dfx::testing::all_strings;
using dfx::testing::figure1_dfa;

namespace {

bool accepts_from(const Dfa& d, StateId q, const std::string& w) {
  for (char c : w) q = d.next(q, c);
  return d.accepting(q);
}

/// Moore-style refinement on the completed machine; returns the number of
/// live classes (classes from which an accepting state is reachable).
std::size_t moore_live_classes(const Dfa& d) {
  const auto reachable = canonicalize(d);
  const std::size_t n = reachable.size() + 1;  // last index: sink
  const auto sink = static_cast<int>(n - 1);
  auto step = [&](int q, std::size_t t) {
    if (q == sink) return sink;
    const auto r = reachable.next(q, t);
    return r == kUndefined ? sink : r;
  };
  std::vector<int> cls(n);
  for (std::size_t q = 0; q < n; ++q) cls[q] = (static_cast<int>(q) != sink && reachable.accepting(static_cast<int>(q))) ? 1 : 0;
  while (true) {
    std::map<std::vector<int>, int> ids;
    std::vector<int> next(n);
    for (std::size_t q = 0; q < n; ++q) {
      std::vector<int> sig{cls[q]};
      for (std::size_t t = 0; t < 2; ++t) sig.push_back(cls[static_cast<std::size_t>(step(static_cast<int>(q), t))]);
      next[q] = ids.emplace(sig, static_cast<int>(ids.size())).first->second;
    }
    const bool stable = std::set<int>(next.begin(), next.end()).size() == std::set<int>(cls.begin(), cls.end()).size();
    cls = next;
    if (stable) break;
  }
  // a class is dead iff it equals the sink's class
  std::set<int> live;
  for (std::size_t q = 0; q + 1 < n; ++q) {
    if (cls[q] != cls[static_cast<std::size_t>(sink)]) live.insert(cls[q]);
  }
  return std::max<std::size_t>(live.size(), 1);
}

}  // namespace

TEST_CASE("run follows the (ab)* machine and falls into the undefined state") {
  const auto d = figure1_dfa();
  CHECK(run(d, "ab").accepted);
  CHECK_FALSE(run(d, "aba").accepted);
  const auto trace = run(d, "abb");
  CHECK_FALSE(trace.accepted);
  CHECK(trace.states == std::vector<StateId>{0, 1, 0, kUndefined});
  CHECK_THROWS_AS(run(d, "ac"), InputError);
}

TEST_CASE("prefix decisions") {
  const auto d = figure1_dfa();
  CHECK(prefix_decisions(d, "ab") == std::vector<bool>{true, false, true});
  CHECK(prefix_decisions(d, "") == std::vector<bool>{true});
  CHECK(prefix_decisions(d, "bb") == std::vector<bool>{true, false, false});
}

TEST_CASE("undefined state is absorbing in every trace") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto d = dfx::testing::random_dfa(rng, 5, 0.4);
    for (const auto& w : all_strings(d.alphabet(), 6)) {
      const auto trace = run(d, w);
      REQUIRE(trace.states.size() == w.size() + 1);
      CHECK(trace.states[0] == d.initial());
      bool fell = false;
      for (auto s : trace.states) {
        if (fell) CHECK(s == kUndefined);
        fell = fell || s == kUndefined;
      }
      if (fell) CHECK_FALSE(trace.accepted);
    }
  }
}

TEST_CASE("determinize examples") {
  SUBCASE("deterministic input keeps its language and reachable size") {
    const auto d = figure1_dfa();
    const auto out = determinize(Nfa(d));
    CHECK(out.size() == 2);
    CHECK(equivalent(out, d));
  }
  SUBCASE("q0 -a-> {q1, q2} with only q2 accepting accepts exactly a") {
    Nfa n(binary_alphabet(), 3, 0);
    n.add_transition(0, 'a', 1);
    n.add_transition(0, 'a', 2);
    n.set_accepting(2);
    const auto out = determinize(n);
    CHECK(out.size() == 2);
    for (const auto& w : all_strings(binary_alphabet(), 3)) CHECK(accepts(out, w) == (w == "a"));
  }
  SUBCASE("no accepting states accepts nothing") {
    Nfa n(binary_alphabet(), 2, 0);
    n.add_transition(0, 'a', 1);
    n.add_transition(1, 'b', 0);
    const auto out = determinize(n);
    for (const auto& w : all_strings(binary_alphabet(), 6)) CHECK_FALSE(accepts(out, w));
  }
}

TEST_CASE("determinize agrees with path-existence acceptance on 200 random NFAs") {
  std::mt19937_64 rng(11);
  const auto strings = all_strings(binary_alphabet(), 10);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = dfx::testing::random_nfa(rng, 1 + trial % 6);
    const auto d = determinize(n);
    for (const auto& w : strings) REQUIRE(accepts(d, w) == accepts(n, w));
  }
}

TEST_CASE("minimize on 200 random DFAs: language, minimality witness, idempotence, Moore cross-check") {
  std::mt19937_64 rng(13);
  const auto strings = all_strings(binary_alphabet(), 12);
  for (int trial = 0; trial < 200; ++trial) {
    const auto d = dfx::testing::random_dfa(rng, 2 + trial % 8);
    const auto m = minimize(d);
    for (const auto& w : strings) REQUIRE(accepts(m, w) == accepts(d, w));

    // every pair of states is separated by a string of length <= |Q|
    const auto witnesses = all_strings(binary_alphabet(), m.size());
    for (std::size_t p = 0; p < m.size(); ++p) {
      for (std::size_t q = p + 1; q < m.size(); ++q) {
        bool separated = false;
        for (const auto& w : witnesses) {
          if (accepts_from(m, static_cast<StateId>(p), w) != accepts_from(m, static_cast<StateId>(q), w)) {
            separated = true;
            break;
          }
        }
        REQUIRE(separated);
      }
    }
    CHECK(isomorphic(minimize(m), m));
    CHECK(m.size() == moore_live_classes(d));
  }
}

TEST_CASE("minimize small examples") {
  CHECK(isomorphic(minimize(figure1_dfa()), figure1_dfa()));

  SUBCASE("empty language is one rejecting state") {
    Dfa d(binary_alphabet(), 3, 0);
    d.set_transition(0, 'a', 1);
    d.set_transition(1, 'b', 2);
    const auto m = minimize(d);
    CHECK(m.size() == 1);
    CHECK_FALSE(m.accepting(0));
    CHECK(m.transition_count() == 0);
  }
  SUBCASE("explicit dead state is folded away") {
    auto d = figure1_dfa();
    const auto dead = d.add_state(false);
    d.set_transition(0, 'b', dead);
    d.set_transition(1, 'a', dead);
    d.set_transition(dead, 'a', dead);
    d.set_transition(dead, 'b', dead);
    CHECK(minimize(d).size() == 2);
  }
  SUBCASE("an unrolled (ab)* machine collapses to two states") {
    // 11 states alternating a/b, the last looping back
    Dfa d(binary_alphabet(), 11, 0);
    for (int q = 0; q < 11; ++q) {
      d.set_accepting(q, q % 2 == 0);
      if (q < 10) d.set_transition(q, q % 2 == 0 ? 'a' : 'b', q + 1);
    }
    d.set_transition(10, 'a', 1);
    const auto m = minimize(d);
    CHECK(m.size() == 2);
    CHECK(equivalent(m, figure1_dfa()));
  }
}

TEST_CASE("equivalence and counterexamples") {
  const auto a = figure1_dfa();
  CHECK(equivalent(a, a));
  Dfa star_a(binary_alphabet(), 1, 0);
  star_a.set_accepting(0);
  star_a.set_transition(0, 'a', 0);
  CHECK_FALSE(equivalent(star_a, a));
  CHECK(distinguishing_string(star_a, a) == std::optional<std::string>("a"));
  CHECK_FALSE(distinguishing_string(a, a).has_value());
  CHECK_THROWS_AS(equivalent(a, Dfa(Alphabet("xy"), 1, 0)), InputError);

  std::mt19937_64 rng(17);
  const auto strings = all_strings(binary_alphabet(), 10);
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = dfx::testing::random_dfa(rng, 4);
    const auto y = dfx::testing::random_dfa(rng, 4);
    const auto witness = distinguishing_string(x, y);
    bool differ = false;
    for (const auto& w : strings) differ = differ || accepts(x, w) != accepts(y, w);
    if (witness) {
      CHECK(accepts(x, *witness) != accepts(y, *witness));
    } else {
      CHECK_FALSE(differ);
    }
  }
}

TEST_CASE("canonicalize drops unreachable states and renumbers breadth-first") {
  Dfa d(binary_alphabet(), 4, 2);
  d.set_transition(2, 'b', 0);
  d.set_transition(0, 'a', 2);
  d.set_accepting(0);
  const auto c = canonicalize(d);
  CHECK(c.size() == 2);
  CHECK(c.initial() == 0);
  CHECK(c.next(0, 'b') == 1);
  CHECK(c.accepting(1));
  CHECK(isomorphic(c, d));
}

TEST_CASE("text format round trip") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = dfx::testing::random_dfa(rng, 6);
    CHECK(parse_dfa(to_text(d)) == d);
    const auto n = dfx::testing::random_nfa(rng, 4);
    std::istringstream is(to_text(n));
    const auto back = read_automaton(is);
    REQUIRE(std::holds_alternative<Nfa>(back));
    CHECK(std::get<Nfa>(back) == n);
  }
  CHECK_THROWS_AS(parse_dfa("dfx-automaton 9\n"), FormatError);
  CHECK_THROWS_AS(parse_dfa("garbage"), FormatError);
}

TEST_CASE("DOT export") {
  const auto dot = to_dot(figure1_dfa(), "fig1");
  auto count = [&](const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = dot.find(needle); pos != std::string::npos; pos = dot.find(needle, pos + 1)) ++n;
    return n;
  };
  CHECK(count("label=\"q") == 2);
  CHECK(count("label=\"a\"") + count("label=\"b\"") == 2);
  CHECK(count("doublecircle") == 1);
  CHECK(dot == to_dot(figure1_dfa(), "fig1"));

  Dfa single(binary_alphabet(), 1, 0);
  single.set_accepting(0);
  const auto one = to_dot(single);
  CHECK(one.find("doublecircle") != std::string::npos);
  CHECK(one.find("label=\"q1\"") == std::string::npos);
}
