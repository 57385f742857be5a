#include "treelearn/automata.hpp"

#include <set>
#include <stdexcept>

#include "doctest.h"

using namespace treelearn;

namespace {

const Alphabet kAb("ab");

// 2-state DFA for "words ending in a": delta(.,a)=1, delta(.,b)=0, F={1}.
Dfa ends_in_a() {
  Dfa d;
  d.alphabet = kAb;
  d.initial = 0;
  d.delta = {1, 0, 1, 0};
  d.accepting = {false, true};
  return d;
}

// Brute-force oracle: shortest disagreement by enumerating all words in
// length-lexicographic order.
std::optional<Word> brute_force_counterexample(const Dfa& d1, const Dfa& d2,
                                               std::size_t max_len) {
  std::vector<Word> frontier{Word{}};
  for (std::size_t len = 0; len <= max_len; ++len) {
    for (const Word& w : frontier)
      if (accepts(d1, w) != accepts(d2, w)) return w;
    std::vector<Word> next;
    for (const Word& w : frontier)
      for (Symbol a = 0; a < d1.alphabet.size(); ++a) {
        Word ext = w;
        ext.push_back(a);
        next.push_back(std::move(ext));
      }
    frontier = std::move(next);
  }
  return std::nullopt;
}

bool same_language(const Dfa& d1, const Dfa& d2) {
  return !exact_counterexample(d1, d2).has_value();
}

}  // namespace

TEST_CASE("reach follows the transition table") {
  Dfa d = ends_in_a();
  CHECK(reach(d, {}) == d.initial);
  CHECK(reach(d, kAb.parse_word("aba")) == 1);
  CHECK(reach(d, kAb.parse_word("ab")) == 0);
  CHECK_THROWS_AS(reach(d, Word{7}), std::invalid_argument);
}

TEST_CASE("accepts checks final-state membership") {
  Dfa top = trivial_top(kAb);
  Dfa bottom = trivial_bottom(kAb);
  CHECK(accepts(top, kAb.parse_word("ab")));
  CHECK(accepts(top, {}));
  CHECK_FALSE(accepts(bottom, {}));
  CHECK_FALSE(accepts(bottom, kAb.parse_word("bbb")));
  CHECK(accepts(ends_in_a(), kAb.parse_word("aba")));
}

TEST_CASE("trivial automata have one state") {
  CHECK(trivial_top(kAb).num_states() == 1);
  CHECK(trivial_bottom(kAb).num_states() == 1);
  CHECK_THROWS_AS(trivial_top(Alphabet("")), std::invalid_argument);
}

TEST_CASE("minimize collapses equivalent states") {
  // A_top with a duplicated accepting state.
  Dfa dup;
  dup.alphabet = kAb;
  dup.initial = 0;
  dup.delta = {1, 1, 0, 0};
  dup.accepting = {true, true};
  CHECK(minimize(dup).num_states() == 1);

  Dfa m = minimize(ends_in_a());
  CHECK(m.num_states() == 2);
  CHECK(same_language(m, ends_in_a()));
}

TEST_CASE("minimize is idempotent and canonical") {
  Rng rng(11);
  for (int i = 0; i < 30; ++i) {
    Dfa d = random_dfa(8, kAb, rng);
    Dfa m1 = minimize(d);
    Dfa m2 = minimize(m1);
    CHECK(m1.delta == m2.delta);
    CHECK(m1.accepting == m2.accepting);
    CHECK(m1.initial == m2.initial);
    CHECK(same_language(d, m1));
  }
}

TEST_CASE("exact_counterexample basics") {
  CHECK_FALSE(exact_counterexample(trivial_top(kAb), trivial_top(kAb)));
  auto cex = exact_counterexample(trivial_top(kAb), trivial_bottom(kAb));
  REQUIRE(cex);
  CHECK(cex->empty());
  // A_top rejects nothing, "ends in a" rejects epsilon.
  auto cex2 = exact_counterexample(trivial_top(kAb), ends_in_a());
  REQUIRE(cex2);
  CHECK(cex2->empty());
  CHECK_THROWS_AS(exact_counterexample(trivial_top(kAb),
                                       trivial_top(Alphabet("xy"))),
                  std::invalid_argument);
}

TEST_CASE("exact_counterexample returns a shortest disagreement") {
  Rng rng(23);
  for (int i = 0; i < 60; ++i) {
    Dfa d1 = random_dfa(2 + rng.below(5), kAb, rng);
    Dfa d2 = random_dfa(2 + rng.below(5), kAb, rng);
    auto fast = exact_counterexample(d1, d2);
    auto slow = brute_force_counterexample(d1, d2, 12);
    if (!fast) {
      CHECK_FALSE(slow);
      continue;
    }
    REQUIRE(slow);
    CHECK(fast->size() == slow->size());
    CHECK(accepts(d1, *fast) != accepts(d2, *fast));
  }
}

TEST_CASE("random_dfa produces minimal automata of the requested size") {
  Rng rng(7);
  Dfa one = random_dfa(1, kAb, rng);
  CHECK(one.num_states() == 1);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng r(seed);
    Dfa d = random_dfa(40, kAb, r);
    CHECK(d.num_states() == 40);
    CHECK(minimize(d).num_states() == 40);
  }
}

TEST_CASE("random_dfa is deterministic in the seed") {
  Rng r1(42), r2(42);
  Dfa a = random_dfa(10, kAb, r1);
  Dfa b = random_dfa(10, kAb, r2);
  CHECK(a.delta == b.delta);
  CHECK(a.accepting == b.accepting);
}

TEST_CASE("mutations preserve completeness") {
  Rng rng(5);
  Dfa d = random_dfa(10, kAb, rng);
  for (Dfa m : {mutate_add_state(d, rng), mutate_remove_state(d, rng),
                mutate_divert_transition(d, rng),
                mutate_flip_acceptance(d, rng), apply_mutation_scenario(d, rng),
                apply_feature_add(d, rng)}) {
    CHECK(m.delta.size() == m.num_states() * kAb.size());
    CHECK_NOTHROW(validate(m));
  }
}

TEST_CASE("flip on a one-state DFA inverts the language") {
  Rng rng(3);
  Dfa flipped = mutate_flip_acceptance(trivial_top(kAb), rng);
  CHECK(same_language(flipped, trivial_bottom(kAb)));
}

TEST_CASE("remove_state rejects one-state automata and keeps the initial") {
  Rng rng(9);
  CHECK_THROWS_AS(mutate_remove_state(trivial_top(kAb), rng),
                  std::invalid_argument);
  Dfa d = random_dfa(6, kAb, rng);
  for (int i = 0; i < 20; ++i) {
    Dfa m = mutate_remove_state(d, rng);
    CHECK(m.num_states() == 5);
  }
}

TEST_CASE("removing a state never grows the minimal automaton") {
  Rng rng(17);
  for (int i = 0; i < 100; ++i) {
    Dfa d = random_dfa(10, kAb, rng);
    Dfa m = mutate_remove_state(d, rng);
    CHECK(minimize(m).num_states() <= minimize(d).num_states());
  }
}

TEST_CASE("mutation scenario keeps the raw state count and the seed") {
  Rng rng(31);
  Dfa d = random_dfa(20, kAb, rng);
  Rng r1(77), r2(77);
  Dfa m1 = apply_mutation_scenario(d, r1);
  Dfa m2 = apply_mutation_scenario(d, r2);
  CHECK(m1.num_states() == d.num_states());
  CHECK(m1.delta == m2.delta);
  CHECK(m1.accepting == m2.accepting);
}

TEST_CASE("mutation scenario usually changes the language") {
  int changed = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    Dfa d = random_dfa(20, kAb, rng);
    Dfa m = apply_mutation_scenario(d, rng);
    if (!same_language(d, m)) ++changed;
  }
  CHECK(changed >= 90);
}

TEST_CASE("feature-add grafts a reachable 3-state feature") {
  Rng rng(13);
  Dfa d = random_dfa(10, kAb, rng);
  Dfa f = apply_feature_add(d, rng);
  CHECK(f.num_states() == d.num_states() + 3);

  // Exactly three base transitions point at the feature start state, and
  // the feature start is reachable.
  const StateId feature_start = StateId(d.num_states());
  int diverted = 0;
  for (std::size_t q = 0; q < d.num_states(); ++q)
    for (Symbol a = 0; a < kAb.size(); ++a)
      if (f.next(StateId(q), a) == feature_start) ++diverted;
  CHECK(diverted == 3);

  std::set<StateId> seen{f.initial};
  std::vector<StateId> stack{f.initial};
  while (!stack.empty()) {
    StateId q = stack.back();
    stack.pop_back();
    for (Symbol a = 0; a < kAb.size(); ++a)
      if (seen.insert(f.next(q, a)).second) stack.push_back(f.next(q, a));
  }
  CHECK(seen.count(feature_start) == 1);
}

TEST_CASE("feature-add needs three transitions") {
  Rng rng(1);
  Dfa tiny = trivial_top(Alphabet("a"));  // one state, one transition
  CHECK_THROWS_AS(apply_feature_add(tiny, rng), std::invalid_argument);
}

TEST_CASE("DFA text format round-trips") {
  Rng rng(19);
  Dfa d = random_dfa(7, kAb, rng);
  Dfa back = dfa_from_text(to_text(d));
  CHECK(back.delta == d.delta);
  CHECK(back.accepting == d.accepting);
  CHECK(back.initial == d.initial);
  CHECK(back.alphabet == d.alphabet);
}

TEST_CASE("DFA text parser reports malformed input") {
  CHECK_THROWS_AS(dfa_from_text("alphabet: ab\nstates: 1\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(dfa_from_text("alphabet: ab\nstates: 1\ninitial: 0\n"
                                "accepting:\ntrans 0: 0 5\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(dfa_from_text("bogus"), std::invalid_argument);
}
