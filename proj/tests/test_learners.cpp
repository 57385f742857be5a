#include "treelearn/learners.hpp"

#include <stdexcept>

#include "doctest.h"

using namespace treelearn;

namespace {

const Alphabet kAb("ab");

Dfa ends_in_a() {
  Dfa d;
  d.alphabet = kAb;
  d.initial = 0;
  d.delta = {1, 0, 1, 0};
  d.accepting = {false, true};
  return d;
}

bool same_language(const Dfa& d1, const Dfa& d2) {
  return !exact_counterexample(d1, d2).has_value();
}

struct CountingEq : EquivalenceOracle {
  ExactEq inner;
  std::size_t calls = 0;
  explicit CountingEq(Dfa target) : inner(std::move(target)) {}
  std::optional<Word> check(const Dfa& hyp) override {
    ++calls;
    return inner.check(hyp);
  }
};

}  // namespace

TEST_CASE("buildHyp turns the two-leaf tree into the 2-state target") {
  ClassificationTree tree =
      ClassificationTree::seeded({}, {}, kAb.parse_word("a"));
  DfaOracle mq(ends_in_a());
  Hypothesis hyp = build_hypothesis(tree, mq, kAb);
  CHECK(hyp.dfa.num_states() == 2);
  CHECK(hyp.state_leaf.size() == 2);
  CHECK(same_language(hyp.dfa, ends_in_a()));
}

TEST_CASE("buildHyp on a single leaf yields the one-state hypothesis") {
  ClassificationTree tree = ClassificationTree::single_leaf({});
  DfaOracle mq(trivial_top(kAb));
  Hypothesis hyp = build_hypothesis(tree, mq, kAb);
  CHECK(hyp.dfa.num_states() == 1);
  CHECK(hyp.dfa.accepting[0]);
  // Sift on a single leaf is free; only the acceptance query is issued.
  CHECK(mq.queries_issued() == 1);
}

TEST_CASE("cached buildHyp never re-asks a sift or acceptance query") {
  ClassificationTree tree =
      ClassificationTree::seeded({}, {}, kAb.parse_word("a"));
  DfaOracle mq(ends_in_a());
  QueryCache cache;
  build_hypothesis(tree, mq, kAb, &cache);
  std::uint64_t first = mq.queries_issued();
  build_hypothesis(tree, mq, kAb, &cache);
  CHECK(mq.queries_issued() == first);
}

TEST_CASE("updateTree adds exactly one leaf per counterexample") {
  // Target: words with an even number of a's (2 states); start from the
  // tree whose hypothesis is A_bottom-ish single split.
  Dfa target;
  target.alphabet = kAb;
  target.initial = 0;
  target.delta = {1, 0, 0, 1};
  target.accepting = {true, false};

  DfaOracle mq(target);
  ClassificationTree tree = seed_tree(true, kAb.parse_word("a"));
  Hypothesis hyp = build_hypothesis(tree, mq, kAb);
  auto cex = exact_counterexample(hyp.dfa, target);
  if (cex) {
    ClassificationTree next = update_tree(tree, mq, hyp, *cex);
    CHECK(next.leaf_count() == tree.leaf_count() + 1);
  }
  // ε is not a counterexample here: the tree root classifier is ε.
  CHECK_THROWS_AS(update_tree(tree, mq, hyp, Word{}), std::logic_error);
}

TEST_CASE("updateTree rejects words that are not counterexamples") {
  DfaOracle mq(ends_in_a());
  ClassificationTree tree =
      ClassificationTree::seeded({}, {}, kAb.parse_word("a"));
  Hypothesis hyp = build_hypothesis(tree, mq, kAb);  // already exact
  CHECK_THROWS_AS(update_tree(tree, mq, hyp, kAb.parse_word("ab")),
                  std::logic_error);
}

TEST_CASE("classic learner nails a trivial target with one query") {
  DfaOracle mq(trivial_top(kAb));
  CountingEq eq(trivial_top(kAb));
  LearnResult res = classic_kv(kAb, mq, eq);
  CHECK(mq.queries_issued() == 1);  // just mq(ε)
  CHECK(eq.calls == 1);
  CHECK(res.hypothesis.num_states() == 1);
  CHECK(res.tree.is_leaf(res.tree.root()));
}

TEST_CASE("classic learner learns the 2-state example exactly") {
  DfaOracle mq(ends_in_a());
  CountingEq eq(ends_in_a());
  std::vector<RoundEvent> events;
  LearnResult res = classic_kv(
      kAb, mq, eq, [&](const RoundEvent& e, const Dfa&) { events.push_back(e); });
  CHECK(res.hypothesis.num_states() == 2);
  CHECK(same_language(res.hypothesis, ends_in_a()));
  CHECK(res.tree.leaf_count() == 2);

  REQUIRE(events.size() == 2);
  CHECK(events[0].round == 0);
  CHECK(events[0].hypothesis_states == 1);  // initial trivial hypothesis
  CHECK(events[1].hypothesis_states == 2);
  CHECK(events[1].queries > events[0].queries);
}

TEST_CASE("classic learner is exact on random targets with bounded rounds") {
  Rng rng(2024);
  for (int i = 0; i < 60; ++i) {
    Dfa target = random_dfa(10, kAb, rng);
    DfaOracle mq(target);
    CountingEq eq(target);
    LearnResult res = classic_kv(kAb, mq, eq);
    CHECK(same_language(res.hypothesis, target));
    CHECK(minimize(res.hypothesis).num_states() == 10);
    // Leaves only ever grow by one per counterexample, so the exact oracle
    // is consulted at most n+1 times.
    CHECK(eq.calls <= 11);
  }
}

TEST_CASE("incremental without a tree behaves exactly like classic") {
  Rng rng(55);
  for (int i = 0; i < 20; ++i) {
    Dfa target = random_dfa(8, kAb, rng);
    DfaOracle mq1(target), mq2(target);
    CountingEq eq1(target), eq2(target);
    LearnResult a = classic_kv(kAb, mq1, eq1);
    LearnResult b = incremental_kv(kAb, std::nullopt, mq2, eq2);
    CHECK(a.hypothesis.delta == b.hypothesis.delta);
    CHECK(a.hypothesis.accepting == b.hypothesis.accepting);
    CHECK(mq1.queries_issued() == mq2.queries_issued());
    CHECK(eq1.calls == eq2.calls);
  }
}

TEST_CASE("incremental reuse of a matching tree skips relearning") {
  Rng rng(300);
  Dfa target = random_dfa(20, kAb, rng);

  DfaOracle mq0(target);
  CountingEq eq0(target);
  LearnResult learned = classic_kv(kAb, mq0, eq0);
  std::uint64_t from_scratch = mq0.queries_issued();

  // Same target again: the old tree is already self-sifting, so the reuse
  // path pays only the re-validation queries.
  DfaOracle mq1(target);
  CountingEq eq1(target);
  LearnResult reused = incremental_kv(kAb, learned.tree, mq1, eq1);
  CHECK(same_language(reused.hypothesis, target));
  CHECK(eq1.calls == 2);  // trivial + the reused-tree hypothesis
  CHECK(mq1.queries_issued() < from_scratch / 2);
}

TEST_CASE("incremental reuse after a small mutation beats restarting") {
  Rng rng(301);
  std::uint64_t classic_total = 0, incremental_total = 0;
  for (int i = 0; i < 25; ++i) {
    Dfa t0 = random_dfa(20, kAb, rng);
    Dfa t1 = apply_mutation_scenario(t0, rng);

    DfaOracle mq_learn(t0);
    CountingEq eq_learn(t0);
    LearnResult first = classic_kv(kAb, mq_learn, eq_learn);

    DfaOracle mq_c(t1);
    CountingEq eq_c(t1);
    classic_kv(kAb, mq_c, eq_c);

    DfaOracle mq_i(t1);
    CountingEq eq_i(t1);
    LearnResult second = incremental_kv(kAb, first.tree, mq_i, eq_i);
    CHECK(same_language(second.hypothesis, t1));
    classic_total += mq_c.queries_issued();
    incremental_total += mq_i.queries_issued();
  }
  // On aggregate the reused tree saves membership queries, even with an
  // exact (shortest-counterexample) equivalence oracle.
  CHECK(incremental_total < classic_total);
}

TEST_CASE("pruning a stale tree down to one leaf still converges") {
  // Learn "ends in a", then retarget to "contains b": the "a" leaf no
  // longer sifts to itself and is pruned, leaving a single-leaf tree whose
  // hypothesis must be repaired from scratch.
  DfaOracle mq0(ends_in_a());
  CountingEq eq0(ends_in_a());
  LearnResult first = classic_kv(kAb, mq0, eq0);

  Dfa contains_b;
  contains_b.alphabet = kAb;
  contains_b.initial = 0;
  contains_b.delta = {0, 1, 1, 1};
  contains_b.accepting = {false, true};

  DfaOracle mq1(contains_b);
  CountingEq eq1(contains_b);
  std::vector<RoundEvent> events;
  LearnResult second = incremental_kv(
      kAb, first.tree, mq1, eq1,
      [&](const RoundEvent& e, const Dfa&) { events.push_back(e); });
  CHECK(same_language(second.hypothesis, contains_b));
  CHECK(second.hypothesis.num_states() == 2);
  // With a reused tree the first emission is the pruned-tree hypothesis,
  // not the throwaway trivial one.
  REQUIRE(!events.empty());
  CHECK(events.front().hypothesis_states == 1);
  CHECK(events.front().leaf_count == 1);
}

TEST_CASE("a fully matching trivial target short-circuits tree reuse") {
  DfaOracle mq0(ends_in_a());
  CountingEq eq0(ends_in_a());
  LearnResult first = classic_kv(kAb, mq0, eq0);

  DfaOracle mq1(trivial_top(kAb));
  CountingEq eq1(trivial_top(kAb));
  LearnResult second = incremental_kv(kAb, first.tree, mq1, eq1);
  CHECK(second.hypothesis.num_states() == 1);
  CHECK(second.hypothesis.accepting[0]);
  CHECK(eq1.calls == 1);
  CHECK(mq1.queries_issued() == 1);
}

TEST_CASE("observer sees monotone rounds and query counts") {
  Rng rng(88);
  Dfa target = random_dfa(12, kAb, rng);
  DfaOracle mq(target);
  CountingEq eq(target);
  std::vector<RoundEvent> events;
  classic_kv(kAb, mq, eq,
             [&](const RoundEvent& e, const Dfa& h) {
               CHECK(e.hypothesis_states == h.num_states());
               events.push_back(e);
             });
  for (std::size_t i = 1; i < events.size(); ++i) {
    CHECK(events[i].round == events[i - 1].round + 1);
    CHECK(events[i].queries >= events[i - 1].queries);
    CHECK(events[i].leaf_count == events[i - 1].leaf_count + 1);
  }
}
