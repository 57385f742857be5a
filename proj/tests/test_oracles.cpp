#include "treelearn/oracles.hpp"

#include <stdexcept>

#include "doctest.h"

using namespace treelearn;

namespace {
const Alphabet kAb("ab");
}

TEST_CASE("membership queries are counted one by one") {
  DfaOracle mq(trivial_top(kAb));
  CHECK(mq.queries_issued() == 0);
  CHECK(mq.query({}));
  CHECK(mq.queries_issued() == 1);
  mq.query(kAb.parse_word("ab"));
  CHECK(mq.queries_issued() == 2);
}

TEST_CASE("evolving oracle switches by cumulative query count") {
  EvolvingOracle mq({trivial_bottom(kAb), trivial_top(kAb)}, {2});
  CHECK_FALSE(mq.query({}));                   // query 1: t0
  CHECK_FALSE(mq.query(kAb.parse_word("a")));  // query 2: t0
  CHECK(mq.query({}));                         // query 3: t1
  CHECK(mq.query(kAb.parse_word("a")));
  CHECK(mq.current_index() == 1);
  CHECK(mq.queries_issued() == 4);
}

TEST_CASE("the same word may answer differently across a switch") {
  EvolvingOracle mq({trivial_bottom(kAb), trivial_top(kAb)}, {1});
  CHECK_FALSE(mq.query({}));
  CHECK(mq.query({}));
}

TEST_CASE("evolving oracle validates its schedule") {
  CHECK_THROWS_AS(EvolvingOracle({}, {}), std::invalid_argument);
  CHECK_THROWS_AS(EvolvingOracle({trivial_top(kAb), trivial_bottom(kAb)}, {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(EvolvingOracle({trivial_top(kAb), trivial_bottom(kAb),
                                  trivial_top(kAb)},
                                 {5, 5}),
                  std::invalid_argument);
}

TEST_CASE("per-query target partition matches the switch points") {
  // Log which target answered each query and compare with the schedule.
  Dfa ends_in_a;
  ends_in_a.alphabet = kAb;
  ends_in_a.initial = 0;
  ends_in_a.delta = {1, 0, 1, 0};
  ends_in_a.accepting = {false, true};

  EvolvingOracle mq({trivial_bottom(kAb), ends_in_a, trivial_top(kAb)},
                    {3, 5});
  Word probe = kAb.parse_word("a");
  std::vector<bool> answers;
  for (int i = 0; i < 8; ++i) answers.push_back(mq.query(probe));
  CHECK(answers == std::vector<bool>{false, false, false, true, true, true,
                                     true, true});
}

TEST_CASE("eq_random finds no counterexample for a correct hypothesis") {
  DfaOracle mq(trivial_top(kAb));
  EqConfig cfg;
  cfg.max_attempts = 50;
  cfg.seed = 3;
  RandomWordEq eq(mq, cfg);
  CHECK_FALSE(eq.check(trivial_top(kAb)));
  // Every tested word costs exactly one membership query.
  CHECK(mq.queries_issued() == 50);
}

TEST_CASE("eq_random counterexamples are genuine") {
  Dfa target = trivial_top(kAb);
  DfaOracle mq(target);
  EqConfig cfg;
  cfg.seed = 9;
  RandomWordEq eq(mq, cfg);
  auto cex = eq.check(trivial_bottom(kAb));
  REQUIRE(cex);
  CHECK(accepts(target, *cex) != accepts(trivial_bottom(kAb), *cex));

  Rng rng(77);
  for (int i = 0; i < 20; ++i) {
    Dfa t = random_dfa(5, kAb, rng);
    Dfa h = random_dfa(5, kAb, rng);
    DfaOracle m(t);
    EqConfig c;
    c.seed = rng.next();
    RandomWordEq e(m, c);
    auto w = e.check(h);
    if (w) CHECK(accepts(h, *w) != accepts(t, *w));
  }
}

TEST_CASE("exact equivalence oracle issues no membership queries") {
  ExactEq eq(trivial_top(kAb));
  CHECK_FALSE(eq.check(trivial_top(kAb)));
  auto cex = eq.check(trivial_bottom(kAb));
  REQUIRE(cex);
  CHECK(cex->empty());
}

TEST_CASE("shared counter spans oracles") {
  auto counter = std::make_shared<QueryCounter>();
  DfaOracle a(trivial_top(kAb), counter);
  DfaOracle b(trivial_bottom(kAb), counter);
  a.query({});
  b.query({});
  CHECK(counter->value() == 2);
  counter->advance_to(10);
  CHECK(counter->value() == 10);
  counter->advance_to(5);  // never backwards
  CHECK(counter->value() == 10);
}
