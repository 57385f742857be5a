#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "treelearn/automata.hpp"
#include "treelearn/rng.hpp"

namespace treelearn {

/// Counts answered membership queries; may be shared between oracles so a
/// single budget spans several learning phases.
class QueryCounter {
 public:
  std::uint64_t value() const { return total_; }
  void increment() { ++total_; }
  /// Moves the counter forward to v; never backwards.
  void advance_to(std::uint64_t v) {
    if (v > total_) total_ = v;
  }

 private:
  std::uint64_t total_ = 0;
};

class MembershipOracle {
 public:
  virtual ~MembershipOracle() = default;
  /// Answers one membership query; increments the counter exactly once.
  virtual bool query(const Word& w) = 0;
  virtual std::uint64_t queries_issued() const = 0;
};

/// Membership oracle backed by a fixed DFA.
class DfaOracle final : public MembershipOracle {
 public:
  explicit DfaOracle(Dfa target)
      : DfaOracle(std::move(target), std::make_shared<QueryCounter>()) {}
  DfaOracle(Dfa target, std::shared_ptr<QueryCounter> counter)
      : target_(std::move(target)), counter_(std::move(counter)) {}

  bool query(const Word& w) override {
    bool answer = accepts(target_, w);
    counter_->increment();
    return answer;
  }
  std::uint64_t queries_issued() const override { return counter_->value(); }
  const Dfa& target() const { return target_; }
  const std::shared_ptr<QueryCounter>& counter() const { return counter_; }

 private:
  Dfa target_;
  std::shared_ptr<QueryCounter> counter_;
};

/// Membership oracle over a schedule of targets switched by cumulative
/// query count: query number i (1-based) is answered by targets[k] where
/// k = number of switch points strictly below i.
class EvolvingOracle final : public MembershipOracle {
 public:
  EvolvingOracle(std::vector<Dfa> targets,
                 std::vector<std::uint64_t> switch_points)
      : EvolvingOracle(std::move(targets), std::move(switch_points),
                       std::make_shared<QueryCounter>()) {}
  EvolvingOracle(std::vector<Dfa> targets,
                 std::vector<std::uint64_t> switch_points,
                 std::shared_ptr<QueryCounter> counter);

  bool query(const Word& w) override;
  std::uint64_t queries_issued() const override { return counter_->value(); }

  /// Target that will answer the next query.
  const Dfa& current() const { return targets_[current_index()]; }
  std::size_t current_index() const;
  const std::shared_ptr<QueryCounter>& counter() const { return counter_; }

 private:
  std::vector<Dfa> targets_;
  std::vector<std::uint64_t> switch_points_;
  std::shared_ptr<QueryCounter> counter_;
};

class EquivalenceOracle {
 public:
  virtual ~EquivalenceOracle() = default;
  /// Returns a counterexample word, or nullopt when none was found.
  virtual std::optional<Word> check(const Dfa& hypothesis) = 0;
};

struct EqConfig {
  std::uint64_t max_attempts = 8000;
  double expected_length = 10.0;  // mean of the geometric length draw
  std::uint64_t seed = 0;
};

/// Random-word equivalence testing: draws words with geometric length and
/// uniform symbols, each costing one membership query. Sound but
/// incomplete; a nullopt answer does not certify equivalence.
class RandomWordEq final : public EquivalenceOracle {
 public:
  RandomWordEq(MembershipOracle& mq, const EqConfig& cfg)
      : mq_(mq), cfg_(cfg), rng_(cfg.seed) {}

  std::optional<Word> check(const Dfa& hypothesis) override;

 private:
  MembershipOracle& mq_;
  EqConfig cfg_;
  Rng rng_;
};

/// Perfect equivalence oracle for tests and out-of-band certification;
/// issues no membership queries.
class ExactEq final : public EquivalenceOracle {
 public:
  explicit ExactEq(Dfa target) : target_(std::move(target)) {}
  std::optional<Word> check(const Dfa& hypothesis) override {
    return exact_counterexample(hypothesis, target_);
  }

 private:
  Dfa target_;
};

}  // namespace treelearn
