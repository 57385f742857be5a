#include "treelearn/oracles.hpp"

#include <stdexcept>

namespace treelearn {

EvolvingOracle::EvolvingOracle(std::vector<Dfa> targets,
                               std::vector<std::uint64_t> switch_points,
                               std::shared_ptr<QueryCounter> counter)
    : targets_(std::move(targets)),
      switch_points_(std::move(switch_points)),
      counter_(std::move(counter)) {
  if (targets_.empty())
    throw std::invalid_argument("evolving target needs at least one DFA");
  if (switch_points_.size() != targets_.size() - 1)
    throw std::invalid_argument(
        "need exactly one switch point per target transition");
  for (std::size_t i = 1; i < switch_points_.size(); ++i)
    if (switch_points_[i] <= switch_points_[i - 1])
      throw std::invalid_argument("switch points must be increasing");
}

std::size_t EvolvingOracle::current_index() const {
  // The next query has 1-based index counter+1; a switch point p hands over
  // once p queries have been answered.
  std::size_t k = 0;
  while (k < switch_points_.size() && switch_points_[k] <= counter_->value())
    ++k;
  return k;
}

bool EvolvingOracle::query(const Word& w) {
  bool answer = accepts(current(), w);
  counter_->increment();
  return answer;
}

std::optional<Word> RandomWordEq::check(const Dfa& hypothesis) {
  const std::size_t k = hypothesis.alphabet.size();
  for (std::uint64_t attempt = 0; attempt < cfg_.max_attempts; ++attempt) {
    Word w(rng_.geometric(cfg_.expected_length));
    for (Symbol& s : w) s = Symbol(rng_.below(k));
    if (mq_.query(w) != accepts(hypothesis, w)) return w;
  }
  return std::nullopt;
}

}  // namespace treelearn
