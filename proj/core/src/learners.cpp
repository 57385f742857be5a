#include "treelearn/learners.hpp"

#include <stdexcept>

namespace treelearn {

ClassificationTree::NodeRef cached_sift(const ClassificationTree& tree,
                                        MembershipOracle& mq, const Word& w,
                                        QueryCache* cache) {
  if (cache) {
    auto it = cache->sift_results.find(w);
    if (it != cache->sift_results.end()) return it->second;
  }
  ClassificationTree::NodeRef leaf = sift(tree, mq, w);
  if (cache) cache->sift_results.emplace(w, leaf);
  return leaf;
}

namespace {

bool leaf_accepting(const ClassificationTree& tree,
                    ClassificationTree::NodeRef leaf, MembershipOracle& mq,
                    QueryCache* cache) {
  const Word& access = tree.label(leaf);
  if (cache) {
    auto it = cache->acceptance.find(access);
    if (it != cache->acceptance.end()) return it->second;
  }
  bool accepting = mq.query(access);
  if (cache) cache->acceptance.emplace(access, accepting);
  return accepting;
}

}  // namespace

ClassificationTree seed_tree(bool init_accepting, const Word& cex) {
  // The counterexample to a trivial hypothesis classifies opposite to ε.
  return init_accepting ? ClassificationTree::seeded({}, cex, {})
                        : ClassificationTree::seeded({}, {}, cex);
}

Hypothesis build_hypothesis(const ClassificationTree& tree,
                            MembershipOracle& mq, const Alphabet& alphabet,
                            QueryCache* cache) {
  Hypothesis hyp;
  hyp.state_leaf = tree.leaves();
  const std::size_t n = hyp.state_leaf.size();
  const std::size_t k = alphabet.size();

  std::map<ClassificationTree::NodeRef, StateId> state_of;
  for (std::size_t q = 0; q < n; ++q) state_of[hyp.state_leaf[q]] = StateId(q);

  hyp.dfa.alphabet = alphabet;
  hyp.dfa.initial = state_of.at(cached_sift(tree, mq, {}, cache));
  hyp.dfa.delta.resize(n * k);
  hyp.dfa.accepting.resize(n);
  for (std::size_t q = 0; q < n; ++q) {
    ClassificationTree::NodeRef leaf = hyp.state_leaf[q];
    hyp.dfa.accepting[q] = leaf_accepting(tree, leaf, mq, cache);
    Word extended = tree.label(leaf);
    extended.push_back(0);
    for (Symbol a = 0; a < k; ++a) {
      extended.back() = a;
      hyp.dfa.delta[q * k + a] =
          state_of.at(cached_sift(tree, mq, extended, cache));
    }
  }
  return hyp;
}

ClassificationTree update_tree(const ClassificationTree& tree,
                               MembershipOracle& mq, const Hypothesis& hyp,
                               const Word& cex, QueryCache* cache) {
  auto split_at = [&](ClassificationTree::NodeRef old_leaf, Word new_access,
                      Word classifier) {
    Word probe = new_access;
    probe.insert(probe.end(), classifier.begin(), classifier.end());
    bool side = mq.query(probe);
    return tree.split(old_leaf, std::move(new_access), std::move(classifier),
                      side);
  };

  StateId q = hyp.dfa.initial;
  ClassificationTree::NodeRef prev_leaf = hyp.state_leaf[q];
  Word prefix;
  for (std::size_t i = 1; i <= cex.size(); ++i) {
    Symbol a = cex[i - 1];
    q = hyp.dfa.next(q, a);
    ClassificationTree::NodeRef expected = hyp.state_leaf[q];
    Word prev_prefix = prefix;
    prefix.push_back(a);
    ClassificationTree::NodeRef actual = cached_sift(tree, mq, prefix, cache);
    if (actual != expected) {
      Word classifier{a};
      const Word& lca_word = tree.label(tree.lca(actual, expected));
      classifier.insert(classifier.end(), lca_word.begin(), lca_word.end());
      return split_at(prev_leaf, std::move(prev_prefix),
                      std::move(classifier));
    }
    prev_leaf = actual;
  }
  // No proper prefix diverged, yet the full word is misclassified: the tree
  // root carries no ε classifier (possible after pruning a stale tree), so
  // the reached leaf itself disagrees with the counterexample on ε. An
  // empty counterexample lands here directly and splits the initial leaf.
  bool side = mq.query(cex);
  if (side == hyp.dfa.is_accepting(q))
    throw std::logic_error("update_tree: word is not a counterexample");
  return tree.split(prev_leaf, cex, Word{}, side);
}

namespace {

LearnResult run_kv(const Alphabet& alphabet,
                   std::optional<ClassificationTree> prev_tree,
                   MembershipOracle& mq, EquivalenceOracle& eq,
                   const LearnObserver& observe) {
  const bool had_prev = prev_tree.has_value();
  std::size_t round = 0;
  auto emit = [&](const ClassificationTree& tree, const Dfa& hyp) {
    if (observe)
      observe({round, mq.queries_issued(), tree.leaf_count(),
               hyp.num_states()},
              hyp);
    ++round;
  };

  bool init = mq.query({});
  Dfa trivial = init ? trivial_top(alphabet) : trivial_bottom(alphabet);
  ClassificationTree trivial_tree = ClassificationTree::single_leaf({});
  // A reused tree starts the progress story at its pruned hypothesis, not
  // at the throwaway trivial one.
  if (!had_prev) emit(trivial_tree, trivial);

  std::optional<Word> cex = eq.check(trivial);
  if (!cex) {
    if (had_prev) emit(trivial_tree, trivial);
    return {std::move(trivial), std::move(trivial_tree)};
  }

  QueryCache cache;
  ClassificationTree tree =
      had_prev ? minimize_tree(std::move(*prev_tree), mq)
               : seed_tree(init, *cex);
  Hypothesis hyp = build_hypothesis(tree, mq, alphabet, &cache);
  emit(tree, hyp.dfa);

  cex = eq.check(hyp.dfa);
  while (cex) {
    tree = update_tree(tree, mq, hyp, *cex, &cache);
    cache.on_tree_change();
    hyp = build_hypothesis(tree, mq, alphabet, &cache);
    emit(tree, hyp.dfa);
    cex = eq.check(hyp.dfa);
  }
  return {std::move(hyp.dfa), std::move(tree)};
}

}  // namespace

LearnResult classic_kv(const Alphabet& alphabet, MembershipOracle& mq,
                       EquivalenceOracle& eq, const LearnObserver& observe) {
  return run_kv(alphabet, std::nullopt, mq, eq, observe);
}

LearnResult incremental_kv(const Alphabet& alphabet,
                           std::optional<ClassificationTree> prev_tree,
                           MembershipOracle& mq, EquivalenceOracle& eq,
                           const LearnObserver& observe) {
  return run_kv(alphabet, std::move(prev_tree), mq, eq, observe);
}

}  // namespace treelearn
