#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>

#include "treelearn/automata.hpp"
#include "treelearn/ctree.hpp"
#include "treelearn/oracles.hpp"

namespace treelearn {

/// Hypothesis DFA extracted from a classification tree, with the mapping
/// from hypothesis states back to the tree leaves they came from.
struct Hypothesis {
  Dfa dfa;
  std::vector<ClassificationTree::NodeRef> state_leaf;
};

/// Memo for sift results and leaf-acceptance answers within one learner
/// session. Sift results are keyed per tree version: the owner must call
/// on_tree_change() whenever the tree value is replaced.
struct QueryCache {
  std::map<Word, ClassificationTree::NodeRef> sift_results;
  std::map<Word, bool> acceptance;
  void on_tree_change() { sift_results.clear(); }
};

/// sift with optional memoization; a cache hit issues no queries.
ClassificationTree::NodeRef cached_sift(const ClassificationTree& tree,
                                        MembershipOracle& mq, const Word& w,
                                        QueryCache* cache);

/// Initial two-leaf tree: Node ε with the empty word on the init side and
/// the first counterexample on the other.
ClassificationTree seed_tree(bool init_accepting, const Word& cex);

/// States are the tree leaves, the initial state is sift(ε), transitions
/// are sift(access·a), and a leaf accepts iff mq(access) holds.
Hypothesis build_hypothesis(const ClassificationTree& tree,
                            MembershipOracle& mq, const Alphabet& alphabet,
                            QueryCache* cache = nullptr);

/// Processes a counterexample: finds the first prefix where the tree and
/// the hypothesis classify differently and splits the leaf reached one
/// step earlier. Leaf count grows by exactly one.
ClassificationTree update_tree(const ClassificationTree& tree,
                               MembershipOracle& mq, const Hypothesis& hyp,
                               const Word& cex, QueryCache* cache = nullptr);

struct RoundEvent {
  std::size_t round;               // 0 for the initial trivial hypothesis
  std::uint64_t queries;           // cumulative membership queries
  std::size_t leaf_count;
  std::size_t hypothesis_states;
};

/// Called at every hypothesis emission.
using LearnObserver = std::function<void(const RoundEvent&, const Dfa&)>;

struct LearnResult {
  Dfa hypothesis;
  ClassificationTree tree;
};

/// Classic Kearns–Vazirani: loops counterexample processing and hypothesis
/// extraction until the equivalence oracle accepts.
LearnResult classic_kv(const Alphabet& alphabet, MembershipOracle& mq,
                       EquivalenceOracle& eq, const LearnObserver& observe = {});

/// Adaptive variant: when a previous tree is given, prunes its stale
/// leaves and continues from it instead of seeding from scratch. Without a
/// previous tree it behaves exactly like classic_kv.
LearnResult incremental_kv(const Alphabet& alphabet,
                           std::optional<ClassificationTree> prev_tree,
                           MembershipOracle& mq, EquivalenceOracle& eq,
                           const LearnObserver& observe = {});

}  // namespace treelearn
