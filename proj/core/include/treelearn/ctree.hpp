#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "treelearn/automata.hpp"
#include "treelearn/oracles.hpp"

namespace treelearn {

/// Raised by tree editors on misuse: editing through a stale ref,
/// setChild on a leaf, duplicate access sequences, and the like.
struct StructuralError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Binary classification tree: inner nodes carry a classifier word, leaves
/// carry a state access sequence. Values are persistent at the API level;
/// every editor returns the updated tree and leaves the receiver intact.
/// Node refs of untouched nodes stay valid in the edited value; refs of
/// removed nodes are invalidated.
class ClassificationTree {
 public:
  using NodeRef = std::uint32_t;

  static ClassificationTree single_leaf(Word access);
  /// Node classifier (Leaf lo_access) (Leaf hi_access).
  static ClassificationTree seeded(Word classifier, Word lo_access,
                                   Word hi_access);
  /// Node classifier with two existing trees as subtrees.
  static ClassificationTree join(Word classifier, const ClassificationTree& lo,
                                 const ClassificationTree& hi);

  NodeRef root() const { return root_; }
  bool is_leaf(NodeRef n) const { return at(n).kind == Kind::leaf; }
  bool contains(NodeRef n) const {
    return n < nodes_.size() && nodes_[n].kind != Kind::dead;
  }

  /// hi=true selects the ⊤-child. nullopt for leaves.
  std::optional<NodeRef> child(NodeRef n, bool hi) const;
  std::vector<NodeRef> children(NodeRef n) const;
  /// Classifier of an inner node, access sequence of a leaf.
  const Word& label(NodeRef n) const { return at(n).lbl; }
  std::optional<NodeRef> parent(NodeRef n) const;
  /// Which side of its parent n hangs on; nullopt for the root.
  std::optional<bool> outcome(NodeRef n) const;

  /// Pre-order.
  std::vector<NodeRef> nodes() const;
  std::vector<NodeRef> leaves() const;
  std::size_t leaf_count() const;

  /// Lowest common ancestor of two distinct nodes.
  NodeRef lca(NodeRef a, NodeRef b) const;

  /// Makes n the hi/lo child of inner node p; the displaced subtree is
  /// discarded. n must not be an ancestor of p.
  ClassificationTree set_child(NodeRef p, bool hi, NodeRef n) const;
  ClassificationTree set_label(NodeRef leaf, Word access) const;
  /// Deletes the leaf and its parent; the sibling subtree takes the
  /// parent's place.
  ClassificationTree remove_leaf(NodeRef leaf) const;
  /// Replaces the leaf with Node classifier whose children are the old
  /// leaf and Leaf new_access (on the new_is_hi side).
  ClassificationTree split(NodeRef leaf, Word new_access, Word classifier,
                           bool new_is_hi) const;

  /// Structural equality (shape and labels; arena layout ignored).
  bool operator==(const ClassificationTree& other) const;

 private:
  enum class Kind : std::uint8_t { inner, leaf, dead };
  struct Node {
    Kind kind;
    Word lbl;
    NodeRef lo = 0, hi = 0;
    NodeRef parent = kNoParent;
  };
  static constexpr NodeRef kNoParent = NodeRef(-1);

  const Node& at(NodeRef n) const;
  Node& at_mut(NodeRef n);
  void collect(NodeRef n, bool leaves_only, std::vector<NodeRef>& out) const;
  void kill_subtree(NodeRef n);
  void check_distinct_access(const Word& access) const;

  std::vector<Node> nodes_;
  NodeRef root_ = 0;
};

/// Classifies w into a leaf: at each inner node with classifier e, descend
/// to the ⊤-child iff mq(w·e). Issues exactly path-depth queries.
ClassificationTree::NodeRef sift(const ClassificationTree& tree,
                                 MembershipOracle& mq, const Word& w);

/// Prunes leaves whose access sequences no longer sift back to themselves,
/// iterating passes over the current tree until a fixpoint. A tree reduced
/// to a single leaf is returned as-is.
ClassificationTree minimize_tree(ClassificationTree tree,
                                 MembershipOracle& mq);

/// JSON hand-off format: Inner = {"classifier", "lo", "hi"},
/// Leaf = {"access"}; words as display strings.
nlohmann::json tree_to_json(const ClassificationTree& tree,
                            const Alphabet& alphabet);
/// Throws std::invalid_argument on malformed input.
ClassificationTree tree_from_json(const nlohmann::json& j,
                                  const Alphabet& alphabet);

}  // namespace treelearn
