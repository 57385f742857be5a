#include "treelearn/ctree.hpp"

#include <nlohmann/json.hpp>

namespace treelearn {

const ClassificationTree::Node& ClassificationTree::at(NodeRef n) const {
  if (!contains(n)) throw StructuralError("stale or invalid node ref");
  return nodes_[n];
}

ClassificationTree::Node& ClassificationTree::at_mut(NodeRef n) {
  if (!contains(n)) throw StructuralError("stale or invalid node ref");
  return nodes_[n];
}

ClassificationTree ClassificationTree::single_leaf(Word access) {
  ClassificationTree t;
  t.nodes_.push_back({Kind::leaf, std::move(access)});
  t.root_ = 0;
  return t;
}

ClassificationTree ClassificationTree::seeded(Word classifier, Word lo_access,
                                              Word hi_access) {
  if (lo_access == hi_access)
    throw StructuralError("leaf access sequences must be distinct");
  ClassificationTree t;
  t.nodes_.push_back({Kind::inner, std::move(classifier), 1, 2});
  t.nodes_.push_back({Kind::leaf, std::move(lo_access), 0, 0, 0});
  t.nodes_.push_back({Kind::leaf, std::move(hi_access), 0, 0, 0});
  t.root_ = 0;
  return t;
}

ClassificationTree ClassificationTree::join(Word classifier,
                                            const ClassificationTree& lo,
                                            const ClassificationTree& hi) {
  ClassificationTree out;
  out.nodes_.push_back({Kind::inner, std::move(classifier)});
  auto copy_live = [&out](auto&& self, const ClassificationTree& src,
                          NodeRef n, NodeRef parent) -> NodeRef {
    NodeRef here = NodeRef(out.nodes_.size());
    out.nodes_.push_back(src.nodes_[n]);
    out.nodes_[here].parent = parent;
    if (out.nodes_[here].kind == Kind::inner) {
      out.nodes_[here].lo = self(self, src, src.nodes_[n].lo, here);
      out.nodes_[here].hi = self(self, src, src.nodes_[n].hi, here);
    }
    return here;
  };
  out.nodes_[0].lo = copy_live(copy_live, lo, lo.root_, 0);
  out.nodes_[0].hi = copy_live(copy_live, hi, hi.root_, 0);
  out.root_ = 0;
  return out;
}

std::optional<ClassificationTree::NodeRef> ClassificationTree::child(
    NodeRef n, bool hi) const {
  const Node& node = at(n);
  if (node.kind == Kind::leaf) return std::nullopt;
  return hi ? node.hi : node.lo;
}

std::vector<ClassificationTree::NodeRef> ClassificationTree::children(
    NodeRef n) const {
  const Node& node = at(n);
  if (node.kind == Kind::leaf) return {};
  return {node.lo, node.hi};
}

std::optional<ClassificationTree::NodeRef> ClassificationTree::parent(
    NodeRef n) const {
  const Node& node = at(n);
  if (node.parent == kNoParent) return std::nullopt;
  return node.parent;
}

std::optional<bool> ClassificationTree::outcome(NodeRef n) const {
  auto p = parent(n);
  if (!p) return std::nullopt;
  return nodes_[*p].hi == n;
}

void ClassificationTree::collect(NodeRef n, bool leaves_only,
                                 std::vector<NodeRef>& out) const {
  const Node& node = nodes_[n];
  if (node.kind == Kind::leaf) {
    out.push_back(n);
    return;
  }
  if (!leaves_only) out.push_back(n);
  collect(node.lo, leaves_only, out);
  collect(node.hi, leaves_only, out);
}

std::vector<ClassificationTree::NodeRef> ClassificationTree::nodes() const {
  std::vector<NodeRef> out;
  collect(root_, false, out);
  return out;
}

std::vector<ClassificationTree::NodeRef> ClassificationTree::leaves() const {
  std::vector<NodeRef> out;
  collect(root_, true, out);
  return out;
}

std::size_t ClassificationTree::leaf_count() const { return leaves().size(); }

ClassificationTree::NodeRef ClassificationTree::lca(NodeRef a,
                                                    NodeRef b) const {
  if (a == b) throw std::invalid_argument("lca of a node with itself");
  at(a);
  at(b);
  std::vector<bool> on_path(nodes_.size(), false);
  for (std::optional<NodeRef> n = a; n; n = parent(*n)) on_path[*n] = true;
  for (std::optional<NodeRef> n = b; n; n = parent(*n))
    if (on_path[*n]) return *n;
  throw StructuralError("nodes are not in the same tree");
}

void ClassificationTree::kill_subtree(NodeRef n) {
  if (n == kNoParent) return;  // hole left by a detached node
  Node& node = nodes_[n];
  if (node.kind == Kind::inner) {
    kill_subtree(node.lo);
    kill_subtree(node.hi);
  }
  node.kind = Kind::dead;
  node.lbl.clear();
}

ClassificationTree ClassificationTree::set_child(NodeRef p, bool hi,
                                                 NodeRef n) const {
  if (is_leaf(p)) throw StructuralError("setChild target must be an inner node");
  at(n);
  for (std::optional<NodeRef> anc = p; anc; anc = parent(*anc))
    if (*anc == n) throw StructuralError("new child is an ancestor of target");

  ClassificationTree out = *this;
  NodeRef displaced = hi ? out.nodes_[p].hi : out.nodes_[p].lo;
  if (displaced == n) return out;
  // n may only come from inside the displaced subtree; moving it out of a
  // surviving subtree would leave a hole there.
  if (out.nodes_[n].parent != kNoParent) {
    bool inside_displaced = false;
    for (std::optional<NodeRef> anc = n; anc; anc = parent(*anc))
      if (*anc == displaced) {
        inside_displaced = true;
        break;
      }
    if (!inside_displaced)
      throw StructuralError("setChild source must be parentless or inside "
                            "the displaced subtree");
    Node& old_parent = out.nodes_[out.nodes_[n].parent];
    if (old_parent.lo == n)
      old_parent.lo = kNoParent;
    else
      old_parent.hi = kNoParent;
  }
  out.nodes_[n].parent = kNoParent;
  out.kill_subtree(displaced);
  (hi ? out.nodes_[p].hi : out.nodes_[p].lo) = n;
  out.nodes_[n].parent = p;
  return out;
}

ClassificationTree ClassificationTree::set_label(NodeRef leaf,
                                                 Word access) const {
  if (!is_leaf(leaf)) throw StructuralError("setLabel target must be a leaf");
  if (access != at(leaf).lbl) check_distinct_access(access);
  ClassificationTree out = *this;
  out.nodes_[leaf].lbl = std::move(access);
  return out;
}

ClassificationTree ClassificationTree::remove_leaf(NodeRef leaf) const {
  if (!is_leaf(leaf)) throw StructuralError("removeLeaf target must be a leaf");
  auto p = parent(leaf);
  if (!p) throw StructuralError("cannot remove the only leaf of a tree");

  ClassificationTree out = *this;
  const Node& parent_node = out.nodes_[*p];
  NodeRef sibling = parent_node.lo == leaf ? parent_node.hi : parent_node.lo;
  NodeRef grandparent = parent_node.parent;

  out.nodes_[leaf].kind = Kind::dead;
  out.nodes_[leaf].lbl.clear();
  out.nodes_[*p].kind = Kind::dead;
  out.nodes_[*p].lbl.clear();

  out.nodes_[sibling].parent = grandparent;
  if (grandparent == kNoParent) {
    out.root_ = sibling;
  } else {
    Node& g = out.nodes_[grandparent];
    (g.lo == *p ? g.lo : g.hi) = sibling;
  }
  return out;
}

void ClassificationTree::check_distinct_access(const Word& access) const {
  for (NodeRef l : leaves())
    if (nodes_[l].lbl == access)
      throw StructuralError("duplicate leaf access sequence");
}

ClassificationTree ClassificationTree::split(NodeRef leaf, Word new_access,
                                             Word classifier,
                                             bool new_is_hi) const {
  if (!is_leaf(leaf)) throw StructuralError("split target must be a leaf");
  check_distinct_access(new_access);

  ClassificationTree out = *this;
  NodeRef inner = NodeRef(out.nodes_.size());
  NodeRef fresh = inner + 1;
  NodeRef p = out.nodes_[leaf].parent;

  Node inner_node{Kind::inner, std::move(classifier)};
  inner_node.lo = new_is_hi ? leaf : fresh;
  inner_node.hi = new_is_hi ? fresh : leaf;
  inner_node.parent = p;
  out.nodes_.push_back(std::move(inner_node));
  out.nodes_.push_back({Kind::leaf, std::move(new_access), 0, 0, inner});
  out.nodes_[leaf].parent = inner;

  if (p == kNoParent) {
    out.root_ = inner;
  } else {
    Node& pn = out.nodes_[p];
    (pn.lo == leaf ? pn.lo : pn.hi) = inner;
  }
  return out;
}

namespace {

bool subtree_equal(const ClassificationTree& a, ClassificationTree::NodeRef na,
                   const ClassificationTree& b,
                   ClassificationTree::NodeRef nb) {
  if (a.is_leaf(na) != b.is_leaf(nb)) return false;
  if (a.label(na) != b.label(nb)) return false;
  if (a.is_leaf(na)) return true;
  return subtree_equal(a, *a.child(na, false), b, *b.child(nb, false)) &&
         subtree_equal(a, *a.child(na, true), b, *b.child(nb, true));
}

}  // namespace

bool ClassificationTree::operator==(const ClassificationTree& other) const {
  return subtree_equal(*this, root_, other, other.root_);
}

ClassificationTree::NodeRef sift(const ClassificationTree& tree,
                                 MembershipOracle& mq, const Word& w) {
  ClassificationTree::NodeRef n = tree.root();
  while (!tree.is_leaf(n)) {
    Word probe = w;
    const Word& e = tree.label(n);
    probe.insert(probe.end(), e.begin(), e.end());
    n = *tree.child(n, mq.query(probe));
  }
  return n;
}

ClassificationTree minimize_tree(ClassificationTree tree,
                                 MembershipOracle& mq) {
  // Removing a leaf deletes a classifier and changes sift paths, so one
  // pass over a leaf snapshot is not enough; iterate until a full pass
  // removes nothing.
  bool changed = true;
  while (changed) {
    changed = false;
    for (ClassificationTree::NodeRef l : tree.leaves()) {
      if (!tree.contains(l)) continue;
      if (tree.is_leaf(tree.root())) return tree;
      if (sift(tree, mq, tree.label(l)) != l) {
        tree = tree.remove_leaf(l);
        changed = true;
      }
    }
  }
  return tree;
}

nlohmann::json tree_to_json(const ClassificationTree& tree,
                            const Alphabet& alphabet) {
  auto encode = [&](auto&& self, ClassificationTree::NodeRef n) -> nlohmann::json {
    if (tree.is_leaf(n))
      return {{"access", alphabet.format_word(tree.label(n))}};
    return {{"classifier", alphabet.format_word(tree.label(n))},
            {"lo", self(self, *tree.child(n, false))},
            {"hi", self(self, *tree.child(n, true))}};
  };
  return encode(encode, tree.root());
}

ClassificationTree tree_from_json(const nlohmann::json& j,
                                  const Alphabet& alphabet) {
  auto decode = [&](auto&& self, const nlohmann::json& node)
      -> ClassificationTree {
    if (!node.is_object())
      throw std::invalid_argument("tree JSON: node must be an object");
    if (node.contains("access"))
      return ClassificationTree::single_leaf(
          alphabet.parse_word(node.at("access").get<std::string>()));
    if (!node.contains("classifier") || !node.contains("lo") ||
        !node.contains("hi"))
      throw std::invalid_argument(
          "tree JSON: inner node needs classifier, lo, and hi");
    ClassificationTree lo = self(self, node.at("lo"));
    ClassificationTree hi = self(self, node.at("hi"));
    return ClassificationTree::join(
        alphabet.parse_word(node.at("classifier").get<std::string>()), lo, hi);
  };
  ClassificationTree tree = decode(decode, j);
  // Leaf distinctness invariant.
  auto ls = tree.leaves();
  for (std::size_t i = 0; i < ls.size(); ++i)
    for (std::size_t k = i + 1; k < ls.size(); ++k)
      if (tree.label(ls[i]) == tree.label(ls[k]))
        throw std::invalid_argument("tree JSON: duplicate access sequences");
  return tree;
}

}  // namespace treelearn
