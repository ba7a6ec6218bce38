#pragma once

#include <array>
#include <cassert>
#include <compare>
#include <cstddef>
#include <cstdlib>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "error.hpp"

namespace wtower {

/// A rooted unitrivalent tree, identified with a non-associative bracketing
/// of index labels. The left/right order of each bracket encodes the cyclic
/// orientation (parent, left, right) at that trivalent vertex.
///
/// Nodes are immutable and shared, so copies are cheap and thread-safe.
class RootedTree {
 public:
  static RootedTree leaf(int label) {
    if (label < 1) throw Error(ErrorCode::label_out_of_range, "tree labels must be >= 1");
    return RootedTree(std::make_shared<const Node>(Node{label, nullptr, nullptr, 0, 1}));
  }

  static RootedTree join(const RootedTree& left, const RootedTree& right) {
    const int order = left.order() + right.order() + 1;
    const int leaves = left.leaf_count() + right.leaf_count();
    return RootedTree(std::make_shared<const Node>(Node{0, left.node_, right.node_, order, leaves}));
  }

  bool is_leaf() const { return node_->label != 0; }
  int label() const { return node_->label; }
  RootedTree left() const { return RootedTree(node_->left); }
  RootedTree right() const { return RootedTree(node_->right); }

  /// Number of trivalent vertices (the root vertex is univalent).
  int order() const { return node_->order; }
  int leaf_count() const { return node_->leaves; }

  /// Labels of the leaves, left to right.
  std::vector<int> leaf_labels() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(leaf_count()));
    collect(node_.get(), out);
    return out;
  }

  std::string str() const {
    if (is_leaf()) return std::to_string(label());
    return "(" + left().str() + "," + right().str() + ")";
  }

 private:
  struct Node {
    int label;
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
    int order;
    int leaves;
  };

  explicit RootedTree(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static void collect(const Node* n, std::vector<int>& out) {
    if (n->label != 0) {
      out.push_back(n->label);
      return;
    }
    collect(n->left.get(), out);
    collect(n->right.get(), out);
  }

  std::shared_ptr<const Node> node_;
};

/// Total order used for every canonical form: larger order first, then
/// leaves by label, then brackets by left child and right child.
inline int compare(const RootedTree& a, const RootedTree& b) {
  if (a.order() != b.order()) return a.order() > b.order() ? -1 : 1;
  if (a.is_leaf()) return a.label() < b.label() ? -1 : (a.label() > b.label() ? 1 : 0);
  if (int c = compare(a.left(), b.left()); c != 0) return c;
  return compare(a.right(), b.right());
}

inline bool operator==(const RootedTree& a, const RootedTree& b) { return compare(a, b) == 0; }
inline bool operator<(const RootedTree& a, const RootedTree& b) { return compare(a, b) < 0; }

/// Result of sorting a rooted tree's brackets. tree = sign * input, and
/// two_torsion is set when some swap fixes the tree (so tree = -tree).
struct CanonicalRooted {
  RootedTree tree;
  int sign = 1;
  bool two_torsion = false;
};

inline CanonicalRooted canonicalize(const RootedTree& t) {
  if (t.is_leaf()) return {t, 1, false};
  CanonicalRooted l = canonicalize(t.left());
  CanonicalRooted r = canonicalize(t.right());
  const int c = compare(l.tree, r.tree);
  const bool torsion = l.two_torsion || r.two_torsion || c == 0;
  if (c <= 0) return {RootedTree::join(l.tree, r.tree), l.sign * r.sign, torsion};
  return {RootedTree::join(r.tree, l.tree), -l.sign * r.sign, torsion};
}

// ---------------------------------------------------------------------------

enum class TreeKind { framed, rooted, twisted };

/// A framed tree <I,J>, a rooted tree J, or a twisted tree J^inf.
class DecoratedTree {
 public:
  static DecoratedTree framed(RootedTree first, RootedTree second) {
    return DecoratedTree(TreeKind::framed, std::move(first), std::move(second));
  }
  static DecoratedTree rooted(RootedTree j) { return DecoratedTree(TreeKind::rooted, j, j); }
  static DecoratedTree twisted(RootedTree j) { return DecoratedTree(TreeKind::twisted, j, j); }

  TreeKind kind() const { return kind_; }
  bool is_framed() const { return kind_ == TreeKind::framed; }
  bool is_twisted() const { return kind_ == TreeKind::twisted; }

  /// The underlying rooted tree (rooted/twisted) or the first half (framed).
  const RootedTree& first() const { return first_; }
  /// Second half of a framed tree.
  const RootedTree& second() const { return second_; }

  int order() const {
    return kind_ == TreeKind::framed ? first_.order() + second_.order() : first_.order();
  }

  /// Labels of the non-root, non-twist univalent vertices, left to right.
  std::vector<int> leaf_labels() const {
    std::vector<int> out = first_.leaf_labels();
    if (kind_ == TreeKind::framed) {
      auto s = second_.leaf_labels();
      out.insert(out.end(), s.begin(), s.end());
    }
    return out;
  }

  int max_label() const {
    int mx = 0;
    for (int l : leaf_labels()) mx = std::max(mx, l);
    return mx;
  }

  std::string str() const {
    switch (kind_) {
      case TreeKind::framed: return "<" + first_.str() + "," + second_.str() + ">";
      case TreeKind::rooted: return first_.str();
      case TreeKind::twisted: return first_.str() + "^inf";
    }
    return {};
  }

  friend int compare(const DecoratedTree& a, const DecoratedTree& b) {
    if (a.kind_ != b.kind_) return a.kind_ < b.kind_ ? -1 : 1;
    if (int c = compare(a.first_, b.first_); c != 0) return c;
    if (a.kind_ == TreeKind::framed) return compare(a.second_, b.second_);
    return 0;
  }
  friend bool operator==(const DecoratedTree& a, const DecoratedTree& b) { return compare(a, b) == 0; }
  friend bool operator<(const DecoratedTree& a, const DecoratedTree& b) { return compare(a, b) < 0; }

 private:
  DecoratedTree(TreeKind k, RootedTree a, RootedTree b) : kind_(k), first_(std::move(a)), second_(std::move(b)) {}

  TreeKind kind_;
  RootedTree first_;
  RootedTree second_;
};

// ---------------------------------------------------------------------------
// Unrooted view

/// Explicit vertex/edge form of a tree. Trivalent vertices store their three
/// neighbours in cyclic order; univalent vertices store one neighbour.
/// Labels: > 0 index label, 0 trivalent, -1 root or twist vertex.
class TreeGraph {
 public:
  static constexpr int kRoot = -1;

  struct Vertex {
    int label = 0;
    std::array<int, 3> nbr{-1, -1, -1};
    int degree = 0;
  };

  /// Framed <I,J> is built with the two halves' top vertices joined by an edge;
  /// rooted and twisted trees get an explicit root vertex.
  explicit TreeGraph(const DecoratedTree& t) {
    if (t.is_framed()) {
      const int a = build(t.first(), -1);
      const int b = build(t.second(), a);
      vertices_[static_cast<std::size_t>(a)].nbr[0] = b;
    } else {
      const int root = add_vertex(kRoot);
      vertices_[static_cast<std::size_t>(root)].degree = 1;
      const int top = build(t.first(), root);
      vertices_[static_cast<std::size_t>(root)].nbr[0] = top;
    }
  }

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const Vertex& vertex(int v) const { return vertices_[static_cast<std::size_t>(v)]; }
  int size() const { return static_cast<int>(vertices_.size()); }

  /// Index-labelled univalent vertices in left-to-right order of the input bracketing.
  const std::vector<int>& leaves() const { return leaves_; }

  int root() const {
    for (int v = 0; v < size(); ++v)
      if (vertex(v).label == kRoot) return v;
    return -1;
  }

  /// Rooted tree hanging off `to`, viewed from its neighbour `from`.
  /// `mirrored` reads every cyclic order backwards.
  RootedTree branch(int from, int to, bool mirrored = false) const {
    const Vertex& v = vertex(to);
    if (v.degree == 1) {
      if (v.label <= 0) throw Error(ErrorCode::malformed_twisted, "branch runs into the root or twist vertex");
      return RootedTree::leaf(v.label);
    }
    int k = 0;
    while (v.nbr[static_cast<std::size_t>(k)] != from) ++k;
    int a = v.nbr[static_cast<std::size_t>((k + 1) % 3)];
    int b = v.nbr[static_cast<std::size_t>((k + 2) % 3)];
    if (mirrored) std::swap(a, b);
    return RootedTree::join(branch(to, a, mirrored), branch(to, b, mirrored));
  }

  /// All undirected edges (u, v), each once.
  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int u = 0; u < size(); ++u)
      for (int k = 0; k < vertex(u).degree; ++k) {
        int v = vertex(u).nbr[static_cast<std::size_t>(k)];
        if (u < v) out.emplace_back(u, v);
      }
    return out;
  }

 private:
  int add_vertex(int label) {
    vertices_.push_back(Vertex{label, {-1, -1, -1}, 0});
    return size() - 1;
  }

  // Builds the subtree and returns its top vertex; slot 0 of a trivalent
  // vertex is its parent, then left, then right, giving cyclic (parent, L, R).
  int build(const RootedTree& t, int parent) {
    if (t.is_leaf()) {
      const int v = add_vertex(t.label());
      leaves_.push_back(v);
      Vertex& vx = vertices_[static_cast<std::size_t>(v)];
      vx.degree = 1;
      vx.nbr[0] = parent;
      return v;
    }
    const int v = add_vertex(0);
    vertices_[static_cast<std::size_t>(v)].degree = 3;
    vertices_[static_cast<std::size_t>(v)].nbr[0] = parent;
    const int l = build(t.left(), v);
    const int r = build(t.right(), v);
    vertices_[static_cast<std::size_t>(v)].nbr[1] = l;
    vertices_[static_cast<std::size_t>(v)].nbr[2] = r;
    return v;
  }

  std::vector<Vertex> vertices_;
  std::vector<int> leaves_;
};

// ---------------------------------------------------------------------------
// Canonical forms

/// tree = sign * input. For twisted trees the sign reports the swaps in J;
/// forests discard it because J^inf = (-J)^inf.
struct CanonicalTree {
  DecoratedTree tree;
  int sign = 1;
  bool two_torsion = false;
};

namespace detail {

inline std::tuple<int, RootedTree, RootedTree> split_key(const RootedTree& a, const RootedTree& b) {
  return {std::abs(a.order() - b.order()), a, b};
}

inline bool key_less(const std::tuple<int, RootedTree, RootedTree>& x,
                     const std::tuple<int, RootedTree, RootedTree>& y) {
  if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) < std::get<0>(y);
  if (int c = compare(std::get<1>(x), std::get<1>(y)); c != 0) return c < 0;
  return compare(std::get<2>(x), std::get<2>(y)) < 0;
}

}  // namespace detail

/// Framed trees minimise over all splitting edges: the most balanced split
/// wins, ties broken by the rooted order of the halves (first <= second).
inline CanonicalTree canonicalize(const DecoratedTree& t) {
  if (!t.is_framed()) {
    CanonicalRooted c = canonicalize(t.first());
    DecoratedTree out = t.is_twisted() ? DecoratedTree::twisted(c.tree) : DecoratedTree::rooted(c.tree);
    return {out, c.sign, c.two_torsion};
  }
  const TreeGraph g(t);
  bool torsion = false;
  bool have = false;
  std::tuple<int, RootedTree, RootedTree> best_key{0, RootedTree::leaf(1), RootedTree::leaf(1)};
  int best_sign = 1;
  for (auto [u, v] : g.edges()) {
    CanonicalRooted p = canonicalize(g.branch(u, v));
    CanonicalRooted q = canonicalize(g.branch(v, u));
    torsion = torsion || p.two_torsion || q.two_torsion;
    const int sign = p.sign * q.sign;
    auto key = compare(p.tree, q.tree) <= 0 ? detail::split_key(p.tree, q.tree) : detail::split_key(q.tree, p.tree);
    if (!have || detail::key_less(key, best_key)) {
      best_key = key;
      best_sign = sign;
      have = true;
    } else if (!detail::key_less(best_key, key) && sign != best_sign) {
      torsion = true;
    }
  }
  return {DecoratedTree::framed(std::get<1>(best_key), std::get<2>(best_key)), best_sign, torsion};
}

// ---------------------------------------------------------------------------
// Statistics and products

struct TreeStats {
  int order = 0;
  int degree = 0;
  std::map<int, int> multiplicity;  // r_i by label, zero entries omitted
  int max_multiplicity = 0;
  bool mono_labeled = false;

  int r(int label) const {
    auto it = multiplicity.find(label);
    return it == multiplicity.end() ? 0 : it->second;
  }
};

/// Twisted trees count each label twice, r_i(J^inf) = r_i(<J,J>).
inline TreeStats tree_stats(const DecoratedTree& t) {
  TreeStats s;
  s.order = t.order();
  s.degree = s.order + 1;
  const int weight = t.is_twisted() ? 2 : 1;
  for (int l : t.leaf_labels()) s.multiplicity[l] += weight;
  for (const auto& [l, c] : s.multiplicity) s.max_multiplicity = std::max(s.max_multiplicity, c);
  s.mono_labeled = s.multiplicity.size() <= 1;
  return s;
}

inline DecoratedTree rooted_product(const DecoratedTree& i, const DecoratedTree& j) {
  if (i.kind() != TreeKind::rooted || j.kind() != TreeKind::rooted)
    throw Error(ErrorCode::invalid_argument, "rooted product needs two rooted trees");
  return DecoratedTree::rooted(RootedTree::join(i.first(), j.first()));
}

inline DecoratedTree inner_product(const DecoratedTree& i, const DecoratedTree& j) {
  if (i.kind() != TreeKind::rooted || j.kind() != TreeKind::rooted)
    throw Error(ErrorCode::invalid_argument, "inner product needs two rooted trees");
  return DecoratedTree::framed(i.first(), j.first());
}

}  // namespace wtower
