#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "forest.hpp"
#include "integer.hpp"
#include "tree.hpp"

namespace wtower {

enum class CollapseCase { framed, twisted_adjacent_root, twisted_non_adjacent };

inline std::string collapse_case_name(CollapseCase c) {
  switch (c) {
    case CollapseCase::framed: return "framed";
    case CollapseCase::twisted_adjacent_root: return "twisted-adjacent-root";
    case CollapseCase::twisted_non_adjacent: return "twisted-non-adjacent";
  }
  return {};
}

/// One collapse of an i-labelled univalent edge. `output` is the raw term
/// list before coefficient merging.
struct CollapseStep {
  Integer coefficient = 1;
  DecoratedTree input;
  int label = 0;
  int vertex = 0;  // position among the leaves, left to right
  CollapseCase kind = CollapseCase::framed;
  std::vector<std::pair<Integer, DecoratedTree>> output;

  /// "<+c*input> --collapse i--> <raw terms>"
  std::string str() const {
    std::string s = term_string(coefficient, input) + " --collapse " + std::to_string(label) + "--> ";
    for (std::size_t i = 0; i < output.size(); ++i)
      s += (i ? " + " : "") + term_string(output[i].first, output[i].second);
    return s;
  }

  IntersectionForest merged(int m) const {
    IntersectionForest f(m);
    for (const auto& [c, t] : output) f.add(c, t);
    return f;
  }
};

/// Index into the leaves (left to right) of the first leaf with this label.
inline int leaf_with_label(const DecoratedTree& t, int label) {
  const auto labels = t.leaf_labels();
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return static_cast<int>(i);
  throw Error(ErrorCode::no_such_vertex, "tree " + t.str() + " has no vertex labelled " + std::to_string(label));
}

namespace detail {

inline int checked_leaf(const TreeGraph& g, const DecoratedTree& t, int vertex) {
  if (vertex < 0 || vertex >= static_cast<int>(g.leaves().size()))
    throw Error(ErrorCode::no_such_vertex,
                "vertex " + std::to_string(vertex) + " out of range for " + t.str() + " (leaves are numbered from 0)");
  return g.leaves()[static_cast<std::size_t>(vertex)];
}

/// J with the leaf at `target` (counting leaves left to right) removed and
/// its parent vertex smoothed.
inline RootedTree remove_leaf(const RootedTree& j, int target) {
  const RootedTree l = j.left(), r = j.right();
  const int nl = l.leaf_count();
  if (target < nl) {
    if (l.is_leaf()) return r;
    return RootedTree::join(remove_leaf(l, target), r);
  }
  if (r.is_leaf()) return l;
  return RootedTree::join(l, remove_leaf(r, target - nl));
}

}  // namespace detail

/// <(J1,J2),i>  ->  +<J1,J2>, -<J1,J2>, read about the edge of leaf `vertex`.
inline CollapseStep collapse_framed_edge(const DecoratedTree& t, int vertex, const Integer& coefficient = 1) {
  if (!t.is_framed()) throw Error(ErrorCode::invalid_argument, "framed collapse needs a framed tree");
  if (t.order() < 1) throw Error(ErrorCode::order_zero_collapse, "cannot collapse an edge of the order 0 tree " + t.str());
  const TreeGraph g(t);
  const int v = detail::checked_leaf(g, t, vertex);
  const int u = g.vertex(v).nbr[0];
  const RootedTree rest = g.branch(v, u);  // (J1, J2)
  const DecoratedTree q = DecoratedTree::framed(rest.left(), rest.right());
  return CollapseStep{coefficient, t, g.vertex(v).label, vertex, CollapseCase::framed,
                      {{coefficient, q}, {-coefficient, q}}};
}

/// Collapse in J^inf. Adjacent to the root, J = (I,i) gives w<I,I>. Otherwise
/// the statement form gives 2w I^inf + w<I,I>, and `strict` gives
/// +w I^inf, -w I^inf, +w<I,I>.
inline CollapseStep collapse_twisted_edge(const DecoratedTree& t, int vertex, const Integer& omega = 1,
                                          bool strict = false) {
  if (!t.is_twisted()) throw Error(ErrorCode::invalid_argument, "twisted collapse needs a twisted tree");
  if (t.order() < 1) throw Error(ErrorCode::order_zero_collapse, "cannot collapse an edge of the order 0 tree " + t.str());
  const TreeGraph g(t);
  const int v = detail::checked_leaf(g, t, vertex);
  const int u = g.vertex(v).nbr[0];
  CollapseStep s{omega, t, g.vertex(v).label, vertex, CollapseCase::framed, {}};
  const RootedTree i = detail::remove_leaf(t.first(), vertex);
  if (g.vertex(g.vertex(u).nbr[0]).label == TreeGraph::kRoot) {
    s.kind = CollapseCase::twisted_adjacent_root;
    s.output = {{omega, DecoratedTree::framed(i, i)}};
  } else {
    s.kind = CollapseCase::twisted_non_adjacent;
    if (strict)
      s.output = {{omega, DecoratedTree::twisted(i)}, {-omega, DecoratedTree::twisted(i)}, {omega, DecoratedTree::framed(i, i)}};
    else
      s.output = {{2 * omega, DecoratedTree::twisted(i)}, {omega, DecoratedTree::framed(i, i)}};
  }
  return s;
}

inline CollapseStep collapse_edge(const DecoratedTree& t, int vertex, const Integer& coefficient = 1,
                                  bool strict = false) {
  return t.is_framed() ? collapse_framed_edge(t, vertex, coefficient)
                       : collapse_twisted_edge(t, vertex, coefficient, strict);
}

// ---------------------------------------------------------------------------

struct MonoizeResult {
  IntersectionForest forest;
  std::vector<CollapseStep> trace;
};

/// The label j a tree is collapsed onto: the smallest label of maximal multiplicity.
inline int mono_target(const DecoratedTree& t) {
  const TreeStats s = tree_stats(t);
  for (const auto& [l, r] : s.multiplicity)
    if (r == s.max_multiplicity) return l;
  return 0;
}

/// Collapses off-label edges, leftmost first, until every tree is mono-labelled.
inline MonoizeResult monoize_forest(const IntersectionForest& f, int k, bool strict = false) {
  if (k < 1) throw Error(ErrorCode::invalid_argument, "multiplicity bound k must be >= 1");
  for (const auto& [t, c] : f.terms())
    if (tree_stats(t).max_multiplicity < k + 1)
      throw Error(ErrorCode::hypothesis_violation,
                  "tree " + t.str() + " has no label of multiplicity >= " + std::to_string(k + 1));
  MonoizeResult out{f, {}};
  for (;;) {
    std::optional<std::pair<DecoratedTree, Integer>> next;
    for (const auto& [t, c] : out.forest.terms())
      if (!tree_stats(t).mono_labeled) {
        next.emplace(t, c);
        break;
      }
    if (!next) break;
    const auto& [t, c] = *next;
    const int j = mono_target(t);
    const auto labels = t.leaf_labels();
    int vertex = 0;
    while (labels[static_cast<std::size_t>(vertex)] == j) ++vertex;
    CollapseStep step = collapse_edge(t, vertex, c, strict);
    out.forest.add(-c, t);
    for (const auto& [oc, ot] : step.output) out.forest.add(oc, ot);
    out.trace.push_back(std::move(step));
  }
  return out;
}

}  // namespace wtower
