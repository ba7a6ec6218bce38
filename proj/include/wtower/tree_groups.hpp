#pragma once

#include <algorithm>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "error.hpp"
#include "forest.hpp"
#include "integer.hpp"
#include "normal_form.hpp"
#include "tree.hpp"

namespace wtower {

enum class Flavor { framed, twisted };

inline std::string flavor_name(Flavor f) { return f == Flavor::framed ? "framed" : "twisted"; }

inline Flavor parse_flavor(const std::string& s) {
  if (s == "framed") return Flavor::framed;
  if (s == "twisted") return Flavor::twisted;
  throw Error(ErrorCode::invalid_argument, "flavor must be 'framed' or 'twisted', got '" + s + "'");
}

/// Maximum multiplicity r(t), with the doubling rule for twisted trees.
inline int multiplicity(const DecoratedTree& t) { return tree_stats(t).max_multiplicity; }

// ---------------------------------------------------------------------------
// Enumeration

namespace detail {

struct RootedCache {
  std::mutex mutex;
  std::map<std::pair<int, int>, std::vector<RootedTree>> trees;
};

inline RootedCache& rooted_cache() {
  static RootedCache c;
  return c;
}

}  // namespace detail

/// All AS-canonical rooted trees of the given order on labels 1..m, sorted.
inline std::vector<RootedTree> canonical_rooted_trees(int m, int order) {
  if (order < 0) return {};
  auto& cache = detail::rooted_cache();
  {
    std::lock_guard lock(cache.mutex);
    if (auto it = cache.trees.find({m, order}); it != cache.trees.end()) return it->second;
  }
  std::vector<RootedTree> out;
  if (order == 0) {
    for (int i = 1; i <= m; ++i) out.push_back(RootedTree::leaf(i));
  } else {
    for (int a = 0; a <= order - 1; ++a) {
      const int b = order - 1 - a;
      if (a < b) continue;  // canonical left child never has smaller order
      const auto left = canonical_rooted_trees(m, a);
      const auto right = canonical_rooted_trees(m, b);
      for (const auto& l : left)
        for (const auto& r : right)
          if (compare(l, r) <= 0) out.push_back(RootedTree::join(l, r));
    }
    std::sort(out.begin(), out.end());
  }
  std::lock_guard lock(cache.mutex);
  cache.trees.emplace(std::pair{m, order}, out);
  return out;
}

/// Canonical framed trees of order n, sorted.
inline std::vector<DecoratedTree> canonical_framed_trees(int m, int n) {
  std::set<DecoratedTree> seen;
  for (int a = 0; a <= n; ++a) {
    const int b = n - a;
    if (a < b) continue;
    for (const auto& l : canonical_rooted_trees(m, a))
      for (const auto& r : canonical_rooted_trees(m, b)) seen.insert(canonicalize(DecoratedTree::framed(l, r)).tree);
  }
  return {seen.begin(), seen.end()};
}

/// Generators of T_n, T_n^inf or T_n^{k,inf}: framed trees of order n, then
/// (twisted, n even) the inf-trees of order n/2.
inline std::vector<DecoratedTree> enumerate_generators(int m, int n, Flavor flavor, std::optional<int> k = std::nullopt) {
  if (m < 1) throw Error(ErrorCode::invalid_argument, "index count m must be >= 1");
  if (n < 0) throw Error(ErrorCode::invalid_argument, "order must be >= 0");
  if (k && *k < 1) throw Error(ErrorCode::invalid_argument, "multiplicity bound k must be >= 1");
  std::vector<DecoratedTree> out;
  for (auto& t : canonical_framed_trees(m, n))
    if (!k || multiplicity(t) <= *k) out.push_back(t);
  if (flavor == Flavor::twisted && n % 2 == 0)
    for (const auto& j : canonical_rooted_trees(m, n / 2)) {
      auto t = DecoratedTree::twisted(j);
      if (!k || multiplicity(t) <= *k) out.push_back(t);
    }
  return out;
}

// ---------------------------------------------------------------------------
// Jacobi sites

/// One rooted IHX instance inside a tree: tree = sign * (a + b).
struct JacobiSite {
  int sign = 1;
  RootedTree a;
  RootedTree b;
};

/// Every way of applying ((x,y),z) = (x,(y,z)) + (y,(z,x)) at an internal edge.
inline std::vector<JacobiSite> jacobi_sites(const RootedTree& t) {
  std::vector<JacobiSite> out;
  if (t.is_leaf()) return out;
  const RootedTree l = t.left();
  const RootedTree r = t.right();
  if (!l.is_leaf()) {
    const RootedTree x = l.left(), y = l.right();
    out.push_back({1, RootedTree::join(x, RootedTree::join(y, r)), RootedTree::join(y, RootedTree::join(r, x))});
  }
  if (!r.is_leaf()) {
    // (l,(x,y)) = -((x,y),l)
    const RootedTree x = r.left(), y = r.right();
    out.push_back({-1, RootedTree::join(x, RootedTree::join(y, l)), RootedTree::join(y, RootedTree::join(l, x))});
  }
  for (const auto& s : jacobi_sites(l)) out.push_back({s.sign, RootedTree::join(s.a, r), RootedTree::join(s.b, r)});
  for (const auto& s : jacobi_sites(r)) out.push_back({s.sign, RootedTree::join(l, s.a), RootedTree::join(l, s.b)});
  return out;
}

// ---------------------------------------------------------------------------

/// Reduced form of a group element: y = x V, then y_i mod d_i on torsion
/// slots and y_i on free slots. Zero iff the element is trivial.
struct GroupElement {
  IntVector coordinates;  // over the generators
  IntVector reduced;      // torsion slots first, then free slots
  std::vector<Integer> orders;  // order of each reduced slot, 0 = infinite

  bool is_zero() const {
    return std::all_of(reduced.begin(), reduced.end(), [](const Integer& v) { return v == 0; });
  }
};

/// Z^generators / span(relations) with a cached Smith normal form.
class PresentedAbelianGroup {
 public:
  PresentedAbelianGroup(int m, int n, Flavor flavor, std::optional<int> k, std::vector<DecoratedTree> generators,
                        std::vector<SparseRow> relations)
      : m_(m), n_(n), flavor_(flavor), k_(k), generators_(std::move(generators)), relation_rows_(std::move(relations)) {
    for (std::size_t i = 0; i < generators_.size(); ++i) index_.emplace(generators_[i], i);
    relations_ = IntMatrix(0, generators_.size());
    for (const auto& r : relation_rows_) relations_.append_row(to_dense(r, generators_.size()));
    const IntMatrix h = hermite_normal_form(relation_rows_, generators_.size());
    smith_ = smith_normal_form(h);
    for (std::size_t i = 0; i < smith_.rank; ++i)
      if (smith_.diagonal[i] != 1) invariants_.torsion.push_back(smith_.diagonal[i]);
    invariants_.free_rank = generators_.size() - smith_.rank;
  }

  int m() const { return m_; }
  int order() const { return n_; }
  Flavor flavor() const { return flavor_; }
  std::optional<int> k() const { return k_; }
  const std::vector<DecoratedTree>& generators() const { return generators_; }
  const std::vector<SparseRow>& relation_rows() const { return relation_rows_; }
  const IntMatrix& relations() const { return relations_; }
  const SmithForm& smith() const { return smith_; }
  const AbelianInvariants& invariants() const { return invariants_; }

  std::optional<std::size_t> index_of(const DecoratedTree& canonical) const {
    auto it = index_.find(canonical);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// True if the tree has the generating shape: framed of order n or, for
  /// the twisted flavor with n even, twisted of order n/2; and r <= k.
  bool selects(const DecoratedTree& t) const {
    const bool shape = t.is_framed() ? t.order() == n_
                                     : (flavor_ == Flavor::twisted && n_ % 2 == 0 && t.is_twisted() &&
                                        2 * t.order() == n_);
    return shape && (!k_ || multiplicity(t) <= *k_);
  }

  /// Coordinates of the selected part of a forest. Other trees are dropped.
  IntVector coordinates(const IntersectionForest& f) const {
    if (f.m() != m_) throw Error(ErrorCode::mismatched_index_count, "forest and group use different m");
    IntVector x(generators_.size());
    for (const auto& [t, c] : f.terms()) {
      if (!selects(t)) continue;
      auto idx = index_of(t);
      if (!idx) throw Error(ErrorCode::generator_not_found, "tree " + t.str() + " is not a generator");
      x[*idx] += c;
    }
    return x;
  }

  GroupElement reduce(std::span<const Integer> x) const {
    GroupElement e;
    e.coordinates.assign(x.begin(), x.end());
    const IntVector y = row_times(x, smith_.V);
    for (std::size_t i = 0; i < smith_.rank; ++i)
      if (smith_.diagonal[i] != 1) {
        e.reduced.push_back(floor_mod(y[i], smith_.diagonal[i]));
        e.orders.push_back(smith_.diagonal[i]);
      }
    for (std::size_t i = smith_.rank; i < y.size(); ++i) {
      e.reduced.push_back(y[i]);
      e.orders.push_back(0);
    }
    return e;
  }

  GroupElement reduce(const IntersectionForest& f) const { return reduce(coordinates(f)); }

  /// The same group with generators listed in the order perm[0], perm[1], ...
  PresentedAbelianGroup permuted(const std::vector<std::size_t>& perm) const {
    std::vector<DecoratedTree> gens;
    std::vector<std::size_t> where(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
      gens.push_back(generators_[perm[i]]);
      where[perm[i]] = i;
    }
    std::vector<SparseRow> rows;
    for (const auto& r : relation_rows_) {
      SparseRow s;
      for (const auto& [j, v] : r) s.emplace_back(where[j], v);
      std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      rows.push_back(std::move(s));
    }
    return PresentedAbelianGroup(m_, n_, flavor_, k_, std::move(gens), std::move(rows));
  }

 private:
  int m_;
  int n_;
  Flavor flavor_;
  std::optional<int> k_;
  std::vector<DecoratedTree> generators_;
  std::map<DecoratedTree, std::size_t> index_;
  std::vector<SparseRow> relation_rows_;
  IntMatrix relations_;
  SmithForm smith_;
  AbelianInvariants invariants_;
};

// ---------------------------------------------------------------------------
// Relations

namespace detail {

/// Accumulates relation rows over a full generator list, then deduplicates.
class RelationBuilder {
 public:
  explicit RelationBuilder(const std::vector<DecoratedTree>& gens) {
    for (std::size_t i = 0; i < gens.size(); ++i) index_.emplace(gens[i], i);
  }

  class Row {
   public:
    explicit Row(const RelationBuilder& b) : b_(b) {}
    Row& add(const Integer& c, const DecoratedTree& t) {
      CanonicalTree ct = canonicalize(t);
      auto it = b_.index_.find(ct.tree);
      if (it == b_.index_.end()) throw std::logic_error("relation term " + t.str() + " is not a generator");
      const Integer v = t.is_framed() ? Integer(c * ct.sign) : c;
      entries_[it->second] += v;
      return *this;
    }
    SparseRow sparse() const {
      SparseRow r;
      for (const auto& [j, v] : entries_)
        if (v != 0) r.emplace_back(j, v);
      return r;
    }

   private:
    const RelationBuilder& b_;
    std::map<std::size_t, Integer> entries_;
  };

  Row row() const { return Row(*this); }

  void push(const Row& r) {
    SparseRow s = r.sparse();
    if (s.empty()) return;
    if (s.front().second.sign() < 0)
      for (auto& e : s) e.second = -e.second;
    if (seen_.insert(s).second) rows_.push_back(std::move(s));
  }

  const std::vector<SparseRow>& rows() const { return rows_; }

 private:
  std::map<DecoratedTree, std::size_t> index_;
  std::set<SparseRow> seen_;
  std::vector<SparseRow> rows_;
};

}  // namespace detail

/// All relation rows over the unfiltered generator list.
inline std::vector<SparseRow> relation_rows(int m, int n, Flavor flavor, const std::vector<DecoratedTree>& gens) {
  detail::RelationBuilder rb(gens);
  for (const auto& t : gens) {
    if (!t.is_framed()) continue;
    const CanonicalTree ct = canonicalize(t);
    // AS-fixed: 2t = 0
    if (ct.two_torsion) rb.push(rb.row().add(2, t));
    // IHX at every internal edge, presenting t as <leaf, R>
    const TreeGraph g(t);
    const int leaf = g.leaves().front();
    const int top = g.vertex(leaf).nbr[0];
    const RootedTree lt = RootedTree::leaf(g.vertex(leaf).label);
    const RootedTree r = g.branch(leaf, top);
    for (const auto& s : jacobi_sites(r)) {
      auto row = rb.row();
      row.add(1, DecoratedTree::framed(lt, r));
      row.add(-s.sign, DecoratedTree::framed(lt, s.a));
      row.add(-s.sign, DecoratedTree::framed(lt, s.b));
      rb.push(row);
    }
  }
  if (flavor == Flavor::twisted && n % 2 == 1) {
    // boundary twist: <i, (J,J)> = 0 for J of order (n-1)/2
    for (int i = 1; i <= m; ++i)
      for (const auto& j : canonical_rooted_trees(m, (n - 1) / 2))
        rb.push(rb.row().add(1, DecoratedTree::framed(RootedTree::leaf(i), RootedTree::join(j, j))));
  }
  if (flavor == Flavor::twisted && n % 2 == 0) {
    for (const auto& t : gens) {
      if (!t.is_twisted()) continue;
      const RootedTree& j = t.first();
      // interior twist: 2 J^inf = <J,J>
      rb.push(rb.row().add(2, t).add(-1, DecoratedTree::framed(j, j)));
      // twisted IHX: J = s(A + B) gives J^inf = A^inf + B^inf + <A,B>
      for (const auto& s : jacobi_sites(j)) {
        auto row = rb.row();
        row.add(1, t);
        row.add(-1, DecoratedTree::twisted(s.a));
        row.add(-1, DecoratedTree::twisted(s.b));
        row.add(-1, DecoratedTree::framed(s.a, s.b));
        rb.push(row);
      }
    }
  }
  return rb.rows();
}

/// Builds T_n (framed), T_n^inf (twisted) or, with k, T_n^{k,inf}.
inline PresentedAbelianGroup build_group(int m, int n, Flavor flavor, std::optional<int> k = std::nullopt) {
  const auto all = enumerate_generators(m, n, flavor);
  const auto rows = relation_rows(m, n, flavor, all);
  if (!k) return PresentedAbelianGroup(m, n, flavor, k, all, rows);

  // restrict to the multiplicity <= k summand; relations never mix the two sides
  std::vector<DecoratedTree> gens;
  std::vector<std::ptrdiff_t> new_index(all.size(), -1);
  for (std::size_t i = 0; i < all.size(); ++i)
    if (multiplicity(all[i]) <= *k) {
      new_index[i] = static_cast<std::ptrdiff_t>(gens.size());
      gens.push_back(all[i]);
    }
  std::vector<SparseRow> kept;
  for (const auto& r : rows) {
    std::size_t inside = 0;
    for (const auto& [j, v] : r) inside += new_index[j] >= 0;
    if (inside == 0) continue;
    if (inside != r.size()) throw std::logic_error("relation mixes multiplicity classes");
    SparseRow s;
    for (const auto& [j, v] : r) s.emplace_back(static_cast<std::size_t>(new_index[j]), v);
    kept.push_back(std::move(s));
  }
  return PresentedAbelianGroup(m, n, flavor, k, std::move(gens), std::move(kept));
}

inline AbelianInvariants group_invariants(const PresentedAbelianGroup& g) { return g.invariants(); }

inline GroupElement reduce_element(const IntersectionForest& f, const PresentedAbelianGroup& g) { return g.reduce(f); }

struct ObstructionResult {
  bool zero = true;
  GroupElement element;
};

/// Whether the order-n (k-repeating) intersection invariant of f vanishes.
inline ObstructionResult obstruction_is_zero(const IntersectionForest& f, int n, Flavor flavor,
                                             std::optional<int> k = std::nullopt) {
  const PresentedAbelianGroup g = build_group(f.m(), n, flavor, k);
  ObstructionResult r;
  r.element = g.reduce(f);
  r.zero = r.element.is_zero();
  return r;
}

}  // namespace wtower
