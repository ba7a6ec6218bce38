#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "forest.hpp"
#include "lie.hpp"
#include "normal_form.hpp"
#include "tree.hpp"
#include "tree_groups.hpp"

namespace wtower {

/// How a branch is read off a trivalent vertex. planar: (parent, left, right)
/// as stored; mirrored: (parent, right, left). Mirroring multiplies eta_n by
/// (-1)^n, so every sign-robust quantity is convention independent.
enum class OrientationConvention { planar, mirrored };

inline OrientationConvention parse_convention(const std::string& s) {
  if (s == "planar") return OrientationConvention::planar;
  if (s == "mirrored") return OrientationConvention::mirrored;
  throw Error(ErrorCode::invalid_argument, "convention must be 'planar' or 'mirrored', got '" + s + "'");
}

/// sum over leaves v of X_{l(v)} (x) B_v(t), for a framed tree t.
inline TensorElement eta_framed_tree(const DecoratedTree& t, int m,
                                     OrientationConvention conv = OrientationConvention::planar) {
  TensorElement out(m, t.order() + 1);
  const TreeGraph g(t);
  const bool mirrored = conv == OrientationConvention::mirrored;
  for (int v : g.leaves()) {
    const int u = g.vertex(v).nbr[0];
    out.add(g.vertex(v).label, lie_from_tree(g.branch(v, u, mirrored), m));
  }
  return out;
}

/// eta of a single framed or twisted tree; J^inf maps to half of eta(<J,J>).
inline TensorElement eta_tree(const DecoratedTree& t, int m,
                              OrientationConvention conv = OrientationConvention::planar) {
  if (t.is_framed()) return eta_framed_tree(t, m, conv);
  if (!t.is_twisted()) throw Error(ErrorCode::invalid_argument, "eta is defined on framed and twisted trees");
  const TensorElement doubled = eta_framed_tree(DecoratedTree::framed(t.first(), t.first()), m, conv);
  TensorElement out(m, doubled.degree());
  for (const auto& [key, c] : doubled.coefficients()) {
    if (c % 2 != 0)
      throw Error(ErrorCode::odd_coefficient, "eta(<J,J>) has an odd coefficient for J = " + t.first().str());
    out.add(key.first, key.second, c / 2);
  }
  return out;
}

/// eta_n on a forest of order n framed trees and order n/2 twisted trees.
inline TensorElement eta(const IntersectionForest& f, int n,
                         OrientationConvention conv = OrientationConvention::planar) {
  if (n < 0) throw Error(ErrorCode::invalid_argument, "order must be >= 0");
  TensorElement out(f.m(), n + 1);
  for (const auto& [t, c] : f.terms()) {
    const bool ok = t.is_framed() ? t.order() == n : (n % 2 == 0 && 2 * t.order() == n);
    if (!ok)
      throw Error(ErrorCode::order_mismatch, "tree " + t.str() + " does not have order " + std::to_string(n) +
                                                 (t.is_twisted() ? " (twisted trees need order n/2)" : ""));
    out = out + c * eta_tree(t, f.m(), conv);
  }
  return out;
}

/// Drops trees of multiplicity > k.
inline IntersectionForest filter_multiplicity(const IntersectionForest& f, int k) {
  IntersectionForest out(f.m());
  for (const auto& [t, c] : f.terms())
    if (multiplicity(t) <= k) out.add(c, t);
  return out;
}

inline TensorElement eta_k(const IntersectionForest& f, int n, int k,
                           OrientationConvention conv = OrientationConvention::planar) {
  if (k < 1) throw Error(ErrorCode::invalid_argument, "multiplicity bound k must be >= 1");
  return k_project(eta(filter_multiplicity(f, k), n, conv), k);
}

/// mu_n (or mu_n^k) of a tower with intersection forest f: eta of the order n
/// part, which must lie in the (k-restricted) bracket kernel.
inline TensorElement milnor_from_forest(const IntersectionForest& f, int n, std::optional<int> k = std::nullopt,
                                        OrientationConvention conv = OrientationConvention::planar) {
  if (n < 0) throw Error(ErrorCode::invalid_argument, "order must be >= 0");
  if (k && *k < 1) throw Error(ErrorCode::invalid_argument, "multiplicity bound k must be >= 1");
  IntersectionForest selected(f.m());
  for (const auto& [t, c] : f.terms()) {
    if (k && multiplicity(t) > *k) continue;
    const int weight = t.is_framed() ? t.order() : 2 * t.order();
    if (weight < n)
      throw Error(ErrorCode::order_mismatch, "tree " + t.str() + " lies below order " + std::to_string(n));
    const bool exact = t.is_framed() ? t.order() == n : weight == n;
    if (exact) selected.add(c, t);
  }
  TensorElement mu = k ? eta_k(selected, n, *k, conv) : eta(selected, n, conv);
  LieElement b = bracket_map(mu);
  if (k) b = k_project(b, *k);
  if (!b.is_zero()) throw Error(ErrorCode::bracket_nonzero, "eta value is not in the bracket kernel: " + b.str());
  return mu;
}

// ---------------------------------------------------------------------------
// Kernel and cokernel of the induced map T_n^inf -> D_n

struct EtaKernel {
  int m = 0;
  int n = 0;
  std::optional<int> k;
  AbelianInvariants group;     // T_n^inf or T_n^{k,inf}
  std::size_t target_rank = 0; // rank of D_n or D_n^k
  AbelianInvariants kernel;
  AbelianInvariants cokernel;
  std::vector<IntVector> kernel_generators;  // over the group generators
  std::vector<IntersectionForest> kernel_forests;
  std::vector<Integer> kernel_orders;        // 0 = infinite order
};

namespace detail {

/// Rows: eta of each generator, in D-basis coordinates.
inline IntMatrix eta_matrix(const PresentedAbelianGroup& g, const BracketKernel& d, OrientationConvention conv) {
  EchelonLattice dlat;
  for (std::size_t r = 0; r < d.basis_rows.rows(); ++r) dlat.insert(to_sparse(d.basis_rows.row(r)));
  std::vector<SparseRow> dbasis = dlat.rows();
  if (dbasis.size() != d.rank()) throw std::logic_error("bracket kernel basis is not independent");
  IntMatrix e(0, d.rank());
  if (d.rank() == 0) e = IntMatrix(g.generators().size(), 0);
  for (const auto& t : g.generators()) {
    TensorElement x = eta_tree(t, g.m(), conv);
    if (g.k()) x = k_project(x, *g.k());
    auto coords = dlat.coordinates(to_sparse(tensor_coordinates(x, d.domain)));
    if (!coords) throw Error(ErrorCode::bracket_nonzero, "eta(" + t.str() + ") is not in the bracket kernel");
    if (d.rank() > 0) e.append_row(*coords);
  }
  return e;
}

}  // namespace detail

inline EtaKernel eta_kernel(int m, int n, std::optional<int> k = std::nullopt,
                            OrientationConvention conv = OrientationConvention::planar) {
  const PresentedAbelianGroup g = build_group(m, n, Flavor::twisted, k);
  const BracketKernel d = bracket_kernel(m, n, k);
  const IntMatrix e = detail::eta_matrix(g, d, conv);
  const std::size_t ng = g.generators().size();

  EtaKernel out;
  out.m = m;
  out.n = n;
  out.k = k;
  out.group = g.invariants();
  out.target_rank = d.rank();
  out.cokernel = cokernel_invariants(e, d.rank());

  // K0 = {x : x E = 0} contains the relation lattice; the kernel is K0 / Rel.
  EchelonLattice klat;
  const IntMatrix k0 = left_kernel(e);
  for (std::size_t r = 0; r < k0.rows(); ++r) klat.insert(to_sparse(k0.row(r)));
  const std::vector<SparseRow> kbasis = klat.rows();
  IntMatrix rel(0, kbasis.size());
  for (const auto& r : g.relation_rows()) {
    auto c = klat.coordinates(r);
    if (!c) throw std::logic_error("eta does not kill a relation row");
    if (!kbasis.empty()) rel.append_row(*c);
  }
  out.kernel = cokernel_invariants(rel, kbasis.size());

  // lift the cyclic summands of K0 / Rel back to generator coordinates
  const IntMatrix h = hermite_normal_form(rel);
  const SmithForm sf = smith_normal_form(h);
  for (std::size_t i = 0; i < kbasis.size(); ++i) {
    const Integer d_i = i < sf.rank ? sf.diagonal[i] : Integer(0);
    if (d_i == 1) continue;
    IntVector x(ng);
    for (std::size_t j = 0; j < kbasis.size(); ++j) {
      const Integer& c = sf.V_inv(i, j);
      if (c == 0) continue;
      for (const auto& [col, v] : kbasis[j]) x[col] += c * v;
    }
    IntersectionForest f(m);
    for (std::size_t col = 0; col < ng; ++col)
      if (x[col] != 0) f.add(x[col], g.generators()[col]);
    out.kernel_generators.push_back(std::move(x));
    out.kernel_forests.push_back(std::move(f));
    out.kernel_orders.push_back(d_i);
  }
  return out;
}

/// Whether the classes of `elements` generate the kernel of T_n^inf -> D_n.
inline bool kernel_generated_by(int m, int n, const std::vector<IntersectionForest>& elements,
                                std::optional<int> k = std::nullopt) {
  const PresentedAbelianGroup g = build_group(m, n, Flavor::twisted, k);
  const BracketKernel d = bracket_kernel(m, n, k);
  const IntMatrix e = detail::eta_matrix(g, d, OrientationConvention::planar);
  EchelonLattice span;
  for (const auto& r : g.relation_rows()) span.insert(r);
  for (const auto& f : elements) {
    const IntVector x = g.coordinates(f);
    const IntVector y = row_times(x, e);
    if (!std::all_of(y.begin(), y.end(), [](const Integer& v) { return v == 0; })) return false;
    span.insert(to_sparse(x));
  }
  const IntMatrix k0 = left_kernel(e);
  for (std::size_t r = 0; r < k0.rows(); ++r)
    if (!span.coordinates(to_sparse(k0.row(r)))) return false;
  return true;
}

// ---------------------------------------------------------------------------

struct ArfClass {
  Word word;
  std::string bracket;
  DecoratedTree representative;  // (J,J)^inf in T^inf_{4j-2}
};

/// Z/2 basis of Z_2 (x) L_j (or L_j^{floor(k/4)}) with inf-tree representatives.
inline std::vector<ArfClass> arf_classes(int m, int j, std::optional<int> k = std::nullopt) {
  if (j < 1) throw Error(ErrorCode::invalid_argument, "Arf classes need j >= 1");
  if (k && *k < 4) throw Error(ErrorCode::invalid_argument, "k-repeating Arf classes need k >= 4");
  std::vector<ArfClass> out;
  for (const auto& w : lyndon_basis(m, j)) {
    if (k && word_multiplicity(w) > *k / 4) continue;
    const RootedTree jt = standard_bracketing(w);
    const DecoratedTree rep = canonicalize(DecoratedTree::twisted(RootedTree::join(jt, jt))).tree;
    out.push_back({w, lyndon_bracket_string(w), rep});
  }
  return out;
}

}  // namespace wtower
