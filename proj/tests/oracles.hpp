#pragma once

// Deliberately naive reference computations. Nothing in here calls the
// library's normal forms, graph views or Lie reduction.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include <wtower/wtower.hpp>

namespace oracle {

using wtower::Integer;
using Matrix = std::vector<std::vector<Integer>>;

inline int mobius(int n) {
  int result = 1;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    result = -result;
  }
  return n > 1 ? -result : result;
}

/// (1/n) sum_{d|n} mu(d) m^{n/d}
inline long long witt(int m, int n) {
  long long s = 0;
  for (int d = 1; d <= n; ++d) {
    if (n % d) continue;
    long long p = 1;
    for (int i = 0; i < n / d; ++i) p *= m;
    s += mobius(d) * p;
  }
  return s / n;
}

/// Rank over Q by fraction-free (Bareiss) elimination.
inline std::size_t rational_rank(Matrix a) {
  const std::size_t rows = a.size();
  if (rows == 0) return 0;
  const std::size_t cols = a[0].size();
  std::size_t r = 0;
  Integer prev = 1;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev;
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  return r;
}

/// Invariant factors by plain gcd elimination, no transforms kept.
/// Returns (nonzero diagonal in divisibility order, rank).
inline std::vector<Integer> invariant_factors(Matrix a) {
  std::vector<Integer> diag;
  std::size_t t = 0;
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  while (t < rows && t < cols) {
    // find any nonzero in the trailing block
    std::size_t pi = rows, pj = cols;
    for (std::size_t i = t; i < rows && pi == rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (a[i][j] != 0) {
          pi = i;
          pj = j;
          break;
        }
    if (pi == rows) break;
    std::swap(a[t], a[pi]);
    for (auto& row : a) std::swap(row[t], row[pj]);
    bool done = false;
    while (!done) {
      done = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        while (a[i][t] != 0) {
          const Integer q = a[i][t] / a[t][t];
          for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
          if (a[i][t] != 0) std::swap(a[i], a[t]);
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        while (a[t][j] != 0) {
          const Integer q = a[t][j] / a[t][t];
          for (std::size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
          if (a[t][j] != 0)
            for (auto& row : a) std::swap(row[t], row[j]);
          done = false;
        }
      }
    }
    diag.push_back(a[t][t] < 0 ? Integer(-a[t][t]) : a[t][t]);
    ++t;
  }
  // diagonal to invariant factors: repeated gcd/lcm sweeps
  for (std::size_t i = 0; i < diag.size(); ++i)
    for (std::size_t j = i + 1; j < diag.size(); ++j) {
      const Integer g = boost::multiprecision::gcd(diag[i], diag[j]);
      const Integer l = diag[i] / g * diag[j];
      diag[i] = g;
      diag[j] = l;
    }
  return diag;
}

/// Free rank and torsion of Z^cols / rowspan(a).
inline wtower::AbelianInvariants cokernel(const Matrix& a, std::size_t cols) {
  const auto d = invariant_factors(a);
  wtower::AbelianInvariants inv;
  inv.free_rank = cols - d.size();
  for (const auto& x : d)
    if (x != 1) inv.torsion.push_back(x);
  return inv;
}

/// gcd of all k x k minors, for tiny matrices.
inline Integer determinantal_divisor(const Matrix& a, std::size_t k) {
  const std::size_t rows = a.size(), cols = a.empty() ? 0 : a[0].size();
  Integer g = 0;
  std::vector<std::size_t> ri(k), ci(k);
  std::function<Integer(std::vector<std::vector<Integer>>)> det = [&](std::vector<std::vector<Integer>> m) -> Integer {
    const std::size_t n = m.size();
    if (n == 1) return m[0][0];
    Integer s = 0;
    for (std::size_t c = 0; c < n; ++c) {
      std::vector<std::vector<Integer>> sub;
      for (std::size_t r = 1; r < n; ++r) {
        std::vector<Integer> row;
        for (std::size_t j = 0; j < n; ++j)
          if (j != c) row.push_back(m[r][j]);
        sub.push_back(row);
      }
      const Integer term = m[0][c] * det(sub);
      s += (c % 2 == 0) ? term : Integer(-term);
    }
    return s;
  };
  std::function<void(std::size_t, std::size_t)> pick_cols;
  std::function<void(std::size_t, std::size_t)> pick_rows = [&](std::size_t idx, std::size_t from) {
    if (idx == k) {
      pick_cols(0, 0);
      return;
    }
    for (std::size_t r = from; r < rows; ++r) {
      ri[idx] = r;
      pick_rows(idx + 1, r + 1);
    }
  };
  pick_cols = [&](std::size_t idx, std::size_t from) {
    if (idx == k) {
      std::vector<std::vector<Integer>> m(k, std::vector<Integer>(k));
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) m[i][j] = a[ri[i]][ci[j]];
      g = boost::multiprecision::gcd(g, det(m));
      return;
    }
    for (std::size_t c = from; c < cols; ++c) {
      ci[idx] = c;
      pick_cols(idx + 1, c + 1);
    }
  };
  pick_rows(0, 0);
  return g < 0 ? Integer(-g) : g;
}

inline Matrix to_rows(const wtower::IntMatrix& m) {
  Matrix a(m.rows(), std::vector<Integer>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = m(i, j);
  return a;
}

// ---------------------------------------------------------------------------
// Trees

using wtower::DecoratedTree;
using wtower::RootedTree;

/// Branch B_v of a framed tree <a,b> by recursive re-rooting of the
/// bracketing: entering (L,R) from L leaves (R, outside); from R leaves
/// (outside, L).
inline void rooted_views(const RootedTree& t, const RootedTree& outside,
                         std::vector<std::pair<int, RootedTree>>& out) {
  if (t.is_leaf()) {
    out.emplace_back(t.label(), outside);
    return;
  }
  rooted_views(t.left(), RootedTree::join(t.right(), outside), out);
  rooted_views(t.right(), RootedTree::join(outside, t.left()), out);
}

inline std::vector<std::pair<int, RootedTree>> leaf_views(const DecoratedTree& t) {
  std::vector<std::pair<int, RootedTree>> out;
  rooted_views(t.first(), t.second(), out);
  rooted_views(t.second(), t.first(), out);
  return out;
}

/// Expands a rooted tree in the free associative algebra, words as vectors.
inline std::map<std::vector<int>, Integer> expand(const RootedTree& t) {
  if (t.is_leaf()) return {{{t.label()}, 1}};
  const auto a = expand(t.left()), b = expand(t.right());
  std::map<std::vector<int>, Integer> out;
  for (const auto& [u, x] : a)
    for (const auto& [v, y] : b) {
      std::vector<int> uv = u, vu = v;
      uv.insert(uv.end(), v.begin(), v.end());
      vu.insert(vu.end(), u.begin(), u.end());
      out[uv] += x * y;
      out[vu] -= x * y;
    }
  std::erase_if(out, [](const auto& e) { return e.second == 0; });
  return out;
}

/// eta of a framed tree as a map (root label, word) -> coefficient, computed
/// from leaf_views and tensor expansion only.
inline std::map<std::pair<int, std::vector<int>>, Integer> eta_words(const DecoratedTree& t) {
  std::map<std::pair<int, std::vector<int>>, Integer> out;
  for (const auto& [label, b] : leaf_views(t))
    for (const auto& [w, c] : expand(b)) out[{label, w}] += c;
  std::erase_if(out, [](const auto& e) { return e.second == 0; });
  return out;
}

/// Flip the children of the i-th trivalent vertex (preorder).
inline RootedTree flip_at(const RootedTree& t, int& counter, int target) {
  if (t.is_leaf()) return t;
  const bool here = counter++ == target;
  RootedTree l = flip_at(t.left(), counter, target);
  RootedTree r = flip_at(t.right(), counter, target);
  return here ? RootedTree::join(r, l) : RootedTree::join(l, r);
}

/// All (tree, sign) presentations reachable from a framed tree by vertex
/// swaps (sign -1 each), swapping the halves, and moving the splitting
/// edge: <(A,B),C> = <A,(B,C)>.
inline std::map<std::pair<std::string, std::string>, std::set<int>> framed_orbit(const DecoratedTree& t) {
  using Key = std::pair<std::string, std::string>;
  std::map<Key, std::set<int>> seen;
  std::vector<std::pair<DecoratedTree, int>> todo{{t, 1}};
  while (!todo.empty()) {
    auto [cur, s] = todo.back();
    todo.pop_back();
    Key key{cur.first().str(), cur.second().str()};
    if (!seen[key].insert(s).second) continue;
    const RootedTree a = cur.first(), b = cur.second();
    todo.emplace_back(DecoratedTree::framed(b, a), s);
    const int va = a.order(), vb = b.order();
    for (int i = 0; i < va; ++i) {
      int c = 0;
      todo.emplace_back(DecoratedTree::framed(flip_at(a, c, i), b), -s);
    }
    for (int i = 0; i < vb; ++i) {
      int c = 0;
      todo.emplace_back(DecoratedTree::framed(a, flip_at(b, c, i)), -s);
    }
    if (!a.is_leaf()) todo.emplace_back(DecoratedTree::framed(a.left(), RootedTree::join(a.right(), b)), s);
  }
  return seen;
}

/// All labelled bracketings of the given order on labels 1..m (no symmetry reduction).
inline std::vector<RootedTree> all_rooted(int m, int order) {
  std::vector<RootedTree> out;
  if (order == 0) {
    for (int i = 1; i <= m; ++i) out.push_back(RootedTree::leaf(i));
    return out;
  }
  for (int a = 0; a < order; ++a)
    for (const auto& l : all_rooted(m, a))
      for (const auto& r : all_rooted(m, order - 1 - a)) out.push_back(RootedTree::join(l, r));
  return out;
}

/// Dense truncated Magnus product, words of length <= n.
inline std::map<std::vector<int>, Integer> magnus(const std::vector<int>& word, int n) {
  std::map<std::vector<int>, Integer> acc{{{}, 1}};
  for (int letter : word) {
    const int i = std::abs(letter);
    std::map<std::vector<int>, Integer> factor{{{}, 1}};
    std::vector<int> w;
    for (int d = 1; d <= n; ++d) {
      w.push_back(i);
      if (letter > 0) {
        if (d == 1) factor[w] = 1;
      } else {
        factor[w] = (d % 2 == 0) ? 1 : -1;
      }
    }
    std::map<std::vector<int>, Integer> next;
    for (const auto& [u, x] : acc)
      for (const auto& [v, y] : factor) {
        if (u.size() + v.size() > static_cast<std::size_t>(n)) continue;
        std::vector<int> uv = u;
        uv.insert(uv.end(), v.begin(), v.end());
        next[uv] += x * y;
      }
    std::erase_if(next, [](const auto& e) { return e.second == 0; });
    acc = std::move(next);
  }
  return acc;
}

}  // namespace oracle
