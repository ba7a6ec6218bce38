#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "integer.hpp"

namespace wtower {

using IntVector = std::vector<Integer>;

/// Dense row-major integer matrix.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Integer> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<Integer> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

  void append_row(std::span<const Integer> r) {
    if (rows_ == 0 && cols_ == 0) cols_ = r.size();
    data_.insert(data_.end(), r.begin(), r.end());
    ++rows_;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  // row[dst] += q * row[src]
  void add_row(std::size_t dst, std::size_t src, const Integer& q) {
    if (q == 0) return;
    for (std::size_t j = 0; j < cols_; ++j)
      if ((*this)(src, j) != 0) (*this)(dst, j) += q * (*this)(src, j);
  }
  // col[dst] += q * col[src]
  void add_col(std::size_t dst, std::size_t src, const Integer& q) {
    if (q == 0) return;
    for (std::size_t i = 0; i < rows_; ++i)
      if ((*this)(i, src) != 0) (*this)(i, dst) += q * (*this)(i, src);
  }
  void negate_row(std::size_t i) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Integer& x) { return x == 0; });
  }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

inline IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (b(k, j) != 0) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

inline IntVector row_times(std::span<const Integer> x, const IntMatrix& a) {
  IntVector y(a.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    if (x[k] == 0) continue;
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(k, j) != 0) y[j] += x[k] * a(k, j);
  }
  return y;
}

// ---------------------------------------------------------------------------
// Sparse rows and the echelon lattice

/// Sorted by column, no stored zeros.
using SparseRow = std::vector<std::pair<std::size_t, Integer>>;

inline SparseRow to_sparse(std::span<const Integer> dense) {
  SparseRow r;
  for (std::size_t j = 0; j < dense.size(); ++j)
    if (dense[j] != 0) r.emplace_back(j, dense[j]);
  return r;
}

inline IntVector to_dense(const SparseRow& row, std::size_t cols) {
  IntVector d(cols);
  for (const auto& [j, v] : row) d[j] = v;
  return d;
}

/// a*x + b*y
inline SparseRow combine(const Integer& a, const SparseRow& x, const Integer& b, const SparseRow& y) {
  SparseRow out;
  out.reserve(x.size() + y.size());
  auto ix = x.begin();
  auto iy = y.begin();
  while (ix != x.end() || iy != y.end()) {
    Integer v;
    std::size_t col;
    if (iy == y.end() || (ix != x.end() && ix->first < iy->first)) {
      col = ix->first;
      v = a * ix->second;
      ++ix;
    } else if (ix == x.end() || iy->first < ix->first) {
      col = iy->first;
      v = b * iy->second;
      ++iy;
    } else {
      col = ix->first;
      v = a * ix->second + b * iy->second;
      ++ix;
      ++iy;
    }
    if (v != 0) out.emplace_back(col, std::move(v));
  }
  return out;
}

/// Basis, in row echelon form with positive pivots, of the Z-span of all
/// inserted rows. Insertion runs extended-gcd steps against existing pivot
/// rows, so the span is preserved exactly.
class EchelonLattice {
 public:
  void insert(SparseRow row) {
    while (!row.empty()) {
      const std::size_t col = row.front().first;
      auto it = pivots_.find(col);
      if (it == pivots_.end()) {
        if (row.front().second.sign() < 0)
          for (auto& e : row) e.second = -e.second;
        pivots_.emplace(col, std::move(row));
        return;
      }
      SparseRow& pivot = it->second;
      const Integer a = pivot.front().second;
      const Integer b = row.front().second;
      if (b % a == 0) {
        row = combine(1, row, -(b / a), pivot);
        continue;
      }
      auto [g, s, t] = extended_gcd(a, b);
      SparseRow new_pivot = combine(s, pivot, t, row);
      row = combine(b / g, pivot, -(a / g), row);
      pivot = std::move(new_pivot);
    }
  }

  /// Brings entries above each pivot into [0, pivot): Hermite normal form.
  void reduce() {
    for (auto& [col, row] : pivots_) {
      for (auto jt = pivots_.upper_bound(col); jt != pivots_.end(); ++jt) {
        const std::size_t pc = jt->first;
        auto e = std::lower_bound(row.begin(), row.end(), pc,
                                  [](const auto& p, std::size_t c) { return p.first < c; });
        if (e == row.end() || e->first != pc) continue;
        const Integer q = floor_div(e->second, jt->second.front().second);
        if (q != 0) row = combine(1, row, -q, jt->second);
      }
    }
  }

  std::size_t rank() const { return pivots_.size(); }

  std::vector<SparseRow> rows() const {
    std::vector<SparseRow> out;
    out.reserve(pivots_.size());
    for (const auto& [c, r] : pivots_) out.push_back(r);
    return out;
  }

  std::vector<std::size_t> pivot_columns() const {
    std::vector<std::size_t> out;
    for (const auto& [c, r] : pivots_) out.push_back(c);
    return out;
  }

  /// Integer coordinates of `row` in the basis rows(), or nullopt if the row
  /// is not in the lattice.
  std::optional<IntVector> coordinates(SparseRow row) const {
    IntVector coords(pivots_.size());
    std::size_t idx = 0;
    auto it = pivots_.begin();
    while (!row.empty()) {
      const std::size_t col = row.front().first;
      while (it != pivots_.end() && it->first < col) {
        ++it;
        ++idx;
      }
      if (it == pivots_.end() || it->first != col) return std::nullopt;
      const Integer& p = it->second.front().second;
      if (row.front().second % p != 0) return std::nullopt;
      const Integer q = row.front().second / p;
      coords[idx] = q;
      row = combine(1, row, -q, it->second);
    }
    return coords;
  }

 private:
  std::map<std::size_t, SparseRow> pivots_;
};

/// Hermite normal form (row style) of the span of `rows`, width `cols`.
inline IntMatrix hermite_normal_form(const std::vector<SparseRow>& rows, std::size_t cols) {
  EchelonLattice lat;
  for (const auto& r : rows) lat.insert(r);
  lat.reduce();
  IntMatrix h(0, cols);
  for (const auto& r : lat.rows()) {
    IntVector d = to_dense(r, cols);
    h.append_row(d);
  }
  return h;
}

inline IntMatrix hermite_normal_form(const IntMatrix& a) {
  std::vector<SparseRow> rows;
  for (std::size_t i = 0; i < a.rows(); ++i) rows.push_back(to_sparse(a.row(i)));
  return hermite_normal_form(rows, a.cols());
}

/// Basis (HNF rows) of the left kernel {x : x*A = 0} of A.
inline IntMatrix left_kernel(const IntMatrix& a) {
  const std::size_t n = a.rows();
  const std::size_t c = a.cols();
  EchelonLattice lat;
  for (std::size_t i = 0; i < n; ++i) {
    SparseRow r = to_sparse(a.row(i));
    r.emplace_back(c + i, Integer(1));
    lat.insert(std::move(r));
  }
  lat.reduce();
  IntMatrix k(0, n);
  for (const auto& r : lat.rows()) {
    if (r.front().first < c) continue;
    IntVector d(n);
    for (const auto& [j, v] : r) d[j - c] = v;
    k.append_row(d);
  }
  return k;
}

inline std::size_t rank(const IntMatrix& a) {
  EchelonLattice lat;
  for (std::size_t i = 0; i < a.rows(); ++i) lat.insert(to_sparse(a.row(i)));
  return lat.rank();
}

// ---------------------------------------------------------------------------
// Smith normal form

/// U * A * V = diag(diagonal), U and V unimodular, V_inv = V^-1.
/// diagonal has min(rows, cols) entries; the first `rank` are positive and
/// each divides the next.
struct SmithForm {
  IntMatrix U;
  IntMatrix V;
  IntMatrix V_inv;
  std::vector<Integer> diagonal;
  std::size_t rank = 0;
};

inline SmithForm smith_normal_form(const IntMatrix& a) {
  const std::size_t r = a.rows();
  const std::size_t c = a.cols();
  SmithForm sf;
  IntMatrix d = a;
  sf.U = IntMatrix::identity(r);
  sf.V = IntMatrix::identity(c);
  sf.V_inv = IntMatrix::identity(c);

  auto row_add = [&](std::size_t dst, std::size_t src, const Integer& q) {
    d.add_row(dst, src, q);
    sf.U.add_row(dst, src, q);
  };
  auto row_swap = [&](std::size_t x, std::size_t y) {
    d.swap_rows(x, y);
    sf.U.swap_rows(x, y);
  };
  // col[dst] += q col[src]  <=>  V_inv row[src] -= q row[dst]
  auto col_add = [&](std::size_t dst, std::size_t src, const Integer& q) {
    d.add_col(dst, src, q);
    sf.V.add_col(dst, src, q);
    sf.V_inv.add_row(src, dst, -q);
  };
  auto col_swap = [&](std::size_t x, std::size_t y) {
    d.swap_cols(x, y);
    sf.V.swap_cols(x, y);
    sf.V_inv.swap_rows(x, y);
  };

  const std::size_t lim = std::min(r, c);
  std::size_t t = 0;
  for (; t < lim; ++t) {
    // smallest nonzero entry of the trailing block becomes the pivot
    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (std::size_t i = t; i < r; ++i)
      for (std::size_t j = t; j < c; ++j)
        if (d(i, j) != 0 && (!best || abs(d(i, j)) < abs(d(best->first, best->second)))) best = {i, j};
    if (!best) break;
    row_swap(t, best->first);
    col_swap(t, best->second);

    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < r; ++i) {
        if (d(i, t) == 0) continue;
        row_add(i, t, -(d(i, t) / d(t, t)));
        if (d(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < c; ++j) {
        if (d(t, j) == 0) continue;
        col_add(j, t, -(d(t, j) / d(t, t)));
        if (d(t, j) != 0) clean = false;
      }
      if (!clean) {
        // a remainder survived: move the smallest entry of row/col t to the pivot
        std::size_t bi = t, bj = t;
        for (std::size_t i = t + 1; i < r; ++i)
          if (d(i, t) != 0 && abs(d(i, t)) < abs(d(bi, bj))) bi = i, bj = t;
        for (std::size_t j = t + 1; j < c; ++j)
          if (d(t, j) != 0 && abs(d(t, j)) < abs(d(bi, bj))) bi = t, bj = j;
        row_swap(t, bi);
        col_swap(t, bj);
        continue;
      }
      // divisibility condition on the trailing block
      bool divisible = true;
      for (std::size_t i = t + 1; i < r && divisible; ++i)
        for (std::size_t j = t + 1; j < c; ++j)
          if (d(i, j) % d(t, t) != 0) {
            row_add(t, i, 1);
            divisible = false;
            break;
          }
      if (divisible) break;
    }
    if (d(t, t).sign() < 0) {
      d.negate_row(t);
      sf.U.negate_row(t);
    }
  }
  sf.rank = t;
  sf.diagonal.resize(lim);
  for (std::size_t i = 0; i < lim; ++i) sf.diagonal[i] = d(i, i);
  return sf;
}

// ---------------------------------------------------------------------------

/// Isomorphism type Z^free_rank + Z/t_1 + ... with t_i > 1, t_i | t_{i+1}.
struct AbelianInvariants {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;

  bool trivial() const { return free_rank == 0 && torsion.empty(); }

  std::string str() const {
    std::string s = "Z^" + std::to_string(free_rank);
    for (const auto& t : torsion) s += " + Z/" + t.str();
    return s;
  }

  friend bool operator==(const AbelianInvariants&, const AbelianInvariants&) = default;
};

/// Invariants of Z^generators / span(relations).
inline AbelianInvariants cokernel_invariants(const IntMatrix& relations, std::size_t generators) {
  AbelianInvariants inv;
  if (relations.rows() == 0) {
    inv.free_rank = generators;
    return inv;
  }
  const IntMatrix h = hermite_normal_form(relations);
  const SmithForm sf = smith_normal_form(h);
  for (std::size_t i = 0; i < sf.rank; ++i)
    if (sf.diagonal[i] != 1) inv.torsion.push_back(sf.diagonal[i]);
  inv.free_rank = generators - sf.rank;
  return inv;
}

}  // namespace wtower
