#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"
#include "integer.hpp"
#include "normal_form.hpp"
#include "tree.hpp"

namespace wtower {

/// Noncommutative monomial X_{w0} X_{w1} ... in letters 1..m.
using Word = std::vector<int>;

/// Element of the free associative algebra Z<X_1..X_m>.
using WordPoly = std::map<Word, Integer>;

inline std::string word_string(const Word& w) {
  std::string s;
  for (int l : w) s += (s.empty() ? "" : " ") + ("X" + std::to_string(l));
  return s.empty() ? "1" : s;
}

inline void add_scaled(WordPoly& acc, const WordPoly& p, const Integer& c) {
  if (c == 0) return;
  for (const auto& [w, v] : p) {
    auto [it, ins] = acc.try_emplace(w, 0);
    it->second += c * v;
    if (it->second == 0) acc.erase(it);
  }
}

inline WordPoly multiply(const WordPoly& a, const WordPoly& b) {
  WordPoly out;
  for (const auto& [wa, ca] : a)
    for (const auto& [wb, cb] : b) {
      Word w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      auto [it, ins] = out.try_emplace(std::move(w), 0);
      it->second += ca * cb;
      if (it->second == 0) out.erase(it);
    }
  return out;
}

/// ab - ba
inline WordPoly commutator(const WordPoly& a, const WordPoly& b) {
  WordPoly out = multiply(a, b);
  add_scaled(out, multiply(b, a), -1);
  return out;
}

/// Tensor-algebra expansion of a bracketing: leaf i -> X_i, (A,B) -> AB - BA.
inline WordPoly expand_bracketing(const RootedTree& t) {
  if (t.is_leaf()) return WordPoly{{Word{t.label()}, 1}};
  return commutator(expand_bracketing(t.left()), expand_bracketing(t.right()));
}

// ---------------------------------------------------------------------------
// Lyndon words

/// Strictly smaller than each of its proper rotations.
inline bool is_lyndon(const Word& w) {
  if (w.empty()) return false;
  const std::size_t n = w.size();
  for (std::size_t r = 1; r < n; ++r) {
    // compare w with its rotation by r
    for (std::size_t i = 0; i < n; ++i) {
      const int a = w[i], b = w[(i + r) % n];
      if (a < b) break;
      if (a > b) return false;
      if (i + 1 == n) return false;  // periodic
    }
  }
  return true;
}

/// All Lyndon words of length n over {1..m}, in lexicographic order (Duval).
inline std::vector<Word> lyndon_words(int m, int n) {
  std::vector<Word> out;
  if (m < 1 || n < 1) return out;
  Word w{1};
  for (;;) {
    if (static_cast<int>(w.size()) == n) out.push_back(w);
    // extend periodically to length n, then increment the last letter
    const std::size_t k = w.size();
    while (static_cast<int>(w.size()) < n) w.push_back(w[w.size() - k]);
    while (!w.empty() && w.back() == m) w.pop_back();
    if (w.empty()) break;
    ++w.back();
  }
  return out;
}

/// w = uv with v the longest proper Lyndon suffix.
inline std::pair<Word, Word> standard_factorization(const Word& w) {
  for (std::size_t i = 1; i < w.size(); ++i) {
    Word v(w.begin() + static_cast<std::ptrdiff_t>(i), w.end());
    if (is_lyndon(v)) return {Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i)), v};
  }
  return {w, {}};
}

/// Standard bracketing of a Lyndon word, as a rooted tree on letter labels.
inline RootedTree standard_bracketing(const Word& w) {
  if (w.size() == 1) return RootedTree::leaf(w[0]);
  auto [u, v] = standard_factorization(w);
  return RootedTree::join(standard_bracketing(u), standard_bracketing(v));
}

/// "x1", "[x1,[x1,x2]]"
inline std::string bracket_string(const RootedTree& t) {
  if (t.is_leaf()) return "x" + std::to_string(t.label());
  return "[" + bracket_string(t.left()) + "," + bracket_string(t.right()) + "]";
}

inline std::string lyndon_bracket_string(const Word& w) { return bracket_string(standard_bracketing(w)); }

namespace detail {

struct LieCache {
  std::mutex mutex;
  std::map<Word, WordPoly> expansions;
  std::map<std::pair<int, int>, std::vector<Word>> bases;
};

inline LieCache& lie_cache() {
  static LieCache cache;
  return cache;
}

}  // namespace detail

/// Tensor expansion of the standard bracketing of a Lyndon word. Its
/// lexicographically least monomial is the word itself, with coefficient 1.
inline WordPoly lyndon_expansion(const Word& w) {
  auto& cache = detail::lie_cache();
  {
    std::lock_guard lock(cache.mutex);
    if (auto it = cache.expansions.find(w); it != cache.expansions.end()) return it->second;
  }
  WordPoly p = expand_bracketing(standard_bracketing(w));
  std::lock_guard lock(cache.mutex);
  cache.expansions.emplace(w, p);
  return p;
}

/// Basis of L_n(m): standard bracketings of Lyndon words, lexicographic.
inline std::vector<Word> lyndon_basis(int m, int n) {
  if (m < 1 || n < 1) throw Error(ErrorCode::invalid_argument, "lyndon_basis needs m >= 1 and n >= 1");
  auto& cache = detail::lie_cache();
  std::lock_guard lock(cache.mutex);
  auto [it, inserted] = cache.bases.try_emplace({m, n});
  if (inserted) it->second = lyndon_words(m, n);
  return it->second;
}

/// Largest number of occurrences of a single letter.
inline int word_multiplicity(const Word& w, int extra_label = 0) {
  std::map<int, int> count;
  for (int l : w) ++count[l];
  if (extra_label > 0) ++count[extra_label];
  int mx = 0;
  for (const auto& [l, c] : count) mx = std::max(mx, c);
  return mx;
}

// ---------------------------------------------------------------------------

/// Homogeneous element of the free Lie algebra L(m) over Z, stored as
/// coefficients on the Lyndon basis of its degree.
class LieElement {
 public:
  using Coefficients = std::map<Word, Integer>;

  LieElement(int m, int degree) : m_(m), degree_(degree) {}

  static LieElement generator(int i, int m) {
    LieElement x(m, 1);
    x.add(Word{i}, 1);
    return x;
  }

  int m() const { return m_; }
  int degree() const { return degree_; }
  const Coefficients& coefficients() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  Integer coefficient(const Word& lyndon) const {
    auto it = coeffs_.find(lyndon);
    return it == coeffs_.end() ? Integer(0) : it->second;
  }

  /// Adds c times the basis element of a Lyndon word.
  void add(const Word& lyndon, const Integer& c) {
    if (c == 0) return;
    auto [it, ins] = coeffs_.try_emplace(lyndon, 0);
    it->second += c;
    if (it->second == 0) coeffs_.erase(it);
  }

  WordPoly expand() const {
    WordPoly p;
    for (const auto& [w, c] : coeffs_) add_scaled(p, lyndon_expansion(w), c);
    return p;
  }

  std::string str() const {
    if (coeffs_.empty()) return "0";
    std::string s;
    for (const auto& [w, c] : coeffs_) {
      if (!s.empty()) s += " + ";
      s += signed_string(c) + "*" + lyndon_bracket_string(w);
    }
    return s;
  }

  LieElement operator-() const {
    LieElement r = *this;
    for (auto& [w, c] : r.coeffs_) c = -c;
    return r;
  }

  friend LieElement operator+(LieElement a, const LieElement& b) {
    for (const auto& [w, c] : b.coeffs_) a.add(w, c);
    return a;
  }
  friend LieElement operator-(const LieElement& a, const LieElement& b) { return a + (-b); }
  friend LieElement operator*(const Integer& s, LieElement a) {
    if (s == 0) return LieElement(a.m_, a.degree_);
    for (auto& [w, c] : a.coeffs_) c *= s;
    return a;
  }

  friend bool operator==(const LieElement& a, const LieElement& b) {
    return a.m_ == b.m_ && a.degree_ == b.degree_ && a.coeffs_ == b.coeffs_;
  }

 private:
  int m_;
  int degree_;
  Coefficients coeffs_;
};

/// Rewrites a homogeneous degree-n tensor as a Lie element by triangular
/// elimination against Lyndon expansions. Throws not_primitive when the
/// tensor is not a Lie element.
inline LieElement tensor_to_lie(const WordPoly& t, int m, int degree) {
  LieElement out(m, degree);
  WordPoly rest;
  for (const auto& [w, c] : t) {
    if (c == 0) continue;
    if (static_cast<int>(w.size()) != degree)
      throw Error(ErrorCode::invalid_argument, "tensor is not homogeneous of degree " + std::to_string(degree));
    for (int l : w)
      if (l < 1 || l > m) throw Error(ErrorCode::label_out_of_range, "letter outside 1..m in tensor");
    rest.emplace(w, c);
  }
  while (!rest.empty()) {
    const Word w = rest.begin()->first;
    const Integer c = rest.begin()->second;
    if (!is_lyndon(w))
      throw Error(ErrorCode::not_primitive, "not a Lie element: leading monomial " + word_string(w) +
                                                " is not a Lyndon word");
    out.add(w, c);
    add_scaled(rest, lyndon_expansion(w), -c);
    if (rest.count(w)) throw std::logic_error("Lyndon expansion lost its leading monomial");
  }
  return out;
}

inline LieElement lie_from_tree(const RootedTree& t, int m) {
  return tensor_to_lie(expand_bracketing(t), m, t.leaf_count());
}

inline LieElement lie_bracket(const LieElement& a, const LieElement& b) {
  if (a.m() != b.m()) throw Error(ErrorCode::mismatched_index_count, "bracket of elements over different m");
  return tensor_to_lie(commutator(a.expand(), b.expand()), a.m(), a.degree() + b.degree());
}

inline LieElement k_project(const LieElement& x, int k) {
  if (k < 1) throw Error(ErrorCode::invalid_argument, "multiplicity bound k must be >= 1");
  LieElement out(x.m(), x.degree());
  for (const auto& [w, c] : x.coefficients())
    if (word_multiplicity(w) <= k) out.add(w, c);
  return out;
}

// ---------------------------------------------------------------------------

/// Element of L_1 (x) L_{d}, stored on pairs (root label i, Lyndon word of
/// length d); equivalently root-labelled trees modulo IHX and self-annihilation.
class TensorElement {
 public:
  using Key = std::pair<int, Word>;
  using Coefficients = std::map<Key, Integer>;

  /// degree is the degree of the Lie factor (n + 1 for order n).
  TensorElement(int m, int degree) : m_(m), degree_(degree) {}

  int m() const { return m_; }
  int degree() const { return degree_; }
  const Coefficients& coefficients() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  Integer coefficient(int i, const Word& lyndon) const {
    auto it = coeffs_.find({i, lyndon});
    return it == coeffs_.end() ? Integer(0) : it->second;
  }

  void add(int i, const Word& lyndon, const Integer& c) {
    if (c == 0) return;
    auto [it, ins] = coeffs_.try_emplace(Key{i, lyndon}, 0);
    it->second += c;
    if (it->second == 0) coeffs_.erase(it);
  }

  /// Adds c * X_i (x) x.
  void add(int i, const LieElement& x, const Integer& c = 1) {
    for (const auto& [w, v] : x.coefficients()) add(i, w, c * v);
  }

  /// The Lie factor attached to root label i.
  LieElement component(int i) const {
    LieElement x(m_, degree_);
    for (const auto& [key, c] : coeffs_)
      if (key.first == i) x.add(key.second, c);
    return x;
  }

  std::string str() const {
    if (coeffs_.empty()) return "0";
    std::string s;
    for (const auto& [key, c] : coeffs_) {
      if (!s.empty()) s += " + ";
      s += signed_string(c) + "*x" + std::to_string(key.first) + " (x) " + lyndon_bracket_string(key.second);
    }
    return s;
  }

  TensorElement operator-() const {
    TensorElement r = *this;
    for (auto& [k, c] : r.coeffs_) c = -c;
    return r;
  }
  friend TensorElement operator+(TensorElement a, const TensorElement& b) {
    for (const auto& [k, c] : b.coeffs_) a.add(k.first, k.second, c);
    return a;
  }
  friend TensorElement operator-(const TensorElement& a, const TensorElement& b) { return a + (-b); }
  friend TensorElement operator*(const Integer& s, TensorElement a) {
    if (s == 0) return TensorElement(a.m_, a.degree_);
    for (auto& [k, c] : a.coeffs_) c *= s;
    return a;
  }
  friend bool operator==(const TensorElement& a, const TensorElement& b) {
    return a.m_ == b.m_ && a.degree_ == b.degree_ && a.coeffs_ == b.coeffs_;
  }

 private:
  int m_;
  int degree_;
  Coefficients coeffs_;
};

/// Root label counts toward the multiplicity.
inline TensorElement k_project(const TensorElement& x, int k) {
  if (k < 1) throw Error(ErrorCode::invalid_argument, "multiplicity bound k must be >= 1");
  TensorElement out(x.m(), x.degree());
  for (const auto& [key, c] : x.coefficients())
    if (word_multiplicity(key.second, key.first) <= k) out.add(key.first, key.second, c);
  return out;
}

/// X_i (x) B  ->  [X_i, B]
inline LieElement bracket_map(const TensorElement& x) {
  WordPoly p;
  for (const auto& [key, c] : x.coefficients())
    add_scaled(p, commutator(WordPoly{{Word{key.first}, 1}}, lyndon_expansion(key.second)), c);
  return tensor_to_lie(p, x.m(), x.degree() + 1);
}

// ---------------------------------------------------------------------------
// The bracket kernel D_n

/// Ordered basis of (L_1 (x) L_{n+1})^k: pairs (i, Lyndon word of length n+1),
/// filtered to multiplicity <= k when k is given.
inline std::vector<TensorElement::Key> tensor_basis(int m, int n, std::optional<int> k = std::nullopt) {
  std::vector<TensorElement::Key> out;
  const auto words = lyndon_basis(m, n + 1);
  for (int i = 1; i <= m; ++i)
    for (const auto& w : words)
      if (!k || word_multiplicity(w, i) <= *k) out.emplace_back(i, w);
  return out;
}

/// Coordinates of x over `basis`; throws if x has support outside it.
inline IntVector tensor_coordinates(const TensorElement& x, const std::vector<TensorElement::Key>& basis) {
  IntVector v(basis.size());
  for (const auto& [key, c] : x.coefficients()) {
    auto it = std::lower_bound(basis.begin(), basis.end(), key);
    if (it == basis.end() || *it != key)
      throw Error(ErrorCode::invalid_argument, "tensor has support outside the requested basis");
    v[static_cast<std::size_t>(it - basis.begin())] = c;
  }
  return v;
}

inline TensorElement tensor_from_coordinates(std::span<const Integer> v, const std::vector<TensorElement::Key>& basis,
                                             int m, int degree) {
  TensorElement x(m, degree);
  for (std::size_t j = 0; j < basis.size(); ++j) x.add(basis[j].first, basis[j].second, v[j]);
  return x;
}

struct BracketKernel {
  int m = 0;
  int n = 0;
  std::optional<int> k;
  std::vector<TensorElement::Key> domain;  // basis of (L_1 (x) L_{n+1})^k
  std::vector<Word> target;                // Lyndon basis of L_{n+2}, k-filtered
  IntMatrix bracket_matrix;                // domain x target
  IntMatrix basis_rows;                    // D_n basis over `domain`, Hermite normal form
  std::vector<TensorElement> basis;
  AbelianInvariants cokernel;              // of the bracket map onto L^k_{n+2}

  std::size_t rank() const { return basis.size(); }
};

inline BracketKernel bracket_kernel(int m, int n, std::optional<int> k = std::nullopt) {
  if (m < 1 || n < 0) throw Error(ErrorCode::invalid_argument, "bracket_kernel needs m >= 1, n >= 0");
  if (k && *k < 1) throw Error(ErrorCode::invalid_argument, "multiplicity bound k must be >= 1");
  BracketKernel bk;
  bk.m = m;
  bk.n = n;
  bk.k = k;
  bk.domain = tensor_basis(m, n, k);
  for (const auto& w : lyndon_basis(m, n + 2))
    if (!k || word_multiplicity(w) <= *k) bk.target.push_back(w);
  bk.bracket_matrix = IntMatrix(bk.domain.size(), bk.target.size());
  for (std::size_t r = 0; r < bk.domain.size(); ++r) {
    TensorElement x(m, n + 1);
    x.add(bk.domain[r].first, bk.domain[r].second, 1);
    LieElement y = bracket_map(x);
    for (const auto& [w, c] : y.coefficients()) {
      auto it = std::lower_bound(bk.target.begin(), bk.target.end(), w);
      if (it == bk.target.end() || *it != w) throw std::logic_error("bracket left the k-repeating target");
      bk.bracket_matrix(r, static_cast<std::size_t>(it - bk.target.begin())) = c;
    }
  }
  bk.basis_rows = left_kernel(bk.bracket_matrix);
  for (std::size_t r = 0; r < bk.basis_rows.rows(); ++r)
    bk.basis.push_back(tensor_from_coordinates(bk.basis_rows.row(r), bk.domain, m, n + 1));
  bk.cokernel = cokernel_invariants(bk.bracket_matrix, bk.target.size());
  return bk;
}

// ---------------------------------------------------------------------------
// Text forms: "[x1,[x1,x2]]", "2*x1 (x) [x2,x3] + -1*x2 (x) x1"

struct ParsedLieExpression {
  bool is_tensor = false;
  std::optional<LieElement> lie;
  std::optional<TensorElement> tensor;
};

namespace detail {

class LieParser {
 public:
  LieParser(std::string_view s, int m) : s_(s), m_(m) {}

  ParsedLieExpression parse() {
    skip();
    if (peek() == '0') {
      std::size_t save = pos_;
      ++pos_;
      skip();
      if (at_end()) fail("the zero expression has no degree; write a nonzero element");
      pos_ = save;
    }
    struct Term {
      Integer c;
      std::optional<int> root;
      RootedTree body;
    };
    std::vector<Term> terms;
    for (;;) {
      Integer c = 1;
      skip();
      if (peek() == '+' || peek() == '-' || std::isdigit(static_cast<unsigned char>(peek()))) {
        c = parse_int();
        expect('*');
      }
      RootedTree first = parse_bracket();
      skip();
      std::optional<int> root;
      if (s_.substr(pos_, 3) == "(x)") {
        if (!first.is_leaf()) fail("the left tensor factor must be a generator x_i");
        pos_ += 3;
        root = first.label();
        first = parse_bracket();
      }
      terms.push_back({c, root, first});
      skip();
      if (at_end()) break;
      expect('+');
    }
    const bool tensor = terms.front().root.has_value();
    const int degree = terms.front().body.leaf_count();
    ParsedLieExpression out;
    out.is_tensor = tensor;
    if (tensor)
      out.tensor.emplace(m_, degree);
    else
      out.lie.emplace(m_, degree);
    for (const auto& t : terms) {
      if (t.root.has_value() != tensor) fail("mixed Lie and tensor terms", ErrorCode::invalid_argument);
      if (t.body.leaf_count() != degree) fail("terms of different degrees", ErrorCode::invalid_argument);
      LieElement x = lie_from_tree(t.body, m_);
      if (tensor)
        out.tensor->add(*t.root, x, t.c);
      else
        *out.lie = *out.lie + t.c * x;
    }
    return out;
  }

 private:
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }
  void skip() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg, ErrorCode code = ErrorCode::syntax) const {
    throw ParseError(code, msg, pos_);
  }
  void expect(char c) {
    skip();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  Integer parse_int() {
    skip();
    bool neg = false;
    if (peek() == '+' || peek() == '-') {
      neg = peek() == '-';
      ++pos_;
      skip();
    }
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected integer");
    std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    Integer v(std::string(s_.substr(start, pos_ - start)));
    return neg ? Integer(-v) : v;
  }
  RootedTree parse_bracket() {
    skip();
    if (peek() == '[') {
      ++pos_;
      RootedTree a = parse_bracket();
      expect(',');
      RootedTree b = parse_bracket();
      expect(']');
      return RootedTree::join(a, b);
    }
    if (peek() != 'x' && peek() != 'X') fail("expected generator x<i> or '['");
    ++pos_;
    std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_ || pos_ - start > 9) fail("expected generator index");
    const int i = std::stoi(std::string(s_.substr(start, pos_ - start)));
    if (i < 1 || i > m_) {
      pos_ = start;
      fail("generator index outside 1.." + std::to_string(m_), ErrorCode::label_out_of_range);
    }
    return RootedTree::leaf(i);
  }

  std::string_view s_;
  int m_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a Lie element or a tensor in L_1 (x) L_d and reduces it to the Lyndon basis.
inline ParsedLieExpression parse_lie_expression(std::string_view text, int m) {
  return detail::LieParser(text, m).parse();
}

}  // namespace wtower
