#pragma once

#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"
#include "integer.hpp"
#include "tree.hpp"

namespace wtower {

/// Integer combination of canonical framed and twisted trees over the index
/// set {1..m}. Equal trees are merged and zero coefficients dropped, so two
/// forests are equal iff they compare equal term by term.
class IntersectionForest {
 public:
  using Terms = std::map<DecoratedTree, Integer>;

  explicit IntersectionForest(int m) : m_(m) {
    if (m < 1) throw Error(ErrorCode::invalid_argument, "index count m must be >= 1");
  }

  int m() const { return m_; }
  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Adds coefficient * tree. The tree is canonicalised here: framed trees
  /// absorb the orientation sign, twisted trees ignore it.
  void add(const Integer& coefficient, const DecoratedTree& tree) {
    if (tree.kind() == TreeKind::rooted)
      throw Error(ErrorCode::invalid_argument, "forests hold framed and twisted trees only");
    for (int l : tree.leaf_labels())
      if (l > m_)
        throw Error(ErrorCode::label_out_of_range,
                    "label " + std::to_string(l) + " exceeds m = " + std::to_string(m_));
    if (coefficient == 0) return;
    CanonicalTree c = canonicalize(tree);
    Integer delta = tree.is_framed() ? Integer(coefficient * c.sign) : coefficient;
    auto [it, inserted] = terms_.try_emplace(c.tree, 0);
    it->second += delta;
    if (it->second == 0) terms_.erase(it);
  }

  Integer coefficient(const DecoratedTree& tree) const {
    CanonicalTree c = canonicalize(tree);
    auto it = terms_.find(c.tree);
    if (it == terms_.end()) return 0;
    return tree.is_framed() ? Integer(it->second * c.sign) : it->second;
  }

  friend bool operator==(const IntersectionForest& a, const IntersectionForest& b) {
    return a.m_ == b.m_ && a.terms_ == b.terms_;
  }

 private:
  int m_;
  Terms terms_;
};

inline IntersectionForest forest_add(const IntersectionForest& a, const IntersectionForest& b) {
  if (a.m() != b.m())
    throw Error(ErrorCode::mismatched_index_count, "cannot add forests over different index counts");
  IntersectionForest out = a;
  for (const auto& [t, c] : b.terms()) out.add(c, t);
  return out;
}

inline IntersectionForest operator+(const IntersectionForest& a, const IntersectionForest& b) {
  return forest_add(a, b);
}

inline std::string term_string(const Integer& c, const DecoratedTree& t) {
  return signed_string(c) + "*" + t.str();
}

/// Canonical print: "0" for the empty forest, else terms joined by " + ".
inline std::string print_forest(const IntersectionForest& f) {
  if (f.empty()) return "0";
  std::string out;
  for (const auto& [t, c] : f.terms()) {
    if (!out.empty()) out += " + ";
    out += term_string(c, t);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

class ForestParser {
 public:
  ForestParser(std::string_view text, int m) : s_(text), m_(m) {}

  IntersectionForest parse_forest() {
    IntersectionForest f(m_);
    skip();
    if (peek() == '0') {
      // "0" alone is the empty forest; "0*..." is an ordinary term
      std::size_t save = pos_;
      ++pos_;
      skip();
      if (at_end()) return f;
      pos_ = save;
    }
    for (;;) {
      auto [c, t] = parse_term();
      f.add(c, t);
      skip();
      if (at_end()) break;
      expect('+');
    }
    return f;
  }

  DecoratedTree parse_single_tree() {
    skip();
    DecoratedTree t = parse_tree();
    skip();
    if (!at_end()) fail("unexpected trailing input");
    return t;
  }

  std::pair<Integer, DecoratedTree> parse_single_term() {
    skip();
    auto term = parse_term();
    skip();
    if (!at_end()) fail("unexpected trailing input");
    return term;
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
  bool lookahead_inf() const { return s_.substr(pos_, 4) == "^inf"; }
  bool lookahead_word_inf() const { return s_.substr(pos_, 3) == "inf"; }

  Integer parse_int() {
    skip();
    bool neg = false;
    if (peek() == '+' || peek() == '-') {
      neg = peek() == '-';
      ++pos_;
      skip();
    }
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected integer coefficient");
    std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    Integer v(std::string(s_.substr(start, pos_ - start)));
    return neg ? Integer(-v) : v;
  }

  std::pair<Integer, DecoratedTree> parse_term() {
    Integer c = parse_int();
    expect('*');
    skip();
    return {c, parse_tree()};
  }

  DecoratedTree parse_tree() {
    skip();
    if (peek() == '<') {
      ++pos_;
      RootedTree a = parse_rooted();
      expect(',');
      RootedTree b = parse_rooted();
      expect('>');
      skip();
      if (lookahead_inf()) fail("twist symbol on a framed tree", ErrorCode::malformed_twisted);
      return DecoratedTree::framed(a, b);
    }
    RootedTree j = parse_rooted();
    skip();
    if (!lookahead_inf()) fail("expected '^inf' after a rooted tree (bare rooted trees are not forest terms)");
    pos_ += 4;
    return DecoratedTree::twisted(j);
  }

  RootedTree parse_rooted() {
    skip();
    if (lookahead_word_inf()) fail("twist symbol in a non-root position", ErrorCode::malformed_twisted);
    if (peek() == '(') {
      ++pos_;
      RootedTree a = parse_child();
      expect(',');
      RootedTree b = parse_child();
      expect(')');
      return RootedTree::join(a, b);
    }
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a label or '('");
    std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    const std::string digits(s_.substr(start, pos_ - start));
    if (digits.size() > 9) {
      pos_ = start;
      fail("label too large", ErrorCode::label_out_of_range);
    }
    const int label = std::stoi(digits);
    if (label < 1 || label > m_) {
      pos_ = start;
      fail("label " + digits + " outside 1.." + std::to_string(m_), ErrorCode::label_out_of_range);
    }
    return RootedTree::leaf(label);
  }

  RootedTree parse_child() {
    RootedTree t = parse_rooted();
    skip();
    if (lookahead_inf()) fail("twist symbol in a non-root position", ErrorCode::malformed_twisted);
    return t;
  }

  std::string_view s_;
  int m_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses the forest grammar, e.g. "+1*<(1,2),3> + -2*((1,2),2)^inf", and
/// returns the canonical forest.
inline IntersectionForest parse_forest(std::string_view text, int m) {
  return detail::ForestParser(text, m).parse_forest();
}

/// Parses one tree ("<1,2>" or "(1,2)^inf") without canonicalising it.
inline DecoratedTree parse_tree(std::string_view text, int m) {
  return detail::ForestParser(text, m).parse_single_tree();
}

/// Parses one term "c*tree" without canonicalising the tree.
inline std::pair<Integer, DecoratedTree> parse_term(std::string_view text, int m) {
  return detail::ForestParser(text, m).parse_single_term();
}

}  // namespace wtower
