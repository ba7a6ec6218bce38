#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace wtower;

namespace {

DecoratedTree tree(const std::string& s, int m = 3) { return parse_tree(s, m); }

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::io;
}

}  // namespace

TEST(ParseForest, SingleGenerator) {
  const auto f = parse_forest("+1*<1,2>", 2);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f.coefficient(tree("<1,2>", 2)), 1);
}

TEST(ParseForest, Cancellation) { EXPECT_TRUE(parse_forest("+1*<1,2> + -1*<1,2>", 2).empty()); }

TEST(ParseForest, TwistedTerm) {
  const auto f = parse_forest("+2*((1,2),3)^inf", 3);
  ASSERT_EQ(f.size(), 1u);
  const auto& [t, c] = *f.terms().begin();
  EXPECT_TRUE(t.is_twisted());
  EXPECT_EQ(t.order(), 2);
  EXPECT_EQ(c, 2);
}

TEST(ParseForest, ZeroAndWhitespace) {
  EXPECT_TRUE(parse_forest("0", 2).empty());
  EXPECT_TRUE(parse_forest("  0 ", 2).empty());
  EXPECT_EQ(print_forest(parse_forest(" 3 * < 2 , 1 > ", 2)), "+3*<1,2>");
  EXPECT_TRUE(parse_forest("0*<1,2>", 2).empty());
}

TEST(ParseForest, Errors) {
  EXPECT_EQ(code_of([] { parse_forest("+1*<1,3>", 2); }), ErrorCode::label_out_of_range);
  EXPECT_EQ(code_of([] { parse_forest("+1*<0,1>", 2); }), ErrorCode::label_out_of_range);
  EXPECT_EQ(code_of([] { parse_forest("+1*<1,2>^inf", 2); }), ErrorCode::malformed_twisted);
  EXPECT_EQ(code_of([] { parse_forest("+1*((1,2)^inf,1)^inf", 2); }), ErrorCode::malformed_twisted);
  EXPECT_EQ(code_of([] { parse_forest("+1*<inf,1>", 2); }), ErrorCode::malformed_twisted);
  EXPECT_EQ(code_of([] { parse_forest("+1*(1,2)", 2); }), ErrorCode::syntax);
  EXPECT_EQ(code_of([] { parse_forest("<1,2>", 2); }), ErrorCode::syntax);
  EXPECT_EQ(code_of([] { parse_forest("+1*<1,2> +", 2); }), ErrorCode::syntax);
  EXPECT_EQ(code_of([] { parse_forest("", 2); }), ErrorCode::syntax);
}

TEST(ParseForest, ErrorPosition) {
  try {
    parse_forest("+1*<1,5>", 2);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 6u);
  }
}

TEST(Canonicalize, FramedHalvesCarryNoSign) {
  const auto c = canonicalize(tree("<2,1>"));
  EXPECT_EQ(c.tree, tree("<1,2>"));
  EXPECT_EQ(c.sign, 1);
  EXPECT_FALSE(c.two_torsion);
}

TEST(Canonicalize, OneSwap) {
  const auto c = canonicalize(tree("<(2,1),3>"));
  EXPECT_EQ(c.tree.str(), "<(1,2),3>");
  EXPECT_EQ(c.sign, -1);
}

TEST(Canonicalize, SwapFixedTreeIsTorsion) {
  const auto c = canonicalize(tree("<(1,1),1>", 1));
  EXPECT_EQ(c.tree.str(), "<(1,1),1>");
  EXPECT_EQ(c.sign, 1);
  EXPECT_TRUE(c.two_torsion);
}

TEST(Canonicalize, Idempotent) {
  for (int n = 0; n <= 3; ++n)
    for (const auto& a : oracle::all_rooted(2, n)) {
      const auto t = DecoratedTree::framed(a, RootedTree::leaf(1));
      const auto c1 = canonicalize(t);
      const auto c2 = canonicalize(c1.tree);
      EXPECT_EQ(c2.tree, c1.tree);
      EXPECT_EQ(c2.sign, 1);
      const auto tw = canonicalize(DecoratedTree::twisted(a));
      EXPECT_EQ(canonicalize(tw.tree).sign, 1);
    }
}

// Every presentation in the orbit of a framed tree under vertex swaps, half
// swaps and edge moves canonicalizes to one tree with consistent signs.
TEST(Canonicalize, OrbitOracle) {
  int checked = 0;
  for (int m = 1; m <= 3; ++m)
    for (int n = 0; n <= 3; ++n)
      for (int a = 0; a <= n; ++a)
        for (const auto& l : oracle::all_rooted(m, a))
          for (const auto& r : oracle::all_rooted(m, n - a)) {
            if ((l.order() + r.order()) != n) continue;
            const auto t = DecoratedTree::framed(l, r);
            const auto base = canonicalize(t);
            const auto orbit = oracle::framed_orbit(t);
            bool both_signs = false;
            for (const auto& [key, signs] : orbit) {
              both_signs = both_signs || signs.size() == 2;
              const auto u = parse_tree("<" + key.first + "," + key.second + ">", m);
              const auto cu = canonicalize(u);
              ASSERT_EQ(cu.tree, base.tree) << t.str() << " vs " << u.str();
              if (!base.two_torsion) {
                ASSERT_EQ(signs.size(), 1u);
                EXPECT_EQ(cu.sign * *signs.begin(), base.sign) << u.str();
              }
            }
            EXPECT_EQ(base.two_torsion, both_signs) << t.str();
            ++checked;
          }
  EXPECT_GT(checked, 1000);
}

TEST(Canonicalize, DistinctCanonicalFormsAreNotInOneOrbit) {
  // canonical framed trees of order 2 on 2 labels: no two in the same orbit
  const auto trees = canonical_framed_trees(2, 2);
  std::set<std::pair<std::string, std::string>> all;
  for (const auto& t : trees)
    for (const auto& [key, s] : oracle::framed_orbit(t)) EXPECT_TRUE(all.insert(key).second) << t.str();
}

TEST(TreeStats, Examples) {
  auto s = tree_stats(tree("<(1,2),2>"));
  EXPECT_EQ(s.order, 1);
  EXPECT_EQ(s.degree, 2);
  EXPECT_EQ(s.r(1), 1);
  EXPECT_EQ(s.r(2), 2);
  EXPECT_EQ(s.max_multiplicity, 2);
  EXPECT_FALSE(s.mono_labeled);

  s = tree_stats(tree("(1,2)^inf"));
  EXPECT_EQ(s.order, 1);
  EXPECT_EQ(s.r(1), 2);
  EXPECT_EQ(s.r(2), 2);
  EXPECT_EQ(s.max_multiplicity, 2);

  s = tree_stats(tree("<1,2>"));
  EXPECT_EQ(s.order, 0);
  EXPECT_EQ(s.degree, 1);
  EXPECT_EQ(s.max_multiplicity, 1);
  EXPECT_FALSE(s.mono_labeled);

  EXPECT_TRUE(tree_stats(tree("<(2,2),2>")).mono_labeled);
  EXPECT_TRUE(tree_stats(tree("(1,1)^inf")).mono_labeled);
}

TEST(TreeStats, TwistedDoublingMatchesInnerProduct) {
  for (int n = 0; n <= 3; ++n)
    for (const auto& j : oracle::all_rooted(3, n)) {
      const auto a = tree_stats(DecoratedTree::framed(j, j));
      const auto b = tree_stats(DecoratedTree::twisted(j));
      EXPECT_EQ(a.multiplicity, b.multiplicity);
    }
}

TEST(Products, Examples) {
  const auto r = [](const std::string& s) { return DecoratedTree::rooted(parse_tree("<" + s + ",1>", 3).first()); };
  EXPECT_EQ(rooted_product(r("1"), r("2")).str(), "(1,2)");
  EXPECT_EQ(rooted_product(r("1"), r("2")).order(), 1);
  EXPECT_EQ(rooted_product(r("(1,2)"), r("3")).order(), 2);
  EXPECT_EQ(rooted_product(r("(1,2)"), r("(1,2)")).order(), 3);
  EXPECT_EQ(inner_product(r("1"), r("2")).str(), "<1,2>");
  EXPECT_EQ(inner_product(r("1"), r("2")).order(), 0);
  EXPECT_EQ(inner_product(r("(1,2)"), r("3")).order(), 1);
  EXPECT_EQ(inner_product(r("(1,2)"), r("(1,2)")).order(), 2);
  EXPECT_EQ(code_of([&] { rooted_product(tree("<1,2>"), r("1")); }), ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([&] { inner_product(r("1"), tree("(1,2)^inf")); }), ErrorCode::invalid_argument);
}

TEST(Products, OrderAdditivity) {
  std::vector<RootedTree> trees;
  for (int n = 0; n <= 4; ++n)
    for (const auto& t : canonical_rooted_trees(2, n)) trees.push_back(t);
  for (std::size_t i = 0; i < trees.size(); i += 3)
    for (std::size_t j = 0; j < trees.size(); j += 5) {
      const auto a = DecoratedTree::rooted(trees[i]), b = DecoratedTree::rooted(trees[j]);
      EXPECT_EQ(rooted_product(a, b).order(), a.order() + b.order() + 1);
      EXPECT_EQ(inner_product(a, b).order(), a.order() + b.order());
    }
}

TEST(ForestAdd, Examples) {
  const auto a = parse_forest("+1*<1,2>", 2);
  EXPECT_TRUE(forest_add(a, parse_forest("-1*<1,2>", 2)).empty());
  EXPECT_EQ(print_forest(a + a), "+2*<1,2>");
  EXPECT_EQ((a + parse_forest("+1*(1,2)^inf", 2)).size(), 2u);
  EXPECT_EQ(code_of([&] { forest_add(a, parse_forest("+1*<1,2>", 3)); }), ErrorCode::mismatched_index_count);
}

TEST(ForestPrint, RoundTripOnCanonicalForests) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    IntersectionForest f(3);
    const int terms = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < terms; ++i) {
      const int n = static_cast<int>(rng() % 4);
      const auto framed = canonical_framed_trees(3, n);
      const auto twisted = canonical_rooted_trees(3, n);
      const int c = static_cast<int>(rng() % 7) - 3;
      if (rng() % 3 == 0)
        f.add(c, DecoratedTree::twisted(twisted[rng() % twisted.size()]));
      else
        f.add(c, framed[rng() % framed.size()]);
    }
    const std::string s = print_forest(f);
    const auto g = parse_forest(s, 3);
    EXPECT_EQ(g, f);
    EXPECT_EQ(print_forest(g), s);
  }
}

TEST(TreeGraph, BranchesSeeWholeTree) {
  const auto t = tree("<((1,2),3),(1,3)>");
  const TreeGraph g(t);
  EXPECT_EQ(g.leaves().size(), 5u);
  for (auto [u, v] : g.edges()) {
    const auto a = g.branch(u, v), b = g.branch(v, u);
    EXPECT_EQ(a.leaf_count() + b.leaf_count(), 5);
    EXPECT_EQ(canonicalize(DecoratedTree::framed(a, b)).tree, canonicalize(t).tree);
  }
}
