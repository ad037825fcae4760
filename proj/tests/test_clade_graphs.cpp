#include <gtest/gtest.h>

#include "support.hpp"
#include "troplaman/oracles.hpp"

using namespace troplaman;
using troplaman::testing::set_of;

namespace {

const RootedTree left = troplaman::testing::pair_tree_left();
const RootedTree right = troplaman::testing::pair_tree_right();

}  // namespace

TEST(CladeGraph, FourLeafPair) {
  auto g = CladeGraph::build(left, right);
  EXPECT_EQ(g.vertex_count(), 6);
  EXPECT_EQ(g.edge_count(), 6);
  int root_l = g.index_of(Side::left, full_mask(4)), root_r = g.index_of(Side::right, full_mask(4));
  std::vector<Edge> doubled;
  for (const auto& e : g.edges())
    if (e.left == root_l && e.right == root_r) doubled.push_back({e.u, e.v});
  EXPECT_EQ(doubled, (std::vector<Edge>{{1, 4}, {3, 4}}));
  EXPECT_EQ(graphic_rank(g), 5);
  EXPECT_EQ(incidence_rank(g), 5);
  EXPECT_FALSE(is_spanning_tree(g));
}

TEST(CladeGraph, Degenerate) {
  auto star = RootedTree::star(3);
  auto g = CladeGraph::build(star, star);
  EXPECT_EQ(g.vertex_count(), 2);
  EXPECT_EQ(g.edge_count(), 3);
  auto t = troplaman::testing::caterpillar4();
  auto tg = CladeGraph::build(t, t);
  for (const auto& e : tg.edges()) EXPECT_EQ(e.right, e.left + tg.left_count());
  EXPECT_THROW(CladeGraph::build(RootedTree::star(3), RootedTree::star(4)), error);
}

TEST(RestrictedCladeGraph, K4MinusEdge) {
  auto h = troplaman::testing::k4_minus();
  auto g = CladeGraph::build_restricted(left, right, h);
  EXPECT_EQ(g.vertex_count(), 6);
  EXPECT_EQ(g.edge_count(), 5);
  EXPECT_EQ(graphic_rank(g), 5);
  EXPECT_TRUE(is_spanning_tree(g));
  std::vector<std::pair<Mask, Mask>> ends;
  for (const auto& e : g.edges()) ends.push_back({g.vertices()[e.left].clade, g.vertices()[e.right].clade});
  std::vector<std::pair<Mask, Mask>> expected = {{set_of({1, 2}), full_mask(4)},
                                                 {set_of({1, 2, 3}), set_of({1, 3})},
                                                 {full_mask(4), full_mask(4)},
                                                 {set_of({1, 2, 3}), full_mask(4)},
                                                 {full_mask(4), set_of({2, 4})}};
  EXPECT_EQ(ends, expected);
}

TEST(RestrictedCladeGraph, EmptyAndComplete) {
  auto g = CladeGraph::build_restricted(left, right, SimpleGraph(4, {}));
  EXPECT_EQ(g.edge_count(), 0);
  EXPECT_EQ(graphic_rank(g), 0);
  auto full = CladeGraph::build_restricted(left, right, SimpleGraph::complete(4));
  EXPECT_EQ(full.edges(), CladeGraph::build(left, right).edges());
  EXPECT_THROW(CladeGraph::build_restricted(left, right, SimpleGraph(5, {})), error);
}

TEST(Rank, PathAndSingleVertex) {
  // a star pair on two leaves is a single edge e_12 on two vertices
  auto cherry = RootedTree::from_clades(2, {});
  auto g = CladeGraph::build(cherry, cherry);
  EXPECT_TRUE(is_spanning_tree(g));
  auto t3 = RootedTree::from_clades(3, {set_of({1, 2})});
  auto path = CladeGraph::build_restricted(t3, RootedTree::star(3), SimpleGraph(3, {{1, 2}, {2, 3}}));
  EXPECT_EQ(incidence_rank(path), 2);
}

TEST(Rank, IncidenceRankMatchesUnionFind) {
  std::mt19937_64 rng(31);
  for (int iter = 0; iter < 1000; ++iter) {
    int n = 2 + iter % 7;
    auto t1 = troplaman::testing::random_tree(n, rng);
    auto t2 = troplaman::testing::random_tree(n, rng);
    auto g = CladeGraph::build(t1, t2);
    std::size_t r = oracle::exact_rank(incidence_matrix(g));
    EXPECT_EQ(static_cast<int>(r), graphic_rank(g));
  }
}

TEST(Rank, StackedLcaMatricesAreTheIncidenceMatrix) {
  auto g = CladeGraph::build(left, right);
  auto m1 = lca_matrix(left), m2 = lca_matrix(right);
  auto inc = incidence_matrix(g);
  for (int p = 0; p < 6; ++p) {
    for (std::size_t c = 0; c < m1.cols(); ++c) EXPECT_EQ(inc(p, c), m1(p, c));
    for (std::size_t c = 0; c < m2.cols(); ++c) EXPECT_EQ(inc(p, m1.cols() + c), m2(p, c));
  }
}

TEST(Dimension, ThreeWayEqualityOnAllBinaryPairsUpToFive) {
  for (int n = 2; n <= 5; ++n) {
    auto trees = binary_trees(n);
    for (const auto& a : trees)
      for (const auto& b : trees) {
        auto s = CladeSet::from_trees(a, b);
        auto g = CladeGraph::build(a, b);
        ASSERT_EQ(graphic_rank(g), face_dimension(s));
        ASSERT_EQ(face_dimension(s), static_cast<int>(s.size()));
      }
  }
}

TEST(Structure, CladesReachSmallestContainingCladeAndComponentsBounded) {
  auto check = [&](const RootedTree& a, const RootedTree& b) {
    auto g = CladeGraph::build(a, b);
    for (int i = 0; i < g.left_count(); ++i) {
      Mask c = g.vertices()[i].clade;
      int target = g.index_of(Side::right, b.smallest_clade(c));
      bool adjacent = false;
      for (const auto& e : g.edges()) adjacent |= e.left == i && e.right == target;
      ASSERT_TRUE(adjacent);
    }
    int shared = 0;
    for (Mask c : a.clades()) shared += b.contains(c);
    ASSERT_LE(components(g).count, shared);
  };
  for (int n = 2; n <= 5; ++n) {
    auto all = oracle::laminar_families(n);
    for (const auto& f1 : all)
      for (const auto& f2 : all) check(RootedTree::from_clades(n, f1), RootedTree::from_clades(n, f2));
  }
  auto six = binary_trees(6);
  for (const auto& a : six)
    for (const auto& b : six) check(a, b);
}

TEST(InducedHom, FourLeafExample) {
  auto h = troplaman::testing::k4_minus();
  SimpleGraph sub(set_of({2, 3, 4}), {{2, 3}, {2, 4}});
  auto hom = induced_hom(sub, h, left, right);
  auto image = [&](Side side, Mask c) {
    int i = hom.source.index_of(side, c);
    return hom.target.vertices()[hom.vertex_map[i]].clade;
  };
  EXPECT_EQ(image(Side::left, set_of({2, 3})), set_of({1, 2, 3}));
  EXPECT_EQ(image(Side::right, set_of({2, 4})), set_of({2, 4}));
  EXPECT_EQ(image(Side::left, set_of({2, 3, 4})), full_mask(4));
  EXPECT_EQ(image(Side::right, set_of({2, 3, 4})), full_mask(4));
}

TEST(InducedHom, IdentityAndErrors) {
  auto h = troplaman::testing::k4_minus();
  auto hom = induced_hom(h, h, left, right);
  for (std::size_t i = 0; i < hom.vertex_map.size(); ++i) EXPECT_EQ(hom.vertex_map[i], static_cast<int>(i));
  try {
    induced_hom(SimpleGraph(4, {{3, 4}}), h, left, right);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::not_subgraph);
  }
}

TEST(InducedHom, CyclesMapToCycles) {
  std::mt19937_64 rng(33);
  for (int iter = 0; iter < 300; ++iter) {
    int n = 4 + iter % 4;
    auto t1 = troplaman::testing::random_binary_tree(n, rng);
    auto t2 = troplaman::testing::random_binary_tree(n, rng);
    auto h = SimpleGraph::complete(n);
    Mask keep = 0;
    while (count(keep) < 3) keep = rng() & full_mask(n);
    auto sub = h.induced(keep);
    auto hom = induced_hom(sub, h, t1, t2);
    // the image edges form an isomorphic copy, so the cycle rank is unchanged
    UnionFind uf(hom.target.vertex_count());
    int cyclic_src = sub.edge_count() - graphic_rank(hom.source);
    int merged = 0;
    for (const auto& e : hom.source.edges()) merged += uf.unite(hom.vertex_map[e.left], hom.vertex_map[e.right]);
    EXPECT_EQ(sub.edge_count() - merged, cyclic_src);
  }
}

TEST(Components, IdsNumberedBySmallestVertex) {
  auto g = CladeGraph::build_restricted(left, right, SimpleGraph(4, {{1, 2}}));
  auto c = components(g);
  EXPECT_EQ(c.component_of[0], 0);
  EXPECT_EQ(c.count, 5);
}
