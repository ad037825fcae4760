#include <gtest/gtest.h>

#include <set>

#include "support.hpp"
#include "troplaman/oracles.hpp"

using namespace troplaman;
using troplaman::testing::set_of;

namespace {

std::vector<Mask> masks(std::initializer_list<std::initializer_list<int>> sets) {
  std::vector<Mask> out;
  for (auto s : sets) out.push_back(set_of(s));
  std::sort(out.begin(), out.end(), CanonicalLess{});
  return out;
}

CladeSet four_leaf_face() {
  return CladeSet::from_trees(troplaman::testing::pair_tree_left(), troplaman::testing::pair_tree_right());
}

std::vector<std::string> row_texts(const LinearSystem& sys, RowOrigin origin) {
  std::vector<std::string> out;
  for (const auto& r : sys.rows)
    if (r.origin == origin) out.push_back(io::to_text(r, sys.n));
  std::sort(out.begin(), out.end());
  return out;
}

// A point of K_S with random coefficients, some of them zero.
PairVector sample_inside(const CladeSet& s, std::mt19937_64& rng, std::vector<Rational>* t_out = nullptr) {
  std::bernoulli_distribution zero(0.3);
  std::vector<Rational> t;
  for (std::size_t i = 0; i < s.proper().size(); ++i)
    t.push_back(zero(rng) ? Rational(0) : troplaman::testing::random_rational(rng, 0, 4) + Rational(1, 5));
  if (t_out) *t_out = t;
  return face_point(s, t, troplaman::testing::random_rational(rng, -5, 5));
}

}  // namespace

TEST(CladeSet, FromTrees) {
  auto s = four_leaf_face();
  EXPECT_EQ(s.sets(), masks({{1, 2}, {1, 3}, {2, 4}, {1, 2, 3}, {1, 2, 3, 4}}));
  EXPECT_EQ(face_dimension(s), 5);
  auto star = CladeSet::from_trees(RootedTree::star(5), RootedTree::star(5));
  EXPECT_EQ(star.sets(), (std::vector<Mask>{full_mask(5)}));
  EXPECT_EQ(face_dimension(star), 1);
  auto six = troplaman::testing::six_leaf_face();
  EXPECT_EQ(six.sets(), masks({{1, 2}, {1, 2, 3}, {5, 6}, {4, 5, 6}, {1, 4}, {1, 3, 4}, {2, 6}, {2, 5, 6},
                              {1, 2, 3, 4, 5, 6}}));
  EXPECT_EQ(face_dimension(six), 9);
  EXPECT_THROW(CladeSet::from_trees(RootedTree::star(3), RootedTree::star(4)), error);
}

TEST(CladeSet, TreesRoundTripThroughColoring) {
  auto s = troplaman::testing::six_leaf_face();
  auto [a, b] = s.trees();
  EXPECT_EQ(CladeSet::from_trees(a, b), s);
  auto again = CladeSet::with_coloring(6, s.proper(), s.coloring());
  EXPECT_EQ(again, s);
}

TEST(TpFace, Examples) {
  auto yes = is_tp_face(3, std::vector<Mask>{set_of({1, 2}), set_of({1, 3})});
  EXPECT_TRUE(yes.is_face);
  EXPECT_NE(yes.coloring[0], yes.coloring[1]);
  auto no = is_tp_face(3, std::vector<Mask>{set_of({1, 2}), set_of({1, 3}), set_of({2, 3})});
  EXPECT_FALSE(no.is_face);
  auto six = troplaman::testing::six_leaf_face().proper();
  EXPECT_TRUE(is_tp_face(6, six).is_face);
  try {
    CladeSet::from_family(3, {set_of({1, 2}), set_of({1, 3}), set_of({2, 3})});
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::not_tp_face);
  }
}

TEST(TpFace, AgreesWithBruteForceSplit) {
  // every 2-coloring of the family, checking laminarity of both classes directly
  std::mt19937_64 rng(41);
  std::vector<Mask> cand;
  for (Mask m = 1; m < full_mask(5); ++m)
    if (count(m) >= 2) cand.push_back(m);
  for (int iter = 0; iter < 400; ++iter) {
    std::vector<Mask> fam;
    for (Mask c : cand)
      if (rng() % 7 == 0) fam.push_back(c);
    if (fam.size() > 12) fam.resize(12);
    bool brute = false;
    for (std::uint32_t col = 0; col < (1u << fam.size()) && !brute; ++col) {
      bool ok = true;
      for (std::size_t i = 0; i < fam.size() && ok; ++i)
        for (std::size_t j = i + 1; j < fam.size() && ok; ++j)
          if (((col >> i) & 1) == ((col >> j) & 1) && crosses(fam[i], fam[j])) ok = false;
      brute = ok;
    }
    EXPECT_EQ(is_tp_face(5, fam).is_face, brute);
  }
}

TEST(Poset, SixLeafExample) {
  auto s = troplaman::testing::six_leaf_face();
  auto p = intersection_poset(s);
  auto expected = s.sets();
  expected.push_back(set_of({1, 3}));
  std::sort(expected.begin(), expected.end(), CanonicalLess{});
  EXPECT_EQ(p.elements(), expected);
  EXPECT_EQ(p.pair_closure(1, 3), set_of({1, 3}));
  EXPECT_EQ(p.pair_closure(1, 5), full_mask(6));
  EXPECT_EQ(p.rounds(), 1);
}

TEST(Poset, DegenerateCases) {
  auto t = troplaman::testing::caterpillar4();
  auto same = CladeSet::from_trees(t, t);
  EXPECT_EQ(intersection_poset(same).elements(), same.sets());
  auto four = four_leaf_face();
  EXPECT_EQ(intersection_poset(four).elements(), four.sets());
  auto star = CladeSet::from_trees(RootedTree::star(4), RootedTree::star(4));
  EXPECT_EQ(intersection_poset(star).pair_closure(2, 3), full_mask(4));
}

TEST(Poset, JoinIsASemilatticeAndEveryElementHasAPair) {
  std::mt19937_64 rng(42);
  for (int iter = 0; iter < 300; ++iter) {
    int n = 3 + iter % 4;
    auto s = troplaman::testing::random_face(n, rng, 0.2);
    auto p = intersection_poset(s);
    int k = static_cast<int>(p.size());
    for (int a = 0; a < k; ++a) {
      EXPECT_EQ(p.join(a, a), a);
      for (int b = 0; b < k; ++b) {
        int j = p.join(a, b);
        EXPECT_EQ(j, p.join(b, a));
        Mask ab = p.elements()[a] | p.elements()[b];
        EXPECT_TRUE(subset_of(ab, p.elements()[j]));
        for (int u = 0; u < k; ++u) {
          if (subset_of(ab, p.elements()[u])) {
            EXPECT_TRUE(subset_of(p.elements()[j], p.elements()[u]));
          }
        }
        for (int c = 0; c < k; ++c) EXPECT_EQ(p.join(p.join(a, b), c), p.join(a, p.join(b, c)));
      }
    }
    // some pair has each element as its smallest containing element
    std::set<Mask> hit;
    for (int u = 1; u <= n; ++u)
      for (int v = u + 1; v <= n; ++v) hit.insert(p.pair_closure(u, v));
    EXPECT_EQ(hit.size(), p.size());
  }
}

TEST(FacetSystem, SixLeafExample) {
  auto sys = facet_system(troplaman::testing::six_leaf_face());
  ASSERT_EQ(sys.classes.size(), 5u);
  std::map<Mask, std::vector<Edge>> classes;
  for (const auto& c : sys.classes) classes[c.element] = c.pairs;
  EXPECT_EQ(classes[full_mask(6)], (std::vector<Edge>{{1, 5}, {1, 6}, {2, 4}, {3, 5}, {3, 6}}));
  EXPECT_EQ(classes[set_of({4, 5, 6})], (std::vector<Edge>{{4, 5}, {4, 6}}));
  EXPECT_EQ(classes[set_of({1, 2, 3})], (std::vector<Edge>{{2, 3}}));
  EXPECT_EQ(classes[set_of({1, 3, 4})], (std::vector<Edge>{{3, 4}}));
  EXPECT_EQ(classes[set_of({2, 5, 6})], (std::vector<Edge>{{2, 5}}));

  EXPECT_EQ(row_texts(sys, RowOrigin::cycle),
            (std::vector<std::string>{"d[1,3] - d[2,3] - d[3,4] + d[1,5] = 0"}));
  std::vector<std::string> facets = {
      "d[1,2] - d[2,3] <= 0", "d[1,4] - d[3,4] <= 0", "d[5,6] - d[2,5] - d[4,5] + d[1,5] <= 0",
      "d[2,6] - d[2,5] <= 0", "d[2,3] - d[1,5] <= 0", "d[3,4] - d[1,5] <= 0",
      "d[4,5] - d[1,5] <= 0", "d[2,5] - d[1,5] <= 0"};
  std::sort(facets.begin(), facets.end());
  EXPECT_EQ(row_texts(sys, RowOrigin::facet), facets);
  EXPECT_EQ(row_texts(sys, RowOrigin::pair_identification),
            (std::vector<std::string>{"d[1,5] - d[1,6] = 0", "d[1,5] - d[2,4] = 0", "d[1,5] - d[3,5] = 0",
                                      "d[1,5] - d[3,6] = 0", "d[4,5] - d[4,6] = 0"}));
}

TEST(FacetSystem, StarFaceIdentifiesEverything) {
  auto sys = facet_system(CladeSet::from_trees(RootedTree::star(4), RootedTree::star(4)));
  EXPECT_EQ(row_texts(sys, RowOrigin::facet).size(), 0u);
  EXPECT_EQ(row_texts(sys, RowOrigin::pair_identification).size(), 5u);
  EXPECT_TRUE(sys.satisfied_by(PairVector::constant(4, 3)));
  PairVector d = PairVector::constant(4, 3);
  d(2, 4) = 1;
  EXPECT_FALSE(sys.satisfied_by(d));
}

TEST(FacetSystem, FacetsTightAtOtherGenerators) {
  std::mt19937_64 rng(43);
  for (int iter = 0; iter < 300; ++iter) {
    int n = 3 + iter % 4;
    auto s = troplaman::testing::random_face(n, rng);
    auto sys = facet_system(s);
    for (const auto& row : sys.rows) {
      for (Mask c : s.proper()) {
        PairVector g = Rational(-1) * clade_indicator(n, c);
        Rational v = row.evaluate(g);
        if (row.origin == RowOrigin::facet && row.source == c)
          EXPECT_LT(v, 0);
        else
          EXPECT_EQ(v, 0);
      }
      EXPECT_EQ(row.evaluate(PairVector::constant(n, 1)), 0);
    }
  }
}

TEST(FaceCone, Examples) {
  auto s = four_leaf_face();
  auto m = in_face_cone(Rational(-1) * clade_indicator(4, set_of({1, 2})), s);
  ASSERT_TRUE(m.member);
  auto proper = s.proper();
  for (std::size_t i = 0; i < proper.size(); ++i) EXPECT_EQ(m.t[i], proper[i] == set_of({1, 2}) ? 1 : 0);
  EXPECT_EQ(m.lineality, 0);
  auto ones = in_face_cone(PairVector::constant(4, 1), s);
  EXPECT_TRUE(ones.member);
  EXPECT_EQ(ones.lineality, 1);
  auto out = in_face_cone(clade_indicator(4, set_of({1, 2})), s);
  EXPECT_FALSE(out.member);
  EXPECT_TRUE(out.in_span);
}

TEST(FaceCone, RecoversSumsOfTreeConePoints) {
  std::mt19937_64 rng(44);
  for (int iter = 0; iter < 300; ++iter) {
    int n = 3 + iter % 5;
    auto w1 = troplaman::testing::random_weighted_tree(n, rng);
    auto w2 = troplaman::testing::random_weighted_tree(n, rng);
    auto s = CladeSet::from_trees(w1.tree, w2.tree);
    auto d = evaluate(w1) + evaluate(w2);
    auto m = in_face_cone(d, s);
    ASSERT_TRUE(m.member);
    EXPECT_EQ(face_point(s, m.t, m.lineality), d);
    std::vector<PairVector> gens;
    for (Mask c : s.proper()) gens.push_back(Rational(-1) * clade_indicator(n, c));
    auto o = oracle::solve_simplicial(gens, d);
    ASSERT_TRUE(o.has_value());
    EXPECT_EQ(o->t, m.t);
    EXPECT_EQ(o->lineality, m.lineality);
  }
}

TEST(FaceCone, HAndVDescriptionsAgree) {
  std::mt19937_64 rng(45);
  for (int iter = 0; iter < 150; ++iter) {
    int n = 3 + iter % 4;
    auto s = troplaman::testing::random_face(n, rng);
    auto sys = facet_system(s);
    for (int k = 0; k < 20; ++k) {
      std::vector<Rational> t;
      PairVector d = sample_inside(s, rng, &t);
      if (k % 2 == 1) {
        if (k % 4 == 1 && !t.empty()) {
          t[rng() % t.size()] = Rational(-1, 2);
          d = face_point(s, t, 0);
        } else {
          d[rng() % d.size()] += troplaman::testing::random_rational(rng, -2, 2);
        }
      }
      EXPECT_EQ(in_face_cone(d, s).member, sys.satisfied_by(d));
    }
  }
}

TEST(FaceDimension, MaximalExactlyForBinaryPairsWithoutCommonClade) {
  for (int n = 2; n <= 5; ++n) {
    auto all = oracle::laminar_families(n);
    for (const auto& f1 : all)
      for (const auto& f2 : all) {
        auto a = RootedTree::from_clades(n, f1), b = RootedTree::from_clades(n, f2);
        auto s = CladeSet::from_trees(a, b);
        bool common = false;
        for (Mask c : f1) common |= b.contains(c);
        bool maximal = a.is_binary() && b.is_binary() && !common;
        ASSERT_LE(face_dimension(s), 2 * n - 3);
        ASSERT_EQ(face_dimension(s) == 2 * n - 3, maximal);
      }
  }
}

TEST(Intersection, Examples) {
  auto s = four_leaf_face();
  EXPECT_EQ(intersect_faces(s, s), s);
  auto t = troplaman::testing::pair_tree_left();
  auto left_only = CladeSet::from_trees(t, t);
  EXPECT_EQ(intersect_faces(s, left_only), left_only);
  auto trees = binary_trees(4);
  int found = 0;
  for (const auto& a : trees)
    for (const auto& b : trees) {
      auto f = CladeSet::from_trees(a, b);
      if (face_dimension(f) != 5) continue;
      ++found;
      EXPECT_EQ(intersect_faces(f, CladeSet::from_trees(b, b)).sets(), b.clades());
    }
  EXPECT_GT(found, 0);
}

TEST(UltrametricSum, Examples) {
  std::vector<Rational> fig = {-2, 1, 4, 1, 4, 4};
  PairVector u(4, fig);
  auto twice = in_ultrametric_sum(u + u);
  ASSERT_TRUE(twice.member);
  EXPECT_EQ(*twice.u1 + *twice.u2, u + u);
  EXPECT_TRUE(is_ultrametric(*twice.u1));
  EXPECT_TRUE(is_ultrametric(*twice.u2));

  std::mt19937_64 rng(46);
  for (int iter = 0; iter < 30; ++iter) {
    int n = 3 + iter % 3;
    auto d = evaluate(troplaman::testing::random_weighted_tree(n, rng));
    EXPECT_TRUE(in_ultrametric_sum(d).member);
    auto e = d + evaluate(troplaman::testing::random_weighted_tree(n, rng));
    EXPECT_TRUE(in_ultrametric_sum(e).member);
  }

  try {
    in_ultrametric_sum(PairVector(7));
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::search_bound_exceeded);
  }
}

TEST(UltrametricSum, NegativeInstanceRejectedByEveryFacetSystem) {
  // the sums form a 5-dimensional fan in R^6, so generic points lie outside it
  std::vector<Rational> vals = {8, 2, 0, 6, 4, 9};
  PairVector d(4, vals);
  auto r = in_ultrametric_sum(d);
  EXPECT_FALSE(r.member);
  auto trees = binary_trees(4);
  for (const auto& a : trees)
    for (const auto& b : trees) EXPECT_FALSE(facet_system(CladeSet::from_trees(a, b)).satisfied_by(d));
}

TEST(TpFaces, CountsAndValidity) {
  auto faces = tp_faces(4, 5);
  std::set<std::vector<Mask>> seen;
  for (const auto& f : faces) {
    EXPECT_LE(face_dimension(f), 5);
    seen.insert(f.sets());
  }
  EXPECT_EQ(seen.size(), faces.size());
  // every union of two trees on 4 leaves appears
  auto all = oracle::laminar_families(4);
  std::set<std::vector<Mask>> unions;
  for (const auto& f1 : all)
    for (const auto& f2 : all)
      unions.insert(CladeSet::from_trees(RootedTree::from_clades(4, f1), RootedTree::from_clades(4, f2)).sets());
  EXPECT_EQ(unions, seen);
  EXPECT_EQ(tp_faces(4, 2).size(), 11u);
}

TEST(Poset, EveryElementIsTheClosureOfSomePairOnAllFacesUpToSix) {
  for (int n = 3; n <= 6; ++n) {
    long faces = 0;
    for (const auto& s : tp_faces(n, 2 * n - 3)) {
      auto p = intersection_poset(s);
      std::vector<bool> hit(p.size(), false);
      for (int u = 1; u <= n; ++u)
        for (int v = u + 1; v <= n; ++v) hit[p.index_of(p.pair_closure(u, v))] = true;
      ASSERT_TRUE(std::all_of(hit.begin(), hit.end(), [](bool b) { return b; })) << io::to_json(s).dump();
      ++faces;
    }
    EXPECT_GT(faces, 0);
  }
}

TEST(Intersection, SampledFacePairsOnFiveLeaves) {
  std::mt19937_64 rng(47);
  for (int iter = 0; iter < 300; ++iter) {
    auto s = troplaman::testing::random_face(5, rng, 0.2);
    auto other = iter % 3 == 0 ? intersect_faces(s, troplaman::testing::random_face(5, rng, 0.5))
                               : troplaman::testing::random_face(5, rng, 0.2);
    auto meet = intersect_faces(s, other);
    for (Mask c : meet.proper()) {
      auto g = Rational(-1) * clade_indicator(5, c);
      EXPECT_TRUE(in_face_cone(g, s).member);
      EXPECT_TRUE(in_face_cone(g, other).member);
    }
    for (const auto& [a, b] : {std::pair{&s, &other}, std::pair{&other, &s}}) {
      auto vertices = troplaman::testing::slice_vertices(*a, facet_system(*b));
      std::set<std::vector<Rational>> got(vertices.begin(), vertices.end());
      EXPECT_EQ(got, troplaman::testing::unit_vectors_in(*a, meet));
    }
  }
}
