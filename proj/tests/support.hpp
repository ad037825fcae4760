#pragma once

#include <random>
#include <set>
#include <vector>

#include "troplaman/oracles.hpp"
#include "troplaman/troplaman.hpp"

namespace troplaman::testing {

inline Mask set_of(std::initializer_list<int> labels) { return mask_of(std::vector<int>(labels)); }

/// Uniform leaf insertion order with uniformly chosen attachment points.
inline RootedTree random_binary_tree(int n, std::mt19937_64& rng) {
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i + 1;
  std::shuffle(order.begin(), order.end(), rng);
  RootedTree t = RootedTree::from_clades_on(bit(order[0]) | bit(order[1]), std::span<const Mask>{});
  for (int i = 2; i < n; ++i) {
    auto leaves = members(t.leaves());
    std::uniform_int_distribution<std::size_t> pick(0, leaves.size() + t.size() - 1);
    std::size_t c = pick(rng);
    Mask target = c < leaves.size() ? bit(leaves[c]) : t.clades()[c - leaves.size()];
    t = t.attach_leaf(target, order[i]);
  }
  return t;
}

/// A random binary tree with each proper clade dropped with probability p.
inline RootedTree random_tree(int n, std::mt19937_64& rng, double p = 0.3) {
  auto b = random_binary_tree(n, rng);
  std::bernoulli_distribution drop(p);
  std::vector<Mask> kept;
  for (Mask c : b.proper_clades())
    if (!drop(rng)) kept.push_back(c);
  return RootedTree::from_clades(n, kept);
}

inline Rational random_rational(std::mt19937_64& rng, int lo, int hi, int max_den = 7) {
  std::uniform_int_distribution<int> num(lo * max_den, hi * max_den), den(1, max_den);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

/// Weights strictly increase toward the root by positive rational steps.
inline WeightedRootedTree random_weighted_tree(int n, std::mt19937_64& rng) {
  WeightedRootedTree w{random_tree(n, rng), {}};
  const auto& clades = w.tree.clades();
  w.weights.resize(clades.size());
  for (std::size_t i = 0; i < clades.size(); ++i) {
    std::optional<Rational> floor;
    for (std::size_t j = 0; j < i; ++j)
      if (subset_of(clades[j], clades[i]) && (!floor || w.weights[j] > *floor)) floor = w.weights[j];
    Rational step = random_rational(rng, 0, 5);
    if (step <= 0) step = Rational(1, 3);
    w.weights[i] = floor ? *floor + step : random_rational(rng, -10, 10);
  }
  return w;
}

/// Random face of tp(n): the clade union of two random trees.
inline CladeSet random_face(int n, std::mt19937_64& rng, double p = 0.3) {
  return CladeSet::from_trees(random_tree(n, rng, p), random_tree(n, rng, p));
}

/// Vertices of {t >= 0, sum t = 1 : the point of K_S with coefficients t
/// satisfies `other`}, in the coordinates of s.proper(). Rows of a facet
/// system vanish on the all-ones vector, so the lineality is dropped.
inline std::vector<std::vector<Rational>> slice_vertices(const CladeSet& s, const LinearSystem& other) {
  auto proper = s.proper();
  std::size_t k = proper.size();
  if (k == 0) return {};
  std::vector<PairVector> gens;
  for (Mask c : proper) gens.push_back(Rational(-1) * clade_indicator(s.n(), c));
  std::vector<const LinearRow*> le, eq;
  for (const auto& r : other.rows) (r.relation == Relation::le ? le : eq).push_back(&r);
  RationalMatrix a(k + le.size(), k), e(1 + eq.size(), k);
  std::vector<Rational> b(k + le.size()), f(1 + eq.size());
  for (std::size_t c = 0; c < k; ++c) {
    a(c, c) = -1;
    e(0, c) = 1;
    for (std::size_t r = 0; r < le.size(); ++r) a(k + r, c) = le[r]->evaluate(gens[c]);
    for (std::size_t r = 0; r < eq.size(); ++r) e(1 + r, c) = eq[r]->evaluate(gens[c]);
  }
  f[0] = 1;
  return oracle::polytope_vertices(a, b, e, f);
}

/// Unit vectors for the members of s.proper() that lie in `keep`.
inline std::set<std::vector<Rational>> unit_vectors_in(const CladeSet& s, const CladeSet& keep) {
  auto proper = s.proper();
  std::set<std::vector<Rational>> out;
  for (std::size_t c = 0; c < proper.size(); ++c)
    if (keep.contains(proper[c])) {
      std::vector<Rational> unit(proper.size());
      unit[c] = 1;
      out.insert(unit);
    }
  return out;
}

// Worked examples.

/// Tree displaying the ultrametric (−2,1,4,1,4,4).
inline RootedTree caterpillar4() { return RootedTree::from_clades(4, {set_of({1, 2}), set_of({1, 2, 3})}); }
inline RootedTree pair_tree_left() { return caterpillar4(); }
inline RootedTree pair_tree_right() { return RootedTree::from_clades(4, {set_of({1, 3}), set_of({2, 4})}); }

/// K4 minus the edge 34.
inline SimpleGraph k4_minus() { return SimpleGraph(4, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}}); }

/// Two laminar families on [6] whose union has the extra intersection 13.
inline CladeSet six_leaf_face() {
  auto t1 = RootedTree::from_clades(6, {set_of({1, 2}), set_of({1, 2, 3}), set_of({5, 6}), set_of({4, 5, 6})});
  auto t2 = RootedTree::from_clades(6, {set_of({1, 4}), set_of({1, 3, 4}), set_of({2, 6}), set_of({2, 5, 6})});
  return CladeSet::from_trees(t1, t2);
}

}  // namespace troplaman::testing
