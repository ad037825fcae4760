#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"
#include "linalg.hpp"
#include "tree.hpp"

namespace troplaman {

/// A rational vector indexed by the unordered pairs of [n], in lexicographic
/// pair order (12, 13, ..., 1n, 23, ...).
class PairVector {
 public:
  PairVector() = default;
  explicit PairVector(int n) : n_(n), entries_(pair_count(n)) { check_n(n); }
  PairVector(int n, std::vector<Rational> entries) : n_(n), entries_(std::move(entries)) {
    check_n(n);
    if (static_cast<int>(entries_.size()) != pair_count(n))
      throw error(errc::parse_error, "expected " + std::to_string(pair_count(n)) + " pair entries, got " +
                                         std::to_string(entries_.size()));
  }

  static PairVector constant(int n, const Rational& c) {
    return PairVector(n, std::vector<Rational>(pair_count(n), c));
  }

  int n() const noexcept { return n_; }
  std::size_t size() const noexcept { return entries_.size(); }

  Rational& operator()(int u, int v) { return entries_[pair_index(n_, u, v)]; }
  const Rational& operator()(int u, int v) const { return entries_[pair_index(n_, u, v)]; }
  Rational& operator[](std::size_t i) { return entries_[i]; }
  const Rational& operator[](std::size_t i) const { return entries_[i]; }

  const std::vector<Rational>& entries() const noexcept { return entries_; }

  PairVector& operator+=(const PairVector& o) {
    same_n(o);
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += o.entries_[i];
    return *this;
  }
  PairVector& operator-=(const PairVector& o) {
    same_n(o);
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= o.entries_[i];
    return *this;
  }
  PairVector& operator*=(const Rational& s) {
    for (auto& e : entries_) e *= s;
    return *this;
  }
  friend PairVector operator+(PairVector a, const PairVector& b) { return a += b; }
  friend PairVector operator-(PairVector a, const PairVector& b) { return a -= b; }
  friend PairVector operator*(const Rational& s, PairVector a) { return a *= s; }

  friend bool operator==(const PairVector& a, const PairVector& b) {
    return a.n_ == b.n_ && a.entries_ == b.entries_;
  }

 private:
  static void check_n(int n) {
    if (n < 2) throw error(errc::too_small, "pair vectors need n >= 2");
    if (n > max_label) throw error(errc::bad_leaf, "at most 64 leaves are supported");
  }
  void same_n(const PairVector& o) const {
    if (o.n_ != n_) throw error(errc::leaf_mismatch, "pair vectors over different leaf sets");
  }

  int n_ = 0;
  std::vector<Rational> entries_;
};

/// A rooted tree with a weight on every clade, strictly increasing toward the root.
struct WeightedRootedTree {
  RootedTree tree;
  std::vector<Rational> weights;  // aligned with tree.clades()

  const Rational& weight(Mask c) const {
    int i = tree.index_of(c);
    if (i < 0) throw error(errc::unknown_clade, mask_label(c));
    return weights[i];
  }

  void validate() const {
    if (weights.size() != tree.size())
      throw error(errc::parse_error, "one weight per clade is required");
    for (std::size_t i = 0; i + 1 < tree.size(); ++i) {
      Mask c = tree.clades()[i];
      Mask p = tree.parent(c);
      if (!(weights[i] < weight(p)))
        throw error(errc::weight_order_violated,
                    "weight of " + mask_label(c) + " (" + to_string(weights[i]) +
                        ") is not below its parent " + mask_label(p) + " (" + to_string(weight(p)) + ")");
    }
  }

  friend bool operator==(const WeightedRootedTree&, const WeightedRootedTree&) = default;
};

/// Three-point condition: for every triple the two largest values agree.
inline bool is_ultrametric(const PairVector& d) {
  int n = d.n();
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v)
      for (int w = v + 1; w <= n; ++w) {
        const Rational& a = d(u, v);
        const Rational& b = d(u, w);
        const Rational& c = d(v, w);
        if (a > std::max(b, c) || b > std::max(a, c) || c > std::max(a, b)) return false;
      }
  return true;
}

/// Most-recent-common-ancestor weights: d_uv = weight(smallest clade containing uv).
inline PairVector evaluate(const WeightedRootedTree& w) {
  w.validate();
  if (!w.tree.on_standard_leaves())
    throw error(errc::leaf_mismatch, "evaluation needs a tree on leaves 1..n");
  int n = w.tree.n();
  PairVector d(n);
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v)
      d(u, v) = w.weights[w.tree.smallest_clade_index(bit(u) | bit(v))];
  return d;
}

/// The unique weighted tree realizing an ultrametric. Clades are the
/// threshold clusters; consecutive equal weights collapse into one clade.
inline WeightedRootedTree topology(const PairVector& d) {
  if (!is_ultrametric(d)) throw error(errc::not_ultrametric, "three-point condition fails");
  int n = d.n();
  std::vector<Rational> levels(d.entries());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  std::map<Mask, Rational> weight_of;
  for (const Rational& t : levels) {
    // clusters of "d_uv <= t"; for an ultrametric this relation is an equivalence
    Mask seen = 0;
    for (int u = 1; u <= n; ++u) {
      if (seen & bit(u)) continue;
      Mask cls = bit(u);
      for (int v = 1; v <= n; ++v)
        if (v != u && d(u, v) <= t) cls |= bit(v);
      seen |= cls;
      if (count(cls) >= 2) weight_of.emplace(cls, t);
    }
  }
  std::vector<Mask> clades;
  for (auto& [c, _] : weight_of) clades.push_back(c);
  WeightedRootedTree w{RootedTree::from_clades(n, clades), {}};
  for (Mask c : w.tree.clades()) w.weights.push_back(weight_of.at(c));
  return w;
}

/// Characteristic vector of the pairs inside c.
inline PairVector clade_indicator(int n, Mask c) {
  if (count(c) < 2) throw error(errc::too_small, "indicator of a clade with < 2 leaves");
  if (!subset_of(c, full_mask(n))) throw error(errc::bad_leaf, mask_label(c));
  PairVector v(n);
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto [a, b] = pair_at(n, static_cast<int>(i));
    if ((c & bit(a)) && (c & bit(b))) v[i] = 1;
  }
  return v;
}

/// Indicator of the pairs whose smallest containing clade in t is c.
inline PairVector lca_indicator(const RootedTree& t, Mask c) {
  if (!t.contains(c)) throw error(errc::unknown_clade, mask_label(c));
  if (!t.on_standard_leaves()) throw error(errc::leaf_mismatch, "tree must be on leaves 1..n");
  int n = t.n();
  PairVector v(n);
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto [a, b] = pair_at(n, static_cast<int>(i));
    if (t.smallest_clade(bit(a) | bit(b)) == c) v[i] = 1;
  }
  return v;
}

/// Columns are the lca indicators of the clades in canonical order.
inline RationalMatrix lca_matrix(const RootedTree& t) {
  if (!t.on_standard_leaves()) throw error(errc::leaf_mismatch, "tree must be on leaves 1..n");
  int n = t.n();
  RationalMatrix m(pair_count(n), t.size());
  for (int i = 0; i < pair_count(n); ++i) {
    auto [a, b] = pair_at(n, i);
    m(i, t.smallest_clade_index(bit(a) | bit(b))) = 1;
  }
  return m;
}

struct TreeConeMembership {
  bool member = false;
  std::vector<Rational> values;  // one per clade of the tree, when member
  std::string violation;
};

/// Closed cone of ultrametrics with topology t (or a coarsening of it):
/// constant on each smallest-clade fiber and weakly increasing toward the root.
/// Affine: the all-ones direction is included with both signs.
inline TreeConeMembership in_tree_cone(const PairVector& d, const RootedTree& t) {
  if (t.leaves() != full_mask(d.n()))
    throw error(errc::leaf_mismatch, "tree and pair vector have different leaf sets");
  int n = d.n();
  TreeConeMembership out;
  std::vector<std::optional<std::pair<int, int>>> witness(t.size());
  std::vector<Rational> values(t.size());
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v) {
      int k = t.smallest_clade_index(bit(u) | bit(v));
      if (!witness[k]) {
        witness[k] = {u, v};
        values[k] = d(u, v);
      } else if (values[k] != d(u, v)) {
        auto [a, b] = *witness[k];
        out.violation = "d[" + std::to_string(a) + "," + std::to_string(b) + "] != d[" + std::to_string(u) +
                        "," + std::to_string(v) + "] but both have smallest clade " +
                        mask_label(t.clades()[k]);
        return out;
      }
    }
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    Mask p = t.parent(t.clades()[k]);
    const Rational& up = values[t.index_of(p)];
    if (values[k] > up) {
      out.violation = "value of " + mask_label(t.clades()[k]) + " (" + to_string(values[k]) +
                      ") exceeds its parent " + mask_label(p) + " (" + to_string(up) + ")";
      return out;
    }
  }
  out.member = true;
  out.values = std::move(values);
  return out;
}

/// Coefficients of d ∈ K_T in the generator basis: d = top·1 − Σ t_C v_C over
/// proper clades, with t_C = value(parent(C)) − value(C) >= 0.
struct GeneratorDecomposition {
  Rational top;
  std::vector<Rational> coefficients;  // aligned with tree.proper_clades()
};

inline GeneratorDecomposition generator_decomposition(const PairVector& d, const RootedTree& t) {
  auto m = in_tree_cone(d, t);
  if (!m.member) throw error(errc::not_ultrametric, "not in the tree cone: " + m.violation);
  GeneratorDecomposition g;
  g.top = m.values.back();
  for (std::size_t k = 0; k + 1 < t.size(); ++k)
    g.coefficients.push_back(m.values[t.index_of(t.parent(t.clades()[k]))] - m.values[k]);
  return g;
}

}  // namespace troplaman
