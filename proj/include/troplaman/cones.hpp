#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "linalg.hpp"
#include "tree.hpp"
#include "ultrametric.hpp"

namespace troplaman {

// ------------------------------------------------------------ faces of tp(n)

struct FaceWitness {
  bool is_face = false;
  std::vector<Mask> proper;   // canonical, without [n]
  std::vector<int> coloring;  // 1 or 2 per proper set
  std::optional<std::pair<RootedTree, RootedTree>> trees;
};

/// Decides whether S ∪ {[n]} splits into two laminar families: 2-colors the
/// graph joining crossing sets.
inline FaceWitness is_tp_face(int n, std::span<const Mask> family) {
  if (n < 2 || n > max_label) throw error(errc::bad_leaf, "n must be in 2..64");
  Mask all = full_mask(n);
  std::vector<Mask> sets;
  for (Mask s : family) {
    if (!subset_of(s, all)) throw error(errc::bad_leaf, mask_label(s) + " is not a subset of [n]");
    if (count(s) < 2) throw error(errc::too_small, mask_label(s) + " has < 2 elements");
    if (s != all) sets.push_back(s);
  }
  std::sort(sets.begin(), sets.end(), CanonicalLess{});
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());

  FaceWitness w;
  w.proper = sets;
  w.coloring.assign(sets.size(), 0);
  for (std::size_t start = 0; start < sets.size(); ++start) {
    if (w.coloring[start]) continue;
    w.coloring[start] = 1;
    std::vector<std::size_t> stack{start};
    while (!stack.empty()) {
      std::size_t a = stack.back();
      stack.pop_back();
      for (std::size_t b = 0; b < sets.size(); ++b) {
        if (!crosses(sets[a], sets[b])) continue;
        if (w.coloring[b] == w.coloring[a]) {
          w.coloring.clear();
          return w;
        }
        if (!w.coloring[b]) {
          w.coloring[b] = 3 - w.coloring[a];
          stack.push_back(b);
        }
      }
    }
  }
  std::vector<Mask> c1, c2;
  for (std::size_t i = 0; i < sets.size(); ++i) (w.coloring[i] == 1 ? c1 : c2).push_back(sets[i]);
  w.is_face = true;
  w.trees.emplace(RootedTree::from_clades(n, c1), RootedTree::from_clades(n, c2));
  return w;
}

/// A face S = clade(T1) ∪ clade(T2) of the tree pair complex, always holding [n].
class CladeSet {
 public:
  static CladeSet from_trees(const RootedTree& t1, const RootedTree& t2) {
    if (t1.leaves() != t2.leaves()) throw error(errc::leaf_mismatch, "trees on different leaf sets");
    if (!t1.on_standard_leaves()) throw error(errc::leaf_mismatch, "faces live on leaves 1..n");
    CladeSet s;
    s.n_ = t1.n();
    for (Mask c : t1.clades()) s.sets_.push_back(c);
    for (Mask c : t2.clades()) s.sets_.push_back(c);
    std::sort(s.sets_.begin(), s.sets_.end(), CanonicalLess{});
    s.sets_.erase(std::unique(s.sets_.begin(), s.sets_.end()), s.sets_.end());
    for (std::size_t i = 0; i + 1 < s.sets_.size(); ++i) s.coloring_.push_back(t1.contains(s.sets_[i]) ? 1 : 2);
    return s;
  }

  /// Validates membership in tp(n); throws NotTpFace otherwise.
  static CladeSet from_family(int n, std::span<const Mask> family) {
    auto w = is_tp_face(n, family);
    if (!w.is_face) throw error(errc::not_tp_face, "family does not split into two laminar families");
    CladeSet s;
    s.n_ = n;
    s.sets_ = w.proper;
    s.sets_.push_back(full_mask(n));
    s.coloring_ = w.coloring;
    return s;
  }

  static CladeSet from_family(int n, std::initializer_list<Mask> family) {
    return from_family(n, std::span<const Mask>(family.begin(), family.size()));
  }

  /// Same sets with an explicit coloring; each color class must be laminar.
  static CladeSet with_coloring(int n, std::span<const Mask> proper, std::span<const int> coloring) {
    if (proper.size() != coloring.size()) throw error(errc::parse_error, "one color per clade is required");
    std::vector<Mask> c1, c2;
    for (std::size_t i = 0; i < proper.size(); ++i) {
      if (coloring[i] != 1 && coloring[i] != 2) throw error(errc::parse_error, "colors must be 1 or 2");
      if (proper[i] != full_mask(n)) (coloring[i] == 1 ? c1 : c2).push_back(proper[i]);
    }
    return from_trees(RootedTree::from_clades(n, c1), RootedTree::from_clades(n, c2));
  }

  int n() const noexcept { return n_; }
  /// All sets including [n] (last), canonical order.
  const std::vector<Mask>& sets() const noexcept { return sets_; }
  std::vector<Mask> proper() const { return std::vector<Mask>(sets_.begin(), sets_.end() - 1); }
  std::size_t size() const noexcept { return sets_.size(); }
  const std::vector<int>& coloring() const noexcept { return coloring_; }

  bool contains(Mask c) const { return std::binary_search(sets_.begin(), sets_.end(), c, CanonicalLess{}); }

  std::pair<RootedTree, RootedTree> trees() const {
    std::vector<Mask> c1, c2;
    for (std::size_t i = 0; i + 1 < sets_.size(); ++i) (coloring_[i] == 1 ? c1 : c2).push_back(sets_[i]);
    return {RootedTree::from_clades(n_, c1), RootedTree::from_clades(n_, c2)};
  }

  friend bool operator==(const CladeSet& a, const CladeSet& b) { return a.n_ == b.n_ && a.sets_ == b.sets_; }

 private:
  int n_ = 0;
  std::vector<Mask> sets_;
  std::vector<int> coloring_;
};

/// Dimension of K_S including the lineality direction.
inline int face_dimension(const CladeSet& s) { return static_cast<int>(s.size()); }

inline CladeSet intersect_faces(const CladeSet& a, const CladeSet& b) {
  if (a.n() != b.n()) throw error(errc::leaf_mismatch, "faces over different n");
  std::vector<Mask> common;
  for (Mask c : a.proper())
    if (b.contains(c)) common.push_back(c);
  return CladeSet::from_family(a.n(), common);
}

// ------------------------------------------------------------ intersection poset

/// S together with all intersections of at least two elements, ordered by
/// inclusion. Closure runs to a fixpoint.
class IntersectionPoset {
 public:
  IntersectionPoset(int n, std::vector<Mask> family) : n_(n) {
    family.push_back(full_mask(n));
    std::set<Mask, CanonicalLess> current(family.begin(), family.end());
    original_ = current;
    while (true) {
      std::vector<Mask> elems(current.begin(), current.end());
      std::vector<Mask> added;
      for (std::size_t i = 0; i < elems.size(); ++i)
        for (std::size_t j = i + 1; j < elems.size(); ++j) {
          Mask x = elems[i] & elems[j];
          if (count(x) >= 2 && !current.count(x)) added.push_back(x);
        }
      if (added.empty()) break;
      ++rounds_;
      current.insert(added.begin(), added.end());
    }
    elements_.assign(current.begin(), current.end());
    std::size_t k = elements_.size();
    join_.assign(k * k, 0);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = a; b < k; ++b)
        join_[a * k + b] = join_[b * k + a] = smallest_containing(elements_[a] | elements_[b]);
    parents_.resize(k);
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t d = c + 1; d < k; ++d) {
        if (!is_strict_subset(elements_[c], elements_[d])) continue;
        bool covers = true;
        for (std::size_t m = c + 1; m < d && covers; ++m)
          if (is_strict_subset(elements_[c], elements_[m]) && is_strict_subset(elements_[m], elements_[d]))
            covers = false;
        if (covers) parents_[c].push_back(static_cast<int>(d));
      }
  }

  int n() const noexcept { return n_; }
  const std::vector<Mask>& elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }
  /// Closure rounds that added new sets.
  int rounds() const noexcept { return rounds_; }
  bool in_family(Mask c) const { return original_.count(c) > 0; }

  int index_of(Mask c) const {
    auto it = std::lower_bound(elements_.begin(), elements_.end(), c, CanonicalLess{});
    if (it == elements_.end() || *it != c) return -1;
    return static_cast<int>(it - elements_.begin());
  }

  /// Index of the inclusion-minimal element containing x (|x| >= 2).
  int smallest_containing(Mask x) const {
    for (std::size_t i = 0; i < elements_.size(); ++i)
      if (subset_of(x, elements_[i])) return static_cast<int>(i);
    throw std::logic_error("poset lacks the full set");
  }

  /// The minimal element containing the pair uv.
  Mask pair_closure(int u, int v) const { return elements_[smallest_containing(bit(u) | bit(v))]; }

  int join(int a, int b) const { return join_[a * elements_.size() + b]; }

  /// Elements covering element i.
  const std::vector<int>& parents(int i) const { return parents_[i]; }

  std::vector<int> children(int i) const {
    std::vector<int> out;
    for (std::size_t c = 0; c < elements_.size(); ++c)
      for (int p : parents_[c])
        if (p == i) out.push_back(static_cast<int>(c));
    return out;
  }

 private:
  static bool is_strict_subset(Mask a, Mask b) { return a != b && subset_of(a, b); }

  int n_;
  int rounds_ = 0;
  std::set<Mask, CanonicalLess> original_;
  std::vector<Mask> elements_;
  std::vector<int> join_;
  std::vector<std::vector<int>> parents_;
};

/// For faces of tp(n) one intersection round suffices; this is checked.
inline IntersectionPoset intersection_poset(const CladeSet& s) {
  IntersectionPoset p(s.n(), s.proper());
  if (p.rounds() > 1) throw std::logic_error("intersection poset of a face needed more than one round");
  return p;
}

// ------------------------------------------------------------ h-description

enum class Relation { eq, le };
enum class RowOrigin { pair_identification, facet, cycle };

inline const char* origin_name(RowOrigin o) {
  switch (o) {
    case RowOrigin::pair_identification: return "pair_identification";
    case RowOrigin::facet: return "facet";
    case RowOrigin::cycle: return "cycle";
  }
  return "?";
}

struct LinearRow {
  std::vector<Rational> coefficients;  // over pair coordinates
  Relation relation;
  RowOrigin origin;
  Mask source;  // the poset element the row comes from
  std::vector<int> term_order;  // pair indices in display order

  Rational evaluate(const PairVector& d) const {
    Rational s = 0;
    for (std::size_t i = 0; i < coefficients.size(); ++i)
      if (coefficients[i] != 0) s += coefficients[i] * d[i];
    return s;
  }

  bool satisfied_by(const PairVector& d) const {
    Rational s = evaluate(d);
    return relation == Relation::eq ? s == 0 : s <= 0;
  }
};

/// Pairs sharing one minimal poset element; their coordinates are identified.
struct PairClass {
  Mask element;
  std::vector<Edge> pairs;  // lexicographic; the first is the representative
};

struct LinearSystem {
  int n = 0;
  std::vector<PairClass> classes;
  std::vector<LinearRow> rows;

  bool satisfied_by(const PairVector& d) const {
    if (d.n() != n) throw error(errc::leaf_mismatch, "pair vector over a different n");
    for (const auto& r : rows)
      if (!r.satisfied_by(d)) return false;
    return true;
  }
};

/// The system F_S: pair identifications, one facet inequality per proper
/// set of S and one cycle equation per poset element outside S. The facet and
/// cycle rows are the inclusion-exclusion sum over the parents D_1..D_r of C,
/// Σ_I (−1)^|I| δ(D_I), with D_∅ = C and D_I the join of the D_i, i ∈ I.
inline LinearSystem facet_system(const CladeSet& s) {
  int n = s.n();
  auto poset = intersection_poset(s);
  std::vector<std::vector<Edge>> pairs_of(poset.size());
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v) pairs_of[poset.smallest_containing(bit(u) | bit(v))].push_back({u, v});

  LinearSystem sys;
  sys.n = n;
  std::vector<int> rep(poset.size());
  for (std::size_t i = 0; i < poset.size(); ++i) {
    if (pairs_of[i].empty()) throw std::logic_error("no pair has minimal element " + mask_label(poset.elements()[i]));
    rep[i] = pair_index(n, pairs_of[i][0].first, pairs_of[i][0].second);
    if (count(poset.elements()[i]) < 3) continue;
    sys.classes.push_back({poset.elements()[i], pairs_of[i]});
    for (std::size_t k = 1; k < pairs_of[i].size(); ++k) {
      LinearRow row{std::vector<Rational>(pair_count(n)), Relation::eq, RowOrigin::pair_identification,
                    poset.elements()[i], {}};
      int other = pair_index(n, pairs_of[i][k].first, pairs_of[i][k].second);
      row.coefficients[rep[i]] = 1;
      row.coefficients[other] = -1;
      row.term_order = {rep[i], other};
      sys.rows.push_back(std::move(row));
    }
  }

  for (std::size_t i = 0; i + 1 < poset.size(); ++i) {
    Mask c = poset.elements()[i];
    const auto& parents = poset.parents(static_cast<int>(i));
    std::size_t r = parents.size();
    if (r >= 31) throw error(errc::bound_exceeded, "too many parents for inclusion-exclusion");
    bool in_s = poset.in_family(c);
    LinearRow row{std::vector<Rational>(pair_count(n)), in_s ? Relation::le : Relation::eq,
                  in_s ? RowOrigin::facet : RowOrigin::cycle, c, {}};
    std::vector<std::pair<int, std::uint32_t>> order;  // (|I|, I) for display
    for (std::uint32_t sub = 0; sub < (1u << r); ++sub) order.push_back({std::popcount(sub), sub});
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto [size, sub] : order) {
      int d = static_cast<int>(i);
      bool first = true;
      for (std::size_t k = 0; k < r; ++k) {
        if (!(sub & (1u << k))) continue;
        d = first ? parents[k] : poset.join(d, parents[k]);
        first = false;
      }
      int coord = rep[d];
      row.coefficients[coord] += (size % 2 == 0) ? 1 : -1;
      if (std::find(row.term_order.begin(), row.term_order.end(), coord) == row.term_order.end())
        row.term_order.push_back(coord);
    }
    std::erase_if(row.term_order, [&](int coord) { return row.coefficients[coord] == 0; });
    sys.rows.push_back(std::move(row));
  }
  return sys;
}

// ------------------------------------------------------------ v-description

struct FaceConeMembership {
  bool member = false;
  bool in_span = false;            // d lies in the linear hull of K_S
  std::vector<Rational> t;         // aligned with S.proper(); d = λ·1 − Σ t_C v_C
  Rational lineality;
};

/// Membership in the simplicial cone generated by {−v_C : C ∈ S°} plus the
/// all-ones lineality (affine, in R^(n choose 2)). The coefficients are unique.
inline FaceConeMembership in_face_cone(const PairVector& d, const CladeSet& s) {
  if (d.n() != s.n()) throw error(errc::leaf_mismatch, "pair vector and face over different n");
  int n = s.n();
  auto proper = s.proper();
  std::size_t k = proper.size();
  RationalMatrix a(pair_count(n), k + 1);
  for (int p = 0; p < pair_count(n); ++p) {
    auto [u, v] = pair_at(n, p);
    Mask pm = bit(u) | bit(v);
    for (std::size_t c = 0; c < k; ++c)
      if (subset_of(pm, proper[c])) a(p, c) = -1;
    a(p, k) = 1;
  }
  auto sol = solve(a, d.entries());
  FaceConeMembership out;
  if (!sol.consistent) return out;
  if (!sol.unique) throw error(errc::dependent_generators, "generators of K_S are linearly dependent");
  out.in_span = true;
  auto& x = *sol.unique;
  out.t.assign(x.begin(), x.begin() + k);
  out.lineality = x[k];
  out.member = std::all_of(out.t.begin(), out.t.end(), [](const Rational& q) { return q >= 0; });
  return out;
}

/// λ·1 − Σ t_C v_C.
inline PairVector face_point(const CladeSet& s, const std::vector<Rational>& t, const Rational& lineality) {
  auto proper = s.proper();
  if (t.size() != proper.size()) throw std::invalid_argument("face_point: one coefficient per proper set");
  PairVector d = PairVector::constant(s.n(), lineality);
  for (std::size_t c = 0; c < proper.size(); ++c)
    if (t[c] != 0) d -= t[c] * clade_indicator(s.n(), proper[c]);
  return d;
}

// ------------------------------------------------------------ U_n + U_n

struct UltrametricSum {
  bool member = false;
  std::optional<RootedTree> t1, t2;  // binary trees whose face contains d
  std::optional<PairVector> u1, u2;  // ultrametrics with u1 + u2 = d
};

/// Exhaustive search over binary tree pairs for d = u1 + u2 with u1, u2
/// ultrametric. Every face of tp(n) lies in a face of a binary pair, so the
/// binary pairs suffice. The first hit in canonical pair order is returned.
inline UltrametricSum in_ultrametric_sum(const PairVector& d, int max_n = 6) {
  int n = d.n();
  if (n > max_n)
    throw error(errc::search_bound_exceeded,
                "n = " + std::to_string(n) + " exceeds the search bound " + std::to_string(max_n));
  auto trees = binary_trees(n);
  std::set<std::vector<Mask>> tried;
  for (std::size_t i = 0; i < trees.size(); ++i)
    for (std::size_t j = i; j < trees.size(); ++j) {
      CladeSet s = CladeSet::from_trees(trees[i], trees[j]);
      if (!tried.insert(s.sets()).second) continue;
      auto m = in_face_cone(d, s);
      if (!m.member) continue;
      UltrametricSum out;
      out.member = true;
      out.t1 = trees[i];
      out.t2 = trees[j];
      PairVector u1 = PairVector::constant(n, m.lineality);
      PairVector u2(n);
      auto proper = s.proper();
      for (std::size_t c = 0; c < proper.size(); ++c) {
        PairVector g = m.t[c] * clade_indicator(n, proper[c]);
        if (trees[i].contains(proper[c]))
          u1 -= g;
        else
          u2 -= g;
      }
      if (!is_ultrametric(u1) || !is_ultrametric(u2) || u1 + u2 != d)
        throw std::logic_error("ultrametric split does not reproduce d");
      out.u1 = std::move(u1);
      out.u2 = std::move(u2);
      return out;
    }
  return {};
}

// ------------------------------------------------------------ face enumeration

/// Every face of tp(n) with at most max_size sets (counting [n]).
inline std::vector<CladeSet> tp_faces(int n, int max_size) {
  if (n < 2 || n > 8) throw error(errc::bound_exceeded, "face enumeration supports 2 <= n <= 8");
  std::vector<Mask> candidates;
  for (Mask m = 1; m < full_mask(n); ++m)
    if (count(m) >= 2) candidates.push_back(m);
  std::sort(candidates.begin(), candidates.end(), CanonicalLess{});

  std::vector<CladeSet> out;
  std::vector<Mask> chosen;
  auto bipartite = [&]() {
    std::vector<int> color(chosen.size(), 0);
    for (std::size_t s = 0; s < chosen.size(); ++s) {
      if (color[s]) continue;
      color[s] = 1;
      std::vector<std::size_t> stack{s};
      while (!stack.empty()) {
        std::size_t a = stack.back();
        stack.pop_back();
        for (std::size_t b = 0; b < chosen.size(); ++b) {
          if (!crosses(chosen[a], chosen[b])) continue;
          if (color[b] == color[a]) return false;
          if (!color[b]) {
            color[b] = 3 - color[a];
            stack.push_back(b);
          }
        }
      }
    }
    return true;
  };
  auto dfs = [&](auto&& self, std::size_t from) -> void {
    out.push_back(CladeSet::from_family(n, chosen));
    if (static_cast<int>(chosen.size()) + 1 >= max_size) return;
    for (std::size_t i = from; i < candidates.size(); ++i) {
      chosen.push_back(candidates[i]);
      if (bipartite()) self(self, i + 1);
      chosen.pop_back();
    }
  };
  dfs(dfs, 0);
  return out;
}

}  // namespace troplaman
