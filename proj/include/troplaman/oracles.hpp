#pragma once

// Brute-force reference implementations. Nothing here calls the optimized
// code paths (row_reduce, pebble game, BinaryTreeEnumerator, CladeGraph), so
// agreement between the two sides is meaningful.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "core.hpp"
#include "graph.hpp"
#include "linalg.hpp"
#include "tree.hpp"
#include "ultrametric.hpp"

namespace troplaman::oracle {

// ------------------------------------------------------------ fraction-free linear algebra

using IntegerRows = std::vector<std::vector<mpz_class>>;

/// Scales each row by the lcm of its denominators.
inline IntegerRows integer_rows(const RationalMatrix& m) {
  IntegerRows a(m.rows(), std::vector<mpz_class>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    mpz_class l = 1;
    for (std::size_t c = 0; c < m.cols(); ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(r, c).get_den_mpz_t());
    for (std::size_t c = 0; c < m.cols(); ++c) a[r][c] = m(r, c).get_num() * (l / m(r, c).get_den());
  }
  return a;
}

/// Bareiss elimination on the first `pivot_cols` columns; returns the pivot
/// columns. Every division is exact.
inline std::vector<std::size_t> bareiss(IntegerRows& a, std::size_t pivot_cols) {
  std::vector<std::size_t> pivots;
  if (a.empty()) return pivots;
  std::size_t cols = a[0].size();
  mpz_class prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < pivot_cols && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = r + 1; i < a.size(); ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        mpz_class v = a[r][c] * a[i][j] - a[i][c] * a[r][j];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        a[i][j] = v;
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t exact_rank(const RationalMatrix& m) {
  auto a = integer_rows(m);
  return bareiss(a, m.cols()).size();
}

struct ExactSolution {
  bool consistent = false;
  std::optional<std::vector<Rational>> unique;
};

inline ExactSolution exact_solve(const RationalMatrix& a, const std::vector<Rational>& b) {
  if (b.size() != a.rows()) throw std::invalid_argument("exact_solve: dimension mismatch");
  RationalMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) aug(r, c) = a(r, c);
    aug(r, a.cols()) = b[r];
  }
  auto rows = integer_rows(aug);
  auto pivots = bareiss(rows, a.cols());
  ExactSolution s;
  for (std::size_t r = pivots.size(); r < rows.size(); ++r)
    if (rows[r][a.cols()] != 0) return s;
  s.consistent = true;
  if (pivots.size() != a.cols()) return s;
  std::vector<Rational> x(a.cols());
  for (std::size_t k = pivots.size(); k-- > 0;) {
    std::size_t pc = pivots[k];
    Rational acc(rows[k][a.cols()]);
    for (std::size_t j = pc + 1; j < a.cols(); ++j) acc -= Rational(rows[k][j]) * x[j];
    x[pc] = acc / Rational(rows[k][pc]);
  }
  s.unique = std::move(x);
  return s;
}

struct SimplicialCoefficients {
  std::vector<Rational> t;
  Rational lineality;
};

/// Unique (t, λ) with d = Σ t_i g_i + λ·1, or nothing when d is outside the span.
inline std::optional<SimplicialCoefficients> solve_simplicial(const std::vector<PairVector>& generators,
                                                              const PairVector& d) {
  std::size_t k = generators.size();
  RationalMatrix a(d.size(), k + 1);
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t g = 0; g < k; ++g) {
      if (generators[g].n() != d.n()) throw error(errc::leaf_mismatch, "generator over a different n");
      a(i, g) = generators[g][i];
    }
    a(i, k) = 1;
  }
  if (exact_rank(a) != k + 1) throw error(errc::dependent_generators, "generators are dependent modulo 1");
  auto s = exact_solve(a, d.entries());
  if (!s.consistent) return std::nullopt;
  SimplicialCoefficients out;
  out.t.assign(s.unique->begin(), s.unique->begin() + k);
  out.lineality = (*s.unique)[k];
  return out;
}

// ------------------------------------------------------------ Laman by subsets

struct SubsetCheck {
  bool ok = false;
  std::optional<Mask> violating;  // first subset (by mask value) with > 2k-3 edges
};

namespace detail {

inline std::vector<Mask> adjacency(const SimpleGraph& h) {
  std::vector<Mask> adj(max_label + 1, 0);
  for (auto [u, v] : h.edges()) {
    adj[u] |= bit(v);
    adj[v] |= bit(u);
  }
  return adj;
}

// Vertex sets are enumerated as sub-masks of V(H), in increasing mask value.
inline SubsetCheck sparse_check(const SimpleGraph& h) {
  if (h.vertex_count() > 20) throw error(errc::bound_exceeded, "subset enumeration supports at most 20 vertices");
  auto adj = adjacency(h);
  Mask all = h.vertices();
  SubsetCheck r;
  for (Mask s = all; s; s = (s - 1) & all) {
    int k = count(s);
    if (k < 2) continue;
    int twice = 0;
    for (Mask rest = s; rest; rest &= rest - 1) twice += count(adj[std::countr_zero(rest) + 1] & s);
    if (twice / 2 > 2 * k - 3 && (!r.violating || s < *r.violating)) r.violating = s;
  }
  r.ok = !r.violating;
  return r;
}

}  // namespace detail

/// Every vertex subset with k >= 2 vertices induces at most 2k-3 edges.
inline SubsetCheck sparse_by_subsets(const SimpleGraph& h) { return detail::sparse_check(h); }

/// |E| = 2n-3 plus the subset condition.
inline SubsetCheck laman_by_subsets(const SimpleGraph& h) {
  if (h.vertex_count() < 2) throw error(errc::too_small, "graphs need at least 2 vertices");
  auto r = detail::sparse_check(h);
  if (h.edge_count() != 2 * h.vertex_count() - 3) r.ok = false;
  return r;
}

// ------------------------------------------------------------ laminar families

/// All laminar families of subsets of [n] with 2..n-1 elements, i.e. every
/// rooted tree on [n]. Sets are in canonical order within each family.
inline std::vector<std::vector<Mask>> laminar_families(int n) {
  if (n < 2 || n > 7) throw error(errc::bound_exceeded, "laminar enumeration supports 2 <= n <= 7");
  std::vector<Mask> cand;
  for (Mask m = 1; m < full_mask(n); ++m)
    if (count(m) >= 2) cand.push_back(m);
  std::sort(cand.begin(), cand.end(), CanonicalLess{});
  std::vector<std::vector<Mask>> out;
  std::vector<Mask> cur;
  auto rec = [&](auto&& self, std::size_t from) -> void {
    out.push_back(cur);
    for (std::size_t i = from; i < cand.size(); ++i) {
      bool ok = std::none_of(cur.begin(), cur.end(), [&](Mask c) { return crosses(c, cand[i]); });
      if (!ok) continue;
      cur.push_back(cand[i]);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

/// Binary trees are the laminar families of maximal size n-2.
inline std::vector<std::vector<Mask>> binary_laminar_families(int n) {
  std::vector<std::vector<Mask>> out;
  for (auto& f : laminar_families(n))
    if (static_cast<int>(f.size()) == n - 2) out.push_back(std::move(f));
  return out;
}

// ------------------------------------------------------------ tree-pair search

namespace detail {

// Clade lists including the full set, for trees given by proper families.
inline std::vector<Mask> with_root(std::vector<Mask> f, Mask all) {
  f.push_back(all);
  return f;
}

inline Mask smallest_superset(const std::vector<Mask>& family, Mask s) {
  Mask best = 0;
  for (Mask c : family)
    if ((c & s) == s && (!best || count(c) < count(best))) best = c;
  return best;
}

// Is the clade graph of the two families restricted to H a spanning tree?
inline bool clade_graph_is_tree(const std::vector<Mask>& f1, const std::vector<Mask>& f2,
                                const std::vector<Edge>& edges) {
  std::size_t nv = f1.size() + f2.size();
  if (edges.size() + 1 != nv) return false;
  std::vector<std::vector<std::size_t>> adj(nv);
  for (auto [u, v] : edges) {
    Mask p = bit(u) | bit(v);
    std::size_t a = std::find(f1.begin(), f1.end(), smallest_superset(f1, p)) - f1.begin();
    std::size_t b = f1.size() + (std::find(f2.begin(), f2.end(), smallest_superset(f2, p)) - f2.begin());
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<bool> seen(nv, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    std::size_t x = stack.back();
    stack.pop_back();
    for (std::size_t y : adj[x])
      if (!seen[y]) {
        seen[y] = true;
        ++reached;
        stack.push_back(y);
      }
  }
  return reached == nv;
}

}  // namespace detail

/// Exhaustive search over all pairs of binary trees on V(H) = [n], generated
/// as laminar families.
inline std::optional<std::pair<RootedTree, RootedTree>> tree_pair_search(const SimpleGraph& h) {
  int n = h.vertex_count();
  if (h.vertices() != full_mask(n)) throw error(errc::leaf_mismatch, "search needs vertices 1..n");
  if (n < 2) throw error(errc::too_small, "graphs need at least 2 vertices");
  std::vector<std::vector<Mask>> families;
  for (auto& f : binary_laminar_families(n)) families.push_back(detail::with_root(f, full_mask(n)));
  for (const auto& f1 : families)
    for (const auto& f2 : families)
      if (detail::clade_graph_is_tree(f1, f2, h.edges()))
        return std::pair{RootedTree::from_clades(n, f1), RootedTree::from_clades(n, f2)};
  return std::nullopt;
}

/// Same test as verify_certificate, recomputed from the clade lists.
inline bool certificate_holds(const SimpleGraph& h, const RootedTree& t1, const RootedTree& t2) {
  return detail::clade_graph_is_tree(t1.clades(), t2.clades(), h.edges());
}

// ------------------------------------------------------------ canonical forms

/// Edge bitmask (over lexicographic pairs of 1..k) of the relabeled graph,
/// minimized over relabelings that list vertices by a degree-based invariant.
/// Two graphs on k vertices get equal codes iff they are isomorphic.
inline std::uint64_t canonical_form(const SimpleGraph& h) {
  int k = h.vertex_count();
  if (k > 11) throw error(errc::bound_exceeded, "canonical forms support at most 11 vertices");
  auto verts = members(h.vertices());
  auto adj = detail::adjacency(h);
  // invariant: (degree, sorted neighbor degrees)
  std::vector<std::pair<int, std::vector<int>>> inv(k);
  for (int i = 0; i < k; ++i) {
    inv[i].first = count(adj[verts[i]]);
    for (int w : members(adj[verts[i]])) inv[i].second.push_back(count(adj[w]));
    std::sort(inv[i].second.begin(), inv[i].second.end());
  }
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return inv[a] < inv[b]; });
  std::vector<std::pair<int, int>> blocks;  // [begin, end) in order
  for (int i = 0; i < k;) {
    int j = i;
    while (j < k && inv[order[j]] == inv[order[i]]) ++j;
    blocks.push_back({i, j});
    i = j;
  }
  std::vector<int> local(max_label + 1, -1);
  for (int i = 0; i < k; ++i) local[verts[i]] = i;
  std::vector<Edge> edges;
  for (auto [u, v] : h.edges()) edges.push_back({local[u], local[v]});

  std::vector<int> pos(k);
  std::uint64_t best = ~std::uint64_t{0};
  auto emit = [&]() {
    for (int i = 0; i < k; ++i) pos[order[i]] = i;
    std::uint64_t code = 0;
    for (auto [a, b] : edges) {
      int x = std::min(pos[a], pos[b]) + 1, y = std::max(pos[a], pos[b]) + 1;
      code |= std::uint64_t{1} << pair_index(k, x, y);
    }
    best = std::min(best, code);
  };
  auto rec = [&](auto&& self, std::size_t b) -> void {
    if (b == blocks.size()) {
      emit();
      return;
    }
    auto first = order.begin() + blocks[b].first, last = order.begin() + blocks[b].second;
    std::sort(first, last);
    do self(self, b + 1);
    while (std::next_permutation(first, last));
  };
  rec(rec, 0);
  return best;
}

inline SimpleGraph graph_from_code(int k, std::uint64_t code) {
  SimpleGraph g(k, {});
  for (int p = 0; p < pair_count(k); ++p)
    if (code & (std::uint64_t{1} << p)) {
      auto [u, v] = pair_at(k, p);
      g.add_edge(u, v);
    }
  return g;
}

/// All isomorphism classes of graphs on [n] with m edges, in code order.
inline std::vector<SimpleGraph> catalog_graphs(int n, int m) {
  if (n < 2 || n > 7) throw error(errc::bound_exceeded, "catalogs support 2 <= n <= 7");
  int pairs = pair_count(n);
  if (m < 0 || m > pairs) return {};
  std::set<std::uint64_t> codes;
  std::vector<int> pick(m);
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    SimpleGraph g(n, {});
    for (int p : pick) {
      auto [u, v] = pair_at(n, p);
      g.add_edge(u, v);
    }
    codes.insert(canonical_form(g));
    int i = m - 1;
    while (i >= 0 && pick[i] == pairs - m + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < m; ++j) pick[j] = pick[j - 1] + 1;
  }
  std::vector<SimpleGraph> out;
  for (auto c : codes) out.push_back(graph_from_code(n, c));
  return out;
}

/// Graphs with 2n-3 edges up to isomorphism.
inline std::vector<SimpleGraph> catalog_tight_graphs(int n) { return catalog_graphs(n, 2 * n - 3); }

/// Isomorphism classes of graphs reachable from K2 by Henneberg moves.
inline std::vector<SimpleGraph> henneberg_closure(int n) {
  if (n < 2 || n > 8) throw error(errc::bound_exceeded, "closure supports 2 <= n <= 8");
  std::set<std::uint64_t> level{canonical_form(SimpleGraph(2, {{1, 2}}))};
  for (int k = 2; k < n; ++k) {
    std::set<std::uint64_t> next;
    int v = k + 1;
    for (auto code : level) {
      SimpleGraph g = graph_from_code(k, code);
      auto add = [&](SimpleGraph h, std::initializer_list<int> nb) {
        h.add_vertex(v);
        for (int x : nb) h.add_edge(v, x);
        next.insert(canonical_form(h));
      };
      for (int a = 1; a <= k; ++a)
        for (int b = a + 1; b <= k; ++b) add(g, {a, b});
      for (auto [a, b] : g.edges())
        for (int c = 1; c <= k; ++c) {
          if (c == a || c == b) continue;
          SimpleGraph h = g;
          h.remove_edge(a, b);
          add(h, {a, b, c});
        }
    }
    level = std::move(next);
  }
  std::vector<SimpleGraph> out;
  for (auto c : level) out.push_back(graph_from_code(n, c));
  return out;
}

// ------------------------------------------------------------ rigidity Jacobian

/// Rank of the rigidity matrix at one random integer placement.
inline std::size_t jacobian_rank(const SimpleGraph& h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> coord(0, (1L << 31) - 1);
  auto verts = members(h.vertices());
  std::map<int, std::pair<long, long>> at;
  std::map<int, std::size_t> col;
  for (int v : verts) {
    at[v] = {coord(rng), coord(rng)};
    col[v] = 2 * col.size();
  }
  RationalMatrix m(h.edge_count(), 2 * verts.size());
  for (int r = 0; r < h.edge_count(); ++r) {
    auto [u, v] = h.edges()[r];
    long dx = at[u].first - at[v].first, dy = at[u].second - at[v].second;
    m(r, col[u]) = dx;
    m(r, col[u] + 1) = dy;
    m(r, col[v]) = -dx;
    m(r, col[v] + 1) = -dy;
  }
  return exact_rank(m);
}

// ------------------------------------------------------------ polytope vertices

/// Vertices of {x : A x <= b, E x = f} by trying every set of k - rank(E)
/// active inequalities. Intended for a handful of variables.
inline std::vector<std::vector<Rational>> polytope_vertices(const RationalMatrix& a, const std::vector<Rational>& b,
                                                            const RationalMatrix& e, const std::vector<Rational>& f) {
  std::size_t k = a.rows() ? a.cols() : e.cols();
  std::size_t m = a.rows();
  if (m > 40) throw error(errc::bound_exceeded, "too many inequalities for brute-force vertex enumeration");
  std::set<std::vector<Rational>> found;
  std::vector<std::size_t> active;
  auto feasible = [&](const std::vector<Rational>& x) {
    for (std::size_t r = 0; r < m; ++r) {
      Rational s = 0;
      for (std::size_t c = 0; c < k; ++c) s += a(r, c) * x[c];
      if (s > b[r]) return false;
    }
    for (std::size_t r = 0; r < e.rows(); ++r) {
      Rational s = 0;
      for (std::size_t c = 0; c < k; ++c) s += e(r, c) * x[c];
      if (s != f[r]) return false;
    }
    return true;
  };
  auto try_active = [&]() {
    RationalMatrix sys(e.rows() + active.size(), k);
    std::vector<Rational> rhs;
    for (std::size_t r = 0; r < e.rows(); ++r) {
      for (std::size_t c = 0; c < k; ++c) sys(r, c) = e(r, c);
      rhs.push_back(f[r]);
    }
    for (std::size_t i = 0; i < active.size(); ++i) {
      for (std::size_t c = 0; c < k; ++c) sys(e.rows() + i, c) = a(active[i], c);
      rhs.push_back(b[active[i]]);
    }
    auto s = exact_solve(sys, rhs);
    if (s.unique && feasible(*s.unique)) found.insert(*s.unique);
  };
  std::size_t need = k - std::min(k, exact_rank(e));
  auto rec = [&](auto&& self, std::size_t from) -> void {
    if (active.size() == need) {
      try_active();
      return;
    }
    for (std::size_t i = from; i < m; ++i) {
      active.push_back(i);
      self(self, i + 1);
      active.pop_back();
    }
  };
  rec(rec, 0);
  return {found.begin(), found.end()};
}

}  // namespace troplaman::oracle
