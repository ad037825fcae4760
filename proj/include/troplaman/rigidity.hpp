#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "clade_graph.hpp"
#include "core.hpp"
#include "graph.hpp"
#include "linalg.hpp"
#include "tree.hpp"

namespace troplaman {

// ------------------------------------------------------------ (2,3) pebble game

struct PebbleResult {
  int rank = 0;                    // size of a maximal (2,3)-sparse edge subset
  std::vector<Edge> independent;   // the accepted edges, in input order
  std::vector<Edge> dependent;
  std::optional<Mask> violating;   // vertex set spanning > 2k-3 edges, from the first rejected edge
};

inline PebbleResult pebble_game(const SimpleGraph& h) {
  constexpr int slots = max_label + 1;
  std::vector<int> pebbles(slots, 0);
  std::vector<std::vector<int>> out(slots);  // directed edge tail -> head
  for (int v : members(h.vertices())) pebbles[v] = 2;

  std::vector<int> mark(slots, 0), from(slots, 0);
  int stamp = 0;
  // Moves one free pebble to root from a vertex reachable along out-edges,
  // never touching the blocked pair.
  auto fetch = [&](int root, int b1, int b2) {
    ++stamp;
    mark[b1] = mark[b2] = stamp;
    std::vector<int> stack{root};
    mark[root] = stamp;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int y : out[x]) {
        if (mark[y] == stamp) continue;
        mark[y] = stamp;
        from[y] = x;
        if (pebbles[y] > 0) {
          --pebbles[y];
          ++pebbles[root];
          for (int w = y; w != root; w = from[w]) {
            int p = from[w];
            auto& edges = out[p];
            edges.erase(std::find(edges.begin(), edges.end(), w));
            out[w].push_back(p);
          }
          return true;
        }
        stack.push_back(y);
      }
    }
    return false;
  };
  auto reach = [&](int u, int v) {
    Mask seen = bit(u) | bit(v);
    std::vector<int> stack{u, v};
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int y : out[x])
        if (!(seen & bit(y))) {
          seen |= bit(y);
          stack.push_back(y);
        }
    }
    return seen;
  };

  PebbleResult r;
  for (auto [u, v] : h.edges()) {
    // Gather as many pebbles on u and v as possible so that on failure the
    // vertices reachable from them hold at most 3 free pebbles.
    while (pebbles[u] < 2 && fetch(u, u, v)) {}
    while (pebbles[v] < 2 && fetch(v, u, v)) {}
    while (pebbles[u] < 2 && fetch(u, u, v)) {}
    if (pebbles[u] + pebbles[v] < 4) {
      r.dependent.push_back({u, v});
      if (!r.violating) r.violating = reach(u, v);
      continue;
    }
    --pebbles[u];
    out[u].push_back(v);
    r.independent.push_back({u, v});
    ++r.rank;
  }
  return r;
}

struct LamanResult {
  bool laman = false;
  std::string reason;              // empty when laman
  std::optional<Mask> violating;   // a vertex set with more than 2k-3 induced edges
};

inline void require_two_vertices(const SimpleGraph& h) {
  if (h.vertex_count() < 2) throw error(errc::too_small, "graphs need at least 2 vertices");
}

inline std::string count_reason(const SimpleGraph& h) {
  int target = 2 * h.vertex_count() - 3;
  return "|E|=" + std::to_string(h.edge_count()) + (h.edge_count() > target ? " > " : " < ") + std::to_string(target);
}

/// |E| = 2n-3 and (2,3)-sparse, decided by the pebble game.
inline LamanResult is_laman(const SimpleGraph& h) {
  require_two_vertices(h);
  LamanResult r;
  if (h.edge_count() != 2 * h.vertex_count() - 3) {
    r.reason = count_reason(h);
    if (h.edge_count() > 2 * h.vertex_count() - 3) r.violating = h.vertices();
    return r;
  }
  auto p = pebble_game(h);
  if (p.violating) {
    r.violating = p.violating;
    r.reason = "subset " + mask_label(*p.violating) + " spans " + std::to_string(h.induced_edge_count(*p.violating)) +
               " > " + std::to_string(2 * count(*p.violating) - 3) + " edges";
    return r;
  }
  r.laman = true;
  return r;
}

// ------------------------------------------------------------ Henneberg moves

enum class MoveKind { type1, type2 };

struct HennebergMove {
  MoveKind kind;
  int new_vertex;
  std::vector<int> neighbors;        // 2 for type1, 3 for type2, ascending
  std::optional<Edge> removed_edge;  // type2: joins two of the neighbors
  friend bool operator==(const HennebergMove&, const HennebergMove&) = default;
};

inline SimpleGraph henneberg_apply(SimpleGraph g, const HennebergMove& m) {
  std::size_t want = m.kind == MoveKind::type1 ? 2 : 3;
  if (m.neighbors.size() != want) throw error(errc::parse_error, "wrong number of neighbors for the move");
  if (m.kind == MoveKind::type2) {
    if (!m.removed_edge) throw error(errc::parse_error, "type 2 move without a removed edge");
    auto [a, b] = *m.removed_edge;
    auto has = [&](int x) { return std::find(m.neighbors.begin(), m.neighbors.end(), x) != m.neighbors.end(); };
    if (!has(a) || !has(b)) throw error(errc::parse_error, "removed edge must join two neighbors");
    g.remove_edge(a, b);
  }
  g.add_vertex(m.new_vertex);
  for (int x : m.neighbors) g.add_edge(m.new_vertex, x);
  return g;
}

struct HennebergDecomposition {
  bool success = false;
  Edge base{0, 0};                   // the K2 the moves start from
  std::vector<HennebergMove> moves;  // in build order
  std::string obstruction;
};

/// Reconstructs the graph from its base edge by applying the moves in order.
inline SimpleGraph henneberg_replay(Edge base, const std::vector<HennebergMove>& moves) {
  SimpleGraph g(bit(base.first) | bit(base.second), {base});
  for (const auto& m : moves) g = henneberg_apply(std::move(g), m);
  return g;
}

/// Peels vertices in reverse: the smallest degree-2 vertex if any, otherwise a
/// degree-3 vertex together with a missing edge among its neighbors whose
/// reinsertion leaves a Laman graph. The missing edge must be chosen with care;
/// an arbitrary one can produce a graph that is no longer Laman.
inline HennebergDecomposition henneberg_decompose(const SimpleGraph& h) {
  HennebergDecomposition d;
  if (h.vertex_count() < 2) {
    d.obstruction = "fewer than 2 vertices";
    return d;
  }
  SimpleGraph g = h;
  std::vector<HennebergMove> reversed;
  while (g.vertex_count() > 2) {
    if (g.edge_count() != 2 * g.vertex_count() - 3) {
      d.obstruction = "count violation on " + mask_label(g.vertices()) + ": " + count_reason(g);
      return d;
    }
    std::optional<int> two;
    std::vector<int> threes;
    for (int v : members(g.vertices())) {
      int deg = g.degree(v);
      if (deg == 2 && !two) two = v;
      if (deg == 3) threes.push_back(v);
    }
    if (two) {
      auto nb = members(g.neighbors(*two));
      reversed.push_back({MoveKind::type1, *two, nb, std::nullopt});
      g.remove_vertex(*two);
      continue;
    }
    bool peeled = false;
    for (int v : threes) {
      auto nb = members(g.neighbors(v));
      for (auto [i, j] : {std::pair{0, 1}, {0, 2}, {1, 2}}) {
        int a = nb[i], b = nb[j];
        if (g.has_edge(a, b)) continue;
        SimpleGraph reduced = g;
        reduced.remove_vertex(v);
        reduced.add_edge(a, b);
        if (!is_laman(reduced).laman) continue;
        reversed.push_back({MoveKind::type2, v, nb, Edge{a, b}});
        g = std::move(reduced);
        peeled = true;
        break;
      }
      if (peeled) break;
    }
    if (!peeled) {
      d.obstruction = "no peelable vertex in " + mask_label(g.vertices());
      return d;
    }
  }
  if (g.edge_count() != 1) {
    d.obstruction = "final two vertices are not joined by an edge";
    return d;
  }
  d.success = true;
  d.base = g.edges()[0];
  d.moves.assign(reversed.rbegin(), reversed.rend());
  return d;
}

// ------------------------------------------------------------ certificates

struct CertificateStep {
  HennebergMove move;
  std::string case_tag;   // "type1", "1", "2", "2-swapped", "3-T2-ac", ...
  Mask target1, target2;  // clades (or leaves) of the old trees the new leaf was attached at
};

struct Certificate {
  SimpleGraph graph;
  RootedTree t1, t2;
  Edge base{0, 0};
  std::vector<CertificateStep> trace;
};

/// G^H_{T1,T2} is a spanning tree.
inline bool verify_certificate(const SimpleGraph& h, const RootedTree& t1, const RootedTree& t2) {
  if (!t1.is_binary() || !t2.is_binary()) throw error(errc::not_binary, "certificate trees must be binary");
  if (t1.leaves() != h.vertices() || t2.leaves() != h.vertices())
    throw error(errc::leaf_mismatch, "tree leaves differ from the graph's vertices");
  return is_spanning_tree(CladeGraph::build_restricted(t1, t2, h));
}

namespace detail {

// The pair among a,b,c joined below the third in a binary tree.
inline Edge closest_pair(const RootedTree& t, int a, int b, int c) {
  if (!(t.smallest_clade(bit(a) | bit(b)) & bit(c))) return {a, b};
  if (!(t.smallest_clade(bit(a) | bit(c)) & bit(b))) return {a, c};
  return {b, c};
}

}  // namespace detail

/// Builds binary trees T1,T2 with G^H_{T1,T2} a spanning tree by following a
/// Henneberg construction of H; throws NotHenneberg when none exists.
inline Certificate build_certificate(const SimpleGraph& h) {
  auto dec = henneberg_decompose(h);
  if (!dec.success) throw error(errc::not_henneberg, dec.obstruction);
  Mask leaves = bit(dec.base.first) | bit(dec.base.second);
  Certificate cert{h, RootedTree::from_clades_on(leaves, std::span<const Mask>{}),
                   RootedTree::from_clades_on(leaves, std::span<const Mask>{}), dec.base, {}};
  SimpleGraph cur(leaves, {dec.base});

  for (const auto& m : dec.moves) {
    int v = m.new_vertex;
    CertificateStep step{m, "", 0, 0};
    if (m.kind == MoveKind::type1) {
      step.case_tag = "type1";
      step.target1 = bit(m.neighbors[0]);
      step.target2 = bit(m.neighbors[1]);
    } else {
      auto [a, b] = *m.removed_edge;
      int c = 0;
      for (int x : m.neighbors)
        if (x != a && x != b) c = x;
      const RootedTree& t1 = cert.t1;
      const RootedTree& t2 = cert.t2;
      SimpleGraph reduced = cur;
      reduced.remove_edge(a, b);
      auto g = CladeGraph::build_restricted(t1, t2, reduced);
      auto comp = components(g);
      auto comp_of = [&](Side side, Mask clade) { return comp.component_of[g.index_of(side, clade)]; };
      Mask abc = bit(a) | bit(b) | bit(c);
      Edge p1 = detail::closest_pair(t1, a, b, c);
      Edge p2 = detail::closest_pair(t2, a, b, c);
      Edge ab{a, b};
      if (p1 == ab && p2 == ab) {
        int top1 = comp_of(Side::left, t1.smallest_clade(abc));
        int top2 = comp_of(Side::right, t2.smallest_clade(abc));
        if (top1 != top2) {
          step.case_tag = "1";
          step.target1 = bit(a);
          step.target2 = t2.smallest_clade(bit(a) | bit(b));
        } else if (comp_of(Side::left, t1.smallest_clade(bit(a) | bit(b))) != top1) {
          step.case_tag = "2";
          step.target1 = bit(a);
          step.target2 = bit(c);
        } else {
          step.case_tag = "2-swapped";
          step.target1 = bit(c);
          step.target2 = bit(a);
        }
      } else if (p2 == Edge{a, c}) {
        step.case_tag = "3-T2-ac";
        step.target1 = bit(a);
        step.target2 = t2.smallest_clade(bit(a) | bit(c));
      } else if (p2 == Edge{b, c}) {
        step.case_tag = "3-T2-bc";
        step.target1 = bit(b);
        step.target2 = t2.smallest_clade(bit(b) | bit(c));
      } else if (p1 == Edge{a, c}) {
        step.case_tag = "3-T1-ac";
        step.target1 = t1.smallest_clade(bit(a) | bit(c));
        step.target2 = bit(a);
      } else {
        step.case_tag = "3-T1-bc";
        step.target1 = t1.smallest_clade(bit(b) | bit(c));
        step.target2 = bit(b);
      }
    }
    cert.t1 = cert.t1.attach_leaf(step.target1, v);
    cert.t2 = cert.t2.attach_leaf(step.target2, v);
    cur = henneberg_apply(std::move(cur), m);
    if (!verify_certificate(cur, cert.t1, cert.t2))
      throw std::logic_error("certificate step " + step.case_tag + " adding vertex " + std::to_string(v) +
                             " does not give a spanning tree");
    cert.trace.push_back(std::move(step));
  }
  if (!(cur == h) || !verify_certificate(h, cert.t1, cert.t2))
    throw std::logic_error("certificate does not verify on the input graph");
  return cert;
}

/// Exhaustive search over ordered pairs of binary trees on V(H); returns the
/// first pair (in enumeration order) whose restricted clade graph is a tree.
inline std::optional<std::pair<RootedTree, RootedTree>> min_rigid_by_search(const SimpleGraph& h, int max_n = 6) {
  require_two_vertices(h);
  if (h.vertex_count() > max_n)
    throw error(errc::search_bound_exceeded, "graph has " + std::to_string(h.vertex_count()) +
                                                 " vertices, search bound is " + std::to_string(max_n));
  int k = h.vertex_count();
  if (h.edge_count() != 2 * k - 3) return std::nullopt;
  auto trees = binary_trees(h.vertices());
  const auto& edges = h.edges();
  std::vector<std::vector<int>> lca(trees.size(), std::vector<int>(edges.size()));
  for (std::size_t t = 0; t < trees.size(); ++t)
    for (std::size_t e = 0; e < edges.size(); ++e)
      lca[t][e] = trees[t].smallest_clade_index(bit(edges[e].first) | bit(edges[e].second));

  // 2k-2 vertices and 2k-3 edges: a tree iff acyclic.
  int side = k - 1;
  std::vector<int> parent(2 * side);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < trees.size(); ++i)
    for (std::size_t j = 0; j < trees.size(); ++j) {
      for (int x = 0; x < 2 * side; ++x) parent[x] = x;
      bool acyclic = true;
      for (std::size_t e = 0; e < edges.size() && acyclic; ++e) {
        int a = find(lca[i][e]), b = find(side + lca[j][e]);
        if (a == b)
          acyclic = false;
        else
          parent[b] = a;
      }
      if (acyclic) return std::pair{trees[i], trees[j]};
    }
  return std::nullopt;
}

// ------------------------------------------------------------ rigidity matrix

struct Placement {
  std::vector<Rational> x, y;  // indexed by label; unused slots zero
};

/// Rows are the gradients of (x_u-x_v)^2 + (y_u-y_v)^2; columns x_w, y_w per
/// vertex w in label order.
inline RationalMatrix rigidity_matrix(const SimpleGraph& h, const Placement& p) {
  auto verts = members(h.vertices());
  std::vector<int> col(max_label + 1, -1);
  for (std::size_t i = 0; i < verts.size(); ++i) col[verts[i]] = static_cast<int>(2 * i);
  RationalMatrix m(h.edge_count(), 2 * verts.size());
  for (int r = 0; r < h.edge_count(); ++r) {
    auto [u, v] = h.edges()[r];
    Rational dx = 2 * (p.x[u] - p.x[v]), dy = 2 * (p.y[u] - p.y[v]);
    m(r, col[u]) = dx;
    m(r, col[u] + 1) = dy;
    m(r, col[v]) = -dx;
    m(r, col[v] + 1) = -dy;
  }
  return m;
}

inline Placement random_placement(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> coord(0, (std::uint64_t{1} << 31) - 1);
  Placement p;
  p.x.resize(max_label + 1);
  p.y.resize(max_label + 1);
  for (int v = 1; v <= max_label; ++v) {
    p.x[v] = Rational(static_cast<unsigned long>(coord(rng)));
    p.y[v] = Rational(static_cast<unsigned long>(coord(rng)));
  }
  return p;
}

/// Rank of E(H) in the generic planar rigidity matroid: the pebble-game rank,
/// confirmed by the exact Jacobian rank at random integer points.
inline int generic_rigidity_rank(const SimpleGraph& h, std::uint64_t seed = 0x243f6a8885a308d3ULL) {
  require_two_vertices(h);
  int combinatorial = pebble_game(h).rank;
  std::mt19937_64 rng(seed);
  int numeric = 0;
  for (int attempt = 0; attempt < 4; ++attempt) {
    numeric = static_cast<int>(rank(rigidity_matrix(h, random_placement(rng))));
    if (numeric > combinatorial) throw std::logic_error("Jacobian rank exceeds the pebble-game rank");
    if (numeric == combinatorial) return combinatorial;
  }
  throw std::logic_error("Jacobian rank " + std::to_string(numeric) + " stays below pebble-game rank " +
                         std::to_string(combinatorial));
}

}  // namespace troplaman
