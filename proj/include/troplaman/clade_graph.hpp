#pragma once

#include <numeric>
#include <stdexcept>
#include <vector>

#include "core.hpp"
#include "graph.hpp"
#include "linalg.hpp"
#include "tree.hpp"

namespace troplaman {

enum class Side { left, right };

struct CladeVertex {
  Side side;
  Mask clade;
  friend bool operator==(const CladeVertex&, const CladeVertex&) = default;
};

/// Edge e_uv joining the smallest clades containing uv on each side.
struct CladeEdge {
  int u, v;
  int left, right;  // vertex indices
  friend bool operator==(const CladeEdge&, const CladeEdge&) = default;
};

/// Bipartite multigraph on clade(T1) ⊔ clade(T2). Vertices are ordered left
/// side first, each side in canonical clade order; parallel edges are kept
/// and identified by their generating pair.
class CladeGraph {
 public:
  static CladeGraph build(const RootedTree& t1, const RootedTree& t2) {
    check_leaves(t1, t2);
    CladeGraph g(t1, t2);
    auto labels = members(t1.leaves());
    for (std::size_t i = 0; i < labels.size(); ++i)
      for (std::size_t j = i + 1; j < labels.size(); ++j) g.add(t1, t2, labels[i], labels[j]);
    return g;
  }

  /// Only the edges e_uv with uv ∈ E(H).
  static CladeGraph build_restricted(const RootedTree& t1, const RootedTree& t2, const SimpleGraph& h) {
    check_leaves(t1, t2);
    if (h.vertices() != t1.leaves())
      throw error(errc::leaf_mismatch, "graph vertices " + mask_label(h.vertices()) + " differ from leaves " +
                                           mask_label(t1.leaves()));
    CladeGraph g(t1, t2);
    for (auto [u, v] : h.edges()) g.add(t1, t2, u, v);
    return g;
  }

  int vertex_count() const noexcept { return static_cast<int>(vertices_.size()); }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
  int left_count() const noexcept { return left_count_; }
  const std::vector<CladeVertex>& vertices() const noexcept { return vertices_; }
  const std::vector<CladeEdge>& edges() const noexcept { return edges_; }

  int index_of(Side side, Mask clade) const {
    for (int i = 0; i < vertex_count(); ++i)
      if (vertices_[i].side == side && vertices_[i].clade == clade) return i;
    return -1;
  }

 private:
  CladeGraph(const RootedTree& t1, const RootedTree& t2) : left_count_(static_cast<int>(t1.size())) {
    for (Mask c : t1.clades()) vertices_.push_back({Side::left, c});
    for (Mask c : t2.clades()) vertices_.push_back({Side::right, c});
  }

  static void check_leaves(const RootedTree& t1, const RootedTree& t2) {
    if (t1.leaves() != t2.leaves())
      throw error(errc::leaf_mismatch, "trees on " + mask_label(t1.leaves()) + " and " + mask_label(t2.leaves()));
  }

  void add(const RootedTree& t1, const RootedTree& t2, int u, int v) {
    Mask p = bit(u) | bit(v);
    edges_.push_back({u, v, t1.smallest_clade_index(p), left_count_ + t2.smallest_clade_index(p)});
  }

  int left_count_ = 0;
  std::vector<CladeVertex> vertices_;
  std::vector<CladeEdge> edges_;
};

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  /// Links the classes of a and b, keeping the smaller root; false if already joined.
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<int> parent_;
};

struct Components {
  std::vector<int> component_of;  // ids numbered by smallest member vertex
  int count = 0;
};

inline Components components(const CladeGraph& g) {
  UnionFind uf(g.vertex_count());
  for (const auto& e : g.edges()) uf.unite(e.left, e.right);
  Components c;
  c.component_of.assign(g.vertex_count(), -1);
  std::vector<int> id_of_root(g.vertex_count(), -1);
  for (int v = 0; v < g.vertex_count(); ++v) {
    int r = uf.find(v);
    if (id_of_root[r] < 0) id_of_root[r] = c.count++;
    c.component_of[v] = id_of_root[r];
  }
  return c;
}

/// Rank of the graphic matroid: vertices minus connected components.
inline int graphic_rank(const CladeGraph& g) { return g.vertex_count() - components(g).count; }

inline bool is_spanning_tree(const CladeGraph& g) {
  return components(g).count == 1 && g.edge_count() == g.vertex_count() - 1;
}

/// Edge-by-vertex 0/1 incidence matrix.
inline RationalMatrix incidence_matrix(const CladeGraph& g) {
  RationalMatrix m(g.edge_count(), g.vertex_count());
  for (int i = 0; i < g.edge_count(); ++i) {
    m(i, g.edges()[i].left) = 1;
    m(i, g.edges()[i].right) = 1;
  }
  return m;
}

/// Exact rank of the incidence matrix; equals the graphic rank for bipartite graphs.
inline int incidence_rank(const CladeGraph& g) {
  int r = static_cast<int>(rank(incidence_matrix(g)));
  if (r != graphic_rank(g)) throw std::logic_error("incidence rank differs from graphic rank");
  return r;
}

/// The homomorphism G^{H'}_{T1',T2'} -> G^H_{T1,T2} sending a clade C of the
/// restricted tree T_i' to the smallest clade of T_i containing it.
struct InducedHomomorphism {
  CladeGraph source;
  CladeGraph target;
  std::vector<int> vertex_map;  // source vertex -> target vertex
};

inline InducedHomomorphism induced_hom(const SimpleGraph& sub, const SimpleGraph& h, const RootedTree& t1,
                                       const RootedTree& t2) {
  if (!sub.is_subgraph_of(h)) throw error(errc::not_subgraph, "H' is not a subgraph of H");
  RootedTree r1 = t1.restrict(sub.vertices());
  RootedTree r2 = t2.restrict(sub.vertices());
  InducedHomomorphism out{CladeGraph::build_restricted(r1, r2, sub), CladeGraph::build_restricted(t1, t2, h), {}};
  std::vector<bool> hit(out.target.vertex_count(), false);
  for (const auto& v : out.source.vertices()) {
    const RootedTree& big = v.side == Side::left ? t1 : t2;
    int image = out.target.index_of(v.side, big.smallest_clade(v.clade));
    if (image < 0 || hit[image]) throw std::logic_error("induced map is not injective");
    hit[image] = true;
    out.vertex_map.push_back(image);
  }
  for (const auto& e : out.source.edges()) {
    bool found = false;
    for (const auto& f : out.target.edges()) {
      if (f.u != e.u || f.v != e.v) continue;
      found = f.left == out.vertex_map[e.left] && f.right == out.vertex_map[e.right];
      break;
    }
    if (!found) throw std::logic_error("induced map does not send e_uv to e_uv");
  }
  return out;
}

}  // namespace troplaman
