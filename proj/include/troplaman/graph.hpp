#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"

namespace troplaman {

using Edge = std::pair<int, int>;  // always u < v

/// Undirected simple graph on an explicit vertex set of labels.
class SimpleGraph {
 public:
  SimpleGraph() = default;

  /// Vertices 1..n.
  SimpleGraph(int n, std::vector<Edge> edges) : SimpleGraph(full_mask(check_n(n)), std::move(edges)) {}

  SimpleGraph(Mask vertices, std::vector<Edge> edges) : vertices_(vertices) {
    for (auto e : edges) add_edge(e.first, e.second);
  }

  static SimpleGraph complete(int n) {
    SimpleGraph g(n, {});
    for (int u = 1; u <= n; ++u)
      for (int v = u + 1; v <= n; ++v) g.add_edge(u, v);
    return g;
  }

  Mask vertices() const noexcept { return vertices_; }
  int vertex_count() const noexcept { return count(vertices_); }
  /// Largest vertex label.
  int n() const noexcept { return highest(vertices_); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }

  bool has_vertex(int v) const { return v >= 1 && v <= max_label && (vertices_ & bit(v)); }

  bool has_edge(int u, int v) const {
    Edge e = normalized(u, v);
    return std::binary_search(edges_.begin(), edges_.end(), e);
  }

  void add_vertex(int v) {
    if (v < 1 || v > max_label) throw error(errc::bad_leaf, "vertex label out of range");
    if (has_vertex(v)) throw error(errc::duplicate_vertex, "vertex " + std::to_string(v) + " already present");
    vertices_ |= bit(v);
  }

  void add_edge(int u, int v) {
    if (u == v) throw error(errc::parse_error, "loop at vertex " + std::to_string(u));
    if (!has_vertex(u) || !has_vertex(v))
      throw error(errc::bad_leaf, "edge " + std::to_string(u) + "-" + std::to_string(v) + " leaves the vertex set");
    Edge e = normalized(u, v);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it != edges_.end() && *it == e)
      throw error(errc::parse_error, "parallel edge " + std::to_string(u) + "-" + std::to_string(v));
    edges_.insert(it, e);
  }

  void remove_edge(int u, int v) {
    Edge e = normalized(u, v);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it == edges_.end() || *it != e)
      throw error(errc::missing_edge, "no edge " + std::to_string(e.first) + "-" + std::to_string(e.second));
    edges_.erase(it);
  }

  void remove_vertex(int v) {
    if (!has_vertex(v)) throw error(errc::bad_leaf, "no vertex " + std::to_string(v));
    std::erase_if(edges_, [v](Edge e) { return e.first == v || e.second == v; });
    vertices_ &= ~bit(v);
  }

  Mask neighbors(int v) const {
    Mask m = 0;
    for (auto [a, b] : edges_) {
      if (a == v) m |= bit(b);
      if (b == v) m |= bit(a);
    }
    return m;
  }

  int degree(int v) const { return count(neighbors(v)); }

  int induced_edge_count(Mask s) const {
    int k = 0;
    for (auto [a, b] : edges_)
      if ((s & bit(a)) && (s & bit(b))) ++k;
    return k;
  }

  SimpleGraph induced(Mask s) const {
    SimpleGraph g;
    g.vertices_ = s & vertices_;
    for (auto e : edges_)
      if ((g.vertices_ & bit(e.first)) && (g.vertices_ & bit(e.second))) g.edges_.push_back(e);
    return g;
  }

  /// True when every vertex and edge of this graph belongs to `other`.
  bool is_subgraph_of(const SimpleGraph& other) const {
    if (!subset_of(vertices_, other.vertices_)) return false;
    return std::includes(other.edges_.begin(), other.edges_.end(), edges_.begin(), edges_.end());
  }

  friend bool operator==(const SimpleGraph&, const SimpleGraph&) = default;

 private:
  static int check_n(int n) {
    if (n < 1 || n > max_label) throw error(errc::bad_leaf, "vertex count must be in 1..64");
    return n;
  }
  static Edge normalized(int u, int v) { return u < v ? Edge{u, v} : Edge{v, u}; }

  Mask vertices_ = 0;
  std::vector<Edge> edges_;
};

}  // namespace troplaman
