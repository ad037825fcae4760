#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core.hpp"

namespace troplaman {

/// A rooted leaf-labeled tree stored as its laminar family of clades.
///
/// Only clades with at least two leaves are stored; the trivial clade (the
/// whole leaf set) is always present. Clades are kept in canonical order
/// (size, then lexicographic members), so the root is the last entry.
class RootedTree {
 public:
  RootedTree() = default;

  /// Tree on leaves 1..n.
  static RootedTree from_clades(int n, std::span<const Mask> sets) {
    if (n < 2) throw error(errc::too_small, "a tree needs at least two leaves");
    if (n > max_label) throw error(errc::bad_leaf, "at most 64 leaves are supported");
    return from_clades_on(full_mask(n), sets);
  }

  static RootedTree from_clades(int n, std::initializer_list<Mask> sets) {
    return from_clades(n, std::span<const Mask>(sets.begin(), sets.size()));
  }

  /// Tree on an arbitrary leaf set.
  static RootedTree from_clades_on(Mask leaves, std::span<const Mask> sets) {
    if (count(leaves) < 2) throw error(errc::too_small, "a tree needs at least two leaves");
    std::vector<Mask> clades;
    clades.reserve(sets.size() + 1);
    for (Mask s : sets) {
      if (!subset_of(s, leaves))
        throw error(errc::bad_leaf, "clade " + mask_label(s) + " mentions a leaf outside " +
                                        mask_label(leaves));
      if (count(s) < 2) throw error(errc::too_small, "clade " + mask_label(s) + " has < 2 leaves");
      clades.push_back(s);
    }
    clades.push_back(leaves);
    std::sort(clades.begin(), clades.end(), CanonicalLess{});
    clades.erase(std::unique(clades.begin(), clades.end()), clades.end());
    for (std::size_t i = 0; i < clades.size(); ++i)
      for (std::size_t j = i + 1; j < clades.size(); ++j)
        if (crosses(clades[i], clades[j]))
          throw error(errc::not_laminar,
                      mask_label(clades[i]) + " and " + mask_label(clades[j]) + " cross");
    RootedTree t;
    t.leaves_ = leaves;
    t.clades_ = std::move(clades);
    return t;
  }

  static RootedTree from_clades_on(Mask leaves, std::initializer_list<Mask> sets) {
    return from_clades_on(leaves, std::span<const Mask>(sets.begin(), sets.size()));
  }

  static RootedTree star(int n) { return from_clades(n, {}); }

  Mask leaves() const noexcept { return leaves_; }
  int leaf_count() const noexcept { return count(leaves_); }
  /// Largest leaf label; equals the leaf count when the leaf set is 1..n.
  int n() const noexcept { return highest(leaves_); }
  bool on_standard_leaves() const noexcept { return leaves_ == full_mask(n()); }

  /// All clades including the trivial one, in canonical order.
  const std::vector<Mask>& clades() const noexcept { return clades_; }

  std::vector<Mask> proper_clades() const {
    return std::vector<Mask>(clades_.begin(), clades_.end() - 1);
  }

  std::size_t size() const noexcept { return clades_.size(); }

  int index_of(Mask c) const {
    auto it = std::lower_bound(clades_.begin(), clades_.end(), c, CanonicalLess{});
    if (it == clades_.end() || *it != c) return -1;
    return static_cast<int>(it - clades_.begin());
  }

  bool contains(Mask c) const { return index_of(c) >= 0; }

  bool is_binary() const { return static_cast<int>(clades_.size()) == leaf_count() - 1; }

  /// Inclusion-minimal clade containing s; a single leaf is returned as itself.
  Mask smallest_clade(Mask s) const {
    if (s == 0) throw error(errc::too_small, "smallest_clade of the empty set");
    if (!subset_of(s, leaves_)) throw error(errc::bad_leaf, mask_label(s) + " is not a leaf subset");
    if (count(s) == 1) return s;
    for (Mask c : clades_)
      if (subset_of(s, c)) return c;
    return leaves_;
  }

  int smallest_clade_index(Mask s) const {
    for (std::size_t i = 0; i < clades_.size(); ++i)
      if (subset_of(s, clades_[i])) return static_cast<int>(i);
    return static_cast<int>(clades_.size()) - 1;
  }

  /// Smallest clade strictly containing c, or 0 for the root.
  Mask parent(Mask c) const {
    for (Mask d : clades_)
      if (d != c && subset_of(c, d)) return d;
    return 0;
  }

  /// Children of a clade: maximal stored clades strictly inside it, plus
  /// leaves not covered by any of them (as singletons).
  std::vector<Mask> children(Mask c) const {
    std::vector<Mask> out;
    Mask covered = 0;
    for (auto it = clades_.rbegin(); it != clades_.rend(); ++it) {
      Mask d = *it;
      if (d == c || !subset_of(d, c) || (d & covered)) continue;
      out.push_back(d);
      covered |= d;
    }
    for (int v : members(c & ~covered)) out.push_back(bit(v));
    std::sort(out.begin(), out.end(), [](Mask a, Mask b) { return lowest(a) < lowest(b); });
    return out;
  }

  /// Clades {C ∩ s : |C ∩ s| >= 2}, i.e. the induced subtree on s with
  /// degree-two vertices contracted.
  RootedTree restrict(Mask s) const {
    if (!subset_of(s, leaves_)) throw error(errc::bad_leaf, mask_label(s) + " is not a leaf subset");
    if (count(s) < 2) throw error(errc::too_small, "restriction needs at least two leaves");
    std::vector<Mask> out;
    for (Mask c : clades_)
      if (count(c & s) >= 2) out.push_back(c & s);
    return from_clades_on(s, out);
  }

  /// Subdivides the edge above `target` (a stored clade or a single leaf)
  /// with a new vertex whose other child is the new leaf v. Every clade
  /// strictly containing `target` gains v and target ∪ {v} becomes a clade.
  RootedTree attach_leaf(Mask target, int v) const {
    if (v < 1 || v > max_label) throw error(errc::bad_leaf, "leaf label out of range");
    if (leaves_ & bit(v)) throw error(errc::bad_leaf, "leaf " + std::to_string(v) + " already present");
    bool is_leaf = count(target) == 1 && subset_of(target, leaves_);
    if (!is_leaf && !contains(target))
      throw error(errc::unknown_clade, mask_label(target) + " is neither a clade nor a leaf");
    std::vector<Mask> out;
    out.reserve(clades_.size() + 1);
    for (Mask d : clades_) out.push_back(d != target && subset_of(target, d) ? d | bit(v) : d);
    out.push_back(target | bit(v));
    return from_clades_on(leaves_ | bit(v), out);
  }

  friend bool operator==(const RootedTree&, const RootedTree&) = default;

 private:
  Mask leaves_ = 0;
  std::vector<Mask> clades_;
};

/// Streams every rooted binary tree on a leaf set exactly once.
///
/// Trees are built by inserting the leaves in increasing label order; leaf j
/// goes above one of the 2j-3 vertices of the current tree (leaves first in
/// label order, then clades in canonical order). The last leaf varies fastest.
class BinaryTreeEnumerator {
 public:
  explicit BinaryTreeEnumerator(Mask leaves) : labels_(members(leaves)) {
    if (labels_.size() < 2) throw error(errc::too_small, "binary trees need at least two leaves");
    digits_.assign(labels_.size() - 2, 0);
  }

  explicit BinaryTreeEnumerator(int n) : BinaryTreeEnumerator(full_mask(n)) {}

  std::optional<RootedTree> next() {
    if (done_) return std::nullopt;
    if (started_ && !advance()) {
      done_ = true;
      return std::nullopt;
    }
    started_ = true;
    return build();
  }

 private:
  bool advance() {
    for (std::size_t i = digits_.size(); i-- > 0;) {
      int radix = 2 * static_cast<int>(i + 3) - 3;
      if (++digits_[i] < radix) return true;
      digits_[i] = 0;
    }
    return false;
  }

  RootedTree build() const {
    RootedTree t = RootedTree::from_clades_on(bit(labels_[0]) | bit(labels_[1]), {});
    for (std::size_t i = 0; i < digits_.size(); ++i) {
      int choice = digits_[i];
      auto leaves = members(t.leaves());
      Mask target = choice < static_cast<int>(leaves.size())
                        ? bit(leaves[choice])
                        : t.clades()[choice - leaves.size()];
      t = t.attach_leaf(target, labels_[i + 2]);
    }
    return t;
  }

  std::vector<int> labels_;
  std::vector<int> digits_;
  bool started_ = false;
  bool done_ = false;
};

template <class Fn>
void for_each_binary_tree(Mask leaves, Fn&& fn) {
  BinaryTreeEnumerator e(leaves);
  while (auto t = e.next()) fn(*t);
}

inline std::vector<RootedTree> binary_trees(Mask leaves) {
  std::vector<RootedTree> out;
  for_each_binary_tree(leaves, [&](const RootedTree& t) { out.push_back(t); });
  return out;
}

inline std::vector<RootedTree> binary_trees(int n) { return binary_trees(full_mask(n)); }

}  // namespace troplaman
