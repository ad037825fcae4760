#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace troplaman {

using Rational = mpq_class;

/// A subset of the labels 1..64; label v occupies bit v-1.
using Mask = std::uint64_t;

inline constexpr int max_label = 64;

enum class errc {
  not_laminar,
  bad_leaf,
  too_small,
  unknown_clade,
  leaf_mismatch,
  not_ultrametric,
  weight_order_violated,
  search_bound_exceeded,
  not_subgraph,
  missing_edge,
  duplicate_vertex,
  not_henneberg,
  not_binary,
  dependent_generators,
  bound_exceeded,
  not_tp_face,
  parse_error,
};

inline const char* errc_name(errc e) {
  switch (e) {
    case errc::not_laminar: return "NotLaminar";
    case errc::bad_leaf: return "BadLeaf";
    case errc::too_small: return "TooSmall";
    case errc::unknown_clade: return "UnknownClade";
    case errc::leaf_mismatch: return "LeafMismatch";
    case errc::not_ultrametric: return "NotUltrametric";
    case errc::weight_order_violated: return "WeightOrderViolated";
    case errc::search_bound_exceeded: return "SearchBoundExceeded";
    case errc::not_subgraph: return "NotSubgraph";
    case errc::missing_edge: return "MissingEdge";
    case errc::duplicate_vertex: return "DuplicateVertex";
    case errc::not_henneberg: return "NotHenneberg";
    case errc::not_binary: return "NotBinary";
    case errc::dependent_generators: return "DependentGenerators";
    case errc::bound_exceeded: return "BoundExceeded";
    case errc::not_tp_face: return "NotTpFace";
    case errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

// ---------------------------------------------------------------- masks

constexpr Mask bit(int v) { return Mask{1} << (v - 1); }

constexpr Mask full_mask(int n) { return n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1; }

constexpr int count(Mask m) { return std::popcount(m); }

constexpr bool subset_of(Mask a, Mask b) { return (a & ~b) == 0; }

constexpr bool crosses(Mask a, Mask b) {
  return (a & b) != 0 && !subset_of(a, b) && !subset_of(b, a);
}

constexpr int lowest(Mask m) { return std::countr_zero(m) + 1; }

constexpr int highest(Mask m) { return 64 - std::countl_zero(m); }

inline std::vector<int> members(Mask m) {
  std::vector<int> out;
  out.reserve(count(m));
  while (m) {
    out.push_back(lowest(m));
    m &= m - 1;
  }
  return out;
}

template <class Range>
Mask mask_of(const Range& labels) {
  Mask m = 0;
  for (int v : labels) m |= bit(v);
  return m;
}

/// Canonical clade order: by size, then lexicographically by sorted member list.
constexpr bool canonical_less(Mask a, Mask b) {
  int ca = count(a), cb = count(b);
  if (ca != cb) return ca < cb;
  if (a == b) return false;
  Mask diff = a ^ b;
  return (a & (diff & -diff)) != 0;
}

struct CanonicalLess {
  constexpr bool operator()(Mask a, Mask b) const { return canonical_less(a, b); }
};

/// "123" when every label is a single digit, "{1,2,10}" otherwise.
inline std::string mask_label(Mask m) {
  auto ms = members(m);
  bool single_digit = true;
  for (int v : ms) single_digit = single_digit && v < 10;
  std::string out;
  if (single_digit) {
    for (int v : ms) out += static_cast<char>('0' + v);
    return out;
  }
  out = "{";
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(ms[i]);
  }
  return out + "}";
}

// ---------------------------------------------------------------- pairs

constexpr int pair_count(int n) { return n * (n - 1) / 2; }

/// Index of {u,v}, u<v, in lexicographic order over pairs of [n].
constexpr int pair_index(int n, int u, int v) {
  if (u > v) std::swap(u, v);
  return (u - 1) * (2 * n - u) / 2 + (v - u - 1);
}

inline std::pair<int, int> pair_at(int n, int index) {
  for (int u = 1; u < n; ++u) {
    int row = n - u;
    if (index < row) return {u, u + 1 + index};
    index -= row;
  }
  throw std::out_of_range("pair index out of range");
}

inline std::vector<std::pair<int, int>> all_pairs(int n) {
  std::vector<std::pair<int, int>> out;
  out.reserve(pair_count(n));
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v) out.emplace_back(u, v);
  return out;
}

inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto first = s.find_first_not_of(" \t\r\n");
  auto last = s.find_last_not_of(" \t\r\n");
  if (first == std::string::npos) throw error(errc::parse_error, "empty rational");
  s = s.substr(first, last - first + 1);
  if (!s.empty() && s[0] == '+') s.erase(0, 1);
  Rational q;
  if (auto dot = s.find('.'); dot != std::string::npos) {
    // exact decimal: digits after the point become a power-of-ten denominator
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    if (digits.empty() || digits == "-" || s.find('/') != std::string::npos)
      throw error(errc::parse_error, "bad rational '" + s + "'");
    mpz_class num, den;
    if (num.set_str(digits, 10) != 0) throw error(errc::parse_error, "bad rational '" + s + "'");
    mpz_ui_pow_ui(den.get_mpz_t(), 10, s.size() - dot - 1);
    q = Rational(num, den);
    q.canonicalize();
    return q;
  }
  if (q.set_str(s, 10) != 0) throw error(errc::parse_error, "bad rational '" + s + "'");
  if (q.get_den() == 0) throw error(errc::parse_error, "zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace troplaman
