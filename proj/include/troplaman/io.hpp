#pragma once

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "clade_graph.hpp"
#include "cones.hpp"
#include "core.hpp"
#include "graph.hpp"
#include "rigidity.hpp"
#include "tree.hpp"
#include "ultrametric.hpp"

namespace troplaman::io {

using json = nlohmann::ordered_json;

inline json labels_json(Mask m) { return json(members(m)); }

inline Mask mask_from_json(const json& j) {
  if (!j.is_array()) throw error(errc::parse_error, "a set must be a JSON array of labels");
  Mask m = 0;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw error(errc::parse_error, "labels must be integers");
    int v = x.get<int>();
    if (v < 1 || v > max_label) throw error(errc::bad_leaf, "label " + std::to_string(v) + " out of range 1..64");
    if (m & bit(v)) throw error(errc::parse_error, "label " + std::to_string(v) + " repeated in a set");
    m |= bit(v);
  }
  return m;
}

inline Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return parse_rational(std::to_string(j.get<long long>()));
  if (j.is_number_float()) return parse_rational(j.dump());
  throw error(errc::parse_error, "expected a number or a rational string");
}

inline int n_from_json(const json& j) {
  if (!j.contains("n") || !j["n"].is_number_integer()) throw error(errc::parse_error, "missing integer field \"n\"");
  int n = j["n"].get<int>();
  if (n < 1 || n > max_label) throw error(errc::bad_leaf, "n must be in 1..64");
  return n;
}

inline json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw error(errc::parse_error, std::string("invalid JSON: ") + e.what());
  }
}

inline std::string_view trimmed(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// ------------------------------------------------------------ trees

/// Children listed by smallest leaf, e.g. "(((1,2),3),4);".
inline std::string newick(const RootedTree& t) {
  auto node = [&](auto&& self, Mask c) -> std::string {
    if (count(c) == 1) return std::to_string(lowest(c));
    std::string s = "(";
    auto kids = t.children(c);
    for (std::size_t i = 0; i < kids.size(); ++i) s += (i ? "," : "") + self(self, kids[i]);
    return s + ")";
  };
  return node(node, t.leaves()) + ";";
}

/// Integer leaf labels only; branch lengths and internal labels are rejected.
inline RootedTree parse_newick(std::string_view text) {
  std::string_view s = trimmed(text);
  std::size_t i = 0;
  std::vector<Mask> clades;
  Mask seen = 0;
  auto fail = [&](const std::string& why) -> void {
    throw error(errc::parse_error, "Newick: " + why + " at offset " + std::to_string(i));
  };
  auto skip = [&]() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  auto node = [&](auto&& self) -> Mask {
    skip();
    if (i < s.size() && s[i] == '(') {
      ++i;
      Mask m = 0;
      int kids = 0;
      while (true) {
        Mask c = self(self);
        m |= c;
        ++kids;
        skip();
        if (i < s.size() && s[i] == ',') {
          ++i;
          continue;
        }
        if (i < s.size() && s[i] == ')') {
          ++i;
          break;
        }
        fail("expected ',' or ')'");
      }
      if (kids < 2) fail("internal node with a single child");
      clades.push_back(m);
      return m;
    }
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (start == i) fail("expected a leaf label");
    int v = std::stoi(std::string(s.substr(start, i - start)));
    if (v < 1 || v > max_label) fail("leaf label out of range");
    if (seen & bit(v)) fail("leaf " + std::to_string(v) + " repeated");
    seen |= bit(v);
    return bit(v);
  };
  Mask root = node(node);
  skip();
  if (i < s.size() && s[i] == ';') ++i;
  skip();
  if (i != s.size()) fail("trailing characters");
  if (count(root) < 2) throw error(errc::too_small, "a tree needs at least two leaves");
  return RootedTree::from_clades_on(root, clades);
}

inline json to_json(const RootedTree& t) {
  json j;
  j["n"] = t.n();
  if (!t.on_standard_leaves()) j["leaves"] = labels_json(t.leaves());
  json cl = json::array();
  for (Mask c : t.proper_clades()) cl.push_back(labels_json(c));
  j["clades"] = cl;
  return j;
}

inline RootedTree tree_from_json(const json& j) {
  if (!j.is_object()) throw error(errc::parse_error, "a tree must be a JSON object");
  int n = n_from_json(j);
  Mask leaves = j.contains("leaves") ? mask_from_json(j["leaves"]) : full_mask(n);
  std::vector<Mask> clades;
  if (j.contains("clades")) {
    if (!j["clades"].is_array()) throw error(errc::parse_error, "\"clades\" must be an array");
    for (const auto& c : j["clades"]) clades.push_back(mask_from_json(c));
  }
  return RootedTree::from_clades_on(leaves, clades);
}

/// JSON object or Newick string.
inline RootedTree parse_tree(std::string_view text) {
  auto s = trimmed(text);
  if (!s.empty() && s.front() == '{') {
    try {
      return tree_from_json(parse_json(s));
    } catch (const json::exception& e) {
      throw error(errc::parse_error, e.what());
    }
  }
  if (!s.empty() && s.front() == '(') return parse_newick(s);
  throw error(errc::parse_error, "expected a JSON tree or a Newick string");
}

inline json to_json(const WeightedRootedTree& w) {
  json j;
  j["n"] = w.tree.n();
  if (!w.tree.on_standard_leaves()) j["leaves"] = labels_json(w.tree.leaves());
  json cl = json::array(), ws = json::array();
  for (std::size_t i = 0; i < w.tree.size(); ++i) {
    cl.push_back(labels_json(w.tree.clades()[i]));
    ws.push_back(to_string(w.weights[i]));
  }
  j["clades"] = cl;
  j["weights"] = ws;
  return j;
}

/// Clades with a parallel weights array; the full leaf set must be listed.
inline WeightedRootedTree parse_weighted_tree(std::string_view text) {
  try {
    json j = parse_json(text);
    if (!j.is_object()) throw error(errc::parse_error, "a weighted tree must be a JSON object");
    int n = n_from_json(j);
    Mask leaves = j.contains("leaves") ? mask_from_json(j["leaves"]) : full_mask(n);
    if (!j.contains("clades") || !j.contains("weights") || !j["clades"].is_array() || !j["weights"].is_array())
      throw error(errc::parse_error, "weighted trees need \"clades\" and \"weights\" arrays");
    if (j["clades"].size() != j["weights"].size())
      throw error(errc::parse_error, "\"clades\" and \"weights\" differ in length");
    std::vector<Mask> clades;
    std::vector<Rational> weights;
    for (std::size_t i = 0; i < j["clades"].size(); ++i) {
      clades.push_back(mask_from_json(j["clades"][i]));
      weights.push_back(rational_from_json(j["weights"][i]));
    }
    WeightedRootedTree w{RootedTree::from_clades_on(leaves, clades), {}};
    for (Mask c : w.tree.clades()) {
      auto it = std::find(clades.begin(), clades.end(), c);
      if (it == clades.end()) throw error(errc::parse_error, "no weight for clade " + mask_label(c));
      w.weights.push_back(weights[it - clades.begin()]);
    }
    if (w.tree.size() != clades.size()) throw error(errc::parse_error, "a clade is listed twice");
    w.validate();
    return w;
  } catch (const json::exception& e) {
    throw error(errc::parse_error, e.what());
  }
}

// ------------------------------------------------------------ pair vectors

inline std::string pair_key(int u, int v) { return std::to_string(u) + "," + std::to_string(v); }

inline json to_json(const PairVector& d) {
  json j;
  j["n"] = d.n();
  json p = json::object();
  for (int i = 0; i < static_cast<int>(d.size()); ++i) {
    auto [u, v] = pair_at(d.n(), i);
    p[pair_key(u, v)] = to_string(d[i]);
  }
  j["pairs"] = p;
  return j;
}

inline int n_from_pair_count(std::size_t k) {
  for (int n = 2; n <= max_label; ++n)
    if (static_cast<std::size_t>(pair_count(n)) == k) return n;
  throw error(errc::parse_error, std::to_string(k) + " values is not a binomial coefficient C(n,2)");
}

/// {"n":..,"pairs":{"1,2":..}}, a JSON array, or values separated by commas
/// or whitespace, in lexicographic pair order.
inline PairVector parse_pair_vector(std::string_view text) {
  auto s = trimmed(text);
  try {
    if (!s.empty() && s.front() == '{') {
      json j = parse_json(s);
      int n = n_from_json(j);
      if (j.contains("values")) {
        std::vector<Rational> vals;
        for (const auto& x : j["values"]) vals.push_back(rational_from_json(x));
        return PairVector(n, std::move(vals));
      }
      if (!j.contains("pairs") || !j["pairs"].is_object()) throw error(errc::parse_error, "missing \"pairs\" object");
      PairVector d(n);
      std::vector<bool> set(d.size(), false);
      for (auto& [key, val] : j["pairs"].items()) {
        auto comma = key.find(',');
        if (comma == std::string::npos) throw error(errc::parse_error, "pair key '" + key + "' is not \"u,v\"");
        int u = std::stoi(key.substr(0, comma)), v = std::stoi(key.substr(comma + 1));
        if (u > v) std::swap(u, v);
        if (u < 1 || v > n || u == v) throw error(errc::bad_leaf, "pair key '" + key + "' out of range");
        int idx = pair_index(n, u, v);
        if (set[idx]) throw error(errc::parse_error, "pair " + key + " given twice");
        set[idx] = true;
        d[idx] = rational_from_json(val);
      }
      for (std::size_t i = 0; i < set.size(); ++i)
        if (!set[i]) {
          auto [u, v] = pair_at(n, static_cast<int>(i));
          throw error(errc::parse_error, "missing pair " + pair_key(u, v));
        }
      return d;
    }
    std::vector<Rational> vals;
    if (!s.empty() && s.front() == '[') {
      json j = parse_json(s);
      for (const auto& x : j) vals.push_back(rational_from_json(x));
    } else {
      std::string tok;
      for (char c : std::string(s) + ",") {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
          if (!tok.empty()) vals.push_back(parse_rational(tok));
          tok.clear();
        } else {
          tok += c;
        }
      }
    }
    int n = n_from_pair_count(vals.size());
    return PairVector(n, std::move(vals));
  } catch (const json::exception& e) {
    throw error(errc::parse_error, e.what());
  } catch (const std::invalid_argument&) {
    throw error(errc::parse_error, "bad pair key");
  } catch (const std::out_of_range&) {
    throw error(errc::parse_error, "pair key out of range");
  }
}

// ------------------------------------------------------------ graphs

inline json to_json(const SimpleGraph& g) {
  json j;
  j["n"] = g.n();
  if (g.vertices() != full_mask(g.n())) j["vertices"] = labels_json(g.vertices());
  json e = json::array();
  for (auto [u, v] : g.edges()) e.push_back({u, v});
  j["edges"] = e;
  return j;
}

inline std::string edge_list(const SimpleGraph& g) {
  std::string s = "n " + std::to_string(g.n()) + "\n";
  for (auto [u, v] : g.edges()) s += std::to_string(u) + " " + std::to_string(v) + "\n";
  return s;
}

/// JSON {"n":..,"edges":[[u,v],..]} or an edge list: one "u v" per line, '#'
/// comments, and an optional "n N" line fixing the vertex set to 1..N.
/// Without it the vertices are 1..(largest label).
inline SimpleGraph parse_graph(std::string_view text) {
  auto s = trimmed(text);
  try {
    if (!s.empty() && s.front() == '{') {
      json j = parse_json(s);
      int n = n_from_json(j);
      Mask verts = j.contains("vertices") ? mask_from_json(j["vertices"]) : full_mask(n);
      SimpleGraph g(verts, {});
      if (j.contains("edges")) {
        if (!j["edges"].is_array()) throw error(errc::parse_error, "\"edges\" must be an array");
        for (const auto& e : j["edges"]) {
          if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
            throw error(errc::parse_error, "each edge must be a pair of integers");
          g.add_edge(e[0].get<int>(), e[1].get<int>());
        }
      }
      return g;
    }
    std::istringstream in{std::string(s)};
    std::string line;
    int declared = 0, largest = 0, lineno = 0;
    std::vector<Edge> edges;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
      std::istringstream ls(line);
      std::string first;
      if (!(ls >> first)) continue;
      auto as_int = [&](const std::string& tok) {
        std::size_t used = 0;
        int v = 0;
        try {
          v = std::stoi(tok, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != tok.size() || used == 0)
          throw error(errc::parse_error, "line " + std::to_string(lineno) + ": '" + tok + "' is not an integer");
        return v;
      };
      std::string second, extra;
      if (!(ls >> second)) throw error(errc::parse_error, "line " + std::to_string(lineno) + ": expected two fields");
      if (ls >> extra) throw error(errc::parse_error, "line " + std::to_string(lineno) + ": trailing fields");
      if (first == "n") {
        declared = as_int(second);
        if (declared < 1 || declared > max_label) throw error(errc::bad_leaf, "n must be in 1..64");
        continue;
      }
      int u = as_int(first), v = as_int(second);
      if (u < 1 || v < 1 || u > max_label || v > max_label)
        throw error(errc::bad_leaf, "line " + std::to_string(lineno) + ": vertex out of range 1..64");
      largest = std::max({largest, u, v});
      edges.push_back({u, v});
    }
    int n = declared ? declared : largest;
    if (n < 1) throw error(errc::parse_error, "empty graph");
    return SimpleGraph(n, edges);
  } catch (const json::exception& e) {
    throw error(errc::parse_error, e.what());
  }
}

// ------------------------------------------------------------ faces

inline json to_json(const CladeSet& s) {
  json j;
  j["n"] = s.n();
  json sets = json::array();
  for (Mask c : s.proper()) sets.push_back(labels_json(c));
  j["sets"] = sets;
  j["coloring"] = s.coloring();
  j["dimension"] = face_dimension(s);
  return j;
}

/// {"n":..,"sets":[..]} with an optional "coloring" of 1s and 2s, or
/// {"t1":tree,"t2":tree}.
inline CladeSet parse_clade_set(std::string_view text) {
  try {
    json j = parse_json(text);
    if (!j.is_object()) throw error(errc::parse_error, "a clade set must be a JSON object");
    if (j.contains("t1") && j.contains("t2"))
      return CladeSet::from_trees(tree_from_json(j["t1"]), tree_from_json(j["t2"]));
    int n = n_from_json(j);
    if (!j.contains("sets") || !j["sets"].is_array()) throw error(errc::parse_error, "missing \"sets\" array");
    std::vector<Mask> sets;
    for (const auto& c : j["sets"]) sets.push_back(mask_from_json(c));
    if (j.contains("coloring")) {
      std::vector<int> colors = j["coloring"].get<std::vector<int>>();
      return CladeSet::with_coloring(n, sets, colors);
    }
    return CladeSet::from_family(n, sets);
  } catch (const json::exception& e) {
    throw error(errc::parse_error, e.what());
  }
}

inline std::string coordinate(int n, int index) {
  auto [u, v] = pair_at(n, index);
  return "d[" + pair_key(u, v) + "]";
}

/// e.g. "d[5,6] - d[2,5] - d[4,5] + d[1,5] <= 0".
inline std::string to_text(const LinearRow& row, int n) {
  std::string s;
  for (int idx : row.term_order) {
    const Rational& c = row.coefficients[idx];
    bool neg = c < 0;
    Rational mag = neg ? Rational(-c) : c;
    if (s.empty())
      s += neg ? "-" : "";
    else
      s += neg ? " - " : " + ";
    if (mag != 1) s += to_string(mag) + " ";
    s += coordinate(n, idx);
  }
  if (s.empty()) s = "0";
  return s + (row.relation == Relation::eq ? " = 0" : " <= 0");
}

inline std::string to_text(const LinearSystem& sys) {
  std::string s = "# pair classes\n";
  for (const auto& c : sys.classes) {
    s += mask_label(c.element) + ":";
    for (auto [u, v] : c.pairs) s += " " + pair_key(u, v);
    s += "\n";
  }
  s += "# rows\n";
  for (const auto& r : sys.rows)
    s += to_text(r, sys.n) + "  # " + origin_name(r.origin) + " " + mask_label(r.source) + "\n";
  return s;
}

inline json to_json(const LinearSystem& sys) {
  json j;
  j["n"] = sys.n;
  json cls = json::array();
  for (const auto& c : sys.classes) {
    json pairs = json::array();
    for (auto [u, v] : c.pairs) pairs.push_back({u, v});
    cls.push_back({{"element", labels_json(c.element)}, {"pairs", pairs}});
  }
  j["pair_classes"] = cls;
  json rows = json::array();
  for (const auto& r : sys.rows) {
    json coeffs = json::object();
    for (int idx : r.term_order) {
      auto [u, v] = pair_at(sys.n, idx);
      coeffs[pair_key(u, v)] = to_string(r.coefficients[idx]);
    }
    rows.push_back({{"origin", origin_name(r.origin)},
                    {"source", labels_json(r.source)},
                    {"relation", r.relation == Relation::eq ? "=" : "<="},
                    {"coefficients", coeffs},
                    {"text", to_text(r, sys.n)}});
  }
  j["rows"] = rows;
  return j;
}

// ------------------------------------------------------------ clade graphs

inline std::string edge_label(int u, int v) {
  if (u <= 9 && v <= 9) return std::to_string(u) + std::to_string(v);
  return pair_key(u, v);
}

/// Graphviz text; left vertices L<i>, right vertices R<i>.
inline std::string to_dot(const CladeGraph& g) {
  std::string s = "graph clade_graph {\n";
  auto name = [&](int i) {
    return i < g.left_count() ? "L" + std::to_string(i) : "R" + std::to_string(i - g.left_count());
  };
  for (int side = 0; side < 2; ++side) {
    s += std::string("  subgraph cluster_") + (side ? "right" : "left") + " {\n    label=\"" +
         (side ? "T2" : "T1") + "\";\n";
    for (int i = 0; i < g.vertex_count(); ++i)
      if ((i >= g.left_count()) == (side == 1))
        s += "    " + name(i) + " [label=\"" + mask_label(g.vertices()[i].clade) + "\"];\n";
    s += "  }\n";
  }
  for (const auto& e : g.edges())
    s += "  " + name(e.left) + " -- " + name(e.right) + " [label=\"" + edge_label(e.u, e.v) + "\"];\n";
  return s + "}\n";
}

inline json to_json(const CladeGraph& g) {
  json j;
  json vs = json::array();
  for (const auto& v : g.vertices())
    vs.push_back({{"side", v.side == Side::left ? "left" : "right"}, {"clade", labels_json(v.clade)}});
  j["vertices"] = vs;
  json es = json::array();
  for (const auto& e : g.edges()) es.push_back({{"pair", {e.u, e.v}}, {"left", e.left}, {"right", e.right}});
  j["edges"] = es;
  return j;
}

// ------------------------------------------------------------ rigidity

inline json to_json(const HennebergMove& m) {
  json j;
  j["kind"] = m.kind == MoveKind::type1 ? "type1" : "type2";
  j["vertex"] = m.new_vertex;
  j["neighbors"] = m.neighbors;
  if (m.removed_edge) j["removed_edge"] = {m.removed_edge->first, m.removed_edge->second};
  return j;
}

inline json to_json(const HennebergDecomposition& d) {
  json j;
  j["success"] = d.success;
  if (d.success) {
    j["base"] = {d.base.first, d.base.second};
    json ms = json::array();
    for (const auto& m : d.moves) ms.push_back(to_json(m));
    j["moves"] = ms;
  } else {
    j["obstruction"] = d.obstruction;
  }
  return j;
}

inline json to_json(const Certificate& c) {
  json j;
  j["graph"] = to_json(c.graph);
  j["t1"] = to_json(c.t1);
  j["t2"] = to_json(c.t2);
  j["t1_newick"] = newick(c.t1);
  j["t2_newick"] = newick(c.t2);
  j["base"] = {c.base.first, c.base.second};
  json trace = json::array();
  for (const auto& s : c.trace) {
    json step = to_json(s.move);
    step["case"] = s.case_tag;
    step["target1"] = labels_json(s.target1);
    step["target2"] = labels_json(s.target2);
    trace.push_back(step);
  }
  j["trace"] = trace;
  j["clade_graph_dot"] = to_dot(CladeGraph::build_restricted(c.t1, c.t2, c.graph));
  return j;
}

}  // namespace troplaman::io
