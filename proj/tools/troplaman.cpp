// Command-line front end. Exit codes: 0 affirmative, 1 negative, 2 usage or input error.

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <regex>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "troplaman/oracles.hpp"
#include "troplaman/troplaman.hpp"

namespace tl = troplaman;
using tl::io::json;

namespace {

constexpr int yes = 0;
constexpr int no = 1;
constexpr int bad_input = 2;

/// A readable file's contents, "-" for stdin, otherwise the argument itself.
std::string read_input(const std::string& arg) {
  if (arg == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) {
    std::ifstream in(arg);
    if (!in) throw tl::error(tl::errc::parse_error, "cannot read " + arg);
    return {std::istreambuf_iterator<char>(in), {}};
  }
  // inline data has no slash next to a letter and no file extension
  static const std::regex looks_like_path(R"(.*([A-Za-z_.~]/|/[A-Za-z_.]).*|.*\.[A-Za-z]+$)");
  if (std::regex_match(arg, looks_like_path)) throw tl::error(tl::errc::parse_error, "no such file: " + arg);
  return arg;
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

std::string set_list(const std::vector<tl::Mask>& sets) {
  std::string s;
  for (std::size_t i = 0; i < sets.size(); ++i) s += (i ? " " : "") + tl::mask_label(sets[i]);
  return s.empty() ? "-" : s;
}

std::string pair_vector_text(const tl::PairVector& d) {
  std::string s;
  for (int i = 0; i < static_cast<int>(d.size()); ++i) s += tl::io::coordinate(d.n(), i) + " = " + tl::to_string(d[i]) + "\n";
  return s;
}

struct Context {
  bool as_json = false;
  int max_n = 6;
  std::function<int()> action;
};

// ------------------------------------------------------------ laman / rigidity / henneberg

int laman_check(const std::string& graph_arg, bool exhaustive, bool as_json) {
  auto h = tl::io::parse_graph(read_input(graph_arg));
  tl::LamanResult r;
  if (exhaustive) {
    auto o = tl::oracle::laman_by_subsets(h);
    r.laman = o.ok;
    r.violating = o.violating;
    if (h.edge_count() != 2 * h.vertex_count() - 3)
      r.reason = tl::count_reason(h);
    else if (o.violating)
      r.reason = "subset " + tl::mask_label(*o.violating) + " spans " +
                 std::to_string(h.induced_edge_count(*o.violating)) + " > " +
                 std::to_string(2 * tl::count(*o.violating) - 3) + " edges";
  } else {
    r = tl::is_laman(h);
  }
  if (as_json) {
    json j{{"laman", r.laman}};
    if (!r.laman) j["reason"] = r.reason;
    if (r.violating) j["violating"] = tl::io::labels_json(*r.violating);
    print(j);
  } else if (r.laman) {
    std::cout << "LAMAN\n";
  } else {
    std::cout << "NOT LAMAN: " << r.reason << "\n";
    if (r.violating) std::cout << "violating subset: " << tl::mask_label(*r.violating) << "\n";
  }
  return r.laman ? yes : no;
}

int rigidity_rank(const std::string& graph_arg, bool as_json) {
  auto h = tl::io::parse_graph(read_input(graph_arg));
  int r = tl::generic_rigidity_rank(h);
  int target = 2 * h.vertex_count() - 3;
  if (as_json)
    print({{"rank", r}, {"full_rank", target}, {"rigid", r == target}, {"edges", h.edge_count()}});
  else
    std::cout << "rank " << r << " of " << target << (r == target ? " (rigid)" : " (flexible)") << "\n";
  return r == target ? yes : no;
}

int henneberg_decompose(const std::string& graph_arg, bool as_json) {
  auto h = tl::io::parse_graph(read_input(graph_arg));
  auto d = tl::henneberg_decompose(h);
  if (as_json) {
    print(tl::io::to_json(d));
  } else if (!d.success) {
    std::cout << "NOT HENNEBERG: " << d.obstruction << "\n";
  } else {
    std::cout << "base " << d.base.first << " " << d.base.second << "\n";
    for (const auto& m : d.moves) {
      std::cout << (m.kind == tl::MoveKind::type1 ? "type1" : "type2") << " vertex " << m.new_vertex << " neighbors";
      for (int x : m.neighbors) std::cout << " " << x;
      if (m.removed_edge) std::cout << " removing " << m.removed_edge->first << " " << m.removed_edge->second;
      std::cout << "\n";
    }
  }
  return d.success ? yes : no;
}

// ------------------------------------------------------------ certificates

int certificate_build(const std::string& graph_arg) {
  auto h = tl::io::parse_graph(read_input(graph_arg));
  try {
    print(tl::io::to_json(tl::build_certificate(h)));
  } catch (const tl::error& e) {
    if (e.code() != tl::errc::not_henneberg) throw;
    std::cout << "NO CERTIFICATE: " << e.what() << "\n";
    return no;
  }
  return yes;
}

int certificate_verify(const std::string& g, const std::string& a, const std::string& b, bool as_json) {
  auto h = tl::io::parse_graph(read_input(g));
  auto t1 = tl::io::parse_tree(read_input(a));
  auto t2 = tl::io::parse_tree(read_input(b));
  bool ok = tl::verify_certificate(h, t1, t2);
  if (as_json)
    print({{"valid", ok}});
  else
    std::cout << (ok ? "VALID" : "INVALID") << "\n";
  return ok ? yes : no;
}

int certificate_search(const std::string& g, int max_n, bool as_json) {
  auto h = tl::io::parse_graph(read_input(g));
  auto found = tl::min_rigid_by_search(h, max_n);
  if (as_json) {
    json j{{"found", found.has_value()}};
    if (found) {
      j["t1"] = tl::io::to_json(found->first);
      j["t2"] = tl::io::to_json(found->second);
    }
    print(j);
  } else if (found) {
    std::cout << "T1 " << tl::io::newick(found->first) << "\nT2 " << tl::io::newick(found->second) << "\n";
  } else {
    std::cout << "NONE\n";
  }
  return found ? yes : no;
}

// ------------------------------------------------------------ trees and cones

int tree_topology(const std::string& arg, bool as_json) {
  auto d = tl::io::parse_pair_vector(read_input(arg));
  if (!tl::is_ultrametric(d)) {
    if (as_json)
      print({{"ultrametric", false}});
    else
      std::cout << "NOT ULTRAMETRIC\n";
    return no;
  }
  auto w = tl::topology(d);
  if (as_json) {
    auto j = tl::io::to_json(w);
    j["newick"] = tl::io::newick(w.tree);
    print(j);
  } else {
    for (std::size_t i = 0; i < w.tree.size(); ++i)
      std::cout << tl::mask_label(w.tree.clades()[i]) << " " << tl::to_string(w.weights[i]) << "\n";
    std::cout << tl::io::newick(w.tree) << "\n";
  }
  return yes;
}

int tree_eval(const std::string& arg, bool as_json) {
  auto w = tl::io::parse_weighted_tree(read_input(arg));
  auto d = tl::evaluate(w);
  if (as_json)
    print(tl::io::to_json(d));
  else
    std::cout << pair_vector_text(d);
  return yes;
}

int cone_member(const std::string& pv, const std::string& cs, bool as_json) {
  auto d = tl::io::parse_pair_vector(read_input(pv));
  auto s = tl::io::parse_clade_set(read_input(cs));
  auto m = tl::in_face_cone(d, s);
  if (as_json) {
    json j{{"member", m.member}, {"in_span", m.in_span}};
    if (m.in_span) {
      json t = json::object();
      auto proper = s.proper();
      for (std::size_t i = 0; i < proper.size(); ++i) t[tl::mask_label(proper[i])] = tl::to_string(m.t[i]);
      j["coefficients"] = t;
      j["lineality"] = tl::to_string(m.lineality);
    }
    print(j);
  } else {
    std::cout << (m.member ? "MEMBER" : "NOT MEMBER") << "\n";
    if (m.in_span) {
      auto proper = s.proper();
      for (std::size_t i = 0; i < proper.size(); ++i)
        std::cout << "t[" << tl::mask_label(proper[i]) << "] = " << tl::to_string(m.t[i]) << "\n";
      std::cout << "lineality = " << tl::to_string(m.lineality) << "\n";
    } else {
      std::cout << "outside the linear span of the face\n";
    }
  }
  return m.member ? yes : no;
}

int cone_fsystem(const std::string& cs, bool as_json) {
  auto s = tl::io::parse_clade_set(read_input(cs));
  auto sys = tl::facet_system(s);
  if (as_json)
    print(tl::io::to_json(sys));
  else
    std::cout << tl::io::to_text(sys);
  return yes;
}

int cone_dim(const std::string& cs, bool as_json) {
  auto s = tl::io::parse_clade_set(read_input(cs));
  auto [t1, t2] = s.trees();
  int graphic = tl::graphic_rank(tl::CladeGraph::build(t1, t2));
  int dim = tl::face_dimension(s);
  if (graphic != dim) throw std::logic_error("graphic rank disagrees with the face dimension");
  if (as_json)
    print({{"dimension", dim}, {"graphic_rank", graphic}});
  else
    std::cout << dim << "\n";
  return yes;
}

int trop_member(const std::string& pv, int max_n, bool as_json) {
  auto d = tl::io::parse_pair_vector(read_input(pv));
  auto r = tl::in_ultrametric_sum(d, max_n);
  if (as_json) {
    json j{{"member", r.member}};
    if (r.member) {
      j["t1"] = tl::io::to_json(*r.t1);
      j["t2"] = tl::io::to_json(*r.t2);
      j["u1"] = tl::io::to_json(*r.u1);
      j["u2"] = tl::io::to_json(*r.u2);
    }
    print(j);
  } else if (r.member) {
    std::cout << "MEMBER\nT1 " << tl::io::newick(*r.t1) << "\nT2 " << tl::io::newick(*r.t2) << "\n# u1\n"
              << pair_vector_text(*r.u1) << "# u2\n"
              << pair_vector_text(*r.u2);
  } else {
    std::cout << "NOT MEMBER\n";
  }
  return r.member ? yes : no;
}

int fan_faces(int n, int max_dim, int max_n, bool as_json) {
  if (n > max_n)
    throw tl::error(tl::errc::search_bound_exceeded,
                    "n = " + std::to_string(n) + " exceeds --max-n " + std::to_string(max_n));
  if (max_dim <= 0) max_dim = 2 * n - 3;
  auto faces = tl::tp_faces(n, max_dim);
  if (as_json) {
    json arr = json::array();
    for (const auto& f : faces) arr.push_back(tl::io::to_json(f));
    print({{"n", n}, {"count", faces.size()}, {"faces", arr}});
  } else {
    for (const auto& f : faces) std::cout << tl::face_dimension(f) << ": " << set_list(f.proper()) << "\n";
    std::cout << "# " << faces.size() << " faces\n";
  }
  return yes;
}

int clade_graph(const std::string& a, const std::string& b, const std::string& graph_arg, bool dot, bool as_json) {
  auto t1 = tl::io::parse_tree(read_input(a));
  auto t2 = tl::io::parse_tree(read_input(b));
  auto g = graph_arg.empty() ? tl::CladeGraph::build(t1, t2)
                             : tl::CladeGraph::build_restricted(t1, t2, tl::io::parse_graph(read_input(graph_arg)));
  auto comps = tl::components(g);
  bool tree = tl::is_spanning_tree(g);
  if (dot) {
    std::cout << tl::io::to_dot(g);
  } else if (as_json) {
    auto j = tl::io::to_json(g);
    j["components"] = comps.count;
    j["graphic_rank"] = tl::graphic_rank(g);
    j["spanning_tree"] = tree;
    print(j);
  } else {
    std::cout << "vertices " << g.vertex_count() << "\nedges " << g.edge_count() << "\ncomponents " << comps.count
              << "\ngraphic rank " << tl::graphic_rank(g) << "\nspanning tree " << (tree ? "yes" : "no") << "\n";
  }
  return yes;
}

int catalog_tight(int n, bool as_json) {
  auto graphs = tl::oracle::catalog_tight_graphs(n);
  if (as_json) {
    json arr = json::array();
    for (const auto& g : graphs) {
      auto j = tl::io::to_json(g);
      j["laman"] = tl::is_laman(g).laman;
      arr.push_back(j);
    }
    print({{"n", n}, {"count", graphs.size()}, {"graphs", arr}});
  } else {
    std::cout << "# " << graphs.size() << " graphs with " << 2 * n - 3 << " edges on " << n << " vertices\n";
    for (const auto& g : graphs)
      std::cout << "\n# " << (tl::is_laman(g).laman ? "laman" : "not laman") << "\n" << tl::io::edge_list(g);
  }
  return yes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tree-pair cones, ultrametrics and planar rigidity"};
  app.require_subcommand(1);
  Context ctx;
  std::string a, b, c, graph_arg;
  bool exhaustive = false, dot = false;
  int n = 0, max_dim = 0;

  auto json_flag = [&](CLI::App* sub) { sub->add_flag("--json", ctx.as_json, "Machine-readable JSON output"); };
  auto bound_flag = [&](CLI::App* sub) {
    sub->add_option("--max-n", ctx.max_n, "Refuse exhaustive searches above this many leaves")->capture_default_str();
  };

  auto* laman = app.add_subcommand("laman", "Laman condition")->require_subcommand(1);
  auto* laman_check_cmd = laman->add_subcommand("check", "Decide whether a graph is Laman");
  laman_check_cmd->add_option("graph", a, "Edge list or JSON graph (file or inline)")->required();
  laman_check_cmd->add_flag("--exhaustive", exhaustive, "Check every vertex subset instead of the pebble game");
  json_flag(laman_check_cmd);
  laman_check_cmd->callback([&] { ctx.action = [&] { return laman_check(a, exhaustive, ctx.as_json); }; });

  auto* rig = app.add_subcommand("rigidity", "Generic rigidity")->require_subcommand(1);
  auto* rank_cmd = rig->add_subcommand("rank", "Rank in the generic planar rigidity matroid");
  rank_cmd->add_option("graph", a)->required();
  json_flag(rank_cmd);
  rank_cmd->callback([&] { ctx.action = [&] { return rigidity_rank(a, ctx.as_json); }; });

  auto* hen = app.add_subcommand("henneberg", "Henneberg constructions")->require_subcommand(1);
  auto* dec_cmd = hen->add_subcommand("decompose", "Henneberg move sequence building the graph");
  dec_cmd->add_option("graph", a)->required();
  json_flag(dec_cmd);
  dec_cmd->callback([&] { ctx.action = [&] { return henneberg_decompose(a, ctx.as_json); }; });

  auto* cert = app.add_subcommand("certificate", "Tree-pair rigidity certificates")->require_subcommand(1);
  auto* build_cmd = cert->add_subcommand("build", "Construct a certificate (JSON)");
  build_cmd->add_option("graph", a)->required();
  json_flag(build_cmd);
  build_cmd->callback([&] { ctx.action = [&] { return certificate_build(a); }; });
  auto* verify_cmd = cert->add_subcommand("verify", "Check that G^H_{T1,T2} is a spanning tree");
  verify_cmd->add_option("graph", a)->required();
  verify_cmd->add_option("t1", b, "JSON tree or Newick")->required();
  verify_cmd->add_option("t2", c, "JSON tree or Newick")->required();
  json_flag(verify_cmd);
  verify_cmd->callback([&] { ctx.action = [&] { return certificate_verify(a, b, c, ctx.as_json); }; });
  auto* search_cmd = cert->add_subcommand("search", "Exhaustive search over binary tree pairs");
  search_cmd->add_option("graph", a)->required();
  json_flag(search_cmd);
  bound_flag(search_cmd);
  search_cmd->callback([&] { ctx.action = [&] { return certificate_search(a, ctx.max_n, ctx.as_json); }; });

  auto* tree = app.add_subcommand("tree", "Ultrametrics and weighted trees")->require_subcommand(1);
  auto* topo_cmd = tree->add_subcommand("topology", "Weighted tree realizing an ultrametric");
  topo_cmd->add_option("pairvector", a, "JSON pair vector or comma-separated values")->required();
  json_flag(topo_cmd);
  topo_cmd->callback([&] { ctx.action = [&] { return tree_topology(a, ctx.as_json); }; });
  auto* eval_cmd = tree->add_subcommand("eval", "Ultrametric of a weighted tree");
  eval_cmd->add_option("weighted-tree", a)->required();
  json_flag(eval_cmd);
  eval_cmd->callback([&] { ctx.action = [&] { return tree_eval(a, ctx.as_json); }; });

  auto* cone = app.add_subcommand("cone", "Cones of tree pairs")->require_subcommand(1);
  auto* member_cmd = cone->add_subcommand("member", "Membership in K_S");
  member_cmd->add_option("pairvector", a)->required();
  member_cmd->add_option("cladeset", b)->required();
  json_flag(member_cmd);
  member_cmd->callback([&] { ctx.action = [&] { return cone_member(a, b, ctx.as_json); }; });
  auto* fsys_cmd = cone->add_subcommand("fsystem", "Linear system cutting out K_S");
  fsys_cmd->add_option("cladeset", a)->required();
  json_flag(fsys_cmd);
  fsys_cmd->callback([&] { ctx.action = [&] { return cone_fsystem(a, ctx.as_json); }; });
  auto* dim_cmd = cone->add_subcommand("dim", "Dimension of K_S");
  dim_cmd->add_option("cladeset", a)->required();
  json_flag(dim_cmd);
  dim_cmd->callback([&] { ctx.action = [&] { return cone_dim(a, ctx.as_json); }; });

  auto* trop = app.add_subcommand("trop", "Sums of two ultrametrics")->require_subcommand(1);
  auto* trop_cmd = trop->add_subcommand("member", "Search for d = u1 + u2 with u1, u2 ultrametric");
  trop_cmd->add_option("pairvector", a)->required();
  json_flag(trop_cmd);
  bound_flag(trop_cmd);
  trop_cmd->callback([&] { ctx.action = [&] { return trop_member(a, ctx.max_n, ctx.as_json); }; });

  auto* fan = app.add_subcommand("fan", "Faces of the tree-pair complex")->require_subcommand(1);
  auto* faces_cmd = fan->add_subcommand("faces", "Enumerate faces up to a dimension");
  faces_cmd->add_option("n", n)->required()->check(CLI::Range(2, 8));
  faces_cmd->add_option("--max-dim", max_dim, "Largest face dimension (default 2n-3)");
  json_flag(faces_cmd);
  bound_flag(faces_cmd);
  faces_cmd->callback([&] { ctx.action = [&] { return fan_faces(n, max_dim, ctx.max_n, ctx.as_json); }; });

  auto* cg_cmd = app.add_subcommand("cladegraph", "Clade graph of two trees");
  cg_cmd->add_option("t1", a)->required();
  cg_cmd->add_option("t2", b)->required();
  cg_cmd->add_option("--graph", graph_arg, "Restrict to the edges of this graph");
  cg_cmd->add_flag("--dot", dot, "Graphviz output");
  json_flag(cg_cmd);
  cg_cmd->callback([&] { ctx.action = [&] { return clade_graph(a, b, graph_arg, dot, ctx.as_json); }; });

  auto* cat = app.add_subcommand("catalog", "Graph catalogs")->require_subcommand(1);
  auto* tight_cmd = cat->add_subcommand("tight", "Graphs with 2n-3 edges up to isomorphism");
  tight_cmd->add_option("n", n)->required()->check(CLI::Range(2, 7));
  json_flag(tight_cmd);
  tight_cmd->callback([&] { ctx.action = [&] { return catalog_tight(n, ctx.as_json); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : bad_input;
  }
  try {
    return ctx.action ? ctx.action() : bad_input;
  } catch (const tl::error& e) {
    if (e.code() == tl::errc::search_bound_exceeded || e.code() == tl::errc::bound_exceeded)
      std::cerr << "refused: " << e.what() << "\n";
    else
      std::cerr << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
  }
  return bad_input;
}
