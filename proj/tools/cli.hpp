#pragma once

#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <wtower/wtower.hpp>

namespace wtower::cli {

using Json = nlohmann::ordered_json;

/// One parsed invocation. Everything the run depends on is in here.
struct CommandRequest {
  std::string subcommand;
  std::optional<int> m;
  std::optional<int> order;
  std::optional<int> k;
  std::optional<int> degree;
  std::optional<int> j;
  std::optional<int> label;
  std::optional<int> vertex;
  std::string flavor = "twisted";
  std::string convention = "planar";
  std::string longitudes;
  int cap = 8;
  bool json = false;
  bool strict_collapse = false;
  bool kernel = false;
  std::string input;

  Json to_json() const {
    Json r;
    r["subcommand"] = subcommand;
    auto opt = [&](const char* key, const std::optional<int>& v) {
      if (v) r[key] = *v;
    };
    opt("m", m);
    opt("order", order);
    opt("k", k);
    opt("degree", degree);
    opt("j", j);
    opt("label", label);
    opt("vertex", vertex);
    r["flavor"] = flavor;
    r["convention"] = convention;
    if (!longitudes.empty()) r["longitudes"] = longitudes;
    r["cap"] = cap;
    r["strict_collapse"] = strict_collapse;
    r["kernel"] = kernel;
    if (!input.empty()) r["input"] = input;
    return r;
  }
};

namespace detail {

inline int need(const std::optional<int>& v, const char* flag) {
  if (!v) throw Error(ErrorCode::invalid_argument, std::string("missing required flag ") + flag);
  return *v;
}

inline const std::string& need_input(const CommandRequest& r, const char* what) {
  if (r.input.empty()) throw Error(ErrorCode::invalid_argument, std::string("missing input: ") + what);
  return r.input;
}

inline Json invariants_json(const AbelianInvariants& a) {
  Json j;
  j["free_rank"] = a.free_rank;
  j["torsion"] = Json::array();
  for (const auto& t : a.torsion) j["torsion"].push_back(t.str());
  j["text"] = a.str();
  return j;
}

inline Json forest_json(const IntersectionForest& f) {
  Json terms = Json::array();
  for (const auto& [t, c] : f.terms())
    terms.push_back({{"coefficient", c.str()},
                     {"tree", t.str()},
                     {"kind", t.is_framed() ? "framed" : "twisted"},
                     {"order", t.order()}});
  return {{"text", print_forest(f)}, {"terms", terms}};
}

inline Json tensor_json(const TensorElement& x) {
  Json terms = Json::array();
  for (const auto& [key, c] : x.coefficients())
    terms.push_back({{"coefficient", c.str()}, {"root", key.first}, {"bracket", lyndon_bracket_string(key.second)}});
  return {{"text", x.str()}, {"degree", x.degree()}, {"terms", terms}};
}

inline Json lie_json(const LieElement& x) {
  Json terms = Json::array();
  for (const auto& [w, c] : x.coefficients())
    terms.push_back({{"coefficient", c.str()}, {"bracket", lyndon_bracket_string(w)}});
  return {{"text", x.str()}, {"degree", x.degree()}, {"terms", terms}};
}

inline Json step_json(const CollapseStep& s) {
  Json out = Json::array();
  for (const auto& [c, t] : s.output) out.push_back({{"coefficient", c.str()}, {"tree", t.str()}});
  return {{"input", s.input.str()},       {"coefficient", s.coefficient.str()}, {"label", s.label},
          {"vertex", s.vertex},           {"case", collapse_case_name(s.kind)}, {"output", out},
          {"text", s.str()}};
}

inline std::string witness_string(const GroupElement& e) {
  std::string s;
  for (std::size_t i = 0; i < e.reduced.size(); ++i) {
    if (e.reduced[i] == 0) continue;
    if (!s.empty()) s += " ";
    s += "[" + std::to_string(i) + "]=" + e.reduced[i].str() +
         (e.orders[i] == 0 ? std::string(" (free)") : " (mod " + e.orders[i].str() + ")");
  }
  return s;
}

// ---------------------------------------------------------------------------

inline void cmd_normalize(const CommandRequest& r, std::ostream& out) {
  const IntersectionForest f = parse_forest(need_input(r, "forest"), need(r.m, "--m"));
  if (r.json) {
    out << Json{{"request", r.to_json()}, {"forest", forest_json(f)}}.dump(2) << "\n";
    return;
  }
  out << print_forest(f) << "\n";
}

inline void cmd_group(const CommandRequest& r, std::ostream& out) {
  const PresentedAbelianGroup g = build_group(need(r.m, "--m"), need(r.order, "--order"), parse_flavor(r.flavor), r.k);
  if (r.json) {
    Json gens = Json::array();
    for (const auto& t : g.generators()) gens.push_back(t.str());
    out << Json{{"request", r.to_json()},
                {"generators", gens},
                {"relations", g.relation_rows().size()},
                {"invariants", invariants_json(g.invariants())}}
               .dump(2)
        << "\n";
    return;
  }
  out << g.invariants().str() << "\n";
}

inline void cmd_obstruct(const CommandRequest& r, std::ostream& out) {
  const IntersectionForest f = parse_forest(need_input(r, "forest"), need(r.m, "--m"));
  const ObstructionResult o = obstruction_is_zero(f, need(r.order, "--order"), parse_flavor(r.flavor), r.k);
  if (r.json) {
    Json red = Json::array();
    for (std::size_t i = 0; i < o.element.reduced.size(); ++i)
      red.push_back({{"value", o.element.reduced[i].str()}, {"order", o.element.orders[i].str()}});
    out << Json{{"request", r.to_json()}, {"zero", o.zero}, {"reduced", red}}.dump(2) << "\n";
    return;
  }
  out << (o.zero ? "ZERO" : "NONZERO") << "\n";
  if (!o.zero) out << "witness: " << witness_string(o.element) << "\n";
}

inline void cmd_eta(const CommandRequest& r, std::ostream& out) {
  const IntersectionForest f = parse_forest(need_input(r, "forest"), need(r.m, "--m"));
  const int n = need(r.order, "--order");
  const auto conv = parse_convention(r.convention);
  const TensorElement x = r.k ? eta_k(f, n, *r.k, conv) : eta(f, n, conv);
  if (r.json) {
    out << Json{{"request", r.to_json()}, {"eta", tensor_json(x)}}.dump(2) << "\n";
    return;
  }
  out << x.str() << "\n";
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void cmd_milnor(const CommandRequest& r, std::ostream& out) {
  const auto conv = parse_convention(r.convention);
  if (!r.longitudes.empty()) {
    const LongitudeData data = parse_longitudes(read_file(r.longitudes));
    const MilnorResult res = milnor_from_longitudes(data, r.cap, r.k);
    if (r.json) {
      Json j{{"request", r.to_json()}, {"all_vanishing", res.all_vanishing}, {"cap", res.cap}};
      if (!res.all_vanishing) {
        j["order"] = res.n;
        j["total"] = tensor_json(*res.value);
        Json table = Json::array();
        for (const auto& e : res.table)
          table.push_back({{"indices", milnor_index_string(e.indices, data.m)}, {"value", e.value.str()}});
        j["table"] = table;
      }
      out << j.dump(2) << "\n";
      return;
    }
    if (res.all_vanishing) {
      out << "all vanishing up to degree " << res.cap << "\n";
      return;
    }
    out << "order " << res.n << ";";
    for (const auto& e : res.table) out << " mu(" << milnor_index_string(e.indices, data.m) << ")=" << e.value;
    out << "\n";
    out << "total: " << res.value->str() << "\n";
    return;
  }
  const IntersectionForest f = parse_forest(need_input(r, "forest or --longitudes"), need(r.m, "--m"));
  const TensorElement mu = milnor_from_forest(f, need(r.order, "--order"), r.k, conv);
  if (r.json) {
    out << Json{{"request", r.to_json()}, {"total", tensor_json(mu)}}.dump(2) << "\n";
    return;
  }
  out << "total: " << mu.str() << "\n";
}

inline void cmd_lie(const CommandRequest& r, std::ostream& out) {
  const int m = need(r.m, "--m");
  if (r.kernel) {
    const BracketKernel bk = bracket_kernel(m, need(r.order, "--order"), r.k);
    if (r.json) {
      Json basis = Json::array();
      for (const auto& x : bk.basis) basis.push_back(tensor_json(x));
      out << Json{{"request", r.to_json()},
                  {"rank", bk.rank()},
                  {"cokernel", invariants_json(bk.cokernel)},
                  {"basis", basis}}
                 .dump(2)
          << "\n";
      return;
    }
    out << "rank " << bk.rank() << "\n";
    out << "cokernel " << bk.cokernel.str() << "\n";
    for (const auto& x : bk.basis) out << x.str() << "\n";
    return;
  }
  if (r.input.empty()) {
    const auto basis = lyndon_basis(m, need(r.degree, "--degree"));
    if (r.json) {
      Json b = Json::array();
      for (const auto& w : basis) b.push_back(lyndon_bracket_string(w));
      out << Json{{"request", r.to_json()}, {"dimension", basis.size()}, {"basis", b}}.dump(2) << "\n";
      return;
    }
    out << "dim " << basis.size() << "\n";
    for (const auto& w : basis) out << lyndon_bracket_string(w) << "\n";
    return;
  }
  ParsedLieExpression e = parse_lie_expression(r.input, m);
  if (e.is_tensor) {
    TensorElement x = r.k ? k_project(*e.tensor, *r.k) : *e.tensor;
    LieElement b = bracket_map(x);
    if (r.k) b = k_project(b, *r.k);
    if (r.json) {
      out << Json{{"request", r.to_json()}, {"tensor", tensor_json(x)}, {"bracket", lie_json(b)}}.dump(2) << "\n";
      return;
    }
    out << x.str() << "\n";
    out << "bracket: " << b.str() << "\n";
    return;
  }
  LieElement x = r.k ? k_project(*e.lie, *r.k) : *e.lie;
  if (r.json) {
    out << Json{{"request", r.to_json()}, {"lie", lie_json(x)}}.dump(2) << "\n";
    return;
  }
  out << x.str() << "\n";
}

inline void cmd_arf(const CommandRequest& r, std::ostream& out) {
  const int m = need(r.m, "--m");
  if (r.j) {
    const auto classes = arf_classes(m, *r.j, r.k);
    if (r.json) {
      Json c = Json::array();
      for (const auto& a : classes) c.push_back({{"bracket", a.bracket}, {"representative", a.representative.str()}});
      out << Json{{"request", r.to_json()}, {"count", classes.size()}, {"classes", c}}.dump(2) << "\n";
      return;
    }
    out << "classes " << classes.size() << "\n";
    for (const auto& a : classes) out << a.bracket << " -> " << a.representative.str() << "\n";
    return;
  }
  const EtaKernel ek = eta_kernel(m, need(r.order, "--order (or --j)"), r.k, parse_convention(r.convention));
  if (r.json) {
    Json gens = Json::array();
    for (std::size_t i = 0; i < ek.kernel_forests.size(); ++i)
      gens.push_back({{"order", ek.kernel_orders[i].str()}, {"forest", forest_json(ek.kernel_forests[i])}});
    out << Json{{"request", r.to_json()},
                {"group", invariants_json(ek.group)},
                {"target_rank", ek.target_rank},
                {"kernel", invariants_json(ek.kernel)},
                {"cokernel", invariants_json(ek.cokernel)},
                {"kernel_generators", gens}}
               .dump(2)
        << "\n";
    return;
  }
  out << "group " << ek.group.str() << "\n";
  out << "target rank " << ek.target_rank << "\n";
  out << "kernel " << ek.kernel.str() << "\n";
  out << "cokernel " << ek.cokernel.str() << "\n";
  for (std::size_t i = 0; i < ek.kernel_forests.size(); ++i)
    out << "generator " << (ek.kernel_orders[i] == 0 ? std::string("Z") : "Z/" + ek.kernel_orders[i].str()) << ": "
        << print_forest(ek.kernel_forests[i]) << "\n";
}

inline std::pair<Integer, DecoratedTree> parse_term_or_tree(const std::string& text, int m) {
  if (text.find('*') != std::string::npos) return parse_term(text, m);
  return {Integer(1), parse_tree(text, m)};
}

inline void cmd_collapse(const CommandRequest& r, std::ostream& out) {
  const int m = need(r.m, "--m");
  const auto [c, t] = parse_term_or_tree(need_input(r, "tree"), m);
  if (r.label.has_value() == r.vertex.has_value())
    throw Error(ErrorCode::invalid_argument, "give exactly one of --label and --vertex");
  const int vertex = r.vertex ? *r.vertex : leaf_with_label(t, *r.label);
  const CollapseStep s = collapse_edge(t, vertex, c, r.strict_collapse);
  if (r.json) {
    out << Json{{"request", r.to_json()}, {"step", step_json(s)}, {"merged", forest_json(s.merged(m))}}.dump(2)
        << "\n";
    return;
  }
  out << s.str() << "\n";
  out << "merged: " << print_forest(s.merged(m)) << "\n";
}

inline void cmd_monoize(const CommandRequest& r, std::ostream& out) {
  const IntersectionForest f = parse_forest(need_input(r, "forest"), need(r.m, "--m"));
  const MonoizeResult res = monoize_forest(f, need(r.k, "--k"), r.strict_collapse);
  if (r.json) {
    Json trace = Json::array();
    for (const auto& s : res.trace) trace.push_back(step_json(s));
    out << Json{{"request", r.to_json()}, {"trace", trace}, {"result", forest_json(res.forest)}}.dump(2) << "\n";
    return;
  }
  for (const auto& s : res.trace) out << s.str() << "\n";
  out << "result: " << print_forest(res.forest) << "\n";
}

}  // namespace detail

/// Runs one request. Returns the process exit code: 0 success, 1 domain
/// error, 2 malformed input or arguments.
inline int run(const CommandRequest& r, std::ostream& out, std::ostream& err) {
  try {
    if (r.subcommand == "normalize") detail::cmd_normalize(r, out);
    else if (r.subcommand == "group") detail::cmd_group(r, out);
    else if (r.subcommand == "obstruct") detail::cmd_obstruct(r, out);
    else if (r.subcommand == "eta") detail::cmd_eta(r, out);
    else if (r.subcommand == "milnor") detail::cmd_milnor(r, out);
    else if (r.subcommand == "lie") detail::cmd_lie(r, out);
    else if (r.subcommand == "arf") detail::cmd_arf(r, out);
    else if (r.subcommand == "collapse") detail::cmd_collapse(r, out);
    else if (r.subcommand == "monoize") detail::cmd_monoize(r, out);
    else throw Error(ErrorCode::invalid_argument, "unknown subcommand '" + r.subcommand + "'");
  } catch (const Error& e) {
    err << "error[" << e.tag() << "]: " << e.what() << "\n";
    return is_parse_error(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error[internal]: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

/// Parses argv into a request and runs it.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CommandRequest req;
  CLI::App app{"Decorated-tree calculus: tree groups, free Lie algebras, eta maps, Milnor invariants"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto common = [&](CLI::App* s) {
    s->add_option("--m", req.m, "number of index labels / link components");
    s->add_flag("--json", req.json, "structured output");
  };
  auto with_order = [&](CLI::App* s) { s->add_option("--order", req.order, "tree order n"); };
  auto with_k = [&](CLI::App* s) { s->add_option("--k", req.k, "multiplicity bound"); };
  auto with_flavor = [&](CLI::App* s) {
    s->add_option("--flavor", req.flavor, "framed or twisted")->check(CLI::IsMember({"framed", "twisted"}));
  };
  auto with_convention = [&](CLI::App* s) {
    s->add_option("--convention", req.convention, "branch reading order")
        ->check(CLI::IsMember({"planar", "mirrored"}));
  };
  auto with_input = [&](CLI::App* s, const char* what) { s->add_option("input", req.input, what); };

  auto* normalize = app.add_subcommand("normalize", "parse and print a forest in canonical form");
  common(normalize);
  with_input(normalize, "forest");

  auto* group = app.add_subcommand("group", "invariant factors of T_n, T_n^inf or T_n^{k,inf}");
  common(group);
  with_order(group);
  with_k(group);
  with_flavor(group);

  auto* obstruct = app.add_subcommand("obstruct", "whether the intersection invariant of a forest vanishes");
  common(obstruct);
  with_order(obstruct);
  with_k(obstruct);
  with_flavor(obstruct);
  with_input(obstruct, "forest");

  auto* eta_cmd = app.add_subcommand("eta", "summation map of a forest");
  common(eta_cmd);
  with_order(eta_cmd);
  with_k(eta_cmd);
  with_convention(eta_cmd);
  with_input(eta_cmd, "forest");

  auto* milnor = app.add_subcommand("milnor", "total Milnor invariant from a forest or longitude words");
  common(milnor);
  with_order(milnor);
  with_k(milnor);
  with_convention(milnor);
  milnor->add_option("--longitudes", req.longitudes, "longitude file");
  milnor->add_option("--cap", req.cap, "Magnus degree cap");
  with_input(milnor, "forest");

  auto* lie = app.add_subcommand("lie", "Lyndon basis, bracket kernel, or reduction of an expression");
  common(lie);
  with_order(lie);
  with_k(lie);
  lie->add_option("--degree", req.degree, "degree of the Lyndon basis to list");
  lie->add_flag("--kernel", req.kernel, "basis of the bracket kernel D_n");
  with_input(lie, "Lie element or tensor");

  auto* arf = app.add_subcommand("arf", "Arf classes (--j) or the kernel of eta_n (--order)");
  common(arf);
  with_order(arf);
  with_k(arf);
  with_convention(arf);
  arf->add_option("--j", req.j, "Arf class degree j");

  auto* collapse = app.add_subcommand("collapse", "collapse one univalent edge");
  common(collapse);
  collapse->add_option("--label", req.label, "collapse the first leaf with this label");
  collapse->add_option("--vertex", req.vertex, "collapse the leaf at this position (from 0)");
  collapse->add_flag("--strict-collapse", req.strict_collapse, "oppositely signed twisted pair");
  with_input(collapse, "tree or c*tree");

  auto* monoize = app.add_subcommand("monoize", "collapse until every tree is mono-labelled");
  common(monoize);
  with_k(monoize);
  monoize->add_flag("--strict-collapse", req.strict_collapse, "oppositely signed twisted pair");
  with_input(monoize, "forest");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error[usage]: " << e.what() << "\n";
    return 2;
  }
  for (auto* s : app.get_subcommands()) req.subcommand = s->get_name();
  return run(req, out, err);
}

}  // namespace wtower::cli
