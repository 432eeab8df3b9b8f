// flowcat command-line tool.
// Exit codes: 0 success, 1 a check failed (report on stdout), 2 usage or input error.

#include "flowcat/bimodule_alg.hpp"
#include "flowcat/corner_model.hpp"
#include "flowcat/degeneration_geom.hpp"
#include "flowcat/flow_data.hpp"
#include "flowcat/homology.hpp"
#include "flowcat/kernels.hpp"
#include "flowcat/morse.hpp"
#include "flowcat/strat_arcs.hpp"

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace flowcat;
using json = nlohmann::json;

namespace {

struct Opts {
  std::string ring = "Z";
  std::string out;
  std::string format = "json";
  std::string category, simplex, bimodule, left, right;
  std::string arc_category, sequence, source, target;
  std::string complex, matching = "greedy", target_matching = "greedy", map;
  std::string epsilon = "1/2";
  std::string t;
  int max_codim = 3;
  int d = 1, flag = 0, max_d = 5, k = 1;
  long samples = 0;
  std::uint64_t seed = 1;
  bool random = false;
};

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(path + ": " + e.what());
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

Ring ring_of(const Opts& o) { return ring_from_name(o.ring); }

Rational epsilon_of(const Opts& o) {
  Rational e = parse_rational(o.epsilon);
  if (e <= 0 || e >= 1) throw Error("--epsilon must lie in (0,1)");
  return e;
}

json matrix_json(const IntMatrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (int j = 0; j < m.cols(); ++j) r.push_back(m(i, j).str());
    rows.push_back(r);
  }
  return rows;
}

json homology_json(const HomologyResult& h) {
  json g = json::object();
  for (const auto& [k, grp] : h.groups) g[std::to_string(k)] = format_group(grp, h.ring);
  return {{"ring", ring_name(h.ring)}, {"groups", g}, {"text", format_homology(h)}};
}

json report_json(const Report& r) { return {{"ok", r.ok}, {"violations", r.violations}, {"notes", r.notes}}; }

// "p|q1,q2|r"
Sequence parse_sequence_text(const std::string& text) {
  Sequence s;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, '|')) {
    std::vector<std::string> set;
    std::stringstream ps(part);
    std::string name;
    while (std::getline(ps, name, ','))
      if (!name.empty()) set.push_back(name);
    s.sets.push_back(set);
  }
  return sequence_from_json(sequence_to_json(s));
}

Sequence sequence_of(const Opts& o) {
  if (!o.sequence.empty()) return parse_sequence_text(o.sequence);
  if (!o.arc_category.empty()) return arc_category_from_json(read_json(o.arc_category)).sequence;
  throw Error("need --sequence or --arcs");
}

// "set:name"; empty picks the first element of the first / last set.
Element element_of(const Sequence& seq, const std::string& text, bool last) {
  if (text.empty()) {
    const int s = last ? seq.n() : 0;
    if (seq.sets.at(s).empty()) throw Error("empty end set");
    return {s, 0};
  }
  auto colon = text.find(':');
  if (colon == std::string::npos) throw Error("element must be set:name, got " + text);
  return seq.element(std::stoi(text.substr(0, colon)), text.substr(colon + 1));
}

ArcCategory arc_category_of(const Opts& o) {
  if (!o.arc_category.empty()) return arc_category_from_json(read_json(o.arc_category));
  ArcCategory C;
  C.sequence = sequence_of(o);
  C.source = element_of(C.sequence, o.source, false);
  C.target = element_of(C.sequence, o.target, true);
  return C;
}

FlowSimplex simplex_of(const std::string& path) { return simplex_from_json(read_json(path)); }

SimplicialComplex complex_of(const std::string& path) { return parse_complex(read_json(path)); }

// greedy, empty, random:<seed>, or a matching file
Matching matching_of(const SimplicialComplex& K, const std::string& spec) {
  if (spec == "greedy") return greedy_matching(K);
  if (spec == "empty") return {};
  if (spec.rfind("random:", 0) == 0) return random_matching(K, std::stoull(spec.substr(7)));
  return parse_matching(K, read_json(spec));
}

std::vector<Rational> rational_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ','))
    if (!part.empty()) out.push_back(parse_rational(part));
  return out;
}

std::string element_label(const Sequence& seq, const Element& e) { return std::to_string(e.set) + ":" + seq.name(e); }

// ---- arcs ----

int cmd_arcs_enum(const Opts& o) {
  const auto C = arc_category_of(o);
  const auto data = build_arc_category(C, o.max_codim);
  const auto corner = is_corner_model_parallel(data.category);
  bool q_ok = true;
  json objs = json::array();
  for (int i = 0; i < static_cast<int>(data.arcs.size()); ++i) {
    const int c = codim(data.arcs[i]);
    const auto q = q_set(data.category, i);
    if (static_cast<int>(q.size()) != c) q_ok = false;
    objs.push_back({{"arc", format_arc(C.sequence, data.arcs[i])}, {"codim", c}, {"q_set", q.size()}});
  }
  if (o.format == "dot") {
    std::cout << arc_category_to_dot(C, data);
    return corner.ok && q_ok ? 0 : 1;
  }
  if (o.format == "csv") {
    std::cout << "index,codim,q_set,arc\n";
    for (std::size_t i = 0; i < objs.size(); ++i)
      std::cout << i << "," << objs[i]["codim"] << "," << objs[i]["q_set"] << ",\"" << objs[i]["arc"].get<std::string>()
                << "\"\n";
    return corner.ok && q_ok ? 0 : 1;
  }
  json j{{"command", "arcs enum"},
         {"category", arc_category_to_json(C)},
         {"max_codim", o.max_codim},
         {"objects", objs},
         {"arrows", data.category.arrow_count()},
         {"corner_model", corner.ok},
         {"q_set_matches_codim", q_ok},
         {"ok", corner.ok && q_ok}};
  if (!corner.ok) j["violation"] = corner.first_violation;
  emit(j);
  return corner.ok && q_ok ? 0 : 1;
}

int cmd_arcs_codim1(const Opts& o) {
  const auto C = arc_category_of(o);
  const auto listed = enumerate_codim1(C);
  std::set<Arc, ArcLess> brute;
  for (const auto& a : enumerate_objects(C, 1))
    if (codim(a) == 1) brute.insert(a);
  Report R;
  std::set<Arc, ArcLess> seen;
  json items = json::array();
  for (const auto& c : listed) {
    const std::string name = format_arc(C.sequence, c.arc);
    if (!seen.insert(c.arc).second) R.fail("listed twice: " + name);
    if (!brute.count(c.arc)) R.fail("not a codim-1 object: " + name);
    // a break has one internal edge, a forgotten vertex none
    const bool is_break = c.arc.internal_edges() == 1;
    if (is_break != (c.kind == Codim1Kind::Break)) R.fail("wrong kind tag: " + name);
    json it{{"arc", name}, {"kind", c.kind == Codim1Kind::Break ? "break" : "forget"}};
    if (c.kind == Codim1Kind::Break)
      it["broken"] = element_label(C.sequence, c.broken);
    else
      it["forgotten"] = c.forgotten;
    items.push_back(it);
  }
  for (const auto& a : brute)
    if (!seen.count(a)) R.fail("missing: " + format_arc(C.sequence, a));
  emit({{"command", "arcs codim1"}, {"codim1", items}, {"brute_force_count", brute.size()}, {"report", report_json(R)},
        {"ok", R.ok}});
  return R.ok ? 0 : 1;
}

int cmd_arcs_faces(const Opts& o) {
  const auto seq = sequence_of(o);
  const auto R = faces_check(seq, o.max_codim);
  emit({{"command", "arcs faces-check"}, {"sequence", sequence_to_json(seq)}, {"max_codim", o.max_codim},
        {"report", report_json(R)}, {"ok", R.ok}});
  return R.ok ? 0 : 1;
}

// ---- lblock ----

int cmd_lblock_facets(const Opts& o) {
  if (o.d < 0 || (o.flag != 0 && o.flag != 1)) throw Error("need d >= 0 and flag in {0,1}");
  LBlock L{o.d, o.flag, epsilon_of(o)};
  const auto facets = lblock_facets(o.d, o.flag);
  Report R;
  json fs = json::array();
  for (const auto& f : facets) {
    json fj = lfacet_to_json(f);
    LFace face;
    switch (f.kind) {
      case LFacetKind::Zero: face.zero = 1u << f.coord; break;
      case LFacetKind::One: face.one = 1u << f.coord; break;
      case LFacetKind::YOne: face.y_one = true; break;
      case LFacetKind::Hypersurface: face.hyper = true; break;
    }
    const auto w = face_witness(L, face);
    if (w) {
      json pt = json::array();
      for (const auto& x : *w) pt.push_back(format_rational(x));
      fj["witness"] = pt;
    }
    if (f.nonempty && !w) R.fail("no witness for facet " + f.tag);
    fs.push_back(fj);
  }
  emit({{"command", "lblock facets"},
        {"d", o.d},
        {"flag", o.flag},
        {"epsilon", format_rational(L.epsilon)},
        {"nonempty", lblock_nonempty(o.d, o.flag)},
        {"facet_count", facets.size()},
        {"facets", fs},
        {"report", report_json(R)},
        {"ok", R.ok}});
  return R.ok ? 0 : 1;
}

int cmd_lblock_cosimplicial(const Opts& o) {
  const auto r = cosimplicial_check(o.max_d, epsilon_of(o));
  emit({{"command", "lblock cosimplicial-check"},
        {"max_d", o.max_d},
        {"epsilon", format_rational(epsilon_of(o))},
        {"points_checked", r.points_checked},
        {"identities_checked", r.identities_checked},
        {"report", report_json(r.report)},
        {"ok", r.report.ok}});
  return r.report.ok ? 0 : 1;
}

// ---- conic ----

json tp1_list(const std::vector<TP1>& z) {
  json a = json::array();
  for (const auto& p : z) a.push_back("(" + format_rational(p.x) + ":" + format_rational(p.y) + ")");
  return a;
}

int cmd_conic_fiber(const Opts& o) {
  const auto t = rational_list(o.t);
  for (const auto& x : t)
    if (x < 0) throw Error("--t entries must be nonnegative");
  const int n = static_cast<int>(t.size());
  const auto comps = conic_fiber(n, t);
  int zeros = 0;
  for (const auto& x : t) zeros += (x == 0);
  Report R;
  if (static_cast<int>(comps.size()) != zeros + 1) R.fail("component count differs from #zeros + 1");
  json cs = json::array();
  for (const auto& c : comps) {
    json cj = conic_component_to_json(c);
    json pts = json::object();
    for (const auto& [name, s] : std::vector<std::pair<std::string, std::optional<Rational>>>{
             {"0", Rational(0)}, {"1", Rational(1)}, {"inf", std::nullopt}}) {
      const auto z = c.point(s);
      if (!conic_contains(t, z) || !c.contains(z)) R.fail("sample point off the fibre in component " + std::to_string(c.index));
      pts[name] = tp1_list(z);
    }
    cj["samples"] = pts;
    cs.push_back(cj);
  }
  json j{{"command", "conic fiber"}, {"n", n}, {"components", cs}};
  if (o.samples > 0) {
    const long fails = conic_sample_parallel(4, o.samples, o.seed);
    j["random_samples"] = {{"count", o.samples}, {"seed", o.seed}, {"failures", fails}};
    if (fails) R.fail(std::to_string(fails) + " random samples failed");
  }
  j["report"] = report_json(R);
  j["ok"] = R.ok;
  emit(j);
  return R.ok ? 0 : 1;
}

// ---- flow data ----

int cmd_validate(const Opts& o) {
  const std::string path = !o.category.empty() ? o.category : !o.simplex.empty() ? o.simplex : o.bimodule;
  if (path.empty()) throw Error("need --category, --simplex or --bimodule");
  const auto S = simplex_of(path);
  const auto R = validate_simplex(S, ring_of(o));
  emit({{"command", "validate"}, {"input", path}, {"n", S.n()}, {"ring", o.ring}, {"components", S.component_count()},
        {"report", report_json(R)}, {"ok", R.ok}});
  return R.ok ? 0 : 1;
}

int cmd_homology(const Opts& o) {
  json j{{"command", "homology"}};
  if (!o.complex.empty()) {
    const auto K = complex_of(o.complex);
    const auto oracle = simplicial_homology(K, ring_of(o));
    j["simplicial"] = homology_json(oracle);
    if (o.matching != "none") {
      const auto M = morse_flow_category(K, matching_of(K, o.matching));
      const auto h = homology(chain_complex(M.category, ring_of(o)));
      j["morse"] = homology_json(h);
      j["agrees"] = h == oracle;
      j["ok"] = h == oracle;
      emit(j);
      return h == oracle ? 0 : 1;
    }
    j["ok"] = true;
    emit(j);
    return 0;
  }
  if (o.category.empty()) throw Error("need --category or --complex");
  const auto F = simplex_of(o.category);
  if (F.n() != 0) throw Error("--category must hold a flow category");
  const auto R = validate_flow_category(F, ring_of(o));
  j["validation"] = report_json(R);
  if (!R.ok) {
    j["ok"] = false;
    emit(j);
    return 1;
  }
  j["homology"] = homology_json(homology(chain_complex(F, ring_of(o))));
  j["ok"] = true;
  emit(j);
  return 0;
}

int cmd_compose(const Opts& o) {
  if (o.left.empty() || o.right.empty()) throw Error("need --left and --right");
  const auto B1 = simplex_of(o.left), B2 = simplex_of(o.right);
  if (B1.n() != 1 || B2.n() != 1) throw Error("--left and --right must be bimodules");
  const auto res = compose_bimodules_detailed(B1, B2);
  const auto R = validate_bimodule(res.composite, ring_of(o));
  const bool product = chain_map(res.composite, ring_of(o)) == chain_map(B2, ring_of(o)) * chain_map(B1, ring_of(o));
  if (!o.out.empty()) write_file(o.out, simplex_to_json(res.composite).dump(2) + "\n");
  emit({{"command", "compose"},
        {"components", res.composite.component_count()},
        {"chain_map", matrix_json(chain_map(res.composite, ring_of(o)))},
        {"chain_map_is_product", product},
        {"notes", res.notes},
        {"validation", report_json(R)},
        {"ok", R.ok && product}});
  return R.ok && product ? 0 : 1;
}

int cmd_cone(const Opts& o) {
  if (o.bimodule.empty()) throw Error("need --bimodule");
  const auto B = simplex_of(o.bimodule);
  if (B.n() != 1) throw Error("--bimodule must hold a bimodule");
  const Ring r = ring_of(o);
  const auto cr = cone(B);
  const auto R = validate_flow_category(cr.cone, r);
  const auto alg = algebraic_cone(chain_complex(endpoint(B, 0), r), chain_complex(endpoint(B, 1), r), chain_map(B, r));
  const auto iso = match_by_labels(chain_complex(cr.cone, r), alg);
  if (!o.out.empty()) write_file(o.out, category_to_json(cr.cone).dump(2) + "\n");
  json j{{"command", "cone"},
         {"objects", cr.cone.sets[0].size()},
         {"energy_shift", format_rational(cr.energy_shift)},
         {"homology", homology_json(homology(alg))},
         {"isomorphic_to_algebraic_cone", iso.ok},
         {"validation", report_json(R)},
         {"ok", R.ok && iso.ok}};
  if (!iso.ok) j["reason"] = iso.reason;
  emit(j);
  return R.ok && iso.ok ? 0 : 1;
}

int cmd_les(const Opts& o) {
  if (o.bimodule.empty()) throw Error("need --bimodule");
  const auto B = simplex_of(o.bimodule);
  if (B.n() != 1) throw Error("--bimodule must hold a bimodule");
  const auto L = les_check(B, ring_of(o));
  emit({{"command", "les"},
        {"H(X)", homology_json(L.hx)},
        {"H(Y)", homology_json(L.hy)},
        {"H(C)", homology_json(L.hc)},
        {"report", report_json(L.report)},
        {"ok", L.report.ok}});
  return L.report.ok ? 0 : 1;
}

int cmd_hornfill(const Opts& o) {
  if (!o.left.empty() || !o.right.empty()) {
    if (o.left.empty() || o.right.empty()) throw Error("need both --left and --right");
    const auto B01 = simplex_of(o.left), B12 = simplex_of(o.right);
    if (B01.n() != 1 || B12.n() != 1) throw Error("--left and --right must be bimodules");
    const auto h = horn_fill_two(B01, B12);
    const bool product = h.chain_map == chain_map(B12, Ring::Z) * chain_map(B01, Ring::Z);
    json j = horn_fill_two_to_json(h);
    j["command"] = "hornfill";
    j["chain_map_is_product"] = product;
    j["ok"] = product;
    emit(j);
    return product ? 0 : 1;
  }
  const auto C = arc_category_of(o);
  const auto r = horn_fill_strata(C, o.k, o.max_codim);
  const bool ok = r.report.ok && r.corner_ok && r.bijection_ok;
  if (o.format == "dot") {
    std::cout << horn_fill_to_dot(r);
    return ok ? 0 : 1;
  }
  json j = horn_fill_to_json(C, r);
  j["command"] = "hornfill";
  j["ok"] = ok;
  emit(j);
  return ok ? 0 : 1;
}

// ---- morse ----

int cmd_morse_build(const Opts& o) {
  if (o.complex.empty()) throw Error("need --complex");
  const auto K = complex_of(o.complex);
  const auto V = matching_of(K, o.matching);
  const auto mr = validate_matching(K, V);
  if (!mr.ok) {
    json cyc = json::array();
    for (int c : mr.cycle) cyc.push_back(K.name(c));
    emit({{"command", "morse build"}, {"matching_valid", false}, {"reason", mr.reason}, {"cycle", cyc}, {"ok", false}});
    return 1;
  }
  const Ring r = ring_of(o);
  const auto M = morse_flow_category(K, V);
  const auto R = validate_flow_category(M.category, r);
  const auto h = homology(chain_complex(M.category, r));
  const auto oracle = simplicial_homology(K, r);
  if (!o.out.empty()) write_file(o.out, category_to_json(M.category).dump(2) + "\n");
  json crit = json::array();
  for (int c : M.critical) crit.push_back(K.name(c));
  const bool ok = R.ok && h == oracle;
  emit({{"command", "morse build"},
        {"cells", K.size()},
        {"critical", crit},
        {"matching", matching_to_json(K, V)},
        {"reconstructed_1d_data", M.reconstructed},
        {"homology", homology_json(h)},
        {"oracle", homology_json(oracle)},
        {"agrees_with_oracle", h == oracle},
        {"validation", report_json(R)},
        {"ok", ok}});
  return ok ? 0 : 1;
}

int cmd_morse_continue(const Opts& o) {
  FlowBimodule B;
  json j{{"command", "morse continue"}};
  if (!o.map.empty()) {
    const auto m = read_json(o.map);
    const auto base = std::filesystem::path(o.map).parent_path();
    std::map<std::string, std::string> vmap;
    try {
      vmap = m.at("vertex_map").get<std::map<std::string, std::string>>();
    } catch (const json::exception& e) {
      throw Error(o.map + ": " + e.what());
    }
    const auto K = complex_of((base / m.at("source").get<std::string>()).string());
    const auto L = complex_of((base / m.at("target").get<std::string>()).string());
    B = simplicial_map_bimodule(K, matching_of(K, o.matching), L, matching_of(L, o.target_matching), vmap);
    j["map"] = o.map;
  } else {
    if (o.complex.empty()) throw Error("need --complex or --map");
    const auto K = complex_of(o.complex);
    B = continuation_bimodule(K, matching_of(K, o.matching), matching_of(K, o.target_matching));
  }
  const auto R = validate_bimodule(B, ring_of(o));
  if (!o.out.empty()) write_file(o.out, simplex_to_json(B).dump(2) + "\n");
  j["components"] = B.component_count();
  j["chain_map"] = matrix_json(chain_map(B, ring_of(o)));
  j["validation"] = report_json(R);
  j["ok"] = R.ok;
  emit(j);
  return R.ok ? 0 : 1;
}

int cmd_morse_greedy(const Opts& o) {
  if (o.complex.empty()) throw Error("need --complex");
  const auto K = complex_of(o.complex);
  const auto V = o.random ? random_matching(K, o.seed) : greedy_matching(K);
  const auto mr = validate_matching(K, V);
  json crit = json::array();
  for (int c : critical_cells(K, V)) crit.push_back(K.name(c));
  if (!o.out.empty()) write_file(o.out, matching_to_json(K, V).dump(2) + "\n");
  emit({{"command", "morse greedy"}, {"matching", matching_to_json(K, V)}, {"critical", crit}, {"valid", mr.ok}, {"ok", mr.ok}});
  return mr.ok ? 0 : 1;
}

int cmd_export_dot(const Opts& o) {
  if (!o.category.empty() || !o.simplex.empty() || !o.bimodule.empty()) {
    const std::string path = !o.category.empty() ? o.category : !o.simplex.empty() ? o.simplex : o.bimodule;
    std::cout << simplex_to_dot(simplex_of(path));
    return 0;
  }
  const auto C = arc_category_of(o);
  std::cout << arc_category_to_dot(C, build_arc_category(C, o.max_codim));
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"flowcat: flow categories, stratified arcs and Morse data"};
  app.require_subcommand(1);
  Opts o;
  std::function<int(const Opts&)> action;

  auto ring_opt = [&](CLI::App* c) {
    c->add_option("--ring", o.ring, "Z or Z2")->check(CLI::IsMember({"Z", "Z2"}));
  };
  auto arcs_input = [&](CLI::App* c) {
    c->add_option("--arcs", o.arc_category, "arc category JSON");
    c->add_option("--sequence", o.sequence, "object sets, e.g. p|q1,q2|r");
    c->add_option("--source", o.source, "set:name (default first element of the first set)");
    c->add_option("--target", o.target, "set:name (default first element of the last set)");
  };
  auto bind = [&](CLI::App* c, int (*fn)(const Opts&)) { c->callback([&action, fn] { action = fn; }); };

  auto* arcs = app.add_subcommand("arcs", "stratifying arc categories")->require_subcommand(1);
  {
    auto* c = arcs->add_subcommand("enum", "enumerate arcs and check the corner model");
    arcs_input(c);
    c->add_option("--max-codim", o.max_codim)->check(CLI::Range(0, 6));
    c->add_option("--format", o.format)->check(CLI::IsMember({"json", "dot", "csv"}));
    bind(c, cmd_arcs_enum);
    c = arcs->add_subcommand("codim1", "codim-1 strata against brute force");
    arcs_input(c);
    bind(c, cmd_arcs_codim1);
    c = arcs->add_subcommand("faces-check", "simplicial identities on a sequence");
    arcs_input(c);
    c->add_option("--max-codim", o.max_codim)->check(CLI::Range(0, 6));
    bind(c, cmd_arcs_faces);
  }
  auto* lb = app.add_subcommand("lblock", "L-blocks")->require_subcommand(1);
  {
    auto* c = lb->add_subcommand("facets", "facets of L_{d,flag} with witnesses");
    c->add_option("--d", o.d)->required()->check(CLI::Range(0, 12));
    c->add_option("--flag", o.flag)->check(CLI::IsMember({0, 1}));
    c->add_option("--epsilon", o.epsilon);
    bind(c, cmd_lblock_facets);
    c = lb->add_subcommand("cosimplicial-check", "cosimplicial identities up to max-d");
    c->add_option("--max-d", o.max_d)->check(CLI::Range(1, 6));
    c->add_option("--epsilon", o.epsilon);
    bind(c, cmd_lblock_cosimplicial);
  }
  auto* conic = app.add_subcommand("conic", "conic degenerations")->require_subcommand(1);
  {
    auto* c = conic->add_subcommand("fiber", "fibre over t");
    c->add_option("--t", o.t, "comma-separated nonnegative rationals")->required();
    c->add_option("--samples", o.samples, "also run this many random fibre checks")->check(CLI::NonNegativeNumber);
    c->add_option("--seed", o.seed);
    bind(c, cmd_conic_fiber);
  }
  {
    auto* c = app.add_subcommand("validate", "validate a flow category, bimodule or simplex");
    c->add_option("--category", o.category);
    c->add_option("--simplex", o.simplex);
    c->add_option("--bimodule", o.bimodule);
    ring_opt(c);
    bind(c, cmd_validate);
    c = app.add_subcommand("homology", "homology of a flow category or a complex");
    c->add_option("--category", o.category);
    c->add_option("--complex", o.complex);
    c->add_option("--matching", o.matching, "greedy, empty, random:<seed>, none or a file");
    ring_opt(c);
    bind(c, cmd_homology);
    c = app.add_subcommand("compose", "compose two bimodules");
    c->add_option("--left", o.left)->required();
    c->add_option("--right", o.right)->required();
    c->add_option("--out", o.out);
    ring_opt(c);
    bind(c, cmd_compose);
    c = app.add_subcommand("cone", "cone of a bimodule");
    c->add_option("--bimodule", o.bimodule)->required();
    c->add_option("--out", o.out);
    ring_opt(c);
    bind(c, cmd_cone);
    c = app.add_subcommand("les", "long exact sequence of a bimodule");
    c->add_option("--bimodule", o.bimodule)->required();
    ring_opt(c);
    bind(c, cmd_les);
    c = app.add_subcommand("hornfill", "horn filling: strata (--sequence/--arcs) or Lambda^2_1 (--left/--right)");
    arcs_input(c);
    c->add_option("--k", o.k);
    c->add_option("--max-codim", o.max_codim)->check(CLI::Range(1, 5));
    c->add_option("--left", o.left);
    c->add_option("--right", o.right);
    c->add_option("--format", o.format)->check(CLI::IsMember({"json", "dot"}));
    bind(c, cmd_hornfill);
  }
  auto* morse = app.add_subcommand("morse", "discrete Morse theory")->require_subcommand(1);
  {
    auto* c = morse->add_subcommand("build", "Morse flow category of a complex");
    c->add_option("--complex", o.complex)->required();
    c->add_option("--matching", o.matching, "greedy, empty, random:<seed> or a file");
    c->add_option("--out", o.out);
    ring_opt(c);
    bind(c, cmd_morse_build);
    c = morse->add_subcommand("continue", "continuation bimodule, or the bimodule of a simplicial map (--map)");
    c->add_option("--complex", o.complex);
    c->add_option("--map", o.map, "JSON with source, target (paths relative to it) and vertex_map");
    c->add_option("--matching", o.matching);
    c->add_option("--target-matching", o.target_matching);
    c->add_option("--out", o.out);
    ring_opt(c);
    bind(c, cmd_morse_continue);
    c = morse->add_subcommand("greedy", "greedy (or seeded random) acyclic matching");
    c->add_option("--complex", o.complex)->required();
    c->add_flag("--random", o.random);
    c->add_option("--seed", o.seed);
    c->add_option("--out", o.out);
    bind(c, cmd_morse_greedy);
  }
  auto* exp = app.add_subcommand("export", "graph exports")->require_subcommand(1);
  {
    auto* c = exp->add_subcommand("dot", "DOT graph of a flow simplex or an arc category");
    c->add_option("--category", o.category);
    c->add_option("--simplex", o.simplex);
    c->add_option("--bimodule", o.bimodule);
    arcs_input(c);
    c->add_option("--max-codim", o.max_codim)->check(CLI::Range(0, 6));
    bind(c, cmd_export_dot);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return action(o);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CheckFailure& e) {
    emit({{"ok", false}, {"error", e.what()}, {"details", e.details()}});
    return 1;
  } catch (const Error& e) {
    std::cerr << "flowcat: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "flowcat: malformed input: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "flowcat: bad number: " << e.what() << "\n";
    return 2;
  }
}
