// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.
// All limits are fixed below; every comparison is exact.

#include "flowcat/bimodule_alg.hpp"
#include "flowcat/corner_model.hpp"
#include "flowcat/degeneration_geom.hpp"
#include "flowcat/flow_data.hpp"
#include "flowcat/homology.hpp"
#include "flowcat/kernels.hpp"
#include "flowcat/morse.hpp"
#include "flowcat/strat_arcs.hpp"

#include "support/fixtures.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

using namespace flowcat;
using namespace flowcat::testing;

namespace {

// runtime limits, seconds
constexpr double kLimitCornerModels = 30.0;
constexpr double kLimitSimplicialIdentities = 10.0;
constexpr double kLimitLBlocks = 5.0;
constexpr double kLimitConic = 5.0;
constexpr double kLimitMorseHomology = 10.0;
constexpr double kLimitConeLes = 10.0;
constexpr double kLimitHornFill = 10.0;
constexpr double kNoLimit = 0.0;

// sizes
constexpr int kMaxSimplexDim = 6;
constexpr int kMaxSets = 4;
constexpr int kMaxElementsPerSet = 3;
constexpr int kMaxArcCodim = 4;
constexpr int kRandomInstances = 100;
constexpr int kMaxLBlockCheckDim = 5;
constexpr int kMaxLBlockCountDim = 8;
constexpr long kConicSamples = 1000;
constexpr int kMaxConicN = 4;
constexpr int kHornMaxCodim = 3;
constexpr std::uint64_t kSeed = 20261015;

struct Outcome {
  bool ok = true;
  std::string detail;
  long checks = 0;

  void fail(const std::string& what) {
    if (ok) detail = what;
    ok = false;
  }
  void check(bool cond, const std::string& what) {
    ++checks;
    if (!cond) fail(what);
  }
  // message built only on failure, for hot loops
  template <class F>
  void check_lazy(bool cond, F&& what) {
    ++checks;
    if (!cond) fail(what());
  }
};

std::string first(const Report& r) { return r.violations.empty() ? std::string("?") : r.violations.front(); }

// ---- corpora ----

ArcCategory arc_cat(const Sequence& s, Element p, Element r) {
  ArcCategory C;
  C.sequence = s;
  C.source = p;
  C.target = r;
  return C;
}

// every sequence of 1..kMaxSets sets of 1..kMaxElementsPerSet elements, up to
// the order of set sizes being a composition
std::vector<Sequence> sequence_corpus() {
  std::vector<Sequence> out;
  for (int len = 1; len <= kMaxSets; ++len) {
    std::vector<int> sizes(len, 1);
    while (true) {
      Sequence s;
      for (int i = 0; i < len; ++i) {
        std::vector<std::string> set;
        for (int e = 0; e < sizes[i]; ++e) set.push_back(std::string(1, static_cast<char>('a' + i)) + std::to_string(e));
        s.sets.push_back(set);
      }
      out.push_back(s);
      int i = 0;
      while (i < len && sizes[i] == kMaxElementsPerSet) sizes[i++] = 1;
      if (i == len) break;
      ++sizes[i];
    }
  }
  return out;
}

// energy-graded instances
void add_energy_cases(std::vector<ArcCategory>& out) {
  ArcCategory E = arc_cat(Sequence{{{"a", "b"}}}, {0, 0}, {0, 1});
  E.gamma = {GammaKind::NonnegRational};
  E.grade = Rational(3, 2);
  E.decompositions = {{Rational(1, 2), Rational(1), Rational(0)}, {Rational(3, 2)}};
  out.push_back(E);
  ArcCategory E2 = arc_cat(Sequence{{{"a"}, {"b", "c"}, {"d"}}}, {0, 0}, {2, 0});
  E2.gamma = {GammaKind::NonnegRational};
  E2.grade = Rational(2);
  E2.decompositions = {{Rational(1), Rational(1)}, {Rational(1, 3), Rational(2, 3), Rational(1)}};
  out.push_back(E2);
}

// all (p, r) with p in an earlier or equal set
std::vector<ArcCategory> arc_corpus(const std::vector<Sequence>& seqs) {
  std::vector<ArcCategory> out;
  for (const auto& s : seqs) {
    const int n = s.n();
    for (int j = 0; j <= n; ++j)
      for (int l = j; l <= n; ++l)
        for (int p = 0; p < static_cast<int>(s.sets[j].size()); ++p)
          for (int r = 0; r < static_cast<int>(s.sets[l].size()); ++r) out.push_back(arc_cat(s, {j, p}, {l, r}));
  }
  add_energy_cases(out);
  return out;
}

// One representative per isomorphism class of arc_corpus: arcs from P_j to
// P_l only use sets j..l, and renaming elements inside a set is an
// automorphism, so only the sizes of sets j..l and whether p = r matter.
std::vector<ArcCategory> arc_classes(const std::vector<Sequence>& seqs) {
  std::vector<ArcCategory> out;
  for (const auto& s : seqs) {
    out.push_back(arc_cat(s, {0, 0}, {s.n(), 0}));
    if (s.n() == 0 && s.sets[0].size() > 1) out.push_back(arc_cat(s, {0, 0}, {0, 1}));
  }
  add_energy_cases(out);
  return out;
}

struct MorseCase {
  std::string name;
  SimplicialComplex K;
  std::vector<Matching> V;
};

const std::vector<MorseCase>& morse_corpus() {
  static const std::vector<MorseCase> cases = [] {
    std::vector<MorseCase> out;
    for (const auto& name : complex_corpus()) {
      MorseCase c{name, load_complex(name), {}};
      c.V = {Matching{}, greedy_matching(c.K)};
      for (std::uint64_t s = 1; s <= 3; ++s) c.V.push_back(random_matching(c.K, s));
      out.push_back(std::move(c));
    }
    return out;
  }();
  return cases;
}

// Flow categories of the corpus: Morse categories of every complex and
// matching, plus two hand-built ones.
std::vector<std::pair<std::string, FlowCategory>> category_corpus() {
  std::vector<std::pair<std::string, FlowCategory>> out;
  for (const auto& c : morse_corpus())
    for (std::size_t i = 0; i < c.V.size(); ++i)
      out.push_back({c.name + "/V" + std::to_string(i), morse_flow_category(c.K, c.V[i]).category});
  out.push_back({"square", square_category()});
  out.push_back({"interval", interval_category()});
  return out;
}

// ---- criteria ----

Outcome corner_models() {
  Outcome o;
  for (int n = 0; n <= kMaxSimplexDim; ++n) {
    const auto C = simplex_face_category(n);
    const auto r = is_corner_model_parallel(C);
    o.check(r.ok, "face poset of simplex " + std::to_string(n) + ": " + r.first_violation);
    for (int p = 0; p < C.object_count(); ++p)
      o.check(static_cast<int>(q_set(C, p).size()) == C.codim(p), "q_set size on face poset " + std::to_string(n));
  }
  for (const auto& C : arc_classes(sequence_corpus())) {
    const auto D = build_arc_category(C, kMaxArcCodim);
    const auto r = is_corner_model_parallel(D.category);
    const std::string where = format_arc(C.sequence, minimal_arc(C.source, C.target));
    o.check(r.ok, "arc category " + where + ": " + r.first_violation);
    for (int p = 0; p < D.category.object_count(); ++p)
      o.check_lazy(static_cast<int>(q_set(D.category, p).size()) == D.category.codim(p),
                   [&] { return "q_set size at " + format_arc(C.sequence, D.arcs[p]); });
  }
  return o;
}

Outcome simplicial_identities() {
  Outcome o;
  std::mt19937_64 rng(kSeed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  // arc categories of random sequences
  for (int t = 0; t < kRandomInstances; ++t) {
    Sequence s;
    const int len = pick(3, 4);
    for (int i = 0; i < len; ++i) {
      std::vector<std::string> set;
      const int m = pick(1, 2);
      for (int e = 0; e < m; ++e) set.push_back(std::string(1, static_cast<char>('a' + i)) + std::to_string(e));
      s.sets.push_back(set);
    }
    const auto R = faces_check(s, 3);
    o.check(R.ok, "arc faces, instance " + std::to_string(t) + ": " + first(R));
  }

  // flow simplices built from random Morse data
  const auto& corpus = morse_corpus();
  for (int t = 0; t < kRandomInstances; ++t) {
    const auto& c = corpus[pick(0, static_cast<int>(corpus.size()) - 1)];
    const auto V0 = random_matching(c.K, rng()), V1 = random_matching(c.K, rng());
    const auto B = continuation_bimodule(c.K, V0, V1);
    FlowSimplex S;
    switch (pick(0, 6)) {
      case 0: S = s0(B); break;
      case 1: S = sn(B); break;
      case 2: S = null_homotopy_IB(B); break;
      case 3: S = null_homotopy_BP(B); break;
      case 4: S = null_homotopy_PI(B); break;
      case 5: S = s0(s0(B)); break;
      default: S = sn(null_homotopy_IB(B)); break;
    }
    const std::string where = "flow instance " + std::to_string(t) + " (" + c.name + ", n=" + std::to_string(S.n()) + ")";
    for (int j = 1; j <= S.n(); ++j)
      for (int i = 0; i < j; ++i)
        o.check(face(face(S, j), i) == face(face(S, i), j - 1),
                where + ": face identity at i=" + std::to_string(i) + " j=" + std::to_string(j));
  }
  return o;
}

Outcome codim1_classification() {
  Outcome o;
  for (const auto& C : arc_corpus(sequence_corpus())) {
    std::set<Arc, ArcLess> brute;
    for (const auto& a : enumerate_objects(C, 1))
      if (codim(a) == 1) brute.insert(a);
    std::set<Arc, ArcLess> listed;
    const int j = C.source.set, l = C.target.set;
    for (const auto& x : enumerate_codim1(C)) {
      auto name = [&] { return format_arc(C.sequence, x.arc); };
      o.check_lazy(listed.insert(x.arc).second, [&] { return "listed twice: " + name(); });
      o.check_lazy(brute.count(x.arc) == 1, [&] { return "not codim 1: " + name(); });
      if (x.kind == Codim1Kind::Break) {
        const bool shape = x.arc.edges.size() == 3 && x.arc.edges[1] == x.broken &&
                           x.arc.vertices[0].label == range_mask(j, x.broken.set) &&
                           x.arc.vertices[1].label == range_mask(x.broken.set, l) && x.q_minus.size() == 1 &&
                           x.q_minus[0] == x.broken;
        o.check_lazy(shape, [&] { return "break tag wrong on " + name(); });
      } else {
        const LabelSet k = LabelSet{1} << x.forgotten;
        const bool shape = x.arc.edges.size() == 2 && x.forgotten > j && x.forgotten < l &&
                           x.arc.vertices[0].label == (range_mask(j, l) & ~k) && x.q_plus == k;
        o.check_lazy(shape, [&] { return "forget tag wrong on " + name(); });
      }
    }
    o.check(listed.size() == brute.size(), "codim-1 count differs on " + format_arc(C.sequence, minimal_arc(C.source, C.target)));
  }
  return o;
}

Outcome block_functor_check() {
  Outcome o;
  long horn = 0;
  for (const auto& C : arc_classes(sequence_corpus())) {
    const auto& s = C.sequence;
    const int n = s.n();
    if (n < 2 || C.source.set != 0 || C.target.set != n) continue;
    const auto D = build_arc_category(C, kMaxArcCodim);
    for (int k = 1; k < n; ++k) {
      std::vector<char> in_horn(D.arcs.size());
      std::vector<Block> blocks(D.arcs.size());
      for (std::size_t a = 0; a < D.arcs.size(); ++a) {
        in_horn[a] = horn_membership(D.arcs[a], n, k);
        blocks[a] = block_functor(D.arcs[a], n, k);
        if (!in_horn[a]) continue;
        ++horn;
        o.check_lazy(codim(D.arcs[a]) == blocks[a].d + blocks[a].eps,
                     [&] { return "codim != d + eps at " + format_arc(s, D.arcs[a]) + " k=" + std::to_string(k); });
      }
      for (int f = 0; f < D.category.arrow_count(); ++f) {
        const auto& A = D.category.arrow(f);
        if (!in_horn[A.source] || !in_horn[A.target]) continue;
        const Block& x = blocks[A.source];
        const Block& y = blocks[A.target];
        o.check_lazy(x.d <= y.d && x.eps <= y.eps, [&] {
          return "not monotone on " + format_arc(s, D.arcs[A.source]) + " -> " + format_arc(s, D.arcs[A.target]);
        });
      }
    }
  }
  o.check(horn > 0, "no horn objects enumerated");
  return o;
}

Outcome lblocks() {
  Outcome o;
  for (int d = 0; d <= kMaxLBlockCountDim; ++d)
    for (int flag = 0; flag <= 1; ++flag) {
      const auto fs = lblock_facets(d, flag);
      const std::string name = "L_{" + std::to_string(d) + "," + std::to_string(flag) + "}";
      std::size_t want;
      if (d == 0)
        want = 0;  // both d = 0 blocks are empty
      else if (flag == 0)
        want = 2 * d + 1;
      else
        want = d == 1 ? 3 : 2 * d + 2;
      o.check(fs.size() == want, name + ": " + std::to_string(fs.size()) + " facets");
      if (d == 0) o.check(!lblock_nonempty(d, flag), name + " should be empty");
      const LBlock L{d, flag, default_epsilon()};
      for (const auto& f : fs) {
        if (!f.nonempty) continue;
        LFace face;
        if (f.kind == LFacetKind::Zero) face.zero = 1u << f.coord;
        if (f.kind == LFacetKind::One) face.one = 1u << f.coord;
        if (f.kind == LFacetKind::YOne) face.y_one = true;
        if (f.kind == LFacetKind::Hypersurface) face.hyper = true;
        const auto w = face_witness(L, face);
        o.check(w && lblock_contains(L, *w) && classify_point(L, *w).size() == 1, name + ": facet " + f.tag + " has no witness");
      }
    }
  for (const auto& eps : {default_epsilon(), Rational(1, 3)}) {
    const auto r = cosimplicial_check(kMaxLBlockCheckDim, eps);
    o.check(r.report.ok, "cosimplicial identities: " + first(r.report));
    o.checks += r.identities_checked;
  }
  return o;
}

Outcome conic() {
  Outcome o;
  const long fails = conic_sample_parallel(kMaxConicN, kConicSamples, kSeed);
  o.check(fails == 0, std::to_string(fails) + " of " + std::to_string(kConicSamples) + " fibres failed");
  o.checks += kConicSamples;
  // a direct look at the zero count on the same seeds
  for (long i = 0; i < kConicSamples; i += 97) {
    const int n = static_cast<int>(i % (kMaxConicN + 1));
    const auto t = random_conic_base(n, kSeed + static_cast<std::uint64_t>(i));
    const long zeros = std::count(t.begin(), t.end(), Rational(0));
    const auto comps = conic_fiber(n, t);
    o.check(static_cast<long>(comps.size()) == zeros + 1, "component count at sample " + std::to_string(i));
    for (const auto& c : comps)
      for (const auto& s : {std::optional<Rational>(0), std::optional<Rational>(Rational(2, 3)), std::optional<Rational>()}) {
        const auto z = c.point(s);
        bool normalized = true;
        for (const auto& f : z) normalized &= std::max(f.x, f.y) == 1 && f.x >= 0 && f.y >= 0;
        o.check(normalized && conic_contains(t, z), "point off the fibre at sample " + std::to_string(i));
      }
  }
  return o;
}

Outcome morse_homology() {
  Outcome o;
  for (const auto& c : morse_corpus())
    for (Ring ring : {Ring::Z, Ring::Z2}) {
      const auto oracle = simplicial_homology(c.K, ring);
      for (std::size_t i = 0; i < c.V.size(); ++i) {
        const auto M = morse_flow_category(c.K, c.V[i]);
        const auto h = homology(chain_complex(M.category, ring));
        o.check(h == oracle, c.name + " V" + std::to_string(i) + " over " + ring_name(ring) + ": " + format_homology(h) +
                                 " vs " + format_homology(oracle));
      }
    }
  // fixed values
  auto at = [](const std::string& name, Ring r) { return simplicial_homology(load_complex(name), r); };
  const auto kl = at("klein", Ring::Z);
  o.check(kl.at(0).rank == 1 && kl.at(1).rank == 1 && kl.at(1).torsion == std::vector<BigInt>{2} && kl.at(2) == HomologyGroup{},
          "Klein bottle oracle");
  const auto rp = at("rp2", Ring::Z), rp2 = at("rp2", Ring::Z2);
  o.check(rp.at(1).torsion == std::vector<BigInt>{2} && rp.at(2) == HomologyGroup{}, "RP2 over Z");
  o.check(rp2.at(0).rank == 1 && rp2.at(1).rank == 1 && rp2.at(2).rank == 1, "RP2 over Z/2");
  const auto t2 = at("torus", Ring::Z);
  o.check(t2.at(1).rank == 2 && t2.at(2).rank == 1, "torus");
  const auto solid = at("solid_tetra", Ring::Z);
  o.check(solid.groups.size() == 1 && solid.at(0).rank == 1, "solid simplex");
  return o;
}

Outcome d_squared() {
  Outcome o;
  for (const auto& [name, F] : category_corpus()) {
    const auto r = validate_flow_category(F);
    o.check(r.ok, name + ": " + first(r));
    try {
      check_d_squared(chain_complex(F, Ring::Z));
      ++o.checks;
    } catch (const CheckFailure& e) {
      o.fail(name + ": " + e.what());
    }
    // framed dimension equation
    for (const auto& c : F.cell(1)) {
      const auto& p = F.object(0, c.source);
      const auto& q = F.object(0, c.target);
      o.check(p.v.value() - q.v.value() - 1 == c.vdim(), name + ": dimension equation fails on " + c.id);
    }
  }
  return o;
}

std::vector<std::pair<std::string, FlowBimodule>> bimodule_corpus() {
  std::vector<std::pair<std::string, FlowBimodule>> out;
  for (const auto& c : morse_corpus())
    for (std::size_t i = 0; i + 1 < c.V.size(); ++i)
      out.push_back({c.name + " V" + std::to_string(i) + "->V" + std::to_string(i + 1),
                     continuation_bimodule(c.K, c.V[i], c.V[i + 1])});
  return out;
}

Outcome diagonal_unit() {
  Outcome o;
  for (const auto& [name, F] : category_corpus()) {
    const auto D = diagonal(F);
    const auto r = validate_bimodule(D);
    o.check(r.ok, name + " diagonal: " + first(r));
    o.check(chain_map(D, Ring::Z) == IntMatrix::identity(static_cast<int>(F.sets[0].size())), name + ": diagonal is not the identity");
  }
  for (const auto& [name, B] : bimodule_corpus()) {
    const IntMatrix f = chain_map(B, Ring::Z);
    const auto left = compose_bimodules(diagonal(endpoint(B, 0)), B);
    const auto right = compose_bimodules(B, diagonal(endpoint(B, 1)));
    o.check(chain_map(left, Ring::Z) == f, name + ": diagonal on the left changes the chain map");
    o.check(chain_map(right, Ring::Z) == f, name + ": diagonal on the right changes the chain map");
  }
  return o;
}

FlowBimodule map_fixture(const std::map<std::string, std::string>& vmap, const std::string& src, const std::string& tgt) {
  const auto K = load_complex(src), L = load_complex(tgt);
  return simplicial_map_bimodule(K, greedy_matching(K), L, greedy_matching(L), vmap);
}

Outcome cone_les() {
  Outcome o;
  std::vector<std::pair<std::string, FlowBimodule>> fx;
  fx.push_back({"x2 on S1", map_fixture({{"a", "a"}, {"b", "b"}, {"c", "c"}, {"d", "a"}, {"e", "b"}, {"f", "c"}},
                                        "s1_hex", "s1")});
  fx.push_back({"S1 in S2", map_fixture({{"a", "a"}, {"b", "b"}, {"c", "c"}}, "s1", "s2")});
  fx.push_back({"point in S2", map_fixture({{"a", "d"}}, "point", "s2")});
  {
    const auto K = load_complex("torus");
    fx.push_back({"torus continuation", continuation_bimodule(K, greedy_matching(K), random_matching(K, 5))});
  }
  {
    const auto K = load_complex("rp2");
    fx.push_back({"RP2 diagonal", diagonal(morse_flow_category(K, greedy_matching(K)).category)});
  }
  {
    const auto K = load_complex("klein");
    const auto X = morse_flow_category(K, greedy_matching(K)).category;
    fx.push_back({"Klein empty", empty_bimodule(X, X)});
  }
  fx.push_back({"square diagonal", diagonal(square_category())});
  // the stored CLI fixture must agree with the library
  o.check(simplex_from_json(load_data("fixtures/times2_s1.json")) == fx[0].second, "times2_s1.json is stale");

  for (const auto& [name, B] : fx)
    for (Ring ring : {Ring::Z, Ring::Z2}) {
      const std::string where = name + " over " + ring_name(ring);
      const auto cr = cone(B);
      const auto r = validate_flow_category(cr.cone, ring);
      o.check(r.ok, where + ": cone invalid: " + first(r));
      const auto alg = algebraic_cone(chain_complex(endpoint(B, 0), ring), chain_complex(endpoint(B, 1), ring), chain_map(B, ring));
      const auto iso = match_by_labels(chain_complex(cr.cone, ring), alg);
      o.check(iso.ok, where + ": cone is not the algebraic cone: " + iso.reason);
      const auto L = les_check(B, ring);
      o.check(L.report.ok, where + ": " + first(L.report));
      if (name == "x2 on S1" && ring == Ring::Z) {
        HomologyResult want;
        want.ring = Ring::Z;
        want.groups[1] = HomologyGroup{0, {2}};
        o.check(L.hc == want, "x2 on S1: H(C) = " + format_homology(L.hc));
      }
      if (name == "S1 in S2" && ring == Ring::Z) {
        // relative homology of (S2, S1): Z^2 in degree 2
        HomologyResult want;
        want.ring = Ring::Z;
        want.groups[2] = HomologyGroup{2, {}};
        o.check(L.hc == want,
                "S1 in S2: H(C) = " + format_homology(L.hc));
      }
    }
  return o;
}

// Payload predicate for the horn of B01, B12. Data above virtual dimension 1
// is not stored, so a space counts as nonempty when some broken chain of
// stored components runs through it (its boundary is then nonempty too).
std::function<bool(const Arc&)> horn_payload(const FlowBimodule& B01, const FlowBimodule& B12) {
  // elements of P0, P1, P2 numbered consecutively
  const int n0 = static_cast<int>(B01.sets[0].size()), n1 = static_cast<int>(B01.sets[1].size()),
            n2 = static_cast<int>(B12.sets[1].size());
  const int N = n0 + n1 + n2;
  const int base[3] = {0, n0, n0 + n1};
  std::vector<std::vector<char>> reach(N, std::vector<char>(N, 0));
  auto mark = [&](const FlowBimodule& B, Face f, int sset, int tset, int bs, int bt) {
    for (const auto& c : B.cell(f)) {
      const int x = base[bs] + *B.object_index(sset, c.source);
      const int y = base[bt] + *B.object_index(tset, c.target);
      reach[x][y] = 1;
    }
  };
  mark(B01, 1, 0, 0, 0, 0);
  mark(B01, 2, 1, 1, 1, 1);
  mark(B01, 3, 0, 1, 0, 1);
  mark(B12, 2, 1, 1, 2, 2);
  mark(B12, 3, 0, 1, 1, 2);
  for (int m = 0; m < N; ++m)
    for (int x = 0; x < N; ++x)
      if (reach[x][m])
        for (int y = 0; y < N; ++y)
          if (reach[m][y]) reach[x][y] = 1;
  return [reach, base](const Arc& a) {
    for (std::size_t v = 0; v < a.vertices.size(); ++v) {
      const Element& x = a.edges[v];
      const Element& y = a.edges[v + 1];
      if (!reach[base[x.set] + x.index][base[y.set] + y.index]) return false;
    }
    return true;
  };
}

Outcome horn_filling() {
  Outcome o;
  for (const auto& name : {"s1", "s2", "torus", "rp2"}) {
    const auto K = load_complex(name);
    const auto V0 = greedy_matching(K), V1 = random_matching(K, 3), V2 = random_matching(K, 9);
    const auto B01 = continuation_bimodule(K, V0, V1);
    const auto B12 = continuation_bimodule(K, V1, V2);
    const auto H = horn_fill_two(B01, B12);
    o.check(H.chain_map == chain_map(B12, Ring::Z) * chain_map(B01, Ring::Z),
            std::string(name) + ": missing-facet chain map is not the product");

    Sequence seq;
    for (const auto& set : {B01.sets[0], B01.sets[1], B12.sets[1]}) {
      std::vector<std::string> ids;
      for (const auto& ob : set) ids.push_back(ob.id);
      seq.sets.push_back(ids);
    }
    const auto payload = horn_payload(B01, B12);
    for (int p = 0; p < static_cast<int>(seq.sets[0].size()); ++p)
      for (int r = 0; r < static_cast<int>(seq.sets[2].size()); ++r) {
        const auto C = arc_cat(seq, {0, p}, {2, r});
        const auto R = horn_fill_strata(C, 1, kHornMaxCodim, payload);
        const std::string where = std::string(name) + " " + seq.sets[0][p] + "->" + seq.sets[2][r];
        o.check(R.report.ok, where + ": " + first(R.report));
        o.check(R.corner_ok && R.bijection_ok, where + ": glued stratification differs from the arc category");
      }
  }
  return o;
}

Outcome suspension() {
  Outcome o;
  for (const auto& [name, F] : category_corpus()) {
    const auto SF = suspend(F, 1);
    for (Ring ring : {Ring::Z, Ring::Z2}) {
      const auto h = homology(chain_complex(F, ring)), hs = homology(chain_complex(SF, ring));
      HomologyResult shifted;
      shifted.ring = ring;
      for (const auto& [k, g] : h.groups) shifted.groups[k + 1] = g;
      o.check(hs == shifted, name + " over " + ring_name(ring) + ": H(SF) = " + format_homology(hs));
    }
    for (const auto& back : {suspend(suspend(F, -1), 1), suspend(suspend(F, 1), -1)}) {
      for (std::size_t i = 0; i < F.sets[0].size(); ++i)
        o.check(back.sets[0][i].v.value() == F.sets[0][i].v.value() && back.sets[0][i].dim == F.sets[0][i].dim,
                name + ": object value changed");
      const auto& a = F.cell(1);
      const auto& b = back.cell(1);
      o.check(a.size() == b.size(), name + ": component count changed");
      for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
        o.check(a[i].vdim() == b[i].vdim() && a[i].count == b[i].count, name + ": component value changed");
    }
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "corner models (face posets, arc categories, q_set = codim)", kLimitCornerModels, corner_models},
      {2, "simplicial identities on random instances", kLimitSimplicialIdentities, simplicial_identities},
      {3, "codim-1 classification against brute force", kNoLimit, codim1_classification},
      {4, "block functor: codim = d + eps, monotone", kNoLimit, block_functor_check},
      {5, "L-block facets and cosimplicial identities", kLimitLBlocks, lblocks},
      {6, "conic fibres: components = zeros + 1", kLimitConic, conic},
      {7, "Morse homology = simplicial oracle", kLimitMorseHomology, morse_homology},
      {8, "d^2 = 0 and flow-category validation", kNoLimit, d_squared},
      {9, "diagonal bimodule is a unit", kNoLimit, diagonal_unit},
      {10, "cone and long exact sequence", kLimitConeLes, cone_les},
      {11, "horn filling of continuation bimodules", kLimitHornFill, horn_filling},
      {12, "suspension shifts homology", kNoLimit, suspension},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.ok && c.limit > 0 && secs >= c.limit) o.fail("took longer than " + std::to_string(c.limit) + " s");
    if (!o.ok) ++failed;
    std::printf("%s  %2d  %-60s %8.2f s  %ld checks%s%s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, secs, o.checks,
                o.ok ? "" : "  : ", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
