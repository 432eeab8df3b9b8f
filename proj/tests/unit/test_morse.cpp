#include "doctest.h"
#include "flowcat/morse.hpp"
#include "support/fixtures.hpp"

using namespace flowcat;
using namespace flowcat::testing;

namespace {

HomologyResult expect(Ring ring, std::map<int, HomologyGroup> g) {
  HomologyResult h;
  h.ring = ring;
  h.groups = std::move(g);
  return h;
}

int euler(const SimplicialComplex& K) {
  int chi = 0;
  for (int c = 0; c < K.size(); ++c) chi += (K.dim(c) % 2 == 0) ? 1 : -1;
  return chi;
}

ChainComplex morse_complex(const SimplicialComplex& K, const Matching& V, Ring ring) {
  auto crit = critical_cells(K, V);
  std::vector<std::string> labels;
  std::vector<int> degrees;
  for (int c : crit) {
    labels.push_back(K.name(c));
    degrees.push_back(K.dim(c));
  }
  return make_complex(ring, labels, degrees, morse_differential_flow(K, V));
}

std::vector<Matching> matchings_for(const SimplicialComplex& K) {
  std::vector<Matching> out{Matching{}, greedy_matching(K)};
  for (std::uint64_t s = 1; s <= 4; ++s) out.push_back(random_matching(K, s));
  return out;
}

}  // namespace

TEST_CASE("complex parsing and cell counts") {
  auto s2 = load_complex("s2");
  CHECK(s2.size() == 14);
  CHECK(euler(s2) == 2);
  auto T = load_complex("torus");
  int counts[3] = {0, 0, 0};
  for (int c = 0; c < T.size(); ++c) ++counts[T.dim(c)];
  CHECK(counts[0] == 7);
  CHECK(counts[1] == 21);
  CHECK(counts[2] == 14);
  CHECK(euler(T) == 0);
  CHECK(load_complex("point").size() == 1);
  CHECK(euler(load_complex("klein")) == 0);
  CHECK(euler(load_complex("rp2")) == 1);

  CHECK_THROWS_AS(parse_complex(nlohmann::json::parse(R"([["a","a"]])")), Error);
  CHECK_THROWS_AS(parse_complex(nlohmann::json::parse(R"(["a"])")), Error);
  CHECK_THROWS_AS(parse_complex(nlohmann::json::parse(R"([[1.5]])")), Error);
  // ∂∂ = 0
  auto C = simplicial_chain_complex(T, Ring::Z);
  CHECK((C.d * C.d).is_zero());
  auto back = parse_complex(complex_to_json(T));
  CHECK(back.cells == T.cells);
}

TEST_CASE("oracle values") {
  using G = HomologyGroup;
  CHECK(simplicial_homology(load_complex("point"), Ring::Z) == expect(Ring::Z, {{0, G{1, {}}}}));
  CHECK(simplicial_homology(load_complex("s2"), Ring::Z) == expect(Ring::Z, {{0, G{1, {}}}, {2, G{1, {}}}}));
  CHECK(simplicial_homology(load_complex("torus"), Ring::Z) ==
        expect(Ring::Z, {{0, G{1, {}}}, {1, G{2, {}}}, {2, G{1, {}}}}));
  CHECK(simplicial_homology(load_complex("rp2"), Ring::Z) == expect(Ring::Z, {{0, G{1, {}}}, {1, G{0, {2}}}}));
  CHECK(simplicial_homology(load_complex("rp2"), Ring::Z2) ==
        expect(Ring::Z2, {{0, G{1, {}}}, {1, G{1, {}}}, {2, G{1, {}}}}));
  CHECK(simplicial_homology(load_complex("klein"), Ring::Z) == expect(Ring::Z, {{0, G{1, {}}}, {1, G{1, {2}}}}));
  CHECK(simplicial_homology(load_complex("solid_tetra"), Ring::Z) == expect(Ring::Z, {{0, G{1, {}}}}));
  CHECK(simplicial_homology(load_complex("s1"), Ring::Z) == expect(Ring::Z, {{0, G{1, {}}}, {1, G{1, {}}}}));
}

TEST_CASE("oracle agrees with the homology module") {
  for (const auto& name : complex_corpus()) {
    auto K = load_complex(name);
    for (Ring r : {Ring::Z, Ring::Z2}) CHECK(homology(simplicial_chain_complex(K, r)) == simplicial_homology(K, r));
  }
}

TEST_CASE("matchings") {
  auto s2 = load_complex("s2");
  CHECK(validate_matching(s2, Matching{}).ok);
  auto g = greedy_matching(s2);
  CHECK(validate_matching(s2, g).ok);
  CHECK(critical_cells(s2, g).size() == 2);
  auto round = parse_matching(s2, matching_to_json(s2, g));
  CHECK(round.pairs == g.pairs);
  CHECK(parse_matching(s2, "greedy").pairs == g.pairs);

  // Square boundary with every vertex pushed along the circle.
  auto sq = parse_complex(nlohmann::json::parse(R"([["a","b"],["b","c"],["c","d"],["a","d"]])"));
  auto V = parse_matching(
      sq, nlohmann::json::parse(R"([[["a"],["a","b"]],[["b"],["b","c"]],[["c"],["c","d"]],[["d"],["a","d"]]])"));
  auto r = validate_matching(sq, V);
  CHECK_FALSE(r.ok);
  CHECK(r.cycle.size() >= 2);
  CHECK(r.reason.find("cycle") != std::string::npos);

  Matching bad{{{s2.find({"a"}), s2.find({"b", "c"})}}};
  CHECK_FALSE(validate_matching(s2, bad).ok);
  Matching twice{{{s2.find({"a"}), s2.find({"a", "b"})}, {s2.find({"a"}), s2.find({"a", "c"})}}};
  CHECK_FALSE(validate_matching(s2, twice).ok);
  CHECK_THROWS_AS(morse_differential_flow(sq, V), CheckFailure);
  CHECK_THROWS_AS(parse_matching(s2, nlohmann::json::parse(R"([[["z"],["a","z"]]])")), Error);

  for (const auto& name : complex_corpus()) {
    auto K = load_complex(name);
    for (const auto& M : matchings_for(K)) CHECK(validate_matching(K, M).ok);
  }
}

TEST_CASE("empty matching reproduces the simplicial complex") {
  auto K = load_complex("torus");
  auto d = morse_differential_flow(K, Matching{});
  CHECK(d == simplicial_chain_complex(K, Ring::Z).d);
}

TEST_CASE("three Morse differentials agree and compute homology") {
  for (const auto& name : complex_corpus()) {
    auto K = load_complex(name);
    for (const auto& V : matchings_for(K)) {
      auto dp = morse_differential_paths(K, V);
      auto df = morse_differential_flow(K, V);
      auto dpi = morse_projection(K, V) * simplicial_chain_complex(K, Ring::Z).d * morse_inclusion(K, V);
      CHECK(dp == df);
      CHECK(dp == dpi);
      CHECK((df * df).is_zero());
      CHECK((morse_projection(K, V) * morse_inclusion(K, V)) == IntMatrix::identity(df.rows()));
      for (Ring r : {Ring::Z, Ring::Z2}) CHECK(homology(morse_complex(K, V, r)) == simplicial_homology(K, r));
    }
  }
}

TEST_CASE("Morse flow categories") {
  for (const auto& name : complex_corpus()) {
    auto K = load_complex(name);
    for (const auto& V : matchings_for(K)) {
      auto out = morse_flow_category(K, V);
      auto r = validate_flow_category(out.category);
      CHECK_MESSAGE(r.ok, name << ": " << (r.violations.empty() ? "" : r.violations.front()));
      CHECK(chain_complex(out.category, Ring::Z).d == morse_differential_paths(K, V));
      for (Ring ring : {Ring::Z, Ring::Z2})
        CHECK(homology(chain_complex(out.category, ring)) == simplicial_homology(K, ring));
      auto back = simplex_from_json(category_to_json(out.category));
      CHECK(back == out.category);
    }
  }
  auto s2 = load_complex("s2");
  auto out = morse_flow_category(s2, greedy_matching(s2));
  CHECK(out.category.sets[0].size() == 2);
  CHECK(count_matrix(out.category, 1).is_zero());
}

TEST_CASE("continuation maps and homotopies") {
  for (const auto& name : complex_corpus()) {
    auto K = load_complex(name);
    auto Ms = matchings_for(K);
    for (std::size_t a = 0; a < Ms.size(); ++a) {
      const auto& V0 = Ms[a];
      const auto& V1 = Ms[(a + 1) % Ms.size()];
      CHECK(continuation_map(K, V0, V0) == IntMatrix::identity(static_cast<int>(critical_cells(K, V0).size())));
      auto f = continuation_map(K, V0, V1);
      auto g = continuation_map(K, V1, V0);
      auto d0 = morse_differential_flow(K, V0), d1 = morse_differential_flow(K, V1);
      CHECK(d1 * f == f * d0);
      auto h = continuation_homotopy(K, V0, V1);
      CHECK(d0 * h + h * d0 == IntMatrix::identity(d0.rows()) - g * f);

      auto B = continuation_bimodule(K, V0, V1);
      auto r = validate_bimodule(B);
      CHECK_MESSAGE(r.ok, name << ": " << (r.violations.empty() ? "" : r.violations.front()));
      CHECK(chain_map(B, Ring::Z) == f);
    }
  }
}

TEST_CASE("simplicial map bimodules") {
  // degree 2 map of circles: identity on H_0, ×2 on H_1
  auto hex = load_complex("s1_hex"), tri = load_complex("s1");
  std::map<std::string, std::string> dbl{{"a", "a"}, {"b", "b"}, {"c", "c"}, {"d", "a"}, {"e", "b"}, {"f", "c"}};
  auto f = simplicial_chain_map(hex, tri, dbl);
  auto dK = simplicial_chain_complex(hex, Ring::Z).d, dL = simplicial_chain_complex(tri, Ring::Z).d;
  CHECK(dL * f == f * dK);
  auto B = simplicial_map_bimodule(hex, greedy_matching(hex), tri, greedy_matching(tri), dbl);
  auto r = validate_bimodule(B);
  CHECK_MESSAGE(r.ok, (r.violations.empty() ? "" : r.violations.front()));
  auto m = chain_map(B, Ring::Z);
  REQUIRE(m.rows() == 2);
  REQUIRE(m.cols() == 2);
  BigInt tr = 0;
  for (int i = 0; i < 2; ++i) tr += m(i, i) < 0 ? BigInt(-m(i, i)) : m(i, i);
  CHECK(tr == 3);

  auto s2 = load_complex("s2");
  std::map<std::string, std::string> incl{{"a", "a"}, {"b", "b"}, {"c", "c"}};
  auto g = simplicial_chain_map(tri, s2, incl);
  CHECK(simplicial_chain_complex(s2, Ring::Z).d * g == g * dL);
  CHECK(validate_bimodule(simplicial_map_bimodule(tri, Matching{}, s2, greedy_matching(s2), incl)).ok);

  CHECK_THROWS_AS(simplicial_chain_map(tri, s2, {{"a", "a"}}), Error);
  CHECK_THROWS_AS(simplicial_chain_map(tri, s2, {{"a", "a"}, {"b", "b"}, {"c", "z"}}), Error);
}
