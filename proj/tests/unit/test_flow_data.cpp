#include "doctest.h"
#include "flowcat/homology.hpp"
#include "support/fixtures.hpp"

using namespace flowcat;
using namespace flowcat::testing;

namespace {

std::string first(const Report& r) { return r.violations.empty() ? std::string() : r.violations.front(); }

}  // namespace

TEST_CASE("trivial categories validate") {
  CHECK(validate_flow_category(make_category({})).ok);
  CHECK(validate_flow_category(make_category({{"a", {0, 0}, 0}, {"b", {1, 0}, 1}})).ok);
}

TEST_CASE("square category") {
  auto F = square_category();
  auto r = validate_flow_category(F);
  CHECK_MESSAGE(r.ok, first(r));
  auto C = chain_complex(F, Ring::Z);
  auto H = homology(C);
  // p ↦ q1 + q2 ↦ 0; H1 generated by q1 - q2 modulo nothing ... compute by hand:
  // d(p) = q1 + q2, d(q1) = r, d(q2) = -r; H0 = 0, H1 = 0, H2 = 0
  CHECK(H.groups.empty());
}

TEST_CASE("validation catches errors") {
  auto F = square_category();
  // drop the 1-dimensional component: composable pairs lose their home
  auto G = F;
  auto& cs = G.cells[1];
  cs.erase(std::remove_if(cs.begin(), cs.end(), [](const Component& c) { return c.id == "pr"; }), cs.end());
  auto r = validate_flow_category(G);
  CHECK_FALSE(r.ok);
  // wrong count: d² ≠ 0
  auto H = F;
  for (auto& c : H.cells[1])
    if (c.id == "q2r") c.count = 1;
  auto r2 = validate_flow_category(H);
  CHECK_FALSE(r2.ok);
  bool named = false;
  for (const auto& v : r2.violations) named = named || v.find("(p, r)") != std::string::npos;
  CHECK(named);
  CHECK_THROWS_AS(chain_complex(H, Ring::Z), CheckFailure);
  // over Z/2 the residual 2 vanishes
  CHECK(validate_flow_category(H, Ring::Z2).ok);
  // framing equation
  auto K = F;
  K.cells[1][0].total_dim = 3;
  CHECK_FALSE(validate_flow_category(K).ok);
}

TEST_CASE("energy-0 cycles are rejected") {
  auto F = make_category({{"a", {0, 0}, 0}, {"b", {0, 0}, 0}});
  F.gamma = {GammaKind::NonnegRational};
  auto c1 = comp("ab", "a", "b", 0);
  auto c2 = comp("ba", "b", "a", 0);
  c1.obstruction_rank = c2.obstruction_rank = 1;
  F.cells[1] = {c1, c2};
  CHECK_FALSE(validate_flow_category(F).ok);
  CHECK(first(validate_flow_category(F)).find("cycle") != std::string::npos);
  F.cells[1][1].energy = 1;
  // no cycle now; the composite (ab, ba) still needs a home in (a, a)
  for (const auto& v : validate_flow_category(F).violations) CHECK(v.find("cycle") == std::string::npos);
}

TEST_CASE("diagonal bimodule") {
  for (const auto& F : {square_category(), interval_category(), make_category({})}) {
    auto D = diagonal(F);
    auto r = validate_bimodule(D);
    CHECK_MESSAGE(r.ok, first(r));
    auto f = chain_map(D, Ring::Z);
    CHECK(f == IntMatrix::identity(static_cast<int>(F.sets[0].size())));
    CHECK(face(D, 0) == F);
    CHECK(face(D, 1) == F);
  }
}

TEST_CASE("degeneracies of the diagonal") {
  auto F = square_category();
  auto D = diagonal(F);
  for (const auto& T : {s0(D), sn(D)}) {
    auto r = validate_simplex(T);
    CHECK_MESSAGE(r.ok, first(r));
  }
  CHECK(face(s0(D), 0) == D);
  CHECK(face(s0(D), 1) == D);
  CHECK(face(sn(D), 2) == D);
  CHECK(face(sn(D), 1) == D);
  CHECK(sn(s0(F)) == s0(sn(F)));
  auto T = s0(D);
  CHECK(sn(T) == s0(sn(D)));
  CHECK_MESSAGE(validate_simplex(sn(T)).ok, first(validate_simplex(sn(T))));
  CHECK_MESSAGE(validate_simplex(s0(T)).ok, first(validate_simplex(s0(T))));
}

TEST_CASE("suspension") {
  auto F = square_category();
  auto S = suspend(F, 1);
  CHECK(validate_flow_category(S).ok);
  auto H = homology(chain_complex(interval_category(), Ring::Z));
  auto HS = homology(chain_complex(suspend(interval_category(), 1), Ring::Z));
  CHECK(H.at(0).rank == 1);
  CHECK(HS.at(1).rank == 1);
  auto back = suspend(suspend(F, 1), -1);
  for (std::size_t i = 0; i < F.sets[0].size(); ++i) {
    CHECK(back.sets[0][i].v.value() == F.sets[0][i].v.value());
    CHECK(back.sets[0][i].dim == F.sets[0][i].dim);
  }
  CHECK(count_matrix(back, 1) == count_matrix(F, 1));
}

TEST_CASE("cone of the diagonal is acyclic") {
  for (const auto& F : {square_category(), interval_category()}) {
    auto cr = cone(diagonal(F));
    auto r = validate_flow_category(cr.cone);
    CHECK_MESSAGE(r.ok, first(r));
    CHECK_MESSAGE(validate_bimodule(cr.inclusion).ok, first(validate_bimodule(cr.inclusion)));
    CHECK_MESSAGE(validate_bimodule(cr.projection).ok, first(validate_bimodule(cr.projection)));
    CHECK(homology(chain_complex(cr.cone, Ring::Z)).groups.empty());
    auto les = les_check(diagonal(F), Ring::Z);
    CHECK_MESSAGE(les.report.ok, first(les.report));
    auto alg = algebraic_cone(chain_complex(F, Ring::Z), chain_complex(F, Ring::Z), IntMatrix::identity(F.sets[0].size()));
    CHECK(match_by_labels(chain_complex(cr.cone, Ring::Z), alg).ok);
  }
}

TEST_CASE("empty bimodule cone is a disjoint union") {
  auto X = interval_category(), Y = square_category();
  auto B = empty_bimodule(X, Y);
  CHECK(validate_bimodule(B).ok);
  auto cr = cone(B);
  CHECK(cr.cone.sets[0].size() == X.sets[0].size() + Y.sets[0].size());
  CHECK(validate_flow_category(cr.cone).ok);
}

TEST_CASE("restriction") {
  auto F = square_category();
  auto G = restrict_objects(F, [](const FlowObject& o) { return o.dim <= 1; });
  CHECK(G.sets[0].size() == 3);
  CHECK(validate_flow_category(G).ok);
  CHECK(restrict_objects(F, [](const FlowObject&) { return true; }) == F);
  CHECK(restrict_objects(F, [](const FlowObject&) { return false; }).component_count() == 0);
}

TEST_CASE("json round trip") {
  auto F = square_category();
  CHECK(simplex_from_json(category_to_json(F)) == F);
  auto D = s0(diagonal(F));
  CHECK(simplex_from_json(simplex_to_json(D)) == D);
  CHECK(simplex_to_json(D).dump() == simplex_to_json(simplex_from_json(simplex_to_json(D))).dump());
}
