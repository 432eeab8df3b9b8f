#include "doctest.h"
#include "flowcat/strat_arcs.hpp"

#include <algorithm>

using namespace flowcat;

namespace {

Sequence seq(std::vector<std::vector<std::string>> s) { return Sequence{std::move(s)}; }

ArcCategory cat(const Sequence& s, Element p, Element r) {
  ArcCategory C;
  C.sequence = s;
  C.source = p;
  C.target = r;
  return C;
}

}  // namespace

TEST_CASE("codim examples") {
  auto s = seq({{"a"}, {"b"}, {"c"}});
  Element a{0, 0}, b{1, 0}, c{2, 0};
  CHECK(codim(minimal_arc(a, c)) == 0);
  Arc abc = compose_arcs(minimal_arc(a, b), minimal_arc(b, c));
  CHECK(codim(abc) == 1);
  Arc ac = minimal_arc(a, c);
  ac.vertices[0].label = 0;
  CHECK(codim(ac) == 1);
}

TEST_CASE("enumeration examples") {
  auto s2 = seq({{"a"}, {"b"}});
  auto C = cat(s2, {0, 0}, {1, 0});
  auto arcs = enumerate_objects(C, 1);
  REQUIRE(arcs.size() == 3);
  CHECK(format_arc(s2, arcs[0]) == "a-[]-b");
  CHECK(enumerate_objects(C, 0).size() == 1);

  auto s3 = seq({{"a"}, {"b"}, {"c"}});
  auto C3 = cat(s3, {0, 0}, {2, 0});
  CHECK(enumerate_objects(C3, 1).size() == 5);
  CHECK(enumerate_objects(C3, 0).size() == 1);
}

TEST_CASE("codim-1 classification") {
  auto s3 = seq({{"a"}, {"b"}, {"c"}});
  auto C3 = cat(s3, {0, 0}, {2, 0});
  auto c1 = enumerate_codim1(C3);
  int forget = 0, brk = 0;
  for (const auto& o : c1) (o.kind == Codim1Kind::ForgetVertex ? forget : brk)++;
  CHECK(forget == 1);
  CHECK(brk == 3);

  auto s2 = seq({{"a"}, {"b"}});
  auto c2 = enumerate_codim1(cat(s2, {0, 0}, {1, 0}));
  CHECK(c2.size() == 2);

  auto s1 = seq({{"a", "b"}});
  for (const auto& o : enumerate_codim1(cat(s1, {0, 0}, {0, 1}))) CHECK(o.kind == Codim1Kind::Break);
}

TEST_CASE("codim-1 matches brute force") {
  std::vector<Sequence> corpus = {seq({{"a", "b"}}), seq({{"a"}, {"b", "c"}}), seq({{"a", "x"}, {"b"}, {"c", "y"}}),
                                  seq({{"a"}, {"b"}, {"c"}, {"d"}})};
  for (const auto& s : corpus) {
    const int n = s.n();
    for (int j = 0; j <= n; ++j)
      for (int l = j; l <= n; ++l)
        for (int p = 0; p < static_cast<int>(s.sets[j].size()); ++p)
          for (int r = 0; r < static_cast<int>(s.sets[l].size()); ++r) {
            auto C = cat(s, {j, p}, {l, r});
            std::vector<Arc> brute;
            for (const auto& a : enumerate_objects(C, 1))
              if (codim(a) == 1) brute.push_back(a);
            std::vector<Arc> fast;
            for (const auto& o : enumerate_codim1(C)) fast.push_back(o.arc);
            std::sort(brute.begin(), brute.end(), arc_less);
            std::sort(fast.begin(), fast.end(), arc_less);
            CHECK(brute == fast);
          }
  }
}

TEST_CASE("arc categories are corner models") {
  auto s = seq({{"a", "x"}, {"b"}, {"c"}});
  auto D = build_arc_category(cat(s, {0, 0}, {2, 0}), 3);
  auto r = is_corner_model(D.category);
  CHECK_MESSAGE(r.ok, r.first_violation);
  CHECK(validate_category(D.category).ok);
  for (int p = 0; p < D.category.object_count(); ++p)
    CHECK(static_cast<int>(q_set(D.category, p).size()) == D.category.codim(p));
}

TEST_CASE("single-set arc category with energies") {
  auto s = seq({{"a", "b"}});
  auto C = cat(s, {0, 0}, {0, 1});
  C.gamma = {GammaKind::NonnegRational};
  C.grade = Rational(3, 2);
  C.decompositions = {{Rational(1, 2), Rational(1), Rational(0)}};
  auto D = build_arc_category(C, 2);
  auto r = is_corner_model(D.category);
  CHECK_MESSAGE(r.ok, r.first_violation);
  ArcCategory bad = C;
  bad.decompositions.clear();
  CHECK_THROWS_AS(enumerate_objects(bad, 2), Error);
}

TEST_CASE("collapse") {
  auto s = seq({{"a"}, {"b"}, {"c"}, {"d"}});
  Element a{0, 0}, b{1, 0}, c{2, 0}, d{3, 0};
  Arc full = compose_arcs(compose_arcs(minimal_arc(a, b), minimal_arc(b, c)), minimal_arc(c, d));
  CHECK(codim(full) == 2);
  // identity
  CHECK(collapse(s, full, 0, {0, 0, 0}) == full);
  // collapse everything: sets 1 and 2 are forced
  Arc top = collapse(s, full, 3, {range_mask(0, 3)});
  CHECK(top == minimal_arc(a, d));
  CHECK_THROWS_AS(collapse(s, full, 3, {LabelSet{1} << 1}), Error);
}

TEST_CASE("face identities") {
  auto s = seq({{"a", "x"}, {"b"}, {"c", "y"}, {"d"}});
  auto R = faces_check(s, 3);
  CHECK_MESSAGE(R.ok, (R.violations.empty() ? std::string() : R.violations[0]));
}

TEST_CASE("horn membership and block functor") {
  auto s = seq({{"a"}, {"b"}, {"c"}});
  Element a{0, 0}, b{1, 0}, c{2, 0};
  CHECK_FALSE(horn_membership(minimal_arc(a, c), 2, 1));
  Arc ac = minimal_arc(a, c);
  ac.vertices[0].label = 0;
  CHECK_FALSE(horn_membership(ac, 2, 1));
  Arc abc = compose_arcs(minimal_arc(a, b), minimal_arc(b, c));
  CHECK(horn_membership(abc, 2, 1));
  CHECK(block_functor(abc, 2, 1) == Block{1, 0});
  Element q{0, 1};
  auto s2 = seq({{"a", "q"}, {"b"}, {"c"}});
  (void)s2;
  Arc aqbc = compose_arcs(compose_arcs(minimal_arc(a, q), minimal_arc(q, b)), minimal_arc(b, c));
  CHECK(block_functor(aqbc, 2, 1) == Block{2, 0});
  Element c3{3, 0};
  Arc ac2 = minimal_arc(a, c3);
  ac2.vertices[0].label = LabelSet{1} << 2;
  CHECK(block_functor(ac2, 3, 1) == Block{0, 1});
  CHECK_THROWS_AS(block_functor_checked(ac2, 3, 1), Error);
}

TEST_CASE("block functor codim identity and monotonicity") {
  auto s = seq({{"a", "x"}, {"b", "y"}, {"c"}, {"d"}});
  for (int k = 1; k <= 2; ++k) {
    auto D = build_arc_category(cat(s, {0, 0}, {3, 0}), 4);
    for (const auto& arc : D.arcs)
      if (horn_membership(arc, 3, k)) {
        auto bl = block_functor(arc, 3, k);
        CHECK(codim(arc) == bl.d + bl.eps);
      }
    for (int f = 0; f < D.category.arrow_count(); ++f) {
      const auto& A = D.category.arrow(f);
      auto x = block_functor(D.arcs[A.source], 3, k), y = block_functor(D.arcs[A.target], 3, k);
      CHECK(x.d <= y.d);
      CHECK(x.eps <= y.eps);
    }
  }
}

TEST_CASE("json round trips") {
  auto s = seq({{"a"}, {"b"}, {"c"}});
  Arc abc = compose_arcs(minimal_arc({0, 0}, {1, 0}), minimal_arc({1, 0}, {2, 0}));
  CHECK(arc_from_json(s, arc_to_json(s, abc)) == abc);
  auto C = cat(s, {0, 0}, {2, 0});
  auto C2 = arc_category_from_json(arc_category_to_json(C));
  CHECK(C2.sequence.sets == C.sequence.sets);
  CHECK(C2.source == C.source);
}
