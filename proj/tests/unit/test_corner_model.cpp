#include "doctest.h"
#include "flowcat/corner_model.hpp"

using namespace flowcat;

TEST_CASE("simplex face posets are corner models") {
  for (int n = 0; n <= 5; ++n) {
    auto C = simplex_face_category(n);
    auto r = is_corner_model(C);
    CHECK_MESSAGE(r.ok, r.first_violation);
    CHECK(validate_category(C).ok);
    for (int p = 0; p < C.object_count(); ++p) CHECK(static_cast<int>(q_set(C, p).size()) == C.codim(p));
  }
}

TEST_CASE("simplex face poset sizes") {
  // 2^{n+1} - 1 faces
  CHECK(simplex_face_category(2).object_count() == 7);
  CHECK(simplex_face_category(3).object_count() == 15);
}

TEST_CASE("non-poset overcategory fails") {
  CornerCategory C;
  int a = C.add_object("a", 0);
  int b = C.add_object("b", 1);
  C.add_arrow("f", a, b);
  C.add_arrow("g", a, b);
  auto r = is_corner_model(C);
  CHECK_FALSE(r.ok);
}

TEST_CASE("codim must increase along arrows") {
  CornerCategory C;
  int a = C.add_object("a", 1);
  int b = C.add_object("b", 1);
  C.add_arrow("f", a, b);
  CHECK_FALSE(is_corner_model(C).ok);
}

TEST_CASE("square corner") {
  // 0 → x, 0 → y, x → c, y → c, 0 → c
  CornerCategory C;
  int o = C.add_object("o", 0), x = C.add_object("x", 1), y = C.add_object("y", 1), c = C.add_object("c", 2);
  int ox = C.add_arrow("ox", o, x), oy = C.add_arrow("oy", o, y);
  int xc = C.add_arrow("xc", x, c), yc = C.add_arrow("yc", y, c);
  int oc = C.add_arrow("oc", o, c);
  C.set_composite(ox, xc, oc);
  C.set_composite(oy, yc, oc);
  auto r = is_corner_model(C);
  CHECK_MESSAGE(r.ok, r.first_violation);
  CHECK(q_set(C, c).size() == 2);
  auto d = decompose_arrow(C, xc);
  CHECK(d.source_part.size() == 1);
  CHECK(d.boundary_part.size() == 1);
}

TEST_CASE("json round trip") {
  auto C = simplex_face_category(2);
  auto D = corner_from_json(corner_to_json(C));
  CHECK(D.object_count() == C.object_count());
  CHECK(D.arrow_count() == C.arrow_count());
  CHECK(is_corner_model(D).ok);
}
