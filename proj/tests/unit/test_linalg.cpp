#include "doctest.h"
#include "flowcat/linalg.hpp"

using namespace flowcat;

namespace {

IntMatrix mat(std::vector<std::vector<long long>> rows) {
  IntMatrix m(static_cast<int>(rows.size()), rows.empty() ? 0 : static_cast<int>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
  return m;
}

}  // namespace

TEST_CASE("smith invariants") {
  // diag(2, 6) hidden by unimodular mixing
  auto m = mat({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}});
  auto s = smith_invariants(m);
  REQUIRE(s.size() == 3);
  CHECK(s[0] == 2);
  CHECK(s[1] == 6);
  CHECK(s[2] == 12);
  CHECK(rank_z(m) == 3);
  CHECK(smith_invariants(mat({{2}})) == std::vector<BigInt>{2});
  CHECK(smith_invariants(mat({{0, 0}})).empty());
}

TEST_CASE("ranks over Z and F2") {
  auto m = mat({{2, 0}, {0, 2}});
  CHECK(rank_z(m) == 2);
  CHECK(rank_f2(m) == 0);
}

TEST_CASE("integer kernel") {
  auto m = mat({{1, 2, 3}});
  auto k = kernel_basis_z(m);
  CHECK(k.rows() == 2);
  CHECK((m * k.transpose()).is_zero());
  // the kernel lattice of (2 4) is spanned by (2,-1)
  auto k2 = kernel_basis_z(mat({{2, 4}}));
  REQUIRE(k2.rows() == 1);
  CHECK(hermite_rows(k2) == hermite_rows(mat({{-2, 1}})));
}

TEST_CASE("hermite form identifies lattices") {
  CHECK(hermite_rows(mat({{2, 0}, {0, 3}})) == hermite_rows(mat({{2, 3}, {0, 3}})));
  CHECK_FALSE(hermite_rows(mat({{2, 0}})) == hermite_rows(mat({{1, 0}})));
  CHECK(rref_f2(mat({{1, 1}, {0, 1}})) == rref_f2(mat({{1, 0}, {0, 1}})));
}

TEST_CASE("f2 kernel") {
  auto m = mat({{1, 1, 0}, {0, 1, 1}});
  auto k = kernel_basis_f2(m);
  REQUIRE(k.rows() == 1);
  CHECK(k(0, 0) == 1);
  CHECK(k(0, 1) == 1);
  CHECK(k(0, 2) == 1);
}
