#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "weilmix/fixdist.hpp"

using namespace weilmix;

namespace {
Rational R(long a, long b) { return make_rational(a, b); }
}  // namespace

TEST_CASE("unitary fixed-space examples") {
  CHECK(rs_gu_fixed_dim(2, 2, 2) == R(1, 18));
  CHECK(rs_gu_fixed_dim(1, 2, 0) == R(2, 3));
  CHECK(rs_gu_fixed_dim(2, 2, 0) == R(10, 18));
  CHECK(rs_gu_fixed_dim(2, 2, 1) == R(7, 18));
  CHECK_THROWS(rs_gu_fixed_dim(2, 2, 3));
}

TEST_CASE("symplectic fixed-space examples") {
  CHECK(rs_sp_fixed_dim(1, 3, 1) == R(1, 3));
  CHECK(rs_sp_fixed_dim(1, 3, 0) == R(5, 8));
  for (int n = 1; n <= 4; ++n)
    CHECK(rs_sp_fixed_dim(n, 5, 2 * n) == Rational(1) / Rational(sp_order(n, 5)));
  CHECK_THROWS(rs_sp_fixed_dim(1, 3, -1));
}

TEST_CASE("distributions sum to one over the grid") {
  for (int n = 1; n <= 8; ++n) {
    for (long q : {2, 3, 4, 5, 7, 8, 9}) {
      Rational gu = 0, sp = 0;
      for (int k = 0; k <= n; ++k) gu += rs_gu_fixed_dim(n, q, k);
      for (int k = 0; k <= 2 * n; ++k) sp += rs_sp_fixed_dim(n, q, k);
      CHECK(gu == 1);
      CHECK(sp == 1);
      for (int k = 0; k <= n; ++k)
        CHECK(rs_gu_fixed_dim(n, q, k) * Rational(gu_order(n, q)) <= gu_fixed_count_bound(n, q, k));
    }
  }
}

TEST_CASE("count bound examples") {
  CHECK(gu_fixed_count_bound(2, 2, 1) == 10);
  CHECK(gu_fixed_count_bound(2, 2, 0) == 24);
  CHECK(gu_fixed_count_bound(3, 2, 3) >= 1);
}

TEST_CASE("distribution object") {
  const auto d = fixed_space_distribution({Family::SpEven, 2, 2});
  CHECK(d.probs.size() == 5);
  CHECK_THROWS(fixed_space_distribution({Family::GL, 2, 3}));
}
