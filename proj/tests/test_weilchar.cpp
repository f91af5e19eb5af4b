#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "weilmix/weilchar.hpp"

using namespace weilmix;

TEST_CASE("degrees") {
  CHECK(weil_degree({Family::GL, 2, 3}, WeilVariant::GLWeil) == 9);
  CHECK(weil_degree({Family::SpOdd, 2, 3}, WeilVariant::SpOddWeil) == 9);
  CHECK(weil_degree({Family::SpEven, 2, 2}, WeilVariant::SpEvenUnitary) == 16);
  CHECK_THROWS(weil_degree({Family::GL, 2, 3}, WeilVariant::GUWeil));
}

TEST_CASE("values by codimension") {
  CHECK(weil_value_by_codim({Family::GU, 2, 2}, WeilVariant::GUWeil, 0).a() == 4);
  CHECK(weil_value_by_codim({Family::GU, 3, 2}, WeilVariant::GUWeil, 1).a() == -4);
  CHECK(weil_value_by_codim({Family::SpEven, 1, 2}, WeilVariant::SpEvenUnitary, 1).a() == -2);
  const auto v = weil_value_by_codim({Family::SpOdd, 2, 5}, WeilVariant::SpOddWeil, 1);
  CHECK(v.a() == 0);
  CHECK(v.b() == 5);
  CHECK_THROWS(weil_value_by_codim({Family::GU, 2, 2}, WeilVariant::GUWeil, 3));
}

TEST_CASE("sp-odd class values") {
  const auto a21 = weil_value_sp_odd_class(2, 5, {SpClassTag::A21, 0});
  CHECK(a21 == WeilScalar(0, -5, 1, 5));
  CHECK(weil_value_sp_odd_class(2, 3, {SpClassTag::A21, 0}) == WeilScalar(0, 3, -1, 3));
  CHECK(weil_value_sp_odd_class(3, 5, {SpClassTag::C3, 2}).a() == 25);
  for (std::uint64_t q : {3u, 5u, 7u}) {
    for (int n : {2, 3}) {
      const auto x = weil_value_sp_odd_class(n, q, {SpClassTag::A21, 0});
      CHECK(weil_value_sp_odd_class(n, q, {SpClassTag::A22, 0}) == -x);
      CHECK(weil_value_sp_odd_class(n, q, {SpClassTag::D21, 0}) ==
            weil_value_sp_odd_class(n, q, {SpClassTag::D22, 0}));
      // |x|^2 = x * conj(x) = -x^2 when kappa = -1, x^2 otherwise.
      const WeilScalar sq = x * x;
      CHECK(sq.a() * scalar_kappa(q) == Rational(ipow(q, 2 * n - 1)));
    }
  }
}

TEST_CASE("scalar arithmetic") {
  CHECK(WeilScalar(0, 1, 1, 5).pow(2) == WeilScalar(5, 0, 1, 5));
  CHECK(WeilScalar(0, 1, -1, 3).pow(2) == WeilScalar(-3, 0, -1, 3));
  CHECK(WeilScalar(0, -5, 1, 5).pow(4) == WeilScalar(15625, 0, 1, 5));
  CHECK_THROWS(WeilScalar(0, 1, 1, 5) + WeilScalar(0, 1, 1, 13));
}
