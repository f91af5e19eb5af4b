#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "weilmix/mixbounds.hpp"

using namespace weilmix;

namespace {
Rational R(long a, long b) { return make_rational(a, b); }
}  // namespace

TEST_CASE("character sum") {
  CHECK(charbound_sum({{Family::SpOdd, 1, 3}, WeilVariant::SpOddWeil, 3}) == R(231, 729));
  CHECK(charbound_sum({{Family::GU, 1, 2}, WeilVariant::GUWeil, 2}) == R(1, 8));
  CHECK(charbound_sum({{Family::GL, 2, 3}, WeilVariant::GLWeil, 0}) == 47);
  CHECK(charbound_sum({{Family::SpEven, 2, 2}, WeilVariant::SpEvenLinear, 0}) == 719);
}

TEST_CASE("closed upper bounds") {
  CHECK(upper_closed({Family::GU, 5, 3}, WeilVariant::GUWeil, 2).value == doctest::Approx(0.077778).epsilon(1e-4));
  const auto sp = upper_closed({Family::SpOdd, 5, 3}, WeilVariant::SpOddWeil, 2);
  CHECK(sp.value == doctest::Approx(0.17678).epsilon(1e-4));
  CHECK(sp.r == 12);
  CHECK(upper_closed({Family::SpEven, 3, 2}, WeilVariant::SpEvenLinear, 1).value ==
        doctest::Approx(0.28868).epsilon(1e-4));
  CHECK_THROWS(upper_closed({Family::GU, 5, 3}, WeilVariant::GUWeil, 0));
}

TEST_CASE("closed lower bounds") {
  // The literal formula is negative here and clamps to 0.
  CHECK(lower_closed({Family::GL, 5, 3}, WeilVariant::GLWeil, 2).value == 0);
  CHECK(lower_closed({Family::GU, 50, 9}, WeilVariant::GUWeil, 4).value == doctest::Approx(0.9780).epsilon(1e-4));
  CHECK(lower_closed({Family::SpEven, 5, 4}, WeilVariant::SpEvenLinear, 2).value == doctest::Approx(0.5625));
  CHECK(lower_closed({Family::SpOdd, 10, 5}, WeilVariant::SpOddWeil, R(3, 2)).r == 17);
  CHECK_THROWS(lower_closed({Family::SpOdd, 10, 3}, WeilVariant::SpOddWeil, R(3, 2)));
  CHECK_THROWS(lower_closed({Family::GL, 2, 3}, WeilVariant::GLWeil, 1));
}

TEST_CASE("moments") {
  const auto gl = moments({{Family::GL, 2, 3}, WeilVariant::GLWeil, 1});
  CHECK(gl.variance == WeilScalar(R(10, 9), 0, -1, 3));
  CHECK(gl.mean == doctest::Approx(0.9428).epsilon(1e-4));
  const auto sp = moments({{Family::SpEven, 2, 2}, WeilVariant::SpEvenLinear, 1});
  CHECK(sp.variance.a() == R(3, 4));
  CHECK(sp.mean == doctest::Approx(1.9365).epsilon(1e-4));
  const auto r0 = moments({{Family::GU, 3, 2}, WeilVariant::GUWeil, 0});
  CHECK(r0.variance.a() == 0);
  CHECK(r0.mean_squared == Rational(ClassicalGroup({Family::GU, 3, 2}).transvection_census().total()));
  CHECK(moments({{Family::GU, 3, 2}, WeilVariant::GUWeil, 1}).mean_sign == -1);
  CHECK(moments({{Family::GU, 3, 2}, WeilVariant::GUWeil, 2}).mean_sign == 1);
  CHECK_THROWS(moments({{Family::SpOdd, 2, 3}, WeilVariant::SpOddWeil, 1}));
  for (std::int64_t r = 0; r <= 6; ++r) {
    CHECK(moments({{Family::SpOdd, 3, 5}, WeilVariant::SpOddWeil, r}).variance.to_double() >= 0);
    if (r % 2 == 0) CHECK(moments({{Family::SpOdd, 3, 7}, WeilVariant::SpOddWeil, r}).variance.a() >= 0);
  }
}

TEST_CASE("chebyshev") {
  CHECK(chebyshev_lower({{Family::SpEven, 2, 2}, WeilVariant::SpEvenLinear, 1}) == 0);
  CHECK(chebyshev_lower({{Family::GU, 12, 3}, WeilVariant::GUWeil, 9}) >= 0.45);
}

TEST_CASE("weighted weil sums") {
  CHECK(weighted_weil_sum(2, 5, 2, SpPairMode::PairsFromC) == WeilScalar(R(17000, 624), 0, 1, 5));
  CHECK(weighted_weil_sum(2, 3, 2, SpPairMode::AllTransvections) == WeilScalar(R(756, 80), 0, -1, 3));
  CHECK(weighted_weil_sum(3, 3, 0, SpPairMode::AllTransvections).a() == 1);
  for (auto [n, q] : std::vector<std::pair<int, std::uint64_t>>{{2, 3}, {2, 5}, {3, 3}, {2, 7}, {3, 9}, {2, 13}}) {
    for (std::int64_t r = 0; r <= 6; ++r) {
      CHECK_NOTHROW(weighted_weil_sum(n, q, r, SpPairMode::PairsFromC));
      if (r % 2 == 0) CHECK_NOTHROW(weighted_weil_sum(n, q, r, SpPairMode::AllTransvections));
    }
  }
  CHECK_THROWS(weighted_weil_sum(2, 3, 1, SpPairMode::AllTransvections));
}

TEST_CASE("domination") {
  for (int n = 1; n <= 6; ++n)
    for (std::uint64_t q : {2u, 3u, 4u, 5u, 7u, 9u})
      for (long c = 1; c <= 3; ++c) {
        std::vector<std::pair<GroupSpec, WeilVariant>> chains;
        chains.push_back({{Family::GU, n, q}, WeilVariant::GUWeil});
        if (q % 2) chains.push_back({{Family::SpOdd, n, q}, WeilVariant::SpOddWeil});
        else chains.push_back({{Family::SpEven, n, q}, WeilVariant::SpEvenLinear});
        for (const auto& [spec, v] : chains) {
          const auto ub = upper_closed(spec, v, c);
          CAPTURE(describe(spec));
          CAPTURE(c);
          CHECK(charbound_sum({spec, v, ub.r}) <= ub.four_sq);
        }
      }
}

TEST_CASE("profile cutoff window") {
  const auto p = profile({Family::GU, 50, 9}, WeilVariant::GUWeil, 44, 54);
  REQUIRE(p.rows.size() == 11);
  CHECK(*p.rows[52 - 44].upper <= 0.0087);
  CHECK(p.rows[46 - 44].lower >= 0.97);
  const auto s = profile({Family::SpOdd, 10, 5}, WeilVariant::SpOddWeil, 21, 21);
  CHECK(*s.rows[0].upper == doctest::Approx(0.25));
}
