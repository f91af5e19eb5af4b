#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "weilmix/ffield.hpp"

using namespace weilmix;

TEST_CASE("modulus choice") {
  CHECK(Field(3, 2).modulus() == std::vector<std::uint32_t>{1, 0, 1});  // x^2 + 1
  CHECK(Field(2, 2).modulus() == std::vector<std::uint32_t>{1, 1, 1});  // x^2 + x + 1
  const auto f7 = FieldSpec::make(7);
  CHECK(f7->base().modulus() == std::vector<std::uint32_t>{0, 1});
  CHECK(f7->kappa() == -1);
  CHECK(FieldSpec::make(13)->kappa() == 1);
}

TEST_CASE("arithmetic") {
  const Field f3(3, 1);
  CHECK(f3.add(f3.from_int(2), f3.from_int(2)) == f3.from_int(1));
  const Field f4(2, 2);
  const FieldElement x = f4.from_coefficients(std::vector<std::uint32_t>{0, 1});
  const FieldElement x1 = f4.from_coefficients(std::vector<std::uint32_t>{1, 1});
  CHECK(f4.inv(x) == x1);
  CHECK_THROWS_AS(f4.inv(f4.zero()), FieldError);
  for (std::uint64_t q : {9u, 25u, 49u, 16u}) {
    const Field F = FieldSpec::make(q)->base();
    for (std::uint32_t a = 1; a < F.size(); ++a)
      CHECK(F.mul(FieldElement{a}, F.inv(FieldElement{a})) == F.one());
  }
}

TEST_CASE("frobenius is an involution fixing the base field") {
  for (std::uint64_t q : {2u, 3u, 4u, 5u, 9u}) {
    const auto fs = FieldSpec::make(q);
    std::uint32_t fixed = 0;
    for (std::uint32_t i = 0; i < fs->ext().size(); ++i) {
      const FieldElement x{i};
      CHECK(fs->frobenius(fs->frobenius(x)) == x);
      if (fs->frobenius(x) == x) ++fixed;
    }
    CHECK(fixed == q);
  }
}

TEST_CASE("generator orders") {
  for (std::uint64_t q : {3u, 4u, 5u, 7u, 9u, 11u}) {
    const auto fs = FieldSpec::make(q);
    CHECK(fs->ext().multiplicative_order(fs->theta()) == q * q - 1);
    CHECK(fs->ext().multiplicative_order(fs->gamma()) == q - 1);
    CHECK(fs->ext().multiplicative_order(fs->eta()) == q + 1);
  }
}

TEST_CASE("traceless scalars number q") {
  for (std::uint64_t q : {2u, 3u, 4u, 5u, 7u, 9u}) {
    const auto fs = FieldSpec::make(q);
    std::uint32_t count = 0;
    for (std::uint32_t i = 0; i < fs->ext().size(); ++i) {
      const FieldElement c{i};
      if (fs->ext().add(c, fs->frobenius(c)) == fs->ext().zero()) ++count;
    }
    CHECK(count == q);
  }
}

TEST_CASE("square classes") {
  const auto f7 = FieldSpec::make(7);
  CHECK(f7->square_class(f7->base().from_int(3)) == SquareClass::NonSquare);
  CHECK(f7->square_class(f7->base().from_int(2)) == SquareClass::Square);
  CHECK(f7->square_class(f7->base().zero()) == SquareClass::Zero);
  const auto f8 = FieldSpec::make(8);
  for (std::uint32_t i = 1; i < 8; ++i) CHECK(f8->square_class(FieldElement{i}) == SquareClass::Square);
  for (std::uint64_t q : {3u, 5u, 9u, 25u, 27u}) CHECK(FieldSpec::make(q)->nonzero_squares().size() == (q - 1) / 2);
}

TEST_CASE("adjacent squares") {
  CHECK(count_adjacent_squares(13) == 2);
  CHECK(count_adjacent_squares(7) == 1);
  CHECK(count_adjacent_squares(5) == 0);
  CHECK_THROWS(count_adjacent_squares(8));
}

TEST_CASE("sq2 census") {
  auto pair = [](std::uint64_t q) {
    const auto c = sq2_census(q);
    return std::pair{c.split_count, c.nonsplit_count};
  };
  CHECK(pair(13) == std::pair<std::int64_t, std::int64_t>{2, 3});
  CHECK(pair(7) == std::pair<std::int64_t, std::int64_t>{1, 1});
  CHECK(pair(5) == std::pair<std::int64_t, std::int64_t>{0, 1});
  CHECK(pair(3) == std::pair<std::int64_t, std::int64_t>{0, 0});
  CHECK_THROWS(sq2_census(4));
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(FieldSpec::make(6), FieldError);
  CHECK_THROWS_AS(FieldSpec::make(1), FieldError);
  CHECK_THROWS_AS(FieldSpec::make(2048), FieldError);
  CHECK(prime_power(121) == std::pair<std::uint32_t, std::uint32_t>{11, 2});
}
