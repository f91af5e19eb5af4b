#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "weilmix/clgroups.hpp"

using namespace weilmix;

namespace {

Vec unit(const ClassicalGroup& G, std::size_t i) {
  Vec v(G.dimension(), G.field().zero());
  v[i] = G.field().one();
  return v;
}

}  // namespace

TEST_CASE("group orders") {
  CHECK(group_order({Family::GL, 2, 3}) == 48);
  CHECK(group_order({Family::GU, 2, 2}) == 18);
  CHECK(group_order({Family::SpOdd, 2, 3}) == 51840);
  CHECK(group_order({Family::SpEven, 1, 2}) == 6);
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(ClassicalGroup({Family::SpOdd, 2, 4}), GroupError);
  CHECK_THROWS_AS(ClassicalGroup({Family::SpEven, 2, 3}), GroupError);
  CHECK_THROWS_AS(ClassicalGroup({Family::GL, 2, 6}), GroupError);
  CHECK_THROWS_AS(validate({Family::GU, 1, 2}, true), GroupError);
  CHECK_NOTHROW(validate({Family::GU, 1, 2}));
}

TEST_CASE("transvection constructors") {
  const ClassicalGroup gl({Family::GL, 2, 3});
  Matrix expect = Matrix::identity(2);
  expect(0, 1) = FieldElement{1};
  CHECK(gl.make_transvection(GLTransvectionParams{unit(gl, 0), unit(gl, 1)}) == expect);
  CHECK_THROWS_AS(gl.make_transvection(GLTransvectionParams{unit(gl, 0), unit(gl, 0)}), GroupError);

  const ClassicalGroup sp({Family::SpOdd, 1, 3});
  const Matrix t = sp.make_transvection(SpTransvectionParams{FieldElement{1}, unit(sp, 0)});
  CHECK(sp.preserves_form(t));
  CHECK(sp.fixed_space_codim(t) == 1);
  CHECK_THROWS_AS(sp.make_transvection(SpTransvectionParams{FieldElement{0}, unit(sp, 0)}), GroupError);

  const ClassicalGroup gu({Family::GU, 2, 2});
  CHECK_THROWS_AS(gu.make_transvection(GUTransvectionParams{unit(gu, 0), gu.field().one()}), GroupError);
  CHECK(gu.transvections().size() == 3);
}

TEST_CASE("preserves form") {
  // Over GF(4) every scalar has norm 1, so use q = 3.
  const ClassicalGroup gu({Family::GU, 2, 3});
  Matrix d = Matrix::identity(2);
  d(0, 0) = gu.fields().theta();
  CHECK_FALSE(gu.preserves_form(d));
  CHECK(gu.preserves_form(Matrix::identity(2)));
}

TEST_CASE("transvection census matches enumeration") {
  const std::vector<GroupSpec> specs = {{Family::GL, 2, 3},   {Family::GL, 3, 2},    {Family::GU, 2, 2},
                                        {Family::GU, 2, 3},   {Family::GU, 3, 2},    {Family::SpOdd, 1, 3},
                                        {Family::SpOdd, 2, 3}, {Family::SpEven, 2, 2}, {Family::SpEven, 1, 4}};
  for (const auto& spec : specs) {
    CAPTURE(describe(spec));
    const ClassicalGroup G(spec);
    const auto all = G.transvections();
    CHECK(BigInt(static_cast<unsigned long>(all.size())) == G.transvection_census().total());
    std::set<std::vector<std::uint32_t>> distinct;
    const std::uint32_t p = G.field().characteristic();
    for (const auto& m : all) {
      std::vector<std::uint32_t> key;
      for (auto e : m.data) key.push_back(e.index);
      distinct.insert(key);
      CHECK(G.contains(m));
      CHECK(G.fixed_space_codim(m) == 1);
      CHECK(power(G.field(), m, p) == Matrix::identity(G.dimension()));
    }
    CHECK(distinct.size() == all.size());
  }
  const ClassicalGroup sp({Family::SpOdd, 1, 3});
  CHECK(sp.transvection_census().class_sizes == std::vector<BigInt>{4, 4});
  CHECK(sp.transvections(TransvectionClass::C).size() == 4);
  CHECK_THROWS_AS(sp.transvections(TransvectionClass::Unique), GroupError);
}

TEST_CASE("enumeration sizes") {
  CHECK(ClassicalGroup({Family::SpOdd, 1, 3}).enumerate().size() == 24);
  CHECK(ClassicalGroup({Family::GU, 2, 2}).enumerate().size() == 18);
  CHECK(ClassicalGroup({Family::GL, 2, 2}).enumerate().size() == 6);
  CHECK(ClassicalGroup({Family::GU, 1, 2}).enumerate().size() == 3);
  CHECK_THROWS_AS(ClassicalGroup({Family::SpOdd, 3, 5}).enumerate(), GroupError);
}

TEST_CASE("codim tallies add up to the order") {
  for (const GroupSpec& spec : {GroupSpec{Family::GU, 2, 3}, GroupSpec{Family::SpEven, 2, 2},
                                GroupSpec{Family::GL, 2, 3}}) {
    const ClassicalGroup G(spec);
    std::uint64_t total = 0, identity = 0;
    G.for_each_element([&](const Matrix& m) {
      ++total;
      if (G.fixed_space_codim(m) == 0) ++identity;
    });
    CHECK(BigInt(static_cast<unsigned long>(total)) == G.order());
    CHECK(identity == 1);
  }
}

TEST_CASE("uniform samplers land in the group") {
  Rng rng(42);
  for (const GroupSpec& spec : {GroupSpec{Family::GL, 3, 2}, GroupSpec{Family::GU, 3, 3},
                                GroupSpec{Family::SpOdd, 3, 5}, GroupSpec{Family::SpEven, 2, 4}}) {
    const ClassicalGroup G(spec);
    for (int i = 0; i < 50; ++i) CHECK(G.contains(G.sample_uniform(rng)));
  }
}

TEST_CASE("sampler support and uniformity at small scale") {
  Rng rng(7);
  const ClassicalGroup G({Family::SpOdd, 1, 3});
  std::map<std::vector<std::uint32_t>, int> counts;
  const int draws = 24000;
  for (int i = 0; i < draws; ++i) {
    const Matrix m = G.sample_uniform(rng);
    std::vector<std::uint32_t> key;
    for (auto e : m.data) key.push_back(e.index);
    ++counts[key];
  }
  CHECK(counts.size() == 24);
  for (const auto& [k, c] : counts) CHECK(std::abs(c - 1000) < 5 * 31);

  const ClassicalGroup gl({Family::GL, 2, 3});
  std::set<std::vector<std::uint32_t>> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto t = gl.sample_transvection(TransvectionClass::Unique, rng);
    std::vector<std::uint32_t> key;
    for (auto e : t.matrix.data) key.push_back(e.index);
    seen.insert(key);
  }
  CHECK(seen.size() == 8);
}

TEST_CASE("extract transvection data") {
  const ClassicalGroup sp({Family::SpOdd, 1, 3});
  const Vec e1 = unit(sp, 0);
  CHECK(sp.extract_transvection_data(sp.make_transvection(SpTransvectionParams{FieldElement{1}, e1})).mu_class ==
        SquareClass::Square);
  CHECK(sp.extract_transvection_data(sp.make_transvection(SpTransvectionParams{FieldElement{2}, e1})).mu_class ==
        SquareClass::NonSquare);
  CHECK_THROWS_AS(sp.extract_transvection_data(Matrix::identity(2)), GroupError);

  // The two classes have equal size and are closed under conjugation.
  const ClassicalGroup big({Family::SpOdd, 2, 5});
  const Field& F = big.field();
  std::size_t squares = 0;
  const auto all = big.transvections();
  Rng rng(3);
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto cls = big.extract_transvection_data(all[i]).mu_class;
    if (cls == SquareClass::Square) ++squares;
    if (i % 50 == 0) {
      const Matrix g = big.sample_uniform(rng);
      const Matrix conj = mul(F, mul(F, g, all[i]), *inverse(F, g));
      CHECK(big.extract_transvection_data(conj).mu_class == cls);
    }
  }
  CHECK(squares * 2 == all.size());
}
