#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "weilmix/transprod.hpp"

using namespace weilmix;

namespace {
Rational R(long a, long b) { return make_rational(a, b); }
CodimDistribution CD(Rational e0, Rational e1, Rational e2) { return {{e0, e1, e2}}; }
SpClassLabel L(SpClassTag t, std::uint64_t i = 0) { return {t, i}; }
Vec unit(std::size_t dim, std::size_t i) {
  Vec v(dim);
  v[i] = FieldElement{1};
  return v;
}
}  // namespace

TEST_CASE("pair codimension formulas") {
  CHECK(codim_dist_gl(2, 3) == CD(R(1, 8), R(1, 8), R(3, 4)));
  CHECK(codim_dist_gl(2, 2) == CD(R(1, 3), 0, R(2, 3)));
  CHECK(codim_dist_gl(3, 2).total() == 1);
  CHECK(codim_dist_gu(2, 2) == CD(R(3, 9), 0, R(6, 9)));
  CHECK(codim_dist_gu(2, 3) == CD(R(4, 32), R(4, 32), R(24, 32)));
  CHECK(codim_dist_sp(1, 3) == CD(R(1, 8), R(1, 8), R(3, 4)));
  CHECK(codim_dist_sp(1, 2) == CD(R(1, 3), 0, R(2, 3)));
  CHECK(codim_dist_sp(2, 2) == CD(R(1, 15), 0, R(14, 15)));
  for (int n = 2; n <= 6; ++n)
    for (long q : {2, 3, 4, 5, 7, 9}) {
      CHECK(codim_dist_gl(n, q).total() == 1);
      CHECK(codim_dist_gu(n, q).total() == 1);
      CHECK(codim_dist_sp(n, q).total() == 1);
    }
  CHECK_THROWS(codim_dist_gl(1, 3));
  GlPairCoefficients bad;
  bad.e2[1] = -2;
  CHECK(codim_dist_gl(2, 3, bad).total() != 1);
}

TEST_CASE("classify pair examples") {
  const ClassicalGroup g3({Family::SpOdd, 2, 3});
  const Vec e1 = unit(4, 0);
  CHECK(classify_sp_pair(g3, FieldElement{1}, e1, FieldElement{2}, e1) == L(SpClassTag::Identity));

  const ClassicalGroup g5({Family::SpOdd, 2, 5});
  // e1 and e2 are orthogonal; (e1 | f1) = 1 with f1 = e_3.
  CHECK(classify_sp_pair(g5, FieldElement{1}, unit(4, 0), FieldElement{1}, unit(4, 1)) == L(SpClassTag::A31));
  CHECK(classify_sp_pair(g5, FieldElement{1}, unit(4, 0), FieldElement{4}, unit(4, 2)) == L(SpClassTag::D21));
}

TEST_CASE("class tables") {
  const auto d25 = sp_odd_class_dist(2, 5);
  CHECK(d25.probs.at(L(SpClassTag::Identity)) == R(1, 312));
  CHECK(d25.probs.at(L(SpClassTag::A22)) == R(1, 312));
  CHECK(d25.probs.at(L(SpClassTag::A31)) == R(120, 624));
  CHECK(d25.probs.at(L(SpClassTag::D21)) == R(250, 624));
  CHECK(d25.probs.at(L(SpClassTag::C1, 1)) == R(250, 624));
  CHECK(d25.probs.count(L(SpClassTag::A21)) == 0);
  CHECK(d25.probs.size() == 5);

  const auto d23 = sp_odd_class_dist(2, 3);
  CHECK(d23.probs.at(L(SpClassTag::A22)) == R(2, 80));
  CHECK(d23.probs.at(L(SpClassTag::A32)) == R(24, 80));
  CHECK(d23.probs.at(L(SpClassTag::D22)) == R(54, 80));
  CHECK(d23.probs.size() == 3);

  for (int n = 2; n <= 4; ++n)
    for (std::uint64_t q : {3u, 5u, 7u, 9u, 11u, 13u, 25u, 27u}) {
      CAPTURE(n);
      CAPTURE(q);
      for (auto mode : {SpPairMode::PairsFromC, SpPairMode::PairsFromCStar, SpPairMode::AllTransvections}) {
        const auto d = sp_odd_class_dist(n, q, mode);
        CHECK(d.total() == 1);
        if (mode != SpPairMode::AllTransvections && q % 4 == 3)
          CHECK(d.probs.count(L(SpClassTag::Identity)) == 0);
      }
      const auto all = sp_odd_class_dist(n, q, SpPairMode::AllTransvections).rank_marginal();
      const auto s = sp_all_transvection_pair_summary(n, q);
      CHECK(all[0] == s.identity);
      CHECK(all[1] == s.rank1);
      CHECK(all[2] == s.rank2);
    }
  CHECK_THROWS(sp_odd_class_dist(1, 3));
  CHECK_THROWS(sp_odd_class_dist(2, 4));
}

TEST_CASE("rank summary") {
  const auto s = sp_all_transvection_pair_summary(1, 3);
  CHECK(s.identity == R(1, 8));
  CHECK(s.rank1 == R(1, 8));
  CHECK(s.rank2 == R(6, 8));
  const auto t = sp_all_transvection_pair_summary(2, 5);
  CHECK(t.rank1 == R(3, 624));
  CHECK(t.rank2 == R(620, 624));
}

TEST_CASE("case analysis agrees with matrix invariants") {
  for (std::uint64_t q : {3u, 5u, 7u, 9u}) {
    const ClassicalGroup G({Family::SpOdd, 2, q});
    const Field& F = G.field();
    Rng rng(q);
    for (int i = 0; i < 3000; ++i) {
      const auto a = G.sample_transvection(TransvectionClass::Any, rng);
      const auto b = G.sample_transvection(TransvectionClass::Any, rng);
      const auto& pa = std::get<SpTransvectionParams>(a.params);
      auto pb = std::get<SpTransvectionParams>(b.params);
      // Force the rarer dependent and orthogonal cases now and then.
      if (i % 7 == 0) pb.v = pa.v;
      const Matrix ta = G.make_transvection(pa);
      const Matrix tb = G.make_transvection(pb);
      const auto lhs = classify_sp_pair(G, pa.alpha, pa.v, pb.alpha, pb.v);
      const auto rhs = classify_sp_matrix(G, mul(F, ta, tb));
      CAPTURE(q);
      CHECK(to_string(lhs) == to_string(rhs));
    }
  }
}
