#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <string>

#include "weilmix/clgroups.hpp"
#include "weilmix/exact.hpp"

namespace weilmix {

/// Distribution of the fixed-space codimension e in {0, 1, 2} of a product of
/// two uniform transvections.
struct CodimDistribution {
  std::array<Rational, 3> probs;

  Rational total() const { return probs[0] + probs[1] + probs[2]; }
  friend bool operator==(const CodimDistribution&, const CodimDistribution&) = default;
};

/// Integer coefficients of the GL pair formula, numerators over
/// (q^n - 1)(q^(n-1) - 1). Exposed so verification can perturb one of them
/// and confirm the oracle notices.
struct GlPairCoefficients {
  // e = 2: c0 q^(2n-1) + c1 q^n + c2 q^(n-1) + c3 q^2
  std::array<long, 4> e2{1, -3, 1, 1};
  // e = 1: c0 q^n + c1 q^(n-1) + c2 q^2 + c3 q + c4
  std::array<long, 5> e1{2, -2, -1, -1, 2};
  // e = 0: c0 q + c1
  std::array<long, 2> e0{1, -1};
};

CodimDistribution codim_dist_gl(int n, const BigInt& q, const GlPairCoefficients& coeffs = {});
CodimDistribution codim_dist_gu(int n, const BigInt& q);
CodimDistribution codim_dist_sp(int n, const BigInt& q);
/// Dispatch on the family.
CodimDistribution codim_dist(const GroupSpec& spec, const GlPairCoefficients& coeffs = {});

enum class SpClassTag { Identity, A21, A22, A31, A32, C1, C3, D21, D22 };

/// Conjugacy class label in Sp_2n(q), q odd, for products of at most two
/// transvections. C1/C3 carry the canonical exponent index.
struct SpClassLabel {
  SpClassTag tag = SpClassTag::Identity;
  std::uint64_t index = 0;

  friend auto operator<=>(const SpClassLabel&, const SpClassLabel&) = default;
};

std::string to_string(const SpClassLabel& label);

enum class SpPairMode {
  PairsFromC,      // both factors in C (square parameter)
  PairsFromCStar,  // both factors in C* (non-square parameter)
  AllTransvections,
};

const char* to_string(SpPairMode m);

struct SpOddClassDistribution {
  int n = 2;
  std::uint64_t q = 3;
  SpPairMode mode = SpPairMode::PairsFromC;
  std::map<SpClassLabel, Rational> probs;

  Rational total() const;
  /// Mass by rank of S - I (0, 1, 2).
  std::array<Rational, 3> rank_marginal() const;
};

/// Class of T(alpha, u) T(beta, v) in a symplectic group over odd q.
SpClassLabel classify_sp_pair(const ClassicalGroup& G, FieldElement alpha, const Vec& u, FieldElement beta,
                              const Vec& v);

/// Class of an element S with rank(S - I) <= 2 computed from matrix invariants
/// only (rank, the quadratic form (x|(S-I)x), trace and transvection data of
/// S restricted to im(S - I)). Independent of the case analysis above.
SpClassLabel classify_sp_matrix(const ClassicalGroup& G, const Matrix& S);

/// Closed-form class distribution of the product of two random transvections.
SpOddClassDistribution sp_odd_class_dist(int n, std::uint64_t q, SpPairMode mode = SpPairMode::PairsFromC);

struct RankSummary {
  Rational identity;
  Rational rank1;
  Rational rank2;
};

/// Rank collapse for two uniform transvections (either class), q odd.
RankSummary sp_all_transvection_pair_summary(int n, const BigInt& q);

}  // namespace weilmix
