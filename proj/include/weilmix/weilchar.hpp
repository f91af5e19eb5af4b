#pragma once

#include <cstdint>
#include <string>

#include "weilmix/clgroups.hpp"
#include "weilmix/exact.hpp"
#include "weilmix/transprod.hpp"

namespace weilmix {

/// a + b delta with delta^2 = kappa q. For even q (or purely rational use)
/// kappa is +1 and b stays 0. With kappa = -1, delta is one fixed square root
/// of -q.
class WeilScalar {
 public:
  WeilScalar() = default;
  WeilScalar(Rational a, Rational b, int kappa, std::uint64_t q);
  static WeilScalar rational(Rational a, int kappa, std::uint64_t q) { return {std::move(a), 0, kappa, q}; }

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  int kappa() const { return kappa_; }
  std::uint64_t q() const { return q_; }
  bool is_rational() const { return b_ == 0; }
  /// Value as a real number; throws when kappa = -1 and b != 0.
  double to_double() const;

  WeilScalar operator+(const WeilScalar& o) const;
  WeilScalar operator-(const WeilScalar& o) const;
  WeilScalar operator*(const WeilScalar& o) const;
  WeilScalar operator-() const;
  WeilScalar scaled(const Rational& s) const;
  WeilScalar pow(std::uint64_t e) const;

  friend bool operator==(const WeilScalar& x, const WeilScalar& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && x.kappa_ == y.kappa_ && x.q_ == y.q_;
  }

 private:
  void check_compatible(const WeilScalar& o) const;

  Rational a_ = 0;
  Rational b_ = 0;
  int kappa_ = 1;
  std::uint64_t q_ = 1;
};

std::string to_string(const WeilScalar& x);

enum class WeilVariant { GLWeil, GUWeil, SpOddWeil, SpEvenLinear, SpEvenUnitary };

const char* to_string(WeilVariant v);
/// The natural variant of a family (linear for even-q symplectic).
WeilVariant default_variant(Family f);
/// Throws std::invalid_argument when the variant does not belong to the family.
void check_variant(const GroupSpec& spec, WeilVariant v);

/// Sign kappa used for the delta-extension of a spec: (-1)^((q-1)/2) for odd q, +1 otherwise.
int scalar_kappa(std::uint64_t q);

BigInt weil_degree(const GroupSpec& spec, WeilVariant v);

/// Character value at an element with fixed-space codimension `codim`. For
/// SpOdd only the modulus is returned: q^((2n-codim)/2), carried on delta when
/// codim is odd.
WeilScalar weil_value_by_codim(const GroupSpec& spec, WeilVariant v, int codim);

/// Character value over the maximal fixed space ratio chi/d as an exact
/// rational, for the families whose values are rational.
Rational weil_ratio_by_codim(const GroupSpec& spec, WeilVariant v, int codim);

/// Reducible Weil character of degree q^n of Sp_2n(q), q odd, n >= 2, on the
/// classes reached by products of two transvections.
WeilScalar weil_value_sp_odd_class(int n, std::uint64_t q, const SpClassLabel& label);

}  // namespace weilmix
