#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace weilmix {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Integer power of a big integer; exponent must be nonnegative.
BigInt ipow(const BigInt& base, std::uint64_t exponent);

/// Rational power with a signed exponent. Zero base with negative exponent throws.
Rational rpow(const Rational& base, std::int64_t exponent);

inline Rational make_rational(const BigInt& num, const BigInt& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// "p/q" (or "p" when the denominator is 1).
std::string to_string(const Rational& r);
std::string to_string(const BigInt& z);

/// Nearest double; exact for values that fit.
double to_double(const Rational& r);

}  // namespace weilmix
