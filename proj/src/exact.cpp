#include "weilmix/exact.hpp"

#include <stdexcept>

namespace weilmix {

BigInt ipow(const BigInt& base, std::uint64_t exponent) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
  return out;
}

Rational rpow(const Rational& base, std::int64_t exponent) {
  if (exponent >= 0) {
    Rational out(ipow(base.get_num(), static_cast<std::uint64_t>(exponent)),
                 ipow(base.get_den(), static_cast<std::uint64_t>(exponent)));
    out.canonicalize();
    return out;
  }
  if (base == 0) throw std::domain_error("rpow: zero to a negative power");
  const auto e = static_cast<std::uint64_t>(-exponent);
  Rational out(ipow(base.get_den(), e), ipow(base.get_num(), e));
  out.canonicalize();
  return out;
}

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string to_string(const BigInt& z) { return z.get_str(); }

double to_double(const Rational& r) { return mpq_get_d(r.get_mpq_t()); }

}  // namespace weilmix
