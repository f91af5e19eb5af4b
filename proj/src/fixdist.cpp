#include "weilmix/fixdist.hpp"

#include <stdexcept>

namespace weilmix {

namespace {

void check_range(int k, int hi, const char* who) {
  if (k < 0 || k > hi)
    throw std::invalid_argument(std::string(who) + ": k = " + std::to_string(k) + " outside [0, " +
                                std::to_string(hi) + "]");
}

}  // namespace

Rational rs_gu_fixed_dim(int n, const BigInt& q, int k) {
  check_range(k, n, "rs_gu_fixed_dim");
  const Rational mq(-q);
  Rational sum = 0;
  for (int i = 0; i <= n - k; ++i) {
    const Rational sign = (i % 2 == 0) ? 1 : -1;
    const Rational num = sign * rpow(mq, static_cast<std::int64_t>(i) * (i - 1) / 2);
    const Rational den = rpow(mq, static_cast<std::int64_t>(k) * i) * Rational(gu_order(i, q));
    sum += num / den;
  }
  Rational out = sum / Rational(gu_order(k, q));
  out.canonicalize();
  return out;
}

Rational rs_sp_fixed_dim(int n, const BigInt& q, int k) {
  check_range(k, 2 * n, "rs_sp_fixed_dim");
  const Rational qq(q);
  const int kk = k / 2;
  Rational sum = 0;
  if (k % 2 == 0) {
    for (int i = 0; i <= n - kk; ++i) {
      const Rational term = rpow(qq, static_cast<std::int64_t>(i) * (i + 1)) /
                            (Rational(sp_order(i, q)) * rpow(qq, 2LL * i * kk));
      sum += (i % 2 == 0) ? term : Rational(-term);
    }
    sum /= Rational(sp_order(kk, q));
  } else {
    for (int i = 0; i <= n - kk - 1; ++i) {
      const Rational term = rpow(qq, static_cast<std::int64_t>(i) * (i + 1)) /
                            (Rational(sp_order(i, q)) * rpow(qq, 2LL * i * (kk + 1)));
      sum += (i % 2 == 0) ? term : Rational(-term);
    }
    sum /= Rational(sp_order(kk, q)) * rpow(qq, 2 * kk + 1);
  }
  sum.canonicalize();
  return sum;
}

Rational gu_fixed_count_bound(int n, const BigInt& q, int k) {
  check_range(k, n, "gu_fixed_count_bound");
  const Rational qq(q);
  return (1 + rpow(qq, -(k + 1))) * rpow(qq, static_cast<std::int64_t>(n) * n - static_cast<std::int64_t>(k) * k);
}

FixedSpaceDistribution fixed_space_distribution(const GroupSpec& spec) {
  validate(spec);
  const BigInt q(static_cast<unsigned long>(spec.q));
  FixedSpaceDistribution d{spec, {}};
  switch (spec.family) {
    case Family::GU:
      for (int k = 0; k <= spec.n; ++k) d.probs.push_back(rs_gu_fixed_dim(spec.n, q, k));
      break;
    case Family::SpOdd:
    case Family::SpEven:
      for (int k = 0; k <= 2 * spec.n; ++k) d.probs.push_back(rs_sp_fixed_dim(spec.n, q, k));
      break;
    case Family::GL:
      throw std::invalid_argument("fixed_space_distribution: no closed form for GL; use enumeration");
  }
  return d;
}

}  // namespace weilmix
