#include "weilmix/mixbounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "weilmix/fixdist.hpp"

namespace weilmix {

double round_up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }
double round_down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

BigInt big(std::uint64_t x) { return BigInt(static_cast<unsigned long>(x)); }

bool is_integer(const Rational& x) { return x.get_den() == 1; }

std::int64_t to_int64(const Rational& x) {
  if (!is_integer(x)) throw std::invalid_argument("expected an integer");
  return x.get_num().get_si();
}

}  // namespace

std::vector<BigInt> codim_counts(const GroupSpec& spec, std::uint64_t gl_limit) {
  validate(spec);
  const BigInt q = big(spec.q);
  const BigInt order = group_order(spec);
  std::vector<BigInt> out;
  auto count = [&](const Rational& p) {
    const Rational c = p * Rational(order);
    if (!is_integer(c)) throw std::logic_error("codim_counts: non-integral class count");
    return c.get_num();
  };
  switch (spec.family) {
    case Family::GU:
      for (int e = 0; e <= spec.n; ++e) out.push_back(count(rs_gu_fixed_dim(spec.n, q, spec.n - e)));
      return out;
    case Family::SpOdd:
    case Family::SpEven:
      for (int e = 0; e <= 2 * spec.n; ++e) out.push_back(count(rs_sp_fixed_dim(spec.n, q, 2 * spec.n - e)));
      return out;
    case Family::GL: {
      const ClassicalGroup G(spec);
      std::vector<std::uint64_t> tally(G.dimension() + 1, 0);
      G.for_each_element([&](const Matrix& m) { ++tally[G.fixed_space_codim(m)]; }, gl_limit);
      for (auto t : tally) out.push_back(big(t));
      return out;
    }
  }
  throw std::logic_error("codim_counts: unknown family");
}

Rational charbound_sum(const ChainSpec& chain, std::uint64_t gl_limit) {
  check_variant(chain.group, chain.variant);
  if (chain.r < 0) throw std::invalid_argument("charbound_sum: r must be nonnegative");
  const auto counts = codim_counts(chain.group, gl_limit);
  const Rational q(big(chain.group.q));
  // |chi/d|^2 at codim e is q^(-e) for sp-odd and q^(-2e) otherwise.
  const std::int64_t per_codim = chain.group.family == Family::SpOdd ? 1 : 2;
  Rational sum = 0;
  for (std::size_t e = 1; e < counts.size(); ++e)
    sum += Rational(counts[e]) * rpow(q, -per_codim * static_cast<std::int64_t>(e) * chain.r);
  sum.canonicalize();
  return sum;
}

UpperBound upper_closed(const GroupSpec& spec, WeilVariant v, const Rational& c) {
  check_variant(spec, v);
  validate(spec);
  if (c <= 0) throw std::invalid_argument("upper_closed: c must be positive");
  if (!is_integer(c)) throw std::invalid_argument("upper_closed: c must be an integer");
  const std::int64_t ci = to_int64(c);
  const Rational q(big(spec.q));
  const double qd = static_cast<double>(spec.q);
  UpperBound b;
  switch (spec.family) {
    case Family::GL:
      b.r = spec.n + ci;
      b.value = 0.5 * std::pow(qd, -static_cast<double>(ci));
      b.four_sq = rpow(q, -2 * ci);
      break;
    case Family::GU:
      b.r = spec.n + ci;
      b.value = 0.7 * std::pow(qd, -static_cast<double>(ci));
      b.four_sq = Rational(49, 25) * rpow(q, -2 * ci);
      break;
    case Family::SpOdd:
      b.r = 2 * spec.n + ci;
      b.value = 0.5 / std::sqrt(std::pow(qd, static_cast<double>(ci)) - 1);
      b.four_sq = 1 / (rpow(q, ci) - 1);
      break;
    case Family::SpEven:
      b.r = spec.n + ci;
      b.value = 0.5 / std::sqrt(std::pow(qd, 2.0 * static_cast<double>(ci)) - 1);
      b.four_sq = 1 / (rpow(q, 2 * ci) - 1);
      break;
  }
  b.four_sq.canonicalize();
  b.value = round_up(b.value);
  return b;
}

LowerBound lower_closed(const GroupSpec& spec, WeilVariant v, const Rational& c) {
  check_variant(spec, v);
  validate(spec);
  if (c <= 0) throw std::invalid_argument("lower_closed: c must be positive");
  const double qd = static_cast<double>(spec.q);
  const double cd = to_double(c);
  const int n = spec.n;
  LowerBound b;
  double value = 0;
  auto need_integer_c = [&]() {
    if (!is_integer(c)) throw std::invalid_argument("lower_closed: c must be an integer for this family");
  };
  switch (spec.family) {
    case Family::GL:
    case Family::GU:
      need_integer_c();
      if (n < 3) throw std::invalid_argument("lower_closed: needs n >= 3");
      b.r = Rational(n) - c;
      value = spec.family == Family::GL ? 1 - 11.25 * std::pow(qd, 2 - 2 * cd) - 18 * std::pow(qd, 1 - cd)
                                        : 1 - 32 * std::pow(qd, 2 - 2 * cd) - 16 * std::pow(qd, 1 - cd);
      b.validity = "r = n - c, n >= 3";
      break;
    case Family::SpOdd: {
      if (n < 2) throw std::invalid_argument("lower_closed: needs n >= 2");
      if (!is_integer(2 * c)) throw std::invalid_argument("lower_closed: c must be a multiple of 1/2");
      b.r = Rational(2 * n) - 2 * c;
      if (scalar_kappa(spec.q) == 1) {
        value = 1 - 32 * std::pow(qd, -2 * cd) - 8 * std::pow(qd, -cd);
        b.validity = "r = 2n - 2c, n >= 2, q = 1 mod 4";
      } else {
        if (to_int64(b.r) % 2 != 0) throw std::invalid_argument("lower_closed: q = 3 mod 4 needs even r");
        value = 1 - 16 * std::pow(qd, -2 * cd) - 12 * std::pow(qd, -cd);
        b.validity = "r = 2n - 2c even, n >= 2, q = 3 mod 4";
      }
      break;
    }
    case Family::SpEven:
      need_integer_c();
      if (n < 2) throw std::invalid_argument("lower_closed: needs n >= 2");
      b.r = Rational(n) - c;
      value = 1 - 16 * std::pow(qd, -2 * cd) - 6 * std::pow(qd, -cd);
      b.validity = "r = n - c, n >= 2";
      break;
  }
  if (b.r < 0) throw std::invalid_argument("lower_closed: c exceeds the cutoff location");
  b.value = clamp01(round_down(value));
  return b;
}

MomentReport moments(const ChainSpec& chain) {
  const GroupSpec& spec = chain.group;
  check_variant(spec, chain.variant);
  if (chain.r < 0) throw std::invalid_argument("moments: r must be nonnegative");
  const std::int64_t r = chain.r;
  const std::uint64_t q = spec.q;
  const int kappa = scalar_kappa(q);
  const Rational Q(big(q));
  auto rat = [&](const Rational& a) { return WeilScalar::rational(a, kappa, q); };

  MomentReport m;
  m.r = r;
  m.identity_term = m.t1 = m.t2 = rat(0);

  if (spec.family == Family::SpOdd) {
    if (spec.n < 2) throw std::invalid_argument("moments: sp-odd needs n >= 2");
    validate(spec);
    const BigInt D = ipow(Q.get_num(), 2 * spec.n) - 1;
    Rational csize;
    SpPairMode mode;
    if (kappa == 1) {
      // C* carries the positive value +q^((2n-1)/2) under the fixed character.
      m.statistic = "f_C (C = A22)";
      mode = SpPairMode::PairsFromCStar;
      csize = make_rational(D, 2);
      m.mean_sign = 1;
    } else {
      if (r % 2 != 0) throw std::invalid_argument("moments: q = 3 mod 4 needs even r");
      m.statistic = "f_*";
      mode = SpPairMode::AllTransvections;
      csize = Rational(D);
      m.mean_sign = (r / 2) % 2 == 0 ? 1 : -1;
    }
    m.mean_squared = csize * rpow(Q, -r);
    const auto dist = sp_odd_class_dist(spec.n, q, mode);
    const Rational scale = rpow(Q, -static_cast<std::int64_t>(spec.n) * r);
    for (const auto& [label, p] : dist.probs) {
      const WeilScalar term = weil_value_sp_odd_class(spec.n, q, label).pow(r).scaled(p * scale * csize);
      switch (label.tag) {
        case SpClassTag::Identity: m.identity_term = m.identity_term + term; break;
        case SpClassTag::A21:
        case SpClassTag::A22: m.t1 = m.t1 + term; break;
        default: m.t2 = m.t2 + term; break;
      }
    }
  } else {
    validate(spec, true);
    const ClassicalGroup G(spec);
    const Rational csize(G.transvection_census().total());
    const CodimDistribution p = codim_dist(spec);
    const Rational ratio1 = rpow(weil_ratio_by_codim(spec, chain.variant, 1), r);
    const Rational ratio2 = rpow(weil_ratio_by_codim(spec, chain.variant, 2), r);
    m.statistic = "f_C";
    m.identity_term = rat(csize * p.probs[0]);
    m.t1 = rat(csize * p.probs[1] * ratio1);
    m.t2 = rat(csize * p.probs[2] * ratio2);
    m.mean_squared = csize * ratio1 * ratio1;
    m.mean_sign = ratio1 < 0 ? -1 : 1;
  }
  m.mean_squared.canonicalize();
  m.t3 = rat(m.mean_squared);
  m.second_moment = m.identity_term + m.t1 + m.t2;
  m.variance = m.second_moment - m.t3;
  m.mean = m.mean_sign * round_down(std::sqrt(to_double(m.mean_squared)));
  m.variance_upper = round_up(m.variance.to_double());
  return m;
}

double chebyshev_lower(const MomentReport& m, std::optional<double> threshold) {
  const double mean = std::fabs(m.mean);
  const double var = std::max(0.0, m.variance_upper);
  if (mean <= 1) return 0;
  auto f = [&](double t) { return 1 - 1 / (t * t) - var / ((mean - t) * (mean - t)); };
  if (threshold) {
    const double t = *threshold;
    if (t <= 0 || t >= mean) return 0;
    return clamp01(round_down(f(t)));
  }
  const double phi = (std::sqrt(5.0) - 1) / 2;
  double lo = 0, hi = mean;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 64; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = f(x1);
    }
  }
  return clamp01(round_down(std::max(f1, f2)));
}

double chebyshev_lower(const ChainSpec& chain, std::optional<double> threshold) {
  return chebyshev_lower(moments(chain), threshold);
}

WeilSumCheck weighted_weil_sum_parts(int n, std::uint64_t q, std::int64_t r, SpPairMode mode) {
  if (n < 2 || q % 2 == 0) throw std::invalid_argument("weighted_weil_sum: needs n >= 2 and odd q");
  if (r < 0) throw std::invalid_argument("weighted_weil_sum: r must be nonnegative");
  if (mode == SpPairMode::PairsFromCStar)
    throw std::invalid_argument("weighted_weil_sum: mode must be c-pairs or all");
  if (mode == SpPairMode::AllTransvections && r % 2 != 0)
    throw std::invalid_argument("weighted_weil_sum: all-transvection mode needs even r");

  const int kappa = scalar_kappa(q);
  const Rational Q(big(q));
  auto rat = [&](const Rational& a) { return WeilScalar::rational(a, kappa, q); };
  const Rational D = rpow(Q, 2 * n) - 1;
  const Rational pre = rpow(Q, static_cast<std::int64_t>(n - 2) * r) / D;
  const Rational tail = rpow(Q, 2 * n) - Q;
  const WeilScalar delta3r = WeilScalar(0, 1, kappa, q).pow(3 * static_cast<std::uint64_t>(r));
  const Rational sign_r = r % 2 == 0 ? 1 : -1;

  WeilScalar closed;
  if (mode == SpPairMode::AllTransvections) {
    const Rational kr = (kappa == 1 || (r / 2) % 2 == 0) ? 1 : -1;
    closed = rat(pre * (rpow(Q, 2 * r) + (Q - 2) * kr * rpow(Q, 3 * r / 2) + rpow(Q, r) * tail));
  } else if (kappa == 1) {
    closed = (rat(2 * rpow(Q, 2 * r) + rpow(Q, r) * tail) +
              delta3r.scaled((Q - 1) / 2 + sign_r * (Q - 5) / 2))
                 .scaled(pre);
  } else {
    closed = (rat(rpow(-Q, r) * tail) + delta3r.scaled(sign_r * (Q - 3) / 2 + (Q + 1) / 2)).scaled(pre);
  }

  WeilScalar assembly = rat(0);
  for (const auto& [label, p] : sp_odd_class_dist(n, q, mode).probs)
    assembly = assembly + weil_value_sp_odd_class(n, q, label).pow(r).scaled(p);
  return {closed, assembly};
}

WeilScalar weighted_weil_sum(int n, std::uint64_t q, std::int64_t r, SpPairMode mode) {
  const auto parts = weighted_weil_sum_parts(n, q, r, mode);
  if (!(parts.closed_form == parts.assembly))
    throw std::logic_error("weighted_weil_sum: closed form " + to_string(parts.closed_form) +
                           " differs from class assembly " + to_string(parts.assembly));
  return parts.closed_form;
}

BoundProfile profile(const GroupSpec& spec, WeilVariant v, std::int64_t r_min, std::int64_t r_max,
                     bool exact_sum) {
  check_variant(spec, v);
  validate(spec);
  if (r_min < 0 || r_max < r_min) throw std::invalid_argument("profile: need 0 <= r-min <= r-max");
  BoundProfile prof{spec, v, {}};
  const std::int64_t cutoff = spec.family == Family::SpOdd ? 2 * spec.n : spec.n;
  for (std::int64_t r = r_min; r <= r_max; ++r) {
    ProfileRow row;
    row.r = r;
    if (exact_sum) {
      row.exact_char_sum = charbound_sum({spec, v, r});
      const double s = std::sqrt(to_double(*row.exact_char_sum)) / 2;
      row.upper = std::min(1.0, round_up(s));
      row.upper_source = "char-sum";
    }
    if (r > cutoff) {
      const auto ub = upper_closed(spec, v, Rational(r - cutoff));
      row.upper_closed = ub.value;
      if (!row.upper || ub.value < *row.upper) {
        row.upper = std::min(1.0, ub.value);
        row.upper_source = "closed-form";
      }
    }
    if (r < cutoff) {
      const Rational c = spec.family == Family::SpOdd ? Rational(cutoff - r, 2) : Rational(cutoff - r);
      try {
        const auto lb = lower_closed(spec, v, c);
        row.lower_closed = lb.value;
        if (lb.value > row.lower) {
          row.lower = lb.value;
          row.lower_source = "closed-form";
        }
      } catch (const std::invalid_argument&) {
      }
    }
    try {
      const double ch = chebyshev_lower({spec, v, r});
      row.lower_chebyshev = ch;
      if (ch > row.lower) {
        row.lower = ch;
        row.lower_source = "chebyshev";
      }
    } catch (const std::invalid_argument&) {
    }
    prof.rows.push_back(std::move(row));
  }
  return prof;
}

}  // namespace weilmix
