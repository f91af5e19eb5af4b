#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "weilmix/clgroups.hpp"
#include "weilmix/exact.hpp"
#include "weilmix/transprod.hpp"
#include "weilmix/weilchar.hpp"

namespace weilmix {

struct ChainSpec {
  GroupSpec group;
  WeilVariant variant = WeilVariant::GLWeil;
  std::int64_t r = 0;
};

/// Number of group elements by fixed-space codimension: exact from the
/// fixed-space formulas for GU/Sp, by enumeration for GL.
std::vector<BigInt> codim_counts(const GroupSpec& spec,
                                 std::uint64_t gl_limit = ClassicalGroup::kDefaultEnumerationLimit);

/// sum over non-identity g of |chi(g)/d|^(2r); an upper bound on 4 ||K^r - pi||^2.
Rational charbound_sum(const ChainSpec& chain,
                       std::uint64_t gl_limit = ClassicalGroup::kDefaultEnumerationLimit);

struct UpperBound {
  double value = 0;     // rounded up
  std::int64_t r = 0;   // step count the bound applies to
  Rational four_sq;     // exact 4 * value^2
};

/// Closed-form TV upper bound at offset c past the family's cutoff
/// (r = n + c, or 2n + c for sp-odd). c must be a positive integer.
UpperBound upper_closed(const GroupSpec& spec, WeilVariant v, const Rational& c);

struct LowerBound {
  double value = 0;    // rounded down, clamped to [0, 1]
  Rational r;          // step count (integer)
  std::string validity;
};

/// Closed-form TV lower bound at offset c before the cutoff (r = n - c, or 2n - 2c for sp-odd).
LowerBound lower_closed(const GroupSpec& spec, WeilVariant v, const Rational& c);

struct MomentReport {
  std::string statistic;  // "f_C", "f_C*" or "f_*"
  std::int64_t r = 0;
  int mean_sign = 1;
  Rational mean_squared;      // exact (E f)^2
  WeilScalar identity_term;   // contributions to E f^2 by rank of the two-step product
  WeilScalar t1;              // codim 1, signed
  WeilScalar t2;              // codim 2
  WeilScalar t3;              // (E f)^2
  WeilScalar second_moment;
  WeilScalar variance;        // exact
  double mean = 0;            // rounded toward zero
  double variance_upper = 0;  // rounded up
};

MomentReport moments(const ChainSpec& chain);

/// Chebyshev two-event lower bound max_t 1 - 1/t^2 - V/(|m| - t)^2 over
/// t in (0, |m|), or at the supplied threshold. Clamped to [0, 1].
double chebyshev_lower(const MomentReport& m, std::optional<double> threshold = std::nullopt);
double chebyshev_lower(const ChainSpec& chain, std::optional<double> threshold = std::nullopt);

struct WeilSumCheck {
  WeilScalar closed_form;
  WeilScalar assembly;
};

/// sum_T omega(T)^r p_2(T) for Sp_2n(q), q odd, both in closed form and
/// assembled from the class distribution and class values; throws
/// std::logic_error if they differ. Modes: PairsFromC or AllTransvections (even r).
WeilScalar weighted_weil_sum(int n, std::uint64_t q, std::int64_t r, SpPairMode mode);
WeilSumCheck weighted_weil_sum_parts(int n, std::uint64_t q, std::int64_t r, SpPairMode mode);

struct ProfileRow {
  std::int64_t r = 0;
  std::optional<double> upper;
  std::string upper_source;  // "char-sum", "closed-form" or empty
  std::optional<double> upper_closed;
  double lower = 0;
  std::string lower_source;
  std::optional<double> lower_closed;
  std::optional<double> lower_chebyshev;
  std::optional<Rational> exact_char_sum;
};

struct BoundProfile {
  GroupSpec spec;
  WeilVariant variant;
  std::vector<ProfileRow> rows;
};

BoundProfile profile(const GroupSpec& spec, WeilVariant v, std::int64_t r_min, std::int64_t r_max,
                     bool exact_sum = false);

/// Directed rounding helpers for emitting bounds.
double round_up(double x);
double round_down(double x);

}  // namespace weilmix
