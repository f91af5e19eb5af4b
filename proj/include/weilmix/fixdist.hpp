#pragma once

#include <vector>

#include "weilmix/clgroups.hpp"
#include "weilmix/exact.hpp"

namespace weilmix {

/// Probability that a uniform element of GU_n(q) has a k-dimensional fixed space.
Rational rs_gu_fixed_dim(int n, const BigInt& q, int k);

/// Probability that a uniform element of Sp_2n(q) has a k-dimensional fixed space, 0 <= k <= 2n.
Rational rs_sp_fixed_dim(int n, const BigInt& q, int k);

/// (1 + q^-(k+1)) q^(n^2 - k^2): bound on the number of elements of GU_n(q)
/// with a k-dimensional fixed space.
Rational gu_fixed_count_bound(int n, const BigInt& q, int k);

struct FixedSpaceDistribution {
  GroupSpec spec;
  std::vector<Rational> probs;  // indexed by fixed-space dimension
};

/// Whole distribution for GU or Sp (either parity). GL has no closed form here.
FixedSpaceDistribution fixed_space_distribution(const GroupSpec& spec);

}  // namespace weilmix
