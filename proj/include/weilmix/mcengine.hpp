#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "weilmix/clgroups.hpp"
#include "weilmix/exact.hpp"
#include "weilmix/fixdist.hpp"
#include "weilmix/transprod.hpp"

namespace weilmix {

inline constexpr const char* kLibraryVersion = "0.1.0";

/// Samples per seed chunk. Chunk i draws from Rng(derive_seed(seed, i)).
inline constexpr std::uint64_t kChunkSamples = 4096;

template <class Key>
struct BasicHistogram {
  std::map<Key, std::uint64_t> counts;
  std::uint64_t total = 0;
  std::uint64_t seed = 0;

  void add(const Key& k, std::uint64_t c = 1) {
    counts[k] += c;
    total += c;
  }
  void merge(const BasicHistogram& other) {
    for (const auto& [k, c] : other.counts) counts[k] += c;
    total += other.total;
  }
  std::uint64_t count(const Key& k) const {
    const auto it = counts.find(k);
    return it == counts.end() ? 0 : it->second;
  }
  double frequency(const Key& k) const { return total ? double(count(k)) / double(total) : 0.0; }

  friend bool operator==(const BasicHistogram&, const BasicHistogram&) = default;
};

using Histogram = BasicHistogram<int>;
using ClassHistogram = BasicHistogram<SpClassLabel>;

/// Worker count: 0 means hardware concurrency.
unsigned resolve_threads(unsigned requested);

/// Fixed-space dimensions of `samples` uniform elements.
Histogram mc_fixed_dim(const GroupSpec& spec, std::uint64_t samples, std::uint64_t seed, unsigned threads = 0);

/// Fixed-space codimension of a product of s uniform transvections from `cls`.
Histogram mc_transv_product(const GroupSpec& spec, int s, std::uint64_t samples, std::uint64_t seed,
                            TransvectionClass cls = TransvectionClass::Any, unsigned threads = 0);

/// Classes of products of two transvections in Sp_2n(q), q odd, classified
/// from the matrix alone.
ClassHistogram mc_sp_classes(int n, std::uint64_t q, SpPairMode mode, std::uint64_t samples, std::uint64_t seed,
                             unsigned threads = 0);

/// Element counts, keyed by the matrix entries, of `samples` uniform draws.
/// Only for groups small enough to tell elements apart by index.
std::map<std::vector<std::uint32_t>, std::uint64_t> mc_element_tally(const GroupSpec& spec, std::uint64_t samples,
                                                                     std::uint64_t seed, unsigned threads = 0);

class LimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultPairLimit = 100'000'000;

/// Exact codimension distribution of the product of two uniform transvections
/// (all transvections of the group) by enumerating ordered pairs.
CodimDistribution oracle_pair_exact(const GroupSpec& spec, std::uint64_t limit = kDefaultPairLimit,
                                    unsigned threads = 0);

/// Exact class distribution from tuples (alpha, e_1, beta, v), every tuple
/// weighted equally. Sp acts transitively on nonzero vectors, so fixing the
/// first direction loses nothing.
SpOddClassDistribution oracle_sp_class_exact(int n, std::uint64_t q, SpPairMode mode,
                                             std::uint64_t limit = kDefaultPairLimit);

/// Fixed-space dimension distribution by walking every element of the group.
FixedSpaceDistribution oracle_fixed_dim_exact(const GroupSpec& spec,
                                              std::uint64_t limit = ClassicalGroup::kDefaultEnumerationLimit);

/// Brute-force count of x with x and x + 1 nonzero squares.
std::int64_t brute_adjacent_squares(std::uint64_t q);

enum class CheckStatus { ExactMatch, WithinTolerance, Fail };
const char* to_string(CheckStatus s);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::ExactMatch;
  std::string details;
  std::string expected;  // filled on failure
  std::string computed;
};

struct VerifyReport {
  std::string level;
  std::vector<CheckResult> checks;

  bool ok() const;
  std::size_t failures() const;
};

enum class VerifyLevel { Quick, Full };

struct VerifyOptions {
  VerifyLevel level = VerifyLevel::Quick;
  GlPairCoefficients gl_coeffs{};
  unsigned threads = 0;
  std::vector<std::string> groups;  // empty: all of verify_groups()
};

/// Check groups in run order: pairs, fixed-space, sp-classes, weil-sums,
/// lemmas, domination, moments, cutoff, monte-carlo.
const std::vector<std::string>& verify_groups();

VerifyReport verify(const VerifyOptions& options);

/// JSON document, schema_version 1.
std::string to_json(const VerifyReport& report, int indent = 2);

/// z threshold for `keys` simultaneous two-sided binomial tests whose joint
/// false-alarm rate equals that of one 3-sigma test (Sidak). 3.0 for one key.
double sidak_threshold(std::size_t keys);

/// Expected-vs-observed check on a histogram: every key within
/// sidak_threshold(keys) binomial standard errors of its exact probability
/// (keys outside `exact` must be absent).
template <class Key>
CheckResult within_three_sigma(const std::string& name, const BasicHistogram<Key>& h,
                               const std::map<Key, Rational>& exact);

}  // namespace weilmix
