#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace weilmix {

/// Element of a finite field, encoded by its coordinate vector in the power
/// basis of the field modulus: index = sum c_i p^i, c_0 least significant.
struct FieldElement {
  std::uint32_t index = 0;

  friend constexpr bool operator==(FieldElement, FieldElement) = default;
  friend constexpr auto operator<=>(FieldElement, FieldElement) = default;
};

enum class SquareClass { Zero, Square, NonSquare };

const char* to_string(SquareClass c);

class FieldError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// GF(p^degree) built on the lexicographically smallest monic irreducible
/// (coefficients compared low-degree first). Multiplication goes through
/// exp/log tables keyed on the smallest primitive element.
class Field {
 public:
  Field(std::uint32_t p, std::uint32_t degree);

  std::uint32_t characteristic() const { return p_; }
  std::uint32_t degree() const { return degree_; }
  std::uint32_t size() const { return size_; }

  /// Monic modulus, low-degree coefficient first, length degree + 1.
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  FieldElement zero() const { return {0}; }
  FieldElement one() const { return {1}; }
  FieldElement element(std::uint32_t index) const;
  FieldElement from_int(std::int64_t v) const;
  FieldElement from_coefficients(std::span<const std::uint32_t> coeffs) const;
  std::vector<std::uint32_t> coefficients(FieldElement x) const;

  FieldElement add(FieldElement a, FieldElement b) const;
  FieldElement sub(FieldElement a, FieldElement b) const;
  FieldElement neg(FieldElement a) const;
  FieldElement mul(FieldElement a, FieldElement b) const;
  FieldElement inv(FieldElement a) const;
  FieldElement div(FieldElement a, FieldElement b) const { return mul(a, inv(b)); }
  FieldElement pow(FieldElement a, std::int64_t e) const;

  FieldElement primitive() const { return exp_[1]; }
  /// Discrete log to base primitive(); x must be nonzero.
  std::uint32_t log(FieldElement x) const;
  FieldElement exp(std::uint64_t i) const { return exp_[i % (size_ - 1)]; }
  std::uint64_t multiplicative_order(FieldElement x) const;

 private:
  std::uint32_t p_;
  std::uint32_t degree_;
  std::uint32_t size_;
  std::vector<std::uint32_t> modulus_;
  std::vector<FieldElement> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> add_table_;  // only for small fields
  std::vector<std::uint32_t> neg_;
};

/// Split/nonsplit eigenvalue data of an element of SL_2(q) with trace t != +-2:
/// the eigenvalue lambda is gamma^i (split) or eta^j (nonsplit), the index
/// reported as the smaller of +-index modulo the order of gamma or eta.
struct TraceEigenData {
  bool split = false;
  std::uint64_t index = 0;
  FieldElement lambda;  // in GF(q^2)
};

/// GF(q) together with GF(q^2), the embedding GF(q) -> GF(q^2), a fixed
/// primitive theta of GF(q^2) and gamma = theta^(q+1), eta = theta^(q-1).
class FieldSpec {
 public:
  static constexpr std::uint64_t kDefaultLimit = 1024;

  /// Cached per (q); throws FieldError on a non-prime-power or q > limit.
  static std::shared_ptr<const FieldSpec> make(std::uint64_t q,
                                               std::uint64_t limit = kDefaultLimit);

  std::uint32_t p() const { return p_; }
  std::uint32_t k() const { return k_; }
  std::uint32_t q() const { return q_; }
  bool odd() const { return p_ != 2; }
  /// (-1)^((q-1)/2) for odd q, 0 for even q.
  int kappa() const { return kappa_; }

  const Field& base() const { return base_; }
  const Field& ext() const { return ext_; }

  FieldElement embed(FieldElement x) const { return embed_[x.index]; }
  std::optional<FieldElement> restrict_to_base(FieldElement x) const;
  /// x -> x^q on GF(q^2).
  FieldElement frobenius(FieldElement x) const { return ext_.pow(x, q_); }

  FieldElement theta() const { return ext_.primitive(); }
  FieldElement gamma() const { return gamma_; }
  FieldElement eta() const { return eta_; }

  SquareClass square_class(FieldElement x) const;
  std::vector<FieldElement> nonzero_squares() const;
  std::vector<FieldElement> nonsquares() const;

  /// Eigenvalue classification for trace t in GF(q), t != +-2, q odd.
  TraceEigenData trace_eigen_data(FieldElement t) const;

  FieldSpec(std::uint32_t p, std::uint32_t k);

 private:
  std::uint32_t p_;
  std::uint32_t k_;
  std::uint32_t q_;
  int kappa_;
  Field base_;
  Field ext_;
  std::vector<FieldElement> embed_;
  std::vector<std::int64_t> restrict_;
  FieldElement gamma_;
  FieldElement eta_;
};

/// Returns (p, k) with q = p^k, or nullopt.
std::optional<std::pair<std::uint32_t, std::uint32_t>> prime_power(std::uint64_t q);

/// Number of pairs (x, y) of nonzero squares of GF(q) with x + 1 = y (q odd).
std::int64_t count_adjacent_squares(std::uint64_t q);

struct Sq2Entry {
  FieldElement alpha;  // in GF(q)
  bool split = false;
  std::uint64_t index = 0;  // exponent of gamma (split) or eta (nonsplit), canonical
  bool parity_holds = false;
};

struct Sq2Census {
  std::int64_t split_count = 0;
  std::int64_t nonsplit_count = 0;
  std::vector<Sq2Entry> entries;
};

/// Classifies 2 - alpha = lambda + 1/lambda for alpha over the nonzero squares
/// other than 4, and checks the parity of the gamma/eta exponent for every
/// alpha. Throws std::logic_error if a parity claim fails; q = 3 yields (0, 0).
Sq2Census sq2_census(std::uint64_t q);

}  // namespace weilmix
