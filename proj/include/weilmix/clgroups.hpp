#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "weilmix/exact.hpp"
#include "weilmix/ffield.hpp"
#include "weilmix/matrix.hpp"
#include "weilmix/rng.hpp"

namespace weilmix {

enum class Family { GL, GU, SpOdd, SpEven };

const char* to_string(Family f);

struct GroupSpec {
  Family family = Family::GL;
  int n = 2;
  std::uint64_t q = 2;

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

std::string describe(const GroupSpec& spec);

/// Validates family/parity/rank constraints; throws std::invalid_argument.
void validate(const GroupSpec& spec, bool transvection_features = false);

/// Exact order: GL, GU via q^(n(n-1)/2) prod(q^i -+ 1); Sp_2n via q^(n^2) prod(q^(2i) - 1).
BigInt group_order(const GroupSpec& spec);
BigInt gu_order(int n, const BigInt& q);
BigInt sp_order(int n, const BigInt& q);
BigInt gl_order(int n, const BigInt& q);

enum class FormKind { None, Symplectic, Hermitian };

struct FormData {
  FormKind kind = FormKind::None;
  Matrix gram;
};

/// I + v w*, w*(v) = 0.
struct GLTransvectionParams {
  Vec v;
  Vec w_star;
};

/// y -> y + c (v|y) v with v isotropic, c != 0, c + c^q = 0.
struct GUTransvectionParams {
  Vec v;
  FieldElement c;
};

/// T(alpha, v): x -> x + alpha (v|x) v.
struct SpTransvectionParams {
  FieldElement alpha;
  Vec v;
};

using TransvectionParams = std::variant<GLTransvectionParams, GUTransvectionParams, SpTransvectionParams>;

/// Which transvections a sampler draws from. For SpOdd, C has square
/// parameter and CStar non-square; Any means all transvections.
enum class TransvectionClass { Unique, C, CStar, Any };

const char* to_string(TransvectionClass c);

struct TransvectionCensus {
  std::vector<BigInt> class_sizes;  // one entry, or (C, C*) for SpOdd
  BigInt total() const;
};

struct SampledTransvection {
  Matrix matrix;
  TransvectionParams params;
};

struct SpTransvectionData {
  Vec line;            // spans im(M - I), first nonzero coordinate 1
  FieldElement mu;     // M = T(mu, line)
  SquareClass mu_class;
};

class GroupError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A concrete classical group: GL_n(q), GU_n(q) (natural module over GF(q^2)
/// with Hermitian Gram I), or Sp_2n(q) with Gram [[0, I], [-I, 0]].
class ClassicalGroup {
 public:
  static constexpr std::uint64_t kDefaultEnumerationLimit = 10'000'000;

  explicit ClassicalGroup(GroupSpec spec);

  const GroupSpec& spec() const { return spec_; }
  const FieldSpec& fields() const { return *fields_; }
  /// Field of the natural module: GF(q^2) for GU, GF(q) otherwise.
  const Field& field() const;
  std::size_t dimension() const { return dim_; }
  const FormData& form() const { return form_; }

  BigInt order() const { return group_order(spec_); }

  /// (x|y); semilinear in x for the Hermitian form, zero for GL.
  FieldElement form_value(std::span<const FieldElement> x, std::span<const FieldElement> y) const;
  /// Row vector r with r.y = (x|y) for all y.
  Vec form_row(std::span<const FieldElement> x) const;

  bool preserves_form(const Matrix& m) const;
  bool contains(const Matrix& m) const;

  Matrix make_transvection(const TransvectionParams& params) const;
  TransvectionCensus transvection_census() const;
  /// Every transvection exactly once (deduplicated from the parameterization).
  std::vector<Matrix> transvections(TransvectionClass cls = TransvectionClass::Any) const;

  /// rank(M - I) over field().
  std::size_t fixed_space_codim(const Matrix& m) const;

  std::vector<Matrix> enumerate(std::uint64_t limit = kDefaultEnumerationLimit) const;
  void for_each_element(const std::function<void(const Matrix&)>& visit,
                        std::uint64_t limit = kDefaultEnumerationLimit) const;

  Matrix sample_uniform(Rng& rng) const;
  SampledTransvection sample_transvection(TransvectionClass cls, Rng& rng) const;
  FieldElement random_element(Rng& rng) const;
  Vec random_vector(Rng& rng) const;

  /// Recovers (line, mu) with M = T(mu, line); throws GroupError if M is not
  /// a symplectic transvection.
  SpTransvectionData extract_transvection_data(const Matrix& m) const;

 private:
  void check_class(TransvectionClass cls) const;
  std::vector<Matrix> generators() const;

  GroupSpec spec_;
  std::shared_ptr<const FieldSpec> fields_;
  std::size_t dim_;
  FormData form_;
};

/// Nonzero c in GF(q^2) with c + c^q = 0.
std::vector<FieldElement> traceless_scalars(const FieldSpec& fs);

/// Uniform random vector from the span of `basis` (plus `offset`).
Vec random_combination(const Field& F, std::span<const Vec> basis, const Vec& offset, Rng& rng);

}  // namespace weilmix
