#include "weilmix/clgroups.hpp"

#include <deque>
#include <unordered_set>

namespace weilmix {

namespace {

constexpr int kRejectionCap = 10'000;

// Vector whose base-|F| digits are the coordinates of `index`.
Vec vector_from_index(std::uint64_t index, std::size_t dim, std::uint32_t field_size) {
  Vec v(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    v[i] = FieldElement{static_cast<std::uint32_t>(index % field_size)};
    index /= field_size;
  }
  return v;
}

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t e, std::uint64_t cap) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (out > cap / base) return cap + 1;
    out *= base;
  }
  return out;
}

// First nonzero coordinate, or dim when zero.
std::size_t leading_index(const Vec& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i].index != 0) return i;
  return v.size();
}

bool is_normalized(const Vec& v) {
  const auto i = leading_index(v);
  return i < v.size() && v[i] == FieldElement{1};
}

}  // namespace

const char* to_string(Family f) {
  switch (f) {
    case Family::GL: return "gl";
    case Family::GU: return "gu";
    case Family::SpOdd: return "sp-odd";
    case Family::SpEven: return "sp-even";
  }
  return "?";
}

const char* to_string(TransvectionClass c) {
  switch (c) {
    case TransvectionClass::Unique: return "unique";
    case TransvectionClass::C: return "C";
    case TransvectionClass::CStar: return "C*";
    case TransvectionClass::Any: return "any";
  }
  return "?";
}

std::string describe(const GroupSpec& spec) {
  return std::string(to_string(spec.family)) + "(n=" + std::to_string(spec.n) +
         ", q=" + std::to_string(spec.q) + ")";
}

void validate(const GroupSpec& spec, bool transvection_features) {
  const auto pk = prime_power(spec.q);
  if (!pk) throw GroupError("q = " + std::to_string(spec.q) + " is not a prime power");
  if (spec.n < 1) throw GroupError("n must be at least 1");
  const bool odd = pk->first != 2;
  switch (spec.family) {
    case Family::SpOdd:
      if (!odd) throw GroupError("sp-odd requires odd q");
      break;
    case Family::SpEven:
      if (odd) throw GroupError("sp-even requires even q");
      break;
    case Family::GL:
    case Family::GU:
      if (transvection_features && spec.n < 2)
        throw GroupError(std::string(to_string(spec.family)) + " transvection features require n >= 2");
      break;
  }
}

BigInt gl_order(int n, const BigInt& q) {
  BigInt out = ipow(q, static_cast<std::uint64_t>(n) * (n - 1) / 2);
  for (int i = 1; i <= n; ++i) out *= ipow(q, i) - 1;
  return out;
}

BigInt gu_order(int n, const BigInt& q) {
  BigInt out = ipow(q, static_cast<std::uint64_t>(n) * (n - 1) / 2);
  for (int i = 1; i <= n; ++i) out *= ipow(q, i) - (i % 2 == 0 ? 1 : -1);
  return out;
}

BigInt sp_order(int n, const BigInt& q) {
  BigInt out = ipow(q, static_cast<std::uint64_t>(n) * n);
  for (int i = 1; i <= n; ++i) out *= ipow(q, 2 * i) - 1;
  return out;
}

BigInt group_order(const GroupSpec& spec) {
  const BigInt q(static_cast<unsigned long>(spec.q));
  switch (spec.family) {
    case Family::GL: return gl_order(spec.n, q);
    case Family::GU: return gu_order(spec.n, q);
    case Family::SpOdd:
    case Family::SpEven: return sp_order(spec.n, q);
  }
  return 0;
}

BigInt TransvectionCensus::total() const {
  BigInt t = 0;
  for (const auto& s : class_sizes) t += s;
  return t;
}

std::vector<FieldElement> traceless_scalars(const FieldSpec& fs) {
  std::vector<FieldElement> out;
  const Field& E = fs.ext();
  for (std::uint32_t i = 1; i < E.size(); ++i) {
    const FieldElement c{i};
    if (E.add(c, fs.frobenius(c)) == E.zero()) out.push_back(c);
  }
  return out;
}

Vec random_combination(const Field& F, std::span<const Vec> basis, const Vec& offset, Rng& rng) {
  Vec out = offset;
  for (const auto& b : basis) {
    const FieldElement coeff{static_cast<std::uint32_t>(rng.below(F.size()))};
    if (coeff.index == 0) continue;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = F.add(out[i], F.mul(coeff, b[i]));
  }
  return out;
}

ClassicalGroup::ClassicalGroup(GroupSpec spec) : spec_(spec) {
  validate(spec_);
  fields_ = FieldSpec::make(spec_.q);
  const std::size_t n = static_cast<std::size_t>(spec_.n);
  switch (spec_.family) {
    case Family::GL:
      dim_ = n;
      form_.kind = FormKind::None;
      break;
    case Family::GU:
      dim_ = n;
      form_.kind = FormKind::Hermitian;
      form_.gram = Matrix::identity(n);
      break;
    case Family::SpOdd:
    case Family::SpEven: {
      dim_ = 2 * n;
      form_.kind = FormKind::Symplectic;
      const Field& F = fields_->base();
      form_.gram = Matrix(dim_, dim_);
      for (std::size_t i = 0; i < n; ++i) {
        form_.gram(i, n + i) = F.one();
        form_.gram(n + i, i) = F.neg(F.one());
      }
      break;
    }
  }
}

const Field& ClassicalGroup::field() const {
  return spec_.family == Family::GU ? fields_->ext() : fields_->base();
}

FieldElement ClassicalGroup::form_value(std::span<const FieldElement> x,
                                        std::span<const FieldElement> y) const {
  const Field& F = field();
  return dot(F, form_row(x), y);
}

Vec ClassicalGroup::form_row(std::span<const FieldElement> x) const {
  const Field& F = field();
  Vec r(dim_, F.zero());
  switch (form_.kind) {
    case FormKind::None: break;
    case FormKind::Hermitian:
      for (std::size_t j = 0; j < dim_; ++j) r[j] = fields_->frobenius(x[j]);
      break;
    case FormKind::Symplectic: {
      const std::size_t n = dim_ / 2;
      for (std::size_t j = 0; j < n; ++j) {
        r[j] = F.neg(x[n + j]);
        r[n + j] = x[j];
      }
      break;
    }
  }
  return r;
}

bool ClassicalGroup::preserves_form(const Matrix& m) const {
  const Field& F = field();
  switch (form_.kind) {
    case FormKind::None: return true;
    case FormKind::Symplectic:
      return mul(F, mul(F, transpose(m), form_.gram), m) == form_.gram;
    case FormKind::Hermitian: {
      const Matrix conj = map_entries(m, [&](FieldElement e) { return fields_->frobenius(e); });
      return mul(F, mul(F, transpose(m), form_.gram), conj) == form_.gram;
    }
  }
  return false;
}

bool ClassicalGroup::contains(const Matrix& m) const {
  if (m.rows != dim_ || m.cols != dim_) return false;
  for (auto e : m.data)
    if (e.index >= field().size()) return false;
  return rank(field(), m) == dim_ && preserves_form(m);
}

Matrix ClassicalGroup::make_transvection(const TransvectionParams& params) const {
  validate(spec_, true);
  const Field& F = field();
  Matrix m = Matrix::identity(dim_);
  auto check_dim = [&](const Vec& v, const char* what) {
    if (v.size() != dim_) throw GroupError(std::string("make_transvection: ") + what + " has wrong dimension");
  };

  if (const auto* gl = std::get_if<GLTransvectionParams>(&params)) {
    if (spec_.family != Family::GL) throw GroupError("make_transvection: GL parameters for a non-GL group");
    check_dim(gl->v, "v");
    check_dim(gl->w_star, "w*");
    if (is_zero(gl->v)) throw GroupError("make_transvection: v must be nonzero");
    if (is_zero(gl->w_star)) throw GroupError("make_transvection: w* must be nonzero");
    if (dot(F, gl->w_star, gl->v) != F.zero()) throw GroupError("make_transvection: w*(v) must be 0");
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) m(i, j) = F.add(m(i, j), F.mul(gl->v[i], gl->w_star[j]));
    return m;
  }
  if (const auto* gu = std::get_if<GUTransvectionParams>(&params)) {
    if (spec_.family != Family::GU) throw GroupError("make_transvection: GU parameters for a non-GU group");
    check_dim(gu->v, "v");
    if (is_zero(gu->v)) throw GroupError("make_transvection: v must be nonzero");
    if (form_value(gu->v, gu->v) != F.zero()) throw GroupError("make_transvection: v must be isotropic");
    if (gu->c == F.zero()) throw GroupError("make_transvection: c must be nonzero");
    if (F.add(gu->c, fields_->frobenius(gu->c)) != F.zero())
      throw GroupError("make_transvection: c + c^q must be 0");
    const Vec row = form_row(gu->v);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j)
        m(i, j) = F.add(m(i, j), F.mul(gu->c, F.mul(gu->v[i], row[j])));
    return m;
  }
  const auto& sp = std::get<SpTransvectionParams>(params);
  if (spec_.family != Family::SpOdd && spec_.family != Family::SpEven)
    throw GroupError("make_transvection: symplectic parameters for a non-symplectic group");
  check_dim(sp.v, "v");
  if (sp.alpha == F.zero()) throw GroupError("make_transvection: alpha must be nonzero");
  if (is_zero(sp.v)) throw GroupError("make_transvection: v must be nonzero");
  const Vec row = form_row(sp.v);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      m(i, j) = F.add(m(i, j), F.mul(sp.alpha, F.mul(sp.v[i], row[j])));
  return m;
}

TransvectionCensus ClassicalGroup::transvection_census() const {
  validate(spec_, true);
  const BigInt q(static_cast<unsigned long>(spec_.q));
  const int n = spec_.n;
  TransvectionCensus c;
  switch (spec_.family) {
    case Family::GL:
      c.class_sizes.push_back((ipow(q, n) - 1) * (ipow(q, n - 1) - 1) / (q - 1));
      break;
    case Family::GU: {
      const BigInt a = ipow(q, n) - (n % 2 == 0 ? 1 : -1);
      const BigInt b = ipow(q, n - 1) - ((n - 1) % 2 == 0 ? 1 : -1);
      c.class_sizes.push_back(a * b / (q + 1));
      break;
    }
    case Family::SpEven:
      c.class_sizes.push_back(ipow(q, 2 * n) - 1);
      break;
    case Family::SpOdd: {
      const BigInt half = (ipow(q, 2 * n) - 1) / 2;
      c.class_sizes = {half, half};
      break;
    }
  }
  return c;
}

void ClassicalGroup::check_class(TransvectionClass cls) const {
  const bool sp_odd = spec_.family == Family::SpOdd;
  const bool ok = cls == TransvectionClass::Any ||
                  (sp_odd ? (cls == TransvectionClass::C || cls == TransvectionClass::CStar)
                          : cls == TransvectionClass::Unique);
  if (!ok)
    throw GroupError(std::string("transvection class tag '") + to_string(cls) + "' is invalid for " +
                     describe(spec_));
}

std::vector<Matrix> ClassicalGroup::transvections(TransvectionClass cls) const {
  validate(spec_, true);
  check_class(cls);
  const Field& F = field();
  const std::uint64_t nvec = checked_pow(F.size(), dim_, 1ull << 32);
  if (nvec > (1ull << 32)) throw GroupError("transvections: vector space too large to enumerate");
  std::vector<Matrix> out;

  switch (spec_.family) {
    case Family::GL:
      // w* normalized (leading coordinate 1) picks one point of each (q-1)-fibre.
      for (std::uint64_t wi = 1; wi < nvec; ++wi) {
        const Vec w = vector_from_index(wi, dim_, F.size());
        if (!is_normalized(w)) continue;
        for (std::uint64_t vi = 1; vi < nvec; ++vi) {
          const Vec v = vector_from_index(vi, dim_, F.size());
          if (dot(F, w, v) != F.zero()) continue;
          out.push_back(make_transvection(GLTransvectionParams{v, w}));
        }
      }
      break;
    case Family::GU: {
      const auto cs = traceless_scalars(*fields_);
      for (std::uint64_t vi = 1; vi < nvec; ++vi) {
        const Vec v = vector_from_index(vi, dim_, F.size());
        if (!is_normalized(v) || form_value(v, v) != F.zero()) continue;
        for (auto c : cs) out.push_back(make_transvection(GUTransvectionParams{v, c}));
      }
      break;
    }
    case Family::SpOdd:
    case Family::SpEven:
      for (std::uint64_t vi = 1; vi < nvec; ++vi) {
        const Vec v = vector_from_index(vi, dim_, F.size());
        if (!is_normalized(v)) continue;
        for (std::uint32_t a = 1; a < F.size(); ++a) {
          const FieldElement alpha{a};
          const auto sc = fields_->square_class(alpha);
          if (cls == TransvectionClass::C && sc != SquareClass::Square) continue;
          if (cls == TransvectionClass::CStar && sc != SquareClass::NonSquare) continue;
          out.push_back(make_transvection(SpTransvectionParams{alpha, v}));
        }
      }
      break;
  }
  return out;
}

std::size_t ClassicalGroup::fixed_space_codim(const Matrix& m) const {
  return rank(field(), sub(field(), m, Matrix::identity(dim_)));
}

std::vector<Matrix> ClassicalGroup::generators() const {
  std::vector<Matrix> gens;
  if (spec_.family == Family::GU) {
    // Transvections do not generate SU_3(2) (there they sit inside the
    // monomial group), so a norm-1 diagonal and two fixed-seed uniform
    // elements are added. The closure is checked against the order.
    if (spec_.n >= 2) gens = transvections(TransvectionClass::Any);
    Matrix d = Matrix::identity(dim_);
    d(0, 0) = fields_->eta();
    gens.push_back(d);
    Rng rng(0x9e3779b97f4a7c15ull);
    for (int i = 0; i < 2; ++i) gens.push_back(sample_uniform(rng));
  } else {
    gens = transvections(TransvectionClass::Any);
  }
  return gens;
}

void ClassicalGroup::for_each_element(const std::function<void(const Matrix&)>& visit,
                                      std::uint64_t limit) const {
  const BigInt ord = order();
  if (ord > BigInt(static_cast<unsigned long>(limit)))
    throw GroupError("enumerate: |" + describe(spec_) + "| = " + ord.get_str() +
                     " exceeds the enumeration limit " + std::to_string(limit));
  const Field& F = field();

  if (spec_.family == Family::GL) {
    const std::uint64_t total = checked_pow(F.size(), dim_ * dim_, 50 * limit);
    if (total > 50 * limit) throw GroupError("enumerate: too many candidate matrices for GL filtering");
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      Matrix m(dim_, dim_);
      m.data = vector_from_index(idx, dim_ * dim_, F.size());
      if (rank(F, m) == dim_) visit(m);
    }
    return;
  }

  const auto gens = generators();
  std::unordered_set<Matrix, MatrixHash> seen;
  std::deque<Matrix> frontier;
  const Matrix id = Matrix::identity(dim_);
  seen.insert(id);
  frontier.push_back(id);
  while (!frontier.empty()) {
    const Matrix cur = std::move(frontier.front());
    frontier.pop_front();
    for (const auto& g : gens) {
      Matrix next = mul(F, cur, g);
      if (seen.insert(next).second) frontier.push_back(std::move(next));
    }
  }
  if (BigInt(static_cast<unsigned long>(seen.size())) != ord)
    throw std::logic_error("enumerate: closure of the generating set has " + std::to_string(seen.size()) +
                           " elements, expected " + ord.get_str());
  for (const auto& m : seen) visit(m);
}

std::vector<Matrix> ClassicalGroup::enumerate(std::uint64_t limit) const {
  std::vector<Matrix> out;
  for_each_element([&](const Matrix& m) { out.push_back(m); }, limit);
  return out;
}

FieldElement ClassicalGroup::random_element(Rng& rng) const {
  return FieldElement{static_cast<std::uint32_t>(rng.below(field().size()))};
}

Vec ClassicalGroup::random_vector(Rng& rng) const {
  Vec v(dim_);
  for (auto& e : v) e = random_element(rng);
  return v;
}

Matrix ClassicalGroup::sample_uniform(Rng& rng) const {
  const Field& F = field();
  Matrix m(dim_, dim_);
  auto set_column = [&](std::size_t j, const Vec& v) {
    for (std::size_t i = 0; i < dim_; ++i) m(i, j) = v[i];
  };

  switch (spec_.family) {
    case Family::GL:
      for (int attempt = 0; attempt < kRejectionCap; ++attempt) {
        for (auto& e : m.data) e = random_element(rng);
        if (rank(F, m) == dim_) return m;
      }
      throw std::runtime_error("sample_uniform: rejection cap reached for " + describe(spec_));

    case Family::GU: {
      // Columns form an orthonormal basis; column i is uniform on the unit
      // sphere of the orthogonal complement of the previous columns.
      std::vector<Vec> rows;
      for (std::size_t col = 0; col < dim_; ++col) {
        Matrix constraints(rows.size(), dim_);
        for (std::size_t r = 0; r < rows.size(); ++r)
          for (std::size_t j = 0; j < dim_; ++j) constraints(r, j) = rows[r][j];
        const auto basis = rows.empty() ? kernel_basis(F, Matrix(1, dim_)) : kernel_basis(F, constraints);
        const Vec zero(dim_, F.zero());
        bool accepted = false;
        for (int attempt = 0; attempt < kRejectionCap; ++attempt) {
          const Vec y = random_combination(F, basis, zero, rng);
          if (form_value(y, y) == F.one()) {
            set_column(col, y);
            rows.push_back(form_row(y));
            accepted = true;
            break;
          }
        }
        if (!accepted) throw std::runtime_error("sample_uniform: rejection cap reached for " + describe(spec_));
      }
      return m;
    }

    case Family::SpOdd:
    case Family::SpEven: {
      // Images of e_1, f_1, e_2, f_2, ... with (e_i|f_j) = delta_ij and all
      // other pairings 0.
      const std::size_t n = dim_ / 2;
      std::vector<Vec> rows;  // form rows of the images chosen so far
      for (std::size_t i = 0; i < n; ++i) {
        for (int which = 0; which < 2; ++which) {
          Matrix a(std::max<std::size_t>(rows.size(), 1), dim_);
          Vec b(a.rows, F.zero());
          for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t j = 0; j < dim_; ++j) a(r, j) = rows[r][j];
          if (which == 1) b[rows.size() - 1] = F.one();  // (image of e_i | y) = 1
          const auto sol = solve(F, a, b);
          if (!sol) throw std::logic_error("sample_uniform: inconsistent symplectic constraints");
          Vec y;
          bool accepted = false;
          for (int attempt = 0; attempt < kRejectionCap; ++attempt) {
            y = random_combination(F, sol->kernel, sol->particular, rng);
            if (!is_zero(y)) {
              accepted = true;
              break;
            }
          }
          if (!accepted) throw std::runtime_error("sample_uniform: rejection cap reached for " + describe(spec_));
          set_column(which == 0 ? i : n + i, y);
          rows.push_back(form_row(y));
        }
      }
      return m;
    }
  }
  throw std::logic_error("sample_uniform: unknown family");
}

SampledTransvection ClassicalGroup::sample_transvection(TransvectionClass cls, Rng& rng) const {
  validate(spec_, true);
  check_class(cls);
  const Field& F = field();
  auto nonzero_vector = [&]() {
    for (int attempt = 0; attempt < kRejectionCap; ++attempt) {
      Vec v = random_vector(rng);
      if (!is_zero(v)) return v;
    }
    throw std::runtime_error("sample_transvection: rejection cap reached");
  };

  switch (spec_.family) {
    case Family::GL: {
      const Vec w = nonzero_vector();
      Matrix wm(1, dim_);
      wm.data = w;
      const auto basis = kernel_basis(F, wm);
      const Vec zero(dim_, F.zero());
      for (int attempt = 0; attempt < kRejectionCap; ++attempt) {
        Vec v = random_combination(F, basis, zero, rng);
        if (is_zero(v)) continue;
        GLTransvectionParams p{v, w};
        return {make_transvection(p), p};
      }
      throw std::runtime_error("sample_transvection: rejection cap reached");
    }
    case Family::GU: {
      static thread_local std::vector<FieldElement> cache;
      static thread_local std::uint64_t cache_q = 0;
      if (cache_q != spec_.q) {
        cache = traceless_scalars(*fields_);
        cache_q = spec_.q;
      }
      for (int attempt = 0; attempt < kRejectionCap; ++attempt) {
        Vec v = random_vector(rng);
        if (is_zero(v) || form_value(v, v) != F.zero()) continue;
        GUTransvectionParams p{v, cache[rng.below(cache.size())]};
        return {make_transvection(p), p};
      }
      throw std::runtime_error("sample_transvection: rejection cap reached");
    }
    case Family::SpOdd:
    case Family::SpEven: {
      const Vec v = nonzero_vector();
      FieldElement alpha;
      for (int attempt = 0; attempt < kRejectionCap; ++attempt) {
        alpha = FieldElement{static_cast<std::uint32_t>(1 + rng.below(F.size() - 1))};
        const auto sc = fields_->square_class(alpha);
        if (cls == TransvectionClass::C && sc != SquareClass::Square) continue;
        if (cls == TransvectionClass::CStar && sc != SquareClass::NonSquare) continue;
        SpTransvectionParams p{alpha, v};
        return {make_transvection(p), p};
      }
      throw std::runtime_error("sample_transvection: rejection cap reached");
    }
  }
  throw std::logic_error("sample_transvection: unknown family");
}

SpTransvectionData ClassicalGroup::extract_transvection_data(const Matrix& m) const {
  if (spec_.family != Family::SpOdd && spec_.family != Family::SpEven)
    throw GroupError("extract_transvection_data: symplectic groups only");
  const Field& F = field();
  if (m.rows != dim_ || m.cols != dim_ || !preserves_form(m))
    throw GroupError("extract_transvection_data: matrix is not symplectic");
  const Matrix nmat = sub(F, m, Matrix::identity(dim_));
  if (rank(F, nmat) != 1) throw GroupError("extract_transvection_data: rank(M - I) != 1");

  Vec v;
  for (std::size_t j = 0; j < dim_ && v.empty(); ++j) {
    const Vec col = nmat.column(j);
    if (!is_zero(col)) v = col;
  }
  const std::size_t lead = leading_index(v);
  const FieldElement scale = F.inv(v[lead]);
  for (auto& e : v) e = F.mul(e, scale);

  const Vec row = form_row(v);
  std::size_t k = 0;
  while (k < dim_ && row[k] == F.zero()) ++k;
  // Column k of M - I equals mu (v|e_k) v.
  const FieldElement mu = F.div(nmat(lead, k), row[k]);
  SpTransvectionData out{v, mu, fields_->square_class(mu)};
  if (make_transvection(SpTransvectionParams{mu, v}) != m)
    throw GroupError("extract_transvection_data: matrix is not a symplectic transvection");
  return out;
}

}  // namespace weilmix
