#include "weilmix/ffield.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <string>

namespace weilmix {

namespace {

using Poly = std::vector<std::uint32_t>;  // low-degree first

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint32_t inv_mod_p(std::uint32_t a, std::uint32_t p) {
  std::uint64_t result = 1, base = a % p;
  std::uint64_t e = p - 2;
  while (e) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(result);
}

// Remainder of a modulo b over GF(p); b nonzero.
Poly poly_mod(Poly a, const Poly& b, std::uint32_t p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  const std::uint32_t lead_inv = inv_mod_p(b.back(), p);
  while (a.size() >= b.size()) {
    const std::size_t shift = a.size() - b.size();
    const std::uint64_t factor = static_cast<std::uint64_t>(a.back()) * lead_inv % p;
    for (std::size_t i = 0; i <= db; ++i) {
      const std::uint64_t sub = factor * b[i] % p;
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
    }
    trim(a);
  }
  return a;
}

bool is_irreducible(const Poly& f, std::uint32_t p) {
  const std::size_t deg = f.size() - 1;
  if (deg <= 1) return deg == 1;
  // Trial division by every monic polynomial of degree 1..deg/2.
  for (std::size_t d = 1; d <= deg / 2; ++d) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t code = 0; code < count; ++code) {
      Poly g(d + 1, 0);
      std::uint64_t c = code;
      for (std::size_t i = 0; i < d; ++i) {
        g[i] = static_cast<std::uint32_t>(c % p);
        c /= p;
      }
      g[d] = 1;
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

const char* to_string(SquareClass c) {
  switch (c) {
    case SquareClass::Zero: return "Zero";
    case SquareClass::Square: return "Square";
    case SquareClass::NonSquare: return "NonSquare";
  }
  return "?";
}

std::optional<std::pair<std::uint32_t, std::uint32_t>> prime_power(std::uint64_t q) {
  if (q < 2) return std::nullopt;
  std::uint64_t p = 0;
  for (std::uint64_t d = 2; d * d <= q; ++d) {
    if (q % d == 0) {
      p = d;
      break;
    }
  }
  if (p == 0) p = q;
  std::uint32_t k = 0;
  while (q % p == 0) {
    q /= p;
    ++k;
  }
  if (q != 1) return std::nullopt;
  return std::make_pair(static_cast<std::uint32_t>(p), k);
}

Field::Field(std::uint32_t p, std::uint32_t degree) : p_(p), degree_(degree) {
  if (p < 2 || !prime_power(p) || prime_power(p)->second != 1)
    throw FieldError("Field: characteristic " + std::to_string(p) + " is not prime");
  if (degree == 0) throw FieldError("Field: degree must be positive");
  std::uint64_t size = 1;
  for (std::uint32_t i = 0; i < degree; ++i) {
    size *= p;
    if (size > (1ull << 26)) throw FieldError("Field: too large for table arithmetic");
  }
  size_ = static_cast<std::uint32_t>(size);

  // Smallest monic irreducible, comparing c_0 first, then c_1, ...
  const std::uint64_t candidates = size;
  for (std::uint64_t code = 0; code < candidates; ++code) {
    Poly f(degree + 1, 0);
    std::uint64_t c = code;
    for (std::uint32_t i = degree; i-- > 0;) {
      f[i] = static_cast<std::uint32_t>(c % p);
      c /= p;
    }
    f[degree] = 1;
    if (is_irreducible(f, p)) {
      modulus_ = f;
      break;
    }
  }
  if (modulus_.empty()) throw FieldError("Field: no irreducible modulus found");

  auto to_poly = [&](std::uint32_t index) {
    Poly a(degree_, 0);
    for (std::uint32_t i = 0; i < degree_; ++i) {
      a[i] = index % p_;
      index /= p_;
    }
    return a;
  };
  auto to_index = [&](Poly a) {
    a.resize(degree_, 0);
    std::uint32_t idx = 0;
    for (std::uint32_t i = degree_; i-- > 0;) idx = idx * p_ + a[i];
    return idx;
  };
  auto mulmod = [&](std::uint32_t x, std::uint32_t y) -> std::uint32_t {
    if (degree_ == 1) return static_cast<std::uint32_t>(static_cast<std::uint64_t>(x) * y % p_);
    const Poly a = to_poly(x), b = to_poly(y);
    Poly prod(2 * degree_, 0);
    for (std::uint32_t i = 0; i < degree_; ++i)
      for (std::uint32_t j = 0; j < degree_; ++j)
        prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p_);
    return to_index(poly_mod(prod, modulus_, p_));
  };
  auto powmod = [&](std::uint32_t x, std::uint64_t e) {
    std::uint32_t result = 1, base = x;
    while (e) {
      if (e & 1) result = mulmod(result, base);
      base = mulmod(base, base);
      e >>= 1;
    }
    return result;
  };

  const std::uint64_t group_order = size_ - 1;
  const auto factors = distinct_prime_factors(group_order);
  std::uint32_t generator = 0;
  for (std::uint32_t cand = 1; cand < size_; ++cand) {
    bool primitive = true;
    for (auto l : factors) {
      if (powmod(cand, group_order / l) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) {
      generator = cand;
      break;
    }
  }
  if (generator == 0) throw FieldError("Field: no primitive element");

  exp_.resize(group_order);
  log_.assign(size_, 0);
  std::uint32_t cur = 1;
  for (std::uint64_t i = 0; i < group_order; ++i) {
    exp_[i] = FieldElement{cur};
    log_[cur] = static_cast<std::uint32_t>(i);
    cur = mulmod(cur, generator);
  }

  neg_.resize(size_);
  for (std::uint32_t x = 0; x < size_; ++x) {
    Poly a = to_poly(x);
    for (auto& c : a) c = (p_ - c) % p_;
    neg_[x] = to_index(a);
  }
  if (size_ <= 256 && degree_ > 1) {
    add_table_.resize(static_cast<std::size_t>(size_) * size_);
    for (std::uint32_t x = 0; x < size_; ++x) {
      const Poly a = to_poly(x);
      for (std::uint32_t y = 0; y < size_; ++y) {
        Poly b = to_poly(y);
        for (std::uint32_t i = 0; i < degree_; ++i) b[i] = (a[i] + b[i]) % p_;
        add_table_[static_cast<std::size_t>(x) * size_ + y] = to_index(b);
      }
    }
  }
}

FieldElement Field::element(std::uint32_t index) const {
  if (index >= size_) throw FieldError("Field: element index out of range");
  return {index};
}

FieldElement Field::from_int(std::int64_t v) const {
  const std::int64_t p = p_;
  return {static_cast<std::uint32_t>(((v % p) + p) % p)};
}

FieldElement Field::from_coefficients(std::span<const std::uint32_t> coeffs) const {
  if (coeffs.size() != degree_) throw FieldError("Field: coefficient vector has wrong length");
  std::uint32_t idx = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    if (coeffs[i] >= p_) throw FieldError("Field: coefficient out of range");
    idx = idx * p_ + coeffs[i];
  }
  return {idx};
}

std::vector<std::uint32_t> Field::coefficients(FieldElement x) const {
  std::vector<std::uint32_t> out(degree_);
  std::uint32_t idx = x.index;
  for (std::uint32_t i = 0; i < degree_; ++i) {
    out[i] = idx % p_;
    idx /= p_;
  }
  return out;
}

FieldElement Field::add(FieldElement a, FieldElement b) const {
  if (degree_ == 1) return {(a.index + b.index) % p_};
  if (p_ == 2) return {a.index ^ b.index};
  if (!add_table_.empty()) return {add_table_[static_cast<std::size_t>(a.index) * size_ + b.index]};
  std::uint32_t x = a.index, y = b.index, out = 0, scale = 1;
  for (std::uint32_t i = 0; i < degree_; ++i) {
    out += ((x % p_ + y % p_) % p_) * scale;
    x /= p_;
    y /= p_;
    scale *= p_;
  }
  return {out};
}

FieldElement Field::neg(FieldElement a) const { return {neg_[a.index]}; }

FieldElement Field::sub(FieldElement a, FieldElement b) const { return add(a, neg(b)); }

FieldElement Field::mul(FieldElement a, FieldElement b) const {
  if (a.index == 0 || b.index == 0) return zero();
  const std::uint32_t n = size_ - 1;
  std::uint32_t s = log_[a.index] + log_[b.index];
  if (s >= n) s -= n;
  return exp_[s];
}

FieldElement Field::inv(FieldElement a) const {
  if (a.index == 0) throw FieldError("Field: inverse of zero");
  const std::uint32_t n = size_ - 1;
  const std::uint32_t l = log_[a.index];
  return exp_[l == 0 ? 0 : n - l];
}

FieldElement Field::pow(FieldElement a, std::int64_t e) const {
  if (a.index == 0) {
    if (e < 0) throw FieldError("Field: inverse of zero");
    return e == 0 ? one() : zero();
  }
  const std::int64_t n = size_ - 1;
  const std::int64_t l = log_[a.index];
  const std::int64_t em = ((e % n) + n) % n;
  return exp_[static_cast<std::size_t>((l * em) % n)];
}

std::uint32_t Field::log(FieldElement x) const {
  if (x.index == 0) throw FieldError("Field: log of zero");
  return log_[x.index];
}

std::uint64_t Field::multiplicative_order(FieldElement x) const {
  const std::uint64_t n = size_ - 1;
  const std::uint64_t l = log(x);
  std::uint64_t a = n, b = l;
  while (b) {
    const auto t = a % b;
    a = b;
    b = t;
  }
  return n / a;
}

FieldSpec::FieldSpec(std::uint32_t p, std::uint32_t k)
    : p_(p), k_(k), q_(0), kappa_(0), base_(p, k), ext_(p, 2 * k) {
  q_ = base_.size();
  if (p_ != 2) kappa_ = ((q_ - 1) / 2) % 2 == 0 ? 1 : -1;

  // A root of the base modulus in GF(q^2) fixes the embedding.
  FieldElement root = ext_.zero();
  if (k_ == 1) {
    embed_.resize(q_);
    for (std::uint32_t c = 0; c < q_; ++c) embed_[c] = ext_.from_int(c);
  } else {
    const auto& m = base_.modulus();
    bool found = false;
    for (std::uint32_t idx = 0; idx < ext_.size() && !found; ++idx) {
      const FieldElement x{idx};
      FieldElement acc = ext_.zero();
      for (std::size_t i = m.size(); i-- > 0;) acc = ext_.add(ext_.mul(acc, x), ext_.from_int(m[i]));
      if (acc == ext_.zero()) {
        root = x;
        found = true;
      }
    }
    if (!found) throw FieldError("FieldSpec: base modulus has no root in the extension");
    embed_.resize(q_);
    for (std::uint32_t idx = 0; idx < q_; ++idx) {
      const auto c = base_.coefficients({idx});
      FieldElement acc = ext_.zero();
      for (std::size_t i = c.size(); i-- > 0;) acc = ext_.add(ext_.mul(acc, root), ext_.from_int(c[i]));
      embed_[idx] = acc;
    }
  }
  restrict_.assign(ext_.size(), -1);
  for (std::uint32_t idx = 0; idx < q_; ++idx) restrict_[embed_[idx].index] = idx;

  gamma_ = ext_.pow(theta(), q_ + 1);
  eta_ = ext_.pow(theta(), static_cast<std::int64_t>(q_) - 1);
}

std::shared_ptr<const FieldSpec> FieldSpec::make(std::uint64_t q, std::uint64_t limit) {
  const auto pk = prime_power(q);
  if (!pk) throw FieldError("ff_make: " + std::to_string(q) + " is not a prime power");
  if (q > limit)
    throw FieldError("ff_make: q = " + std::to_string(q) + " exceeds the configured limit " +
                     std::to_string(limit));
  static std::mutex mu;
  static std::map<std::uint64_t, std::shared_ptr<const FieldSpec>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(q);
  if (it != cache.end()) return it->second;
  auto spec = std::make_shared<const FieldSpec>(pk->first, pk->second);
  cache.emplace(q, spec);
  return spec;
}

std::optional<FieldElement> FieldSpec::restrict_to_base(FieldElement x) const {
  const auto r = restrict_.at(x.index);
  if (r < 0) return std::nullopt;
  return FieldElement{static_cast<std::uint32_t>(r)};
}

SquareClass FieldSpec::square_class(FieldElement x) const {
  if (x == base_.zero()) return SquareClass::Zero;
  if (!odd()) return SquareClass::Square;
  return base_.pow(x, (q_ - 1) / 2) == base_.one() ? SquareClass::Square : SquareClass::NonSquare;
}

std::vector<FieldElement> FieldSpec::nonzero_squares() const {
  std::vector<FieldElement> out;
  for (std::uint32_t i = 1; i < q_; ++i)
    if (square_class({i}) == SquareClass::Square) out.push_back({i});
  return out;
}

std::vector<FieldElement> FieldSpec::nonsquares() const {
  std::vector<FieldElement> out;
  for (std::uint32_t i = 1; i < q_; ++i)
    if (square_class({i}) == SquareClass::NonSquare) out.push_back({i});
  return out;
}

TraceEigenData FieldSpec::trace_eigen_data(FieldElement t) const {
  if (!odd()) throw FieldError("trace_eigen_data: q must be odd");
  const Field& F = base_;
  const FieldElement disc = F.sub(F.mul(t, t), F.from_int(4));
  if (disc == F.zero()) throw FieldError("trace_eigen_data: trace is +-2");
  TraceEigenData out;
  out.split = square_class(disc) == SquareClass::Square;

  const Field& E = ext_;
  const auto dlog = E.log(embed(disc));  // even: GF(q) lies in the squares of GF(q^2)
  const FieldElement root = E.exp(dlog / 2);
  out.lambda = E.div(E.add(embed(t), root), E.from_int(2));
  const std::uint64_t l = E.log(out.lambda);
  if (out.split) {
    if (l % (q_ + 1) != 0) throw std::logic_error("trace_eigen_data: split eigenvalue outside GF(q)");
    const std::uint64_t ord = q_ - 1;
    const std::uint64_t i = (l / (q_ + 1)) % ord;
    out.index = std::min(i, ord - i);
  } else {
    if (l % (q_ - 1) != 0) throw std::logic_error("trace_eigen_data: nonsplit eigenvalue has norm != 1");
    const std::uint64_t ord = q_ + 1;
    const std::uint64_t j = (l / (q_ - 1)) % ord;
    out.index = std::min(j, ord - j);
  }
  return out;
}

std::int64_t count_adjacent_squares(std::uint64_t q) {
  const auto spec = FieldSpec::make(q);
  if (!spec->odd()) throw FieldError("count_adjacent_squares: q must be odd");
  const Field& F = spec->base();
  std::int64_t count = 0;
  for (auto x : spec->nonzero_squares())
    if (spec->square_class(F.add(x, F.one())) == SquareClass::Square) ++count;
  return count;
}

Sq2Census sq2_census(std::uint64_t q) {
  const auto spec = FieldSpec::make(q);
  if (!spec->odd()) throw FieldError("sq2_census: q must be odd");
  const Field& F = spec->base();
  const bool one_mod_four = spec->kappa() == 1;
  const FieldElement four = F.from_int(4);
  Sq2Census census;
  for (auto alpha : spec->nonzero_squares()) {
    if (alpha == four) continue;
    const auto data = spec->trace_eigen_data(F.sub(F.from_int(2), alpha));
    Sq2Entry e;
    e.alpha = alpha;
    e.split = data.split;
    e.index = data.index;
    const bool even = data.index % 2 == 0;
    if (data.split) {
      ++census.split_count;
      e.parity_holds = one_mod_four ? even : !even;
    } else {
      ++census.nonsplit_count;
      e.parity_holds = one_mod_four ? !even : even;
    }
    if (!e.parity_holds)
      throw std::logic_error("sq2_census: exponent parity claim fails at q = " + std::to_string(q));
    census.entries.push_back(e);
  }
  return census;
}

}  // namespace weilmix
