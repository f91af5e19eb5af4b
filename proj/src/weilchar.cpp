#include "weilmix/weilchar.hpp"

#include <cmath>
#include <stdexcept>

namespace weilmix {

WeilScalar::WeilScalar(Rational a, Rational b, int kappa, std::uint64_t q)
    : a_(std::move(a)), b_(std::move(b)), kappa_(kappa), q_(q) {
  if (kappa != 1 && kappa != -1) throw std::invalid_argument("WeilScalar: kappa must be +1 or -1");
  a_.canonicalize();
  b_.canonicalize();
}

void WeilScalar::check_compatible(const WeilScalar& o) const {
  if (kappa_ != o.kappa_ || q_ != o.q_) throw std::invalid_argument("WeilScalar: mismatched (kappa, q)");
}

double WeilScalar::to_double() const {
  if (b_ == 0) return weilmix::to_double(a_);
  if (kappa_ == -1) throw std::domain_error("WeilScalar::to_double: value is not real");
  return weilmix::to_double(a_) + weilmix::to_double(b_) * std::sqrt(static_cast<double>(q_));
}

WeilScalar WeilScalar::operator+(const WeilScalar& o) const {
  check_compatible(o);
  return {a_ + o.a_, b_ + o.b_, kappa_, q_};
}

WeilScalar WeilScalar::operator-(const WeilScalar& o) const {
  check_compatible(o);
  return {a_ - o.a_, b_ - o.b_, kappa_, q_};
}

WeilScalar WeilScalar::operator*(const WeilScalar& o) const {
  check_compatible(o);
  const Rational d2 = Rational(kappa_) * Rational(BigInt(static_cast<unsigned long>(q_)));
  return {a_ * o.a_ + b_ * o.b_ * d2, a_ * o.b_ + o.a_ * b_, kappa_, q_};
}

WeilScalar WeilScalar::operator-() const { return {-a_, -b_, kappa_, q_}; }

WeilScalar WeilScalar::scaled(const Rational& s) const { return {a_ * s, b_ * s, kappa_, q_}; }

WeilScalar WeilScalar::pow(std::uint64_t e) const {
  WeilScalar result(1, 0, kappa_, q_);
  WeilScalar base = *this;
  while (e) {
    if (e & 1) result = result * base;
    base = base * base;
    e >>= 1;
  }
  return result;
}

std::string to_string(const WeilScalar& x) {
  if (x.b() == 0) return to_string(x.a());
  const std::string delta = x.kappa() == 1 ? "sqrt(" + std::to_string(x.q()) + ")"
                                           : "sqrt(-" + std::to_string(x.q()) + ")";
  std::string out = x.a() == 0 ? "" : to_string(x.a()) + " + ";
  return out + "(" + to_string(x.b()) + ")*" + delta;
}

const char* to_string(WeilVariant v) {
  switch (v) {
    case WeilVariant::GLWeil: return "gl";
    case WeilVariant::GUWeil: return "gu";
    case WeilVariant::SpOddWeil: return "sp-odd";
    case WeilVariant::SpEvenLinear: return "linear";
    case WeilVariant::SpEvenUnitary: return "unitary";
  }
  return "?";
}

WeilVariant default_variant(Family f) {
  switch (f) {
    case Family::GL: return WeilVariant::GLWeil;
    case Family::GU: return WeilVariant::GUWeil;
    case Family::SpOdd: return WeilVariant::SpOddWeil;
    case Family::SpEven: return WeilVariant::SpEvenLinear;
  }
  return WeilVariant::GLWeil;
}

void check_variant(const GroupSpec& spec, WeilVariant v) {
  bool ok = false;
  switch (spec.family) {
    case Family::GL: ok = v == WeilVariant::GLWeil; break;
    case Family::GU: ok = v == WeilVariant::GUWeil; break;
    case Family::SpOdd: ok = v == WeilVariant::SpOddWeil; break;
    case Family::SpEven: ok = v == WeilVariant::SpEvenLinear || v == WeilVariant::SpEvenUnitary; break;
  }
  if (!ok)
    throw std::invalid_argument(std::string("Weil variant '") + to_string(v) + "' does not apply to " +
                                describe(spec));
}

int scalar_kappa(std::uint64_t q) {
  if (q % 2 == 0) return 1;
  return ((q - 1) / 2) % 2 == 0 ? 1 : -1;
}

namespace {

int ambient_dim(const GroupSpec& spec) {
  return (spec.family == Family::SpOdd || spec.family == Family::SpEven) ? 2 * spec.n : spec.n;
}

}  // namespace

BigInt weil_degree(const GroupSpec& spec, WeilVariant v) {
  check_variant(spec, v);
  const BigInt q(static_cast<unsigned long>(spec.q));
  return spec.family == Family::SpEven ? ipow(q, 2 * spec.n) : ipow(q, spec.n);
}

WeilScalar weil_value_by_codim(const GroupSpec& spec, WeilVariant v, int codim) {
  check_variant(spec, v);
  const int dim = ambient_dim(spec);
  if (codim < 0 || codim > dim)
    throw std::invalid_argument("weil_value_by_codim: codim " + std::to_string(codim) + " out of range");
  const int kappa = scalar_kappa(spec.q);
  const Rational q(BigInt(static_cast<unsigned long>(spec.q)));
  const int fixed = dim - codim;
  switch (v) {
    case WeilVariant::GLWeil:
    case WeilVariant::SpEvenLinear: return WeilScalar::rational(rpow(q, fixed), kappa, spec.q);
    case WeilVariant::SpEvenUnitary: return WeilScalar::rational(rpow(-q, fixed), kappa, spec.q);
    case WeilVariant::GUWeil: {
      const Rational sign = spec.n % 2 == 0 ? 1 : -1;
      return WeilScalar::rational(sign * rpow(-q, fixed), kappa, spec.q);
    }
    case WeilVariant::SpOddWeil:
      if (fixed % 2 == 0) return WeilScalar::rational(rpow(q, fixed / 2), kappa, spec.q);
      return WeilScalar(0, rpow(q, (fixed - 1) / 2), kappa, spec.q);
  }
  throw std::logic_error("weil_value_by_codim: unknown variant");
}

Rational weil_ratio_by_codim(const GroupSpec& spec, WeilVariant v, int codim) {
  if (v == WeilVariant::SpOddWeil)
    throw std::invalid_argument("weil_ratio_by_codim: sp-odd values are class dependent");
  const WeilScalar value = weil_value_by_codim(spec, v, codim);
  return value.a() / Rational(weil_degree(spec, v));
}

WeilScalar weil_value_sp_odd_class(int n, std::uint64_t q, const SpClassLabel& label) {
  if (n < 2 || q % 2 == 0) throw std::invalid_argument("weil_value_sp_odd_class: needs n >= 2 and odd q");
  const int kappa = scalar_kappa(q);
  const Rational Q(BigInt(static_cast<unsigned long>(q)));
  const Rational qn1 = rpow(Q, n - 1);
  const Rational k(kappa);
  auto rat = [&](const Rational& a) { return WeilScalar::rational(a, kappa, q); };
  auto sign = [](std::uint64_t e) { return e % 2 == 0 ? Rational(1) : Rational(-1); };
  switch (label.tag) {
    case SpClassTag::Identity: return rat(rpow(Q, n));
    case SpClassTag::A21: return WeilScalar(0, -k * qn1, kappa, q);
    case SpClassTag::A22: return WeilScalar(0, k * qn1, kappa, q);
    case SpClassTag::A31: return rat(qn1);
    case SpClassTag::A32: return rat(-qn1);
    case SpClassTag::C1: return rat(-sign(label.index) * qn1);
    case SpClassTag::C3: return rat(sign(label.index) * qn1);
    case SpClassTag::D21:
    case SpClassTag::D22: return rat(k * qn1);
  }
  throw std::invalid_argument("weil_value_sp_odd_class: unsupported label");
}

}  // namespace weilmix
