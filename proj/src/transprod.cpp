#include "weilmix/transprod.hpp"

#include <stdexcept>

#include "weilmix/ffield.hpp"

namespace weilmix {

namespace {

BigInt neg_one_pow(long e) { return (e % 2 == 0) ? BigInt(1) : BigInt(-1); }

CodimDistribution normalize(const BigInt& e0, const BigInt& e1, const BigInt& e2, const BigInt& den) {
  CodimDistribution d;
  d.probs = {make_rational(e0, den), make_rational(e1, den), make_rational(e2, den)};
  return d;
}

void require_n2(int n, const char* who) {
  if (n < 2) throw std::invalid_argument(std::string(who) + ": n must be at least 2");
}

void require_sp_odd(int n, std::uint64_t q, const char* who) {
  require_n2(n, who);
  if (q % 2 == 0) throw std::invalid_argument(std::string(who) + ": q must be odd");
}

const ClassicalGroup& require_symplectic(const ClassicalGroup& G, const char* who) {
  if (G.spec().family != Family::SpOdd) throw std::invalid_argument(std::string(who) + ": needs sp-odd");
  return G;
}

SpClassLabel from_trace(const FieldSpec& fs, FieldElement t) {
  const auto data = fs.trace_eigen_data(t);
  return {data.split ? SpClassTag::C3 : SpClassTag::C1, data.index};
}

SpClassLabel swap_classes(SpClassLabel l) {
  switch (l.tag) {
    case SpClassTag::A21: l.tag = SpClassTag::A22; break;
    case SpClassTag::A22: l.tag = SpClassTag::A21; break;
    case SpClassTag::D21: l.tag = SpClassTag::D22; break;
    case SpClassTag::D22: l.tag = SpClassTag::D21; break;
    default: break;
  }
  return l;
}

}  // namespace

CodimDistribution codim_dist_gl(int n, const BigInt& q, const GlPairCoefficients& c) {
  require_n2(n, "codim_dist_gl");
  const BigInt qn = ipow(q, n), qn1 = ipow(q, n - 1), q2 = q * q;
  const BigInt den = (qn - 1) * (qn1 - 1);
  const BigInt e2 = c.e2[0] * ipow(q, 2 * n - 1) + c.e2[1] * qn + c.e2[2] * qn1 + c.e2[3] * q2;
  const BigInt e1 = c.e1[0] * qn + c.e1[1] * qn1 + c.e1[2] * q2 + c.e1[3] * q + c.e1[4];
  const BigInt e0 = c.e0[0] * q + c.e0[1];
  return normalize(e0, e1, e2, den);
}

CodimDistribution codim_dist_gu(int n, const BigInt& q) {
  require_n2(n, "codim_dist_gu");
  const BigInt qn = ipow(q, n), qn1 = ipow(q, n - 1);
  const BigInt den = (qn - neg_one_pow(n)) * (qn1 - neg_one_pow(n - 1));
  const BigInt e2 = ipow(q, 2 * n - 1) - neg_one_pow(n - 1) * qn - neg_one_pow(n) * qn1 - q * q;
  return normalize(q + 1, q * q - q - 2, e2, den);
}

CodimDistribution codim_dist_sp(int n, const BigInt& q) {
  if (n < 1) throw std::invalid_argument("codim_dist_sp: n must be at least 1");
  const BigInt q2n = ipow(q, 2 * n);
  return normalize(1, q - 2, q2n - q, q2n - 1);
}

CodimDistribution codim_dist(const GroupSpec& spec, const GlPairCoefficients& coeffs) {
  validate(spec, true);
  const BigInt q(static_cast<unsigned long>(spec.q));
  switch (spec.family) {
    case Family::GL: return codim_dist_gl(spec.n, q, coeffs);
    case Family::GU: return codim_dist_gu(spec.n, q);
    case Family::SpOdd:
    case Family::SpEven: return codim_dist_sp(spec.n, q);
  }
  throw std::logic_error("codim_dist: unknown family");
}

std::string to_string(const SpClassLabel& l) {
  switch (l.tag) {
    case SpClassTag::Identity: return "Identity";
    case SpClassTag::A21: return "A21";
    case SpClassTag::A22: return "A22";
    case SpClassTag::A31: return "A31";
    case SpClassTag::A32: return "A32";
    case SpClassTag::C1: return "C1(" + std::to_string(l.index) + ")";
    case SpClassTag::C3: return "C3(" + std::to_string(l.index) + ")";
    case SpClassTag::D21: return "D21";
    case SpClassTag::D22: return "D22";
  }
  return "?";
}

const char* to_string(SpPairMode m) {
  switch (m) {
    case SpPairMode::PairsFromC: return "c-pairs";
    case SpPairMode::PairsFromCStar: return "cstar-pairs";
    case SpPairMode::AllTransvections: return "all";
  }
  return "?";
}

Rational SpOddClassDistribution::total() const {
  Rational t = 0;
  for (const auto& [label, p] : probs) t += p;
  return t;
}

std::array<Rational, 3> SpOddClassDistribution::rank_marginal() const {
  std::array<Rational, 3> out{0, 0, 0};
  for (const auto& [label, p] : probs) {
    switch (label.tag) {
      case SpClassTag::Identity: out[0] += p; break;
      case SpClassTag::A21:
      case SpClassTag::A22: out[1] += p; break;
      default: out[2] += p; break;
    }
  }
  return out;
}

SpClassLabel classify_sp_pair(const ClassicalGroup& G, FieldElement alpha, const Vec& u, FieldElement beta,
                              const Vec& v) {
  require_symplectic(G, "classify_sp_pair");
  const FieldSpec& fs = G.fields();
  const Field& F = fs.base();
  if (alpha == F.zero() || beta == F.zero()) throw std::invalid_argument("classify_sp_pair: zero parameter");
  if (is_zero(u) || is_zero(v)) throw std::invalid_argument("classify_sp_pair: zero vector");

  // v = t u: T(beta, t u) = T(beta t^2, u).
  std::size_t lead = 0;
  while (u[lead] == F.zero()) ++lead;
  const FieldElement t = F.div(v[lead], u[lead]);
  bool dependent = true;
  for (std::size_t i = 0; i < u.size() && dependent; ++i) dependent = F.mul(t, u[i]) == v[i];
  if (dependent) {
    const FieldElement sum = F.add(alpha, F.mul(beta, F.mul(t, t)));
    if (sum == F.zero()) return {SpClassTag::Identity, 0};
    return {fs.square_class(sum) == SquareClass::Square ? SpClassTag::A21 : SpClassTag::A22, 0};
  }

  const FieldElement s = G.form_value(u, v);
  if (s == F.zero()) {
    const FieldElement m = F.neg(F.mul(alpha, beta));
    return {fs.square_class(m) == SquareClass::Square ? SpClassTag::A31 : SpClassTag::A32, 0};
  }

  // Replace u by u/s so that (u|v) = 1; T(alpha, u) = T(alpha s^2, u/s).
  const FieldElement a = F.mul(alpha, F.mul(s, s));
  const FieldElement p = F.mul(a, beta);
  if (p == F.from_int(4)) {
    // -Y is a transvection of <u, v> with parameter -a/4.
    const FieldElement mu = F.neg(F.div(a, F.from_int(4)));
    return {fs.square_class(mu) == SquareClass::Square ? SpClassTag::D21 : SpClassTag::D22, 0};
  }
  return from_trace(fs, F.sub(F.from_int(2), p));
}

SpClassLabel classify_sp_matrix(const ClassicalGroup& G, const Matrix& S) {
  require_symplectic(G, "classify_sp_matrix");
  const FieldSpec& fs = G.fields();
  const Field& F = fs.base();
  const std::size_t dim = G.dimension();
  const Matrix N = sub(F, S, Matrix::identity(dim));
  const std::size_t rk = rank(F, N);
  if (rk == 0) return {SpClassTag::Identity, 0};
  if (rk == 1) {
    const auto data = G.extract_transvection_data(S);
    return {data.mu_class == SquareClass::Square ? SpClassTag::A21 : SpClassTag::A22, 0};
  }
  if (rk != 2) throw std::invalid_argument("classify_sp_matrix: rank(S - I) > 2");

  // Preimages x1, x2 whose images span W = im(S - I).
  std::vector<Vec> pre, img;
  for (std::size_t j = 0; j < dim && img.size() < 2; ++j) {
    Vec e(dim, F.zero());
    e[j] = F.one();
    Vec w = apply(F, N, e);
    if (is_zero(w)) continue;
    if (img.size() == 1) {
      Matrix two(dim, 2);
      for (std::size_t i = 0; i < dim; ++i) {
        two(i, 0) = img[0][i];
        two(i, 1) = w[i];
      }
      if (rank(F, two) < 2) continue;
    }
    pre.push_back(e);
    img.push_back(w);
  }

  if (G.form_value(img[0], img[1]) == F.zero()) {
    // W totally isotropic: a double transvection. The symmetric form
    // B(x, y) = (x | N y) on V / ker N has discriminant class deciding the label.
    FieldElement b[2][2];
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) b[i][j] = G.form_value(pre[i], img[j]);
    const FieldElement det = F.sub(F.mul(b[0][0], b[1][1]), F.mul(b[0][1], b[1][0]));
    return {fs.square_class(F.neg(det)) == SquareClass::Square ? SpClassTag::A31 : SpClassTag::A32, 0};
  }

  // W non-degenerate: read off S|W in the basis img[0], img[1].
  Matrix basis(dim, 2);
  for (std::size_t i = 0; i < dim; ++i) {
    basis(i, 0) = img[0][i];
    basis(i, 1) = img[1][i];
  }
  auto coords = [&](const Vec& w) {
    const auto sol = solve(F, basis, w);
    if (!sol) throw std::logic_error("classify_sp_matrix: S does not preserve im(S - I)");
    return sol->particular;
  };
  const Vec c0 = coords(apply(F, S, img[0]));
  const Vec c1 = coords(apply(F, S, img[1]));
  const FieldElement trace = F.add(c0[0], c1[1]);
  const FieldElement minus_two = F.neg(F.from_int(2));
  if (trace == F.from_int(2)) throw std::logic_error("classify_sp_matrix: unipotent restriction of rank 2");
  if (trace != minus_two) return from_trace(fs, trace);

  // -S|W is a transvection of W: (-S - I) x = mu (w|x) w.
  auto minus_s_minus_i = [&](const Vec& x) {
    Vec y = apply(F, S, x);
    for (std::size_t i = 0; i < dim; ++i) y[i] = F.neg(F.add(y[i], x[i]));
    return y;
  };
  Vec w = minus_s_minus_i(img[0]);
  if (is_zero(w)) w = minus_s_minus_i(img[1]);
  for (const auto& x : img) {
    const FieldElement wx = G.form_value(w, x);
    if (wx == F.zero()) continue;
    const Vec mx = minus_s_minus_i(x);
    std::size_t i = 0;
    while (w[i] == F.zero()) ++i;
    const FieldElement mu = F.div(mx[i], F.mul(wx, w[i]));
    return {fs.square_class(mu) == SquareClass::Square ? SpClassTag::D21 : SpClassTag::D22, 0};
  }
  throw std::logic_error("classify_sp_matrix: degenerate transvection data");
}

SpOddClassDistribution sp_odd_class_dist(int n, std::uint64_t q, SpPairMode mode) {
  require_sp_odd(n, q, "sp_odd_class_dist");
  const auto fs = FieldSpec::make(q);
  const Field& F = fs->base();
  const BigInt Q(static_cast<unsigned long>(q));
  const BigInt D = ipow(Q, 2 * n) - 1;
  const BigInt top = ipow(Q, 2 * n - 1);

  SpOddClassDistribution d;
  d.n = n;
  d.q = q;
  d.mode = mode;
  auto add = [&](SpClassLabel l, const Rational& p) {
    if (p != 0) d.probs[l] += p;
  };

  if (mode == SpPairMode::AllTransvections) {
    add({SpClassTag::Identity, 0}, make_rational(1, D));
    add({SpClassTag::A21, 0}, make_rational(Q - 2, 2 * D));
    add({SpClassTag::A22, 0}, make_rational(Q - 2, 2 * D));
    add({SpClassTag::A31, 0}, make_rational(top - Q, 2 * D));
    add({SpClassTag::A32, 0}, make_rational(top - Q, 2 * D));
    add({SpClassTag::D21, 0}, make_rational(top, 2 * D));
    add({SpClassTag::D22, 0}, make_rational(top, 2 * D));
    // (u|v) = 1 and alpha beta = p: every trace 2 - p other than +-2 occurs.
    for (std::uint32_t i = 0; i < q; ++i) {
      const FieldElement t{i};
      if (t == F.from_int(2) || t == F.from_int(-2)) continue;
      add(from_trace(*fs, t), make_rational(top, D));
    }
    return d;
  }

  const bool one_mod_four = fs->kappa() == 1;
  if (one_mod_four) {
    add({SpClassTag::Identity, 0}, make_rational(2, D));
    add({SpClassTag::A21, 0}, make_rational((Q - 5) / 2, D));
    add({SpClassTag::A22, 0}, make_rational((Q - 1) / 2, D));
    add({SpClassTag::A31, 0}, make_rational(top - Q, D));
    add({SpClassTag::D21, 0}, make_rational(2 * top, D));
  } else {
    add({SpClassTag::A21, 0}, make_rational((Q - 3) / 2, D));
    add({SpClassTag::A22, 0}, make_rational((Q + 1) / 2, D));
    add({SpClassTag::A32, 0}, make_rational(top - Q, D));
    add({SpClassTag::D22, 0}, make_rational(2 * top, D));
  }
  if (q >= 5) {
    const auto census = sq2_census(q);
    for (const auto& e : census.entries)
      add({e.split ? SpClassTag::C3 : SpClassTag::C1, e.index}, make_rational(2 * top, D));
  }
  if (mode == SpPairMode::PairsFromCStar) {
    // Conjugation by a similitude with non-square multiplier swaps C and C*,
    // A21 and A22, D21 and D22, and fixes the remaining labels.
    std::map<SpClassLabel, Rational> swapped;
    for (const auto& [l, p] : d.probs) swapped[swap_classes(l)] = p;
    d.probs = std::move(swapped);
  }
  if (d.total() != 1) throw std::logic_error("sp_odd_class_dist: masses do not sum to 1");
  return d;
}

RankSummary sp_all_transvection_pair_summary(int n, const BigInt& q) {
  if (n < 1) throw std::invalid_argument("sp_all_transvection_pair_summary: n must be at least 1");
  if (q % 2 == 0) throw std::invalid_argument("sp_all_transvection_pair_summary: q must be odd");
  const BigInt D = ipow(q, 2 * n) - 1;
  return {make_rational(1, D), make_rational(q - 2, D), make_rational(ipow(q, 2 * n) - q, D)};
}

}  // namespace weilmix
