#include "weilmix/mcengine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "weilmix/mixbounds.hpp"
#include "weilmix/weilchar.hpp"

namespace weilmix {

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

namespace {

// Runs body(index) for index in [0, count) over `threads` workers. Work is
// handed out by index so per-index results do not depend on the worker count.
void parallel_for(std::uint64_t count, unsigned threads, const std::function<void(std::uint64_t)>& body) {
  threads = static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), std::max<std::uint64_t>(count, 1)));
  if (threads <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

template <class H, class Draw>
H run_chunks(std::uint64_t samples, std::uint64_t seed, unsigned threads, Draw draw) {
  const std::uint64_t chunks = (samples + kChunkSamples - 1) / kChunkSamples;
  std::vector<H> parts(chunks);
  parallel_for(chunks, threads, [&](std::uint64_t c) {
    Rng rng(derive_seed(seed, c));
    const std::uint64_t here = std::min(kChunkSamples, samples - c * kChunkSamples);
    for (std::uint64_t i = 0; i < here; ++i) draw(rng, parts[c]);
  });
  H out;
  for (const auto& p : parts) out.merge(p);
  out.seed = seed;
  return out;
}

TransvectionClass class_for_mode(SpPairMode mode) {
  switch (mode) {
    case SpPairMode::PairsFromC: return TransvectionClass::C;
    case SpPairMode::PairsFromCStar: return TransvectionClass::CStar;
    case SpPairMode::AllTransvections: return TransvectionClass::Any;
  }
  return TransvectionClass::Any;
}

void require_sp_odd(int n, std::uint64_t q, const char* who) {
  if (n < 2) throw std::invalid_argument(std::string(who) + ": n must be at least 2");
  if (q % 2 == 0) throw std::invalid_argument(std::string(who) + ": q must be odd");
}

Vec vector_at(const Field& F, std::uint64_t index, std::size_t dim) {
  Vec v(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    v[i] = F.element(static_cast<std::uint32_t>(index % F.size()));
    index /= F.size();
  }
  return v;
}

}  // namespace

Histogram mc_fixed_dim(const GroupSpec& spec, std::uint64_t samples, std::uint64_t seed, unsigned threads) {
  validate(spec);
  const ClassicalGroup G(spec);
  const int dim = static_cast<int>(G.dimension());
  return run_chunks<Histogram>(samples, seed, threads, [&](Rng& rng, Histogram& h) {
    h.add(dim - static_cast<int>(G.fixed_space_codim(G.sample_uniform(rng))));
  });
}

Histogram mc_transv_product(const GroupSpec& spec, int s, std::uint64_t samples, std::uint64_t seed,
                            TransvectionClass cls, unsigned threads) {
  if (s < 1) throw std::invalid_argument("mc_transv_product: steps must be at least 1");
  validate(spec, true);
  const ClassicalGroup G(spec);
  return run_chunks<Histogram>(samples, seed, threads, [&](Rng& rng, Histogram& h) {
    Matrix m = G.sample_transvection(cls, rng).matrix;
    for (int i = 1; i < s; ++i) m = mul(G.field(), m, G.sample_transvection(cls, rng).matrix);
    h.add(static_cast<int>(G.fixed_space_codim(m)));
  });
}

ClassHistogram mc_sp_classes(int n, std::uint64_t q, SpPairMode mode, std::uint64_t samples, std::uint64_t seed,
                             unsigned threads) {
  require_sp_odd(n, q, "mc_sp_classes");
  const ClassicalGroup G({Family::SpOdd, n, q});
  const auto cls = class_for_mode(mode);
  return run_chunks<ClassHistogram>(samples, seed, threads, [&](Rng& rng, ClassHistogram& h) {
    const Matrix a = G.sample_transvection(cls, rng).matrix;
    const Matrix b = G.sample_transvection(cls, rng).matrix;
    h.add(classify_sp_matrix(G, mul(G.field(), a, b)));
  });
}

std::map<std::vector<std::uint32_t>, std::uint64_t> mc_element_tally(const GroupSpec& spec, std::uint64_t samples,
                                                                     std::uint64_t seed, unsigned threads) {
  using Key = std::vector<std::uint32_t>;
  struct Tally {
    std::map<Key, std::uint64_t> counts;
    void merge(const Tally& o) {
      for (const auto& [k, c] : o.counts) counts[k] += c;
    }
    std::uint64_t seed = 0;
  };
  validate(spec);
  const ClassicalGroup G(spec);
  auto t = run_chunks<Tally>(samples, seed, threads, [&](Rng& rng, Tally& h) {
    const Matrix m = G.sample_uniform(rng);
    Key k;
    k.reserve(m.data.size());
    for (auto e : m.data) k.push_back(e.index);
    ++h.counts[k];
  });
  return t.counts;
}

CodimDistribution oracle_pair_exact(const GroupSpec& spec, std::uint64_t limit, unsigned threads) {
  validate(spec, true);
  const ClassicalGroup G(spec);
  const auto ts = G.transvections(TransvectionClass::Any);
  const std::uint64_t N = ts.size();
  if (N * N > limit)
    throw LimitError("oracle_pair_exact: " + std::to_string(N) + "^2 pairs exceed the limit " + std::to_string(limit));
  std::vector<std::array<std::uint64_t, 3>> rows(N);
  parallel_for(N, threads, [&](std::uint64_t i) {
    auto& row = rows[i];
    row = {0, 0, 0};
    for (std::uint64_t j = 0; j < N; ++j) {
      const auto e = G.fixed_space_codim(mul(G.field(), ts[i], ts[j]));
      if (e > 2) throw std::logic_error("oracle_pair_exact: codimension above 2");
      ++row[e];
    }
  });
  std::array<std::uint64_t, 3> tally{0, 0, 0};
  for (const auto& r : rows)
    for (int e = 0; e < 3; ++e) tally[e] += r[e];
  CodimDistribution d;
  const BigInt total = BigInt(static_cast<unsigned long>(N)) * static_cast<unsigned long>(N);
  for (int e = 0; e < 3; ++e) d.probs[e] = make_rational(BigInt(static_cast<unsigned long>(tally[e])), total);
  return d;
}

SpOddClassDistribution oracle_sp_class_exact(int n, std::uint64_t q, SpPairMode mode, std::uint64_t limit) {
  require_sp_odd(n, q, "oracle_sp_class_exact");
  const ClassicalGroup G({Family::SpOdd, n, q});
  const auto& fs = G.fields();
  const Field& F = G.field();
  std::vector<FieldElement> params;
  switch (mode) {
    case SpPairMode::PairsFromC: params = fs.nonzero_squares(); break;
    case SpPairMode::PairsFromCStar: params = fs.nonsquares(); break;
    case SpPairMode::AllTransvections:
      for (std::uint32_t i = 1; i < F.size(); ++i) params.push_back(F.element(i));
      break;
  }
  const std::size_t dim = G.dimension();
  std::uint64_t nvec = 1;
  for (std::size_t i = 0; i < dim; ++i) {
    nvec *= F.size();
    if (nvec > limit) throw LimitError("oracle_sp_class_exact: vector space too large");
  }
  const std::uint64_t tuples = params.size() * params.size() * (nvec - 1);
  if (tuples > limit)
    throw LimitError("oracle_sp_class_exact: " + std::to_string(tuples) + " tuples exceed the limit");

  Vec u(dim, F.zero());
  u[0] = F.one();
  std::map<SpClassLabel, std::uint64_t> tally;
  for (std::uint64_t vi = 1; vi < nvec; ++vi) {
    const Vec v = vector_at(F, vi, dim);
    for (auto alpha : params)
      for (auto beta : params) ++tally[classify_sp_pair(G, alpha, u, beta, v)];
  }
  SpOddClassDistribution d;
  d.n = n;
  d.q = q;
  d.mode = mode;
  for (const auto& [label, c] : tally)
    d.probs[label] = make_rational(BigInt(static_cast<unsigned long>(c)), BigInt(static_cast<unsigned long>(tuples)));
  return d;
}

FixedSpaceDistribution oracle_fixed_dim_exact(const GroupSpec& spec, std::uint64_t limit) {
  validate(spec);
  const ClassicalGroup G(spec);
  const std::size_t dim = G.dimension();
  std::vector<std::uint64_t> tally(dim + 1, 0);
  std::uint64_t total = 0;
  G.for_each_element(
      [&](const Matrix& m) {
        ++tally[dim - G.fixed_space_codim(m)];
        ++total;
      },
      limit);
  FixedSpaceDistribution d{spec, {}};
  for (auto c : tally)
    d.probs.push_back(make_rational(BigInt(static_cast<unsigned long>(c)), BigInt(static_cast<unsigned long>(total))));
  return d;
}

std::int64_t brute_adjacent_squares(std::uint64_t q) {
  const auto fs = FieldSpec::make(q);
  if (!fs->odd()) throw std::invalid_argument("brute_adjacent_squares: q must be odd");
  const Field& F = fs->base();
  std::vector<bool> square(F.size(), false);
  for (std::uint32_t x = 1; x < F.size(); ++x) square[F.mul(F.element(x), F.element(x)).index] = true;
  std::int64_t hits = 0;
  for (std::uint32_t x = 1; x < F.size(); ++x) {
    const auto y = F.add(F.element(x), F.one());
    if (square[x] && y != F.zero() && square[y.index]) ++hits;
  }
  return hits;
}

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::ExactMatch: return "ExactMatch";
    case CheckStatus::WithinTolerance: return "WithinTolerance";
    case CheckStatus::Fail: return "FAIL";
  }
  return "?";
}

bool VerifyReport::ok() const { return failures() == 0; }

std::size_t VerifyReport::failures() const {
  std::size_t n = 0;
  for (const auto& c : checks) n += c.status == CheckStatus::Fail;
  return n;
}

namespace {

std::string key_string(int k) { return std::to_string(k); }
std::string key_string(const SpClassLabel& k) { return to_string(k); }

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

double sidak_threshold(std::size_t keys) {
  if (keys <= 1) return 3.0;
  // Two-sided tail at 3 sigma, shared among the keys.
  const double tail = 1 - std::pow(1 - std::erfc(3.0 / std::sqrt(2.0)), 1.0 / double(keys));
  double lo = 0, hi = 10;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::erfc(mid / std::sqrt(2.0)) > tail ? lo : hi) = mid;
  }
  return hi;
}

template <class Key>
CheckResult within_three_sigma(const std::string& name, const BasicHistogram<Key>& h,
                               const std::map<Key, Rational>& exact) {
  CheckResult r{name, CheckStatus::WithinTolerance, "", "", ""};
  const double n = static_cast<double>(h.total);
  double worst = 0;
  std::ostringstream bad_expected, bad_computed;
  bool failed = false;
  std::size_t keys = exact.size();
  for (const auto& [k, c] : h.counts) keys += !exact.count(k);
  const double z_max = sidak_threshold(keys);
  auto consider = [&](const Key& k, double p) {
    const double freq = h.frequency(k);
    const double sigma = std::sqrt(p * (1 - p) / n);
    const double dev = std::abs(freq - p);
    const double z = sigma > 0 ? dev / sigma : (dev > 0 ? INFINITY : 0.0);
    worst = std::max(worst, z);
    if (z > z_max) {
      failed = true;
      bad_expected << key_string(k) << "=" << fmt_double(p) << " ";
      bad_computed << key_string(k) << "=" << fmt_double(freq) << " ";
    }
  };
  for (const auto& [k, p] : exact) consider(k, to_double(p));
  for (const auto& [k, c] : h.counts)
    if (!exact.count(k)) consider(k, 0.0);
  std::ostringstream d;
  d << "samples=" << h.total << " seed=" << h.seed << " keys=" << exact.size() << " max|z|=" << fmt_double(worst)
    << " threshold=" << fmt_double(z_max);
  r.details = d.str();
  if (h.total == 0) {
    r.status = CheckStatus::Fail;
    r.details += " (no samples)";
  } else if (failed) {
    r.status = CheckStatus::Fail;
    r.expected = bad_expected.str();
    r.computed = bad_computed.str();
  }
  return r;
}

template CheckResult within_three_sigma<int>(const std::string&, const Histogram&, const std::map<int, Rational>&);
template CheckResult within_three_sigma<SpClassLabel>(const std::string&, const ClassHistogram&,
                                                      const std::map<SpClassLabel, Rational>&);

namespace {

struct Checker {
  VerifyReport& report;

  void exact(const std::string& name, bool equal, const std::string& details, const std::string& expected,
             const std::string& computed) {
    CheckResult r{name, equal ? CheckStatus::ExactMatch : CheckStatus::Fail, details, "", ""};
    if (!equal) {
      r.expected = expected;
      r.computed = computed;
    }
    report.checks.push_back(std::move(r));
  }

  template <class F>
  void guarded(const std::string& name, F&& f) {
    try {
      f();
    } catch (const std::exception& e) {
      report.checks.push_back({name, CheckStatus::Fail, std::string("exception: ") + e.what(), "", ""});
    }
  }
};

std::string str(const CodimDistribution& d) {
  return to_string(d.probs[0]) + ", " + to_string(d.probs[1]) + ", " + to_string(d.probs[2]);
}

std::string str(const std::vector<Rational>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + to_string(v[i]);
  return s;
}

std::string str(const std::map<SpClassLabel, Rational>& m) {
  std::string s;
  for (const auto& [k, v] : m) s += (s.empty() ? "" : ", ") + to_string(k) + ": " + to_string(v);
  return s;
}

std::map<SpClassLabel, Rational> nonzero(const std::map<SpClassLabel, Rational>& m) {
  std::map<SpClassLabel, Rational> out;
  for (const auto& [k, v] : m)
    if (v != 0) out[k] = v;
  return out;
}

std::vector<std::uint64_t> odd_prime_powers(std::uint64_t max_q) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t q = 3; q <= max_q; q += 2)
    if (prime_power(q)) out.push_back(q);
  return out;
}

const char* family_fn(Family f) {
  switch (f) {
    case Family::GL: return "codim_dist_gl";
    case Family::GU: return "codim_dist_gu";
    default: return "codim_dist_sp";
  }
}

void check_pairs(Checker& ck, const VerifyOptions& o) {
  const std::vector<GroupSpec> specs{{Family::GL, 2, 3},    {Family::GL, 3, 2}, {Family::GL, 2, 4},
                                     {Family::GU, 2, 2},    {Family::GU, 2, 3}, {Family::GU, 3, 2},
                                     {Family::SpOdd, 1, 3}, {Family::SpEven, 2, 2}, {Family::SpOdd, 2, 3}};
  for (const auto& s : specs) {
    const std::string name = std::string(family_fn(s.family)) + " vs oracle_pair_exact " + describe(s);
    ck.guarded(name, [&] {
      const auto closed = codim_dist(s, o.gl_coeffs);
      const auto oracle = oracle_pair_exact(s, kDefaultPairLimit, o.threads);
      ck.exact(name, closed == oracle, "e=0,1,2: " + str(oracle), str(oracle), str(closed));
    });
  }
}

void check_fixed_space(Checker& ck, const VerifyOptions& o) {
  std::vector<GroupSpec> specs{{Family::GU, 2, 2},    {Family::GU, 2, 3},     {Family::SpOdd, 1, 3},
                               {Family::SpOdd, 1, 5}, {Family::SpEven, 1, 2}, {Family::SpEven, 2, 2}};
  if (o.level == VerifyLevel::Full) {
    specs.push_back({Family::GU, 3, 2});
    specs.push_back({Family::SpOdd, 2, 3});
  }
  for (const auto& s : specs) {
    const std::string name = "fixed_space_distribution vs enumeration " + describe(s);
    ck.guarded(name, [&] {
      const auto closed = fixed_space_distribution(s);
      const auto oracle = oracle_fixed_dim_exact(s);
      ck.exact(name, closed.probs == oracle.probs, "k=0..: " + str(oracle.probs), str(oracle.probs),
               str(closed.probs));
    });
  }
}

void check_sp_classes(Checker& ck, const VerifyOptions& o) {
  std::vector<std::pair<int, std::uint64_t>> grid{{2, 3}, {2, 5}};
  if (o.level == VerifyLevel::Full) grid.push_back({2, 7});
  for (const auto& [n, q] : grid) {
    for (auto mode : {SpPairMode::PairsFromC, SpPairMode::PairsFromCStar, SpPairMode::AllTransvections}) {
      if (mode == SpPairMode::PairsFromCStar && o.level == VerifyLevel::Quick) continue;
      const std::string name = std::string("sp_odd_class_dist vs oracle_sp_class_exact (") + std::to_string(n) +
                               "," + std::to_string(q) + "," + to_string(mode) + ")";
      ck.guarded(name, [&] {
        const auto closed = nonzero(sp_odd_class_dist(n, q, mode).probs);
        const auto oracle = nonzero(oracle_sp_class_exact(n, q, mode).probs);
        ck.exact(name, closed == oracle, std::to_string(oracle.size()) + " classes", str(oracle), str(closed));
      });
    }
    const std::string name =
        "rank marginal (all) vs codim_dist_sp (" + std::to_string(n) + "," + std::to_string(q) + ")";
    ck.guarded(name, [&] {
      const auto m = sp_odd_class_dist(n, q, SpPairMode::AllTransvections).rank_marginal();
      const auto c = codim_dist_sp(n, q);
      const CodimDistribution got{m};
      ck.exact(name, got == c, str(c), str(c), str(got));
    });
  }
}

void check_weil_sums(Checker& ck, const VerifyOptions& o) {
  std::vector<std::pair<int, std::uint64_t>> grid{{2, 3}, {2, 5}};
  if (o.level == VerifyLevel::Full) {
    grid.push_back({3, 3});
    grid.push_back({2, 7});
  }
  for (const auto& [n, q] : grid)
    for (auto mode : {SpPairMode::PairsFromC, SpPairMode::AllTransvections})
      for (std::int64_t r = 0; r <= 4; ++r) {
        if (mode == SpPairMode::AllTransvections && r % 2) continue;
        const std::string name = std::string("weighted_weil_sum closed vs assembly (") + std::to_string(n) + "," +
                                 std::to_string(q) + "," + to_string(mode) + ",r=" + std::to_string(r) + ")";
        ck.guarded(name, [&] {
          const auto parts = weighted_weil_sum_parts(n, q, r, mode);
          ck.exact(name, parts.closed_form == parts.assembly, to_string(parts.closed_form),
                   to_string(parts.closed_form), to_string(parts.assembly));
        });
      }
}

// Independent recomputation of the split/nonsplit census: roots found by
// scanning GF(q^2), indices by repeated multiplication.
void check_lemmas(Checker& ck, const VerifyOptions& o) {
  const auto qs = odd_prime_powers(o.level == VerifyLevel::Full ? 121 : 27);
  for (auto q : qs) {
    const std::string adj = "count_adjacent_squares vs enumeration q=" + std::to_string(q);
    ck.guarded(adj, [&] {
      const auto a = count_adjacent_squares(q);
      const auto b = brute_adjacent_squares(q);
      const std::int64_t formula = q % 4 == 1 ? (q - 5) / 4 : (q - 3) / 4;
      ck.exact(adj, a == b && b == formula, std::to_string(b), std::to_string(b), std::to_string(a));
    });

    const std::string sq = "sq2_census vs enumeration q=" + std::to_string(q);
    ck.guarded(sq, [&] {
      const auto fs = FieldSpec::make(q);
      const Field& F = fs->base();
      const Field& E = fs->ext();
      const bool one_mod_four = q % 4 == 1;
      const auto census = sq2_census(q);
      std::vector<bool> square(F.size(), false);
      for (std::uint32_t x = 1; x < F.size(); ++x) square[F.mul(F.element(x), F.element(x)).index] = true;
      std::int64_t split = 0, nonsplit = 0;
      bool entries_ok = true;
      std::size_t alphas = 0;
      for (std::uint32_t ai = 1; ai < F.size(); ++ai) {
        const auto alpha = F.element(ai);
        if (!square[ai] || alpha == F.from_int(4)) continue;
        ++alphas;
        const auto t = fs->embed(F.sub(F.from_int(2), alpha));
        std::optional<FieldElement> lambda;
        for (std::uint32_t li = 1; li < E.size() && !lambda; ++li) {
          const auto l = E.element(li);
          if (E.add(l, E.inv(l)) == t) lambda = l;
        }
        if (!lambda) throw std::logic_error("no root for alpha");
        const bool is_split = fs->restrict_to_base(*lambda).has_value();
        const auto base = is_split ? fs->gamma() : fs->eta();
        const std::uint64_t ord = is_split ? q - 1 : q + 1;
        std::uint64_t j = 0;
        for (auto x = E.one(); x != *lambda; x = E.mul(x, base))
          if (++j > ord) throw std::logic_error("root outside the cyclic subgroup");
        const std::uint64_t index = std::min(j, ord - j);
        const bool even = index % 2 == 0;
        const bool parity = is_split ? (one_mod_four ? even : !even) : (one_mod_four ? !even : even);
        (is_split ? split : nonsplit) += 1;
        bool found = false;
        for (const auto& e : census.entries)
          if (e.alpha == alpha) {
            found = true;
            entries_ok = entries_ok && e.split == is_split && e.index == index && e.parity_holds == parity && parity;
          }
        entries_ok = entries_ok && found;
      }
      const bool totals = static_cast<std::int64_t>(alphas) == split + nonsplit;
      const bool ok = entries_ok && totals && census.split_count == split && census.nonsplit_count == nonsplit;
      const std::string want = "(" + std::to_string(split) + ", " + std::to_string(nonsplit) + ")";
      const std::string got = "(" + std::to_string(census.split_count) + ", " + std::to_string(census.nonsplit_count) +
                              ")" + (entries_ok ? "" : " with per-alpha mismatch");
      ck.exact(sq, ok, want + ", parity checked per alpha", want, got);
    });
  }
}

void check_domination(Checker& ck, const VerifyOptions& o) {
  const bool full = o.level == VerifyLevel::Full;
  const int n_max = full ? 6 : 3;
  const std::vector<std::uint64_t> qs = full ? std::vector<std::uint64_t>{2, 3, 4, 5, 7, 9}
                                             : std::vector<std::uint64_t>{2, 3, 4, 5};
  std::size_t count = 0;
  std::string first_failure;
  for (int n = 1; n <= n_max; ++n)
    for (auto q : qs)
      for (long c = 1; c <= 3; ++c) {
        std::vector<std::pair<GroupSpec, WeilVariant>> chains{{{Family::GU, n, q}, WeilVariant::GUWeil}};
        if (q % 2) {
          chains.push_back({{Family::SpOdd, n, q}, WeilVariant::SpOddWeil});
        } else {
          chains.push_back({{Family::SpEven, n, q}, WeilVariant::SpEvenLinear});
          chains.push_back({{Family::SpEven, n, q}, WeilVariant::SpEvenUnitary});
        }
        for (const auto& [spec, v] : chains) {
          const auto ub = upper_closed(spec, v, c);
          const auto sum = charbound_sum({spec, v, ub.r});
          ++count;
          if (!(sum <= ub.four_sq) && first_failure.empty())
            first_failure = describe(spec) + " " + to_string(v) + " c=" + std::to_string(c) + ": " +
                            to_string(sum) + " > " + to_string(ub.four_sq);
        }
      }
  const std::string name = std::string("charbound_sum <= 4 upper_closed^2 (n<=") + std::to_string(n_max) + ")";
  ck.exact(name, first_failure.empty(), std::to_string(count) + " chains", "sum <= closed-form", first_failure);
}

void check_moments(Checker& ck, const VerifyOptions&) {
  ck.guarded("moments GL(2,3) r=1 variance", [&] {
    const auto m = moments({{Family::GL, 2, 3}, WeilVariant::GLWeil, 1});
    ck.exact("moments GL(2,3) r=1 variance", m.variance.is_rational() && m.variance.a() == Rational(10, 9),
             "Var = 10/9", "10/9", to_string(m.variance));
  });
  ck.guarded("moments SpEven(2,2) r=1 variance", [&] {
    const auto m = moments({{Family::SpEven, 2, 2}, WeilVariant::SpEvenLinear, 1});
    ck.exact("moments SpEven(2,2) r=1 variance", m.variance.is_rational() && m.variance.a() == Rational(3, 4),
             "Var = 3/4", "3/4", to_string(m.variance));
  });
  ck.guarded("moments GU(3,2) mean sign by parity", [&] {
    const auto a = moments({{Family::GU, 3, 2}, WeilVariant::GUWeil, 1});
    const auto b = moments({{Family::GU, 3, 2}, WeilVariant::GUWeil, 2});
    ck.exact("moments GU(3,2) mean sign by parity", a.mean_sign == -1 && b.mean_sign == 1, "r=1: -1, r=2: +1",
             "-1, 1", std::to_string(a.mean_sign) + ", " + std::to_string(b.mean_sign));
  });
}

bool four_sig_figs(double a, double b) { return std::abs(a - b) <= 5e-5 * std::abs(b); }

void check_cutoff(Checker& ck, const VerifyOptions&) {
  const std::string name = "profile GU(50,9) cutoff window";
  ck.guarded(name, [&] {
    const auto p = profile({Family::GU, 50, 9}, WeilVariant::GUWeil, 44, 54);
    const auto& up = p.rows.at(52 - 44);
    const auto& lo = p.rows.at(46 - 44);
    const double up_want = 0.7 / 81.0;
    const double lo_want = 1 - 32 * std::pow(9.0, -6) - 16 * std::pow(9.0, -3);
    const bool ok = up.upper && *up.upper <= 0.0087 && lo.lower >= 0.97 && up.upper_closed &&
                    four_sig_figs(*up.upper_closed, up_want) && lo.lower_closed &&
                    four_sig_figs(*lo.lower_closed, lo_want);
    ck.exact(name, ok, "upper(52)=" + fmt_double(up.upper.value_or(-1)) + " lower(46)=" + fmt_double(lo.lower),
             fmt_double(up_want) + ", " + fmt_double(lo_want),
             fmt_double(up.upper_closed.value_or(-1)) + ", " + fmt_double(lo.lower_closed.value_or(-1)));
  });
}

std::map<int, Rational> as_map(const CodimDistribution& d) {
  std::map<int, Rational> m;
  for (int e = 0; e < 3; ++e)
    if (d.probs[e] != 0) m[e] = d.probs[e];
  return m;
}

std::map<int, Rational> as_map(const std::vector<Rational>& v) {
  std::map<int, Rational> m;
  for (std::size_t k = 0; k < v.size(); ++k)
    if (v[k] != 0) m[static_cast<int>(k)] = v[k];
  return m;
}

// Pearson statistic for uniformity over `cells` outcomes, accepted when it
// lies within 3 standard deviations (sqrt(2 df)) above its mean df.
CheckResult uniformity(const std::string& name, const std::map<std::vector<std::uint32_t>, std::uint64_t>& tally,
                       const BigInt& cells, std::uint64_t samples, std::uint64_t seed) {
  const double k = to_double(Rational(cells));
  const double expected = double(samples) / k;
  double chi2 = 0;
  for (const auto& [_, c] : tally) chi2 += (double(c) - expected) * (double(c) - expected) / expected;
  chi2 += (k - double(tally.size())) * expected;  // cells never hit
  const double df = k - 1;
  const double limit = df + 3 * std::sqrt(2 * df);
  const bool ok = double(tally.size()) <= k && chi2 <= limit;
  CheckResult r{name, ok ? CheckStatus::WithinTolerance : CheckStatus::Fail,
                "samples=" + std::to_string(samples) + " seed=" + std::to_string(seed) + " cells=" + to_string(cells) +
                    " chi2=" + fmt_double(chi2) + " limit=" + fmt_double(limit),
                "", ""};
  if (!ok) {
    r.expected = "chi2 <= " + fmt_double(limit) + " over " + to_string(cells) + " cells";
    r.computed = "chi2 = " + fmt_double(chi2) + " over " + std::to_string(tally.size()) + " cells hit";
  }
  return r;
}

void check_monte_carlo(Checker& ck, const VerifyOptions& o) {
  const bool full = o.level == VerifyLevel::Full;
  const std::uint64_t N = full ? 100'000 : 20'000;
  const std::uint64_t seed = 20240601;
  auto push = [&](CheckResult r) { ck.report.checks.push_back(std::move(r)); };

  for (GroupSpec s : {GroupSpec{Family::SpOdd, 1, 3}, GroupSpec{Family::GU, 2, 2}, GroupSpec{Family::SpEven, 1, 4}}) {
    const std::string name = "sample_uniform uniformity " + describe(s);
    ck.guarded(name, [&] {
      push(uniformity(name, mc_element_tally(s, N, seed, o.threads), group_order(s), N, seed));
    });
  }

  std::vector<GroupSpec> fixed{{Family::GU, 2, 2}, {Family::SpOdd, 1, 3}, {Family::SpEven, 2, 4}, {Family::GU, 3, 9}};
  if (full) fixed.push_back({Family::SpOdd, 3, 9});
  for (const auto& s : fixed) {
    const std::string name = "mc_fixed_dim vs fixed_space_distribution " + describe(s);
    ck.guarded(name, [&] {
      push(within_three_sigma(name, mc_fixed_dim(s, N, seed, o.threads), as_map(fixed_space_distribution(s).probs)));
    });
  }

  std::vector<GroupSpec> pairs{{Family::GL, 3, 2}, {Family::SpOdd, 10, 3}, {Family::SpEven, 10, 2}, {Family::GU, 4, 9}};
  if (full) {
    pairs.push_back({Family::GL, 4, 7});
    pairs.push_back({Family::SpOdd, 5, 9});
  }
  for (const auto& s : pairs) {
    const std::string name = "mc_transv_product s=2 vs codim_dist " + describe(s);
    ck.guarded(name, [&] {
      push(within_three_sigma(name, mc_transv_product(s, 2, N, seed, TransvectionClass::Any, o.threads),
                              as_map(codim_dist(s))));
    });
  }
  ck.guarded("mc_transv_product s=1 codim 1", [&] {
    const auto h = mc_transv_product({Family::GU, 3, 3}, 1, N / 10, seed, TransvectionClass::Any, o.threads);
    ck.exact("mc_transv_product s=1 codim 1", h.count(1) == h.total, "all mass at codim 1", std::to_string(h.total),
             std::to_string(h.count(1)));
  });

  std::vector<std::tuple<int, std::uint64_t, SpPairMode>> classes{{2, 5, SpPairMode::PairsFromC},
                                                                  {2, 7, SpPairMode::AllTransvections}};
  if (full) classes.push_back({3, 9, SpPairMode::PairsFromCStar});
  for (const auto& [n, q, mode] : classes) {
    const std::string name = std::string("mc_sp_classes vs sp_odd_class_dist (") + std::to_string(n) + "," +
                             std::to_string(q) + "," + to_string(mode) + ")";
    ck.guarded(name, [&] {
      push(within_three_sigma(name, mc_sp_classes(n, q, mode, N, seed, o.threads),
                              nonzero(sp_odd_class_dist(n, q, mode).probs)));
    });
  }

  const std::string det = "Monte Carlo determinism across reruns and worker counts";
  ck.guarded(det, [&] {
    const GroupSpec s{Family::SpOdd, 2, 3};
    const auto a = mc_fixed_dim(s, 3 * kChunkSamples + 17, 99, 1);
    const auto b = mc_fixed_dim(s, 3 * kChunkSamples + 17, 99, 3);
    const auto c = mc_fixed_dim(s, 3 * kChunkSamples + 17, 99, 3);
    const auto d = mc_transv_product({Family::GU, 3, 3}, 3, 2 * kChunkSamples, 5, TransvectionClass::Any, 1);
    const auto e = mc_transv_product({Family::GU, 3, 3}, 3, 2 * kChunkSamples, 5, TransvectionClass::Any, 4);
    ck.exact(det, a == b && b == c && d == e, "threads 1 vs 3 and 1 vs 4", "identical", "differs");
  });
}

}  // namespace

const std::vector<std::string>& verify_groups() {
  static const std::vector<std::string> names{"pairs",      "fixed-space", "sp-classes", "weil-sums",  "lemmas",
                                              "domination", "moments",     "cutoff",     "monte-carlo"};
  return names;
}

VerifyReport verify(const VerifyOptions& o) {
  VerifyReport report;
  report.level = o.level == VerifyLevel::Full ? "full" : "quick";
  Checker ck{report};
  using Fn = void (*)(Checker&, const VerifyOptions&);
  static const std::vector<Fn> fns{check_pairs, check_fixed_space, check_sp_classes,
                                   check_weil_sums, check_lemmas, check_domination,
                                   check_moments, check_cutoff, check_monte_carlo};
  const auto& names = verify_groups();
  for (const auto& g : o.groups)
    if (std::find(names.begin(), names.end(), g) == names.end())
      throw std::invalid_argument("verify: unknown check group '" + g + "'");
  for (std::size_t i = 0; i < names.size(); ++i)
    if (o.groups.empty() || std::find(o.groups.begin(), o.groups.end(), names[i]) != o.groups.end())
      fns[i](ck, o);
  return report;
}

std::string to_json(const VerifyReport& report, int indent) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["library_version"] = kLibraryVersion;
  j["command"] = "verify";
  j["level"] = report.level;
  j["ok"] = report.ok();
  j["failures"] = report.failures();
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["status"] = to_string(c.status);
    e["details"] = c.details;
    if (c.status == CheckStatus::Fail) {
      e["expected"] = c.expected;
      e["computed"] = c.computed;
    }
    arr.push_back(std::move(e));
  }
  j["checks"] = std::move(arr);
  return j.dump(indent);
}

}  // namespace weilmix
