// weilmix: bound tables, exact distributions, simulations and verification.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "weilmix/fixdist.hpp"
#include "weilmix/mcengine.hpp"
#include "weilmix/mixbounds.hpp"
#include "weilmix/transprod.hpp"

using namespace weilmix;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Round { Nearest, Up, Down };

// 12 significant digits; Up/Down never move the printed value past x in the
// wrong direction.
std::string fmt(double x, Round mode = Round::Nearest) {
  auto render = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
  };
  std::string s = render(x);
  if (mode == Round::Nearest || x == 0 || !std::isfinite(x)) return s;
  const double step = std::pow(10.0, std::floor(std::log10(std::abs(x))) - 11);
  double y = x;
  for (int i = 0; i < 4; ++i) {
    const double shown = std::strtod(s.c_str(), nullptr);
    if (mode == Round::Up ? shown >= x : shown <= x) break;
    y += mode == Round::Up ? step : -step;
    s = render(y);
  }
  return s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
  void row(std::vector<Json> cells) { rows_.push_back(std::move(cells)); }

  std::string csv() const {
    std::ostringstream os;
    line(os, header_);
    for (const auto& r : rows_) {
      std::vector<std::string> cells;
      for (const auto& c : r) cells.push_back(c.is_null() ? "" : c.is_string() ? c.get<std::string>() : c.dump());
      line(os, cells);
    }
    return os.str();
  }

  Json json() const {
    Json arr = Json::array();
    for (const auto& r : rows_) {
      Json o = Json::object();
      for (std::size_t i = 0; i < header_.size(); ++i) o[header_[i]] = r[i];
      arr.push_back(std::move(o));
    }
    return arr;
  }

  std::size_t size() const { return rows_.size(); }

 private:
  static void line(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_field(cells[i]);
    os << "\r\n";
  }
  std::vector<std::string> header_;
  std::vector<std::vector<Json>> rows_;
};

Json num(double x, Round mode = Round::Nearest) { return std::strtod(fmt(x, mode).c_str(), nullptr); }
Json rat(const Rational& r) { return to_string(r); }

struct Common {
  std::string family;
  int n = 0;
  std::uint64_t q = 0;
  std::string format = "csv";
  std::vector<std::string> argv;
};

GroupSpec parse_spec(const Common& c) {
  GroupSpec s;
  if (c.family == "gl") s.family = Family::GL;
  else if (c.family == "gu") s.family = Family::GU;
  else if (c.family == "sp-odd") s.family = Family::SpOdd;
  else if (c.family == "sp-even") s.family = Family::SpEven;
  else throw UsageError("unknown family " + c.family);
  s.n = c.n;
  s.q = c.q;
  try {
    validate(s);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return s;
}

Json spec_json(const GroupSpec& s) { return Json{{"family", to_string(s.family)}, {"n", s.n}, {"q", s.q}}; }

std::string command_echo(const std::vector<std::string>& argv) {
  std::string s;
  for (const auto& a : argv) s += (s.empty() ? "" : " ") + a;
  return s;
}

void emit(const Common& c, const std::string& command, const Json& extra, const Table& t) {
  if (c.format == "json") {
    Json j;
    j["schema_version"] = 1;
    j["library_version"] = kLibraryVersion;
    j["command"] = command;
    j["argv"] = command_echo(c.argv);
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    j["rows"] = t.json();
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << t.csv();
  }
}

unsigned thread_count(std::optional<unsigned> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("WEILMIX_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("WEILMIX_THREADS must be a positive integer, got '") + env + "'");
  }
  return 0;
}

// Static profile chart: r on the abscissa, TV bound on the ordinate.
void write_svg(const std::string& path, const BoundProfile& p) {
  const double W = 640, H = 400, L = 60, R = 20, T = 30, B = 50;
  const double r0 = double(p.rows.front().r), r1 = double(p.rows.back().r);
  const double span = r1 > r0 ? r1 - r0 : 1;
  auto X = [&](double r) { return L + (r - r0) / span * (W - L - R); };
  auto Y = [&](double v) { return H - B - v * (H - T - B); };
  std::ofstream os(path);
  if (!os) throw UsageError("cannot write " + path);
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W << "\" height=\"" << H << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << W / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" << describe(p.spec) << " "
     << to_string(p.variant) << "</text>\n"
     << "<line x1=\"" << L << "\" y1=\"" << Y(0) << "\" x2=\"" << W - R << "\" y2=\"" << Y(0)
     << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << L << "\" y1=\"" << Y(0) << "\" x2=\"" << L << "\" y2=\"" << Y(1) << "\" stroke=\"black\"/>\n";
  for (double v : {0.0, 0.25, 0.5, 0.75, 1.0})
    os << "<text x=\"" << L - 6 << "\" y=\"" << Y(v) + 4 << "\" text-anchor=\"end\" font-size=\"11\">" << v
       << "</text>\n";
  const std::size_t stride = std::max<std::size_t>(1, p.rows.size() / 10);
  for (std::size_t i = 0; i < p.rows.size(); i += stride)
    os << "<text x=\"" << X(double(p.rows[i].r)) << "\" y=\"" << H - B + 16
       << "\" text-anchor=\"middle\" font-size=\"11\">" << p.rows[i].r << "</text>\n";
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"12\">r</text>\n";
  auto polyline = [&](const char* colour, auto value) {
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
    for (const auto& row : p.rows)
      if (const std::optional<double> v = value(row)) os << fmt(X(double(row.r))) << "," << fmt(Y(*v)) << " ";
    os << "\"/>\n";
  };
  polyline("firebrick", [](const ProfileRow& r) { return r.upper; });
  polyline("steelblue", [](const ProfileRow& r) { return std::optional<double>(r.lower); });
  os << "<text x=\"" << W - R - 4 << "\" y=\"" << T + 14 << "\" text-anchor=\"end\" font-size=\"11\" fill=\"firebrick\">upper</text>\n"
     << "<text x=\"" << W - R - 4 << "\" y=\"" << T + 28 << "\" text-anchor=\"end\" font-size=\"11\" fill=\"steelblue\">lower</text>\n"
     << "</svg>\n";
}

int cmd_bounds(const Common& c, const std::string& variant_flag, std::int64_t r_min, std::int64_t r_max,
               bool exact_sum, const std::string& svg) {
  const GroupSpec spec = parse_spec(c);
  WeilVariant v = default_variant(spec.family);
  if (!variant_flag.empty()) {
    if (spec.family != Family::SpEven) throw UsageError("--variant applies to sp-even only");
    v = variant_flag == "unitary" ? WeilVariant::SpEvenUnitary : WeilVariant::SpEvenLinear;
  }
  if (r_min < 0 || r_max < r_min) throw UsageError("need 0 <= r-min <= r-max");
  BoundProfile p;
  try {
    p = profile(spec, v, r_min, r_max, exact_sum);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  Table t({"r", "upper_rounded_up", "upper_source", "upper_closed_rounded_up", "lower_rounded_down", "lower_source",
           "lower_closed_rounded_down", "lower_chebyshev_rounded_down", "exact_char_sum", "exact_char_sum_float",
           "provenance"});
  for (const auto& row : p.rows) {
    const Json upper = row.upper ? num(*row.upper, Round::Up) : Json();
    const Json upper_closed = row.upper_closed ? num(*row.upper_closed, Round::Up) : Json();
    const Json lower_closed = row.lower_closed ? num(*row.lower_closed, Round::Down) : Json();
    const Json cheb = row.lower_chebyshev ? num(*row.lower_chebyshev, Round::Down) : Json();
    const Json sum = row.exact_char_sum ? rat(*row.exact_char_sum) : Json();
    const Json sum_f = row.exact_char_sum ? num(to_double(*row.exact_char_sum)) : Json();
    t.row({row.r, upper, row.upper_source, upper_closed, num(row.lower, Round::Down), row.lower_source, lower_closed,
           cheb, sum, sum_f, row.exact_char_sum ? "exact" : "closed-form"});
  }
  if (!svg.empty()) write_svg(svg, p);
  emit(c, "bounds", Json{{"spec", spec_json(spec)}, {"variant", to_string(v)}}, t);
  return kExitOk;
}

int cmd_dist(const Common& c, const std::string& what, const std::string& mode_flag) {
  const GroupSpec spec = parse_spec(c);
  Json extra{{"spec", spec_json(spec)}, {"what", what}};
  if (what == "fixed-space") {
    if (spec.family == Family::GL) throw UsageError("fixed-space distribution has no closed form for gl");
    const auto d = fixed_space_distribution(spec);
    Table t({"dim", "probability", "probability_float", "provenance"});
    for (std::size_t k = 0; k < d.probs.size(); ++k)
      t.row({k, rat(d.probs[k]), num(to_double(d.probs[k])), "closed-form"});
    emit(c, "dist", extra, t);
  } else if (what == "pair-codim") {
    try {
      validate(spec, true);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    const auto d = codim_dist(spec);
    Table t({"codim", "probability", "probability_float", "provenance"});
    for (int e = 0; e < 3; ++e) t.row({e, rat(d.probs[e]), num(to_double(d.probs[e])), "closed-form"});
    emit(c, "dist", extra, t);
  } else {
    if (spec.family != Family::SpOdd || spec.n < 2) throw UsageError("sp-classes needs --family sp-odd and n >= 2");
    SpPairMode mode = SpPairMode::PairsFromC;
    if (mode_flag == "all") mode = SpPairMode::AllTransvections;
    else if (mode_flag == "cstar-pairs") mode = SpPairMode::PairsFromCStar;
    const auto d = sp_odd_class_dist(spec.n, spec.q, mode);
    extra["mode"] = to_string(mode);
    Table t({"class", "probability", "probability_float", "provenance"});
    for (const auto& [label, p] : d.probs)
      if (p != 0) t.row({to_string(label), rat(p), num(to_double(p)), "closed-form"});
    emit(c, "dist", extra, t);
  }
  return kExitOk;
}

int cmd_simulate(const Common& c, const std::string& what, int steps, std::uint64_t samples, std::uint64_t seed,
                 std::optional<unsigned> threads_flag) {
  const GroupSpec spec = parse_spec(c);
  const unsigned threads = thread_count(threads_flag);
  Histogram h;
  std::map<int, Rational> exact;
  try {
    if (what == "fixed-space") {
      h = mc_fixed_dim(spec, samples, seed, threads);
      if (spec.family != Family::GL) {
        const auto d = fixed_space_distribution(spec);
        for (std::size_t k = 0; k < d.probs.size(); ++k) exact[int(k)] = d.probs[k];
      }
    } else {
      if (steps < 1) throw UsageError("--steps must be at least 1");
      h = mc_transv_product(spec, steps, samples, seed, TransvectionClass::Any, threads);
      if (steps == 1) exact[1] = 1;
      if (steps == 2) {
        const auto d = codim_dist(spec);
        for (int e = 0; e < 3; ++e) exact[e] = d.probs[e];
      }
    }
  } catch (const GroupError& e) {
    throw UsageError(e.what());
  }
  const std::string prov = "monte-carlo(seed=" + std::to_string(seed) + ", samples=" + std::to_string(samples) + ")";
  Table t({"key", "count", "frequency", "stderr", "exact", "exact_float", "z", "seed", "samples", "provenance"});
  std::set<int> keys;
  for (const auto& [k, _] : h.counts) keys.insert(k);
  for (const auto& [k, p] : exact)
    if (p != 0) keys.insert(k);
  const double n = double(h.total);
  for (int k : keys) {
    const double f = h.frequency(k);
    const double se = n > 0 ? std::sqrt(f * (1 - f) / n) : 0;
    Json ex, exf, z;
    if (const auto it = exact.find(k); it != exact.end()) {
      const double p = to_double(it->second);
      ex = rat(it->second);
      exf = num(p);
      const double sigma = std::sqrt(p * (1 - p) / n);
      if (sigma > 0) z = num((f - p) / sigma);
    }
    if (h.total == 0) continue;
    t.row({k, h.count(k), num(f), num(se), ex, exf, z, std::to_string(seed), samples, prov});
  }
  emit(c, "simulate",
       Json{{"spec", spec_json(spec)}, {"what", what}, {"steps", what == "fixed-space" ? Json() : Json(steps)},
            {"seed", std::to_string(seed)}, {"samples", samples}, {"total", h.total}},
       t);
  return kExitOk;
}

int cmd_verify(const Common& c, const std::string& level, const std::string& mutate,
               const std::vector<std::string>& only, std::optional<unsigned> threads_flag) {
  VerifyOptions o;
  o.groups = only;
  o.level = level == "full" ? VerifyLevel::Full : VerifyLevel::Quick;
  o.threads = thread_count(threads_flag);
  if (mutate == "gl-e0") o.gl_coeffs.e0[0] += 1;
  else if (mutate == "gl-e1") o.gl_coeffs.e1[0] += 1;
  else if (mutate == "gl-e2") o.gl_coeffs.e2[1] += 1;
  else if (!mutate.empty()) throw UsageError("unknown mutation " + mutate);
  const auto report = verify(o);
  if (c.format == "json") {
    std::cout << to_json(report) << "\n";
  } else {
    Table t({"check", "status", "details", "expected", "computed"});
    for (const auto& ch : report.checks) t.row({ch.name, to_string(ch.status), ch.details, ch.expected, ch.computed});
    std::cout << t.csv();
    std::cerr << report.checks.size() - report.failures() << "/" << report.checks.size() << " checks passed ("
              << report.level << ", library " << kLibraryVersion << ")\n";
  }
  return report.ok() ? kExitOk : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weil-representation tensor chains on finite classical groups"};
  app.set_version_flag("--version", kLibraryVersion);
  app.require_subcommand(1);

  Common c;
  for (int i = 0; i < argc; ++i) c.argv.emplace_back(i == 0 ? "weilmix" : argv[i]);

  const std::vector<std::string> families{"gl", "gu", "sp-odd", "sp-even"};
  auto add_spec = [&](CLI::App* sub) {
    sub->add_option("--family", c.family, "gl, gu, sp-odd or sp-even")->required()->check(CLI::IsMember(families));
    sub->add_option("--n", c.n, "rank parameter")->required()->check(CLI::PositiveNumber);
    sub->add_option("--q", c.q, "field size (prime power)")->required()->check(CLI::PositiveNumber);
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };

  auto* bounds = app.add_subcommand("bounds", "upper/lower TV bounds per step count");
  add_spec(bounds);
  add_format(bounds);
  std::string variant, svg;
  std::int64_t r_min = 0, r_max = 0;
  bool exact_sum = false;
  bounds->add_option("--variant", variant, "sp-even Weil variant")->check(CLI::IsMember({"linear", "unitary"}));
  bounds->add_option("--r-min", r_min)->required();
  bounds->add_option("--r-max", r_max)->required();
  bounds->add_flag("--exact-sum", exact_sum, "also emit the exact character sum");
  bounds->add_option("--svg", svg, "write a profile chart");

  auto* dist = app.add_subcommand("dist", "exact distributions");
  add_spec(dist);
  add_format(dist);
  std::string what, mode = "c-pairs";
  dist->add_option("--what", what)->required()->check(CLI::IsMember({"fixed-space", "pair-codim", "sp-classes"}));
  dist->add_option("--mode", mode)->check(CLI::IsMember({"c-pairs", "cstar-pairs", "all"}));

  auto* sim = app.add_subcommand("simulate", "Monte Carlo histograms");
  add_spec(sim);
  add_format(sim);
  std::string sim_what;
  int steps = 2;
  std::uint64_t samples = 0, seed = 0;
  std::optional<unsigned> threads;
  sim->add_option("--what", sim_what)->required()->check(CLI::IsMember({"fixed-space", "transv-product"}));
  sim->add_option("--steps", steps);
  sim->add_option("--samples", samples)->required();
  sim->add_option("--seed", seed)->required();
  sim->add_option("--threads", threads)->check(CLI::PositiveNumber);

  auto* ver = app.add_subcommand("verify", "closed forms against oracles");
  add_format(ver);
  std::string level = "quick", mutate;
  ver->add_option("--level", level)->check(CLI::IsMember({"quick", "full"}));
  ver->add_option("--threads", threads)->check(CLI::PositiveNumber);
  std::vector<std::string> only;
  ver->add_option("--only", only, "restrict to check groups")->check(CLI::IsMember(verify_groups()));
  ver->add_option("--mutate", mutate)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*bounds) return cmd_bounds(c, variant, r_min, r_max, exact_sum, svg);
    if (*dist) return cmd_dist(c, what, mode);
    if (*sim) return cmd_simulate(c, sim_what, steps, samples, seed, threads);
    if (*ver) return cmd_verify(c, level, mutate, only, threads);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
