// One PASS/FAIL line per acceptance criterion. Exit status 0 iff all pass.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "weilmix/mcengine.hpp"
#include "weilmix/mixbounds.hpp"

using namespace weilmix;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;
};

// Runs one verify group at the full level and folds in extra literal checks.
Outcome group(const std::string& name, const std::vector<std::pair<std::string, bool>>& extras = {}) {
  VerifyOptions o;
  o.level = VerifyLevel::Full;
  o.groups = {name};
  const auto rep = verify(o);
  Outcome out;
  std::ostringstream note;
  note << rep.checks.size() - rep.failures() << "/" << rep.checks.size() << " checks";
  for (const auto& c : rep.checks)
    if (c.status == CheckStatus::Fail) {
      out.ok = false;
      note << "; FAIL " << c.name << " [" << c.details << "] expected " << c.expected << " computed "
           << c.computed;
    }
  for (const auto& [label, ok] : extras) {
    if (!ok) {
      out.ok = false;
      note << "; FAIL " << label;
    }
  }
  if (!extras.empty()) note << ", " << extras.size() << " literal examples";
  out.note = note.str();
  return out;
}

Rational R(long a, long b = 1) { return make_rational(a, b); }

Rational class_mass(const SpOddClassDistribution& d, SpClassTag tag) {
  Rational m = 0;
  for (const auto& [k, v] : d.probs)
    if (k.tag == tag) m += v;
  return m;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string title;
    double budget_seconds;
    std::function<Outcome()> run;
  };

  const std::vector<Criterion> criteria{
      {1, "transvection-pair oracle equality", 120,
       [] {
         const auto gl = oracle_pair_exact({Family::GL, 2, 3});
         return group("pairs", {{"(GL,2,3) = {1/8, 1/8, 3/4}",
                                 gl.probs[0] == R(1, 8) && gl.probs[1] == R(1, 8) && gl.probs[2] == R(3, 4)}});
       }},
      {2, "fixed-space distribution oracle equality", 300,
       [] {
         const auto gu = fixed_space_distribution({Family::GU, 2, 2});
         return group("fixed-space", {{"(GU,2,2) = {10/18, 7/18, 1/18}",
                                       gu.probs == std::vector<Rational>{R(10, 18), R(7, 18), R(1, 18)}}});
       }},
      {3, "class-level exactness for Sp_4(q)", 180,
       [] {
         const auto d = sp_odd_class_dist(2, 5);
         std::size_t c1_classes = 0;
         for (const auto& [k, v] : d.probs) c1_classes += k.tag == SpClassTag::C1 && v != 0;
         return group("sp-classes", {{"(2,5) Identity = 1/312", class_mass(d, SpClassTag::Identity) == R(1, 312)},
                                     {"(2,5) A31 = 120/624", class_mass(d, SpClassTag::A31) == R(120, 624)},
                                     {"(2,5) D21 = 250/624", class_mass(d, SpClassTag::D21) == R(250, 624)},
                                     {"(2,5) single C1 class of mass 250/624",
                                      c1_classes == 1 && class_mass(d, SpClassTag::C1) == R(250, 624)}});
       }},
      {4, "weighted Weil-sum identities", 60,
       [] {
         const auto v = weighted_weil_sum(2, 3, 2, SpPairMode::AllTransvections);
         return group("weil-sums",
                      {{"(2,3) r=2 all = (81 - 27 + 702)/80", v.is_rational() && v.a() == R(81 - 27 + 702, 80)}});
       }},
      {5, "domination of the character sum by the closed-form upper bound", 60,
       [] {
         return group("domination", {{"(SpOdd,1,3) r=3 sum = 231/729 <= 1/2",
                                      charbound_sum({{Family::SpOdd, 1, 3}, WeilVariant::SpOddWeil, 3}) == R(231, 729) &&
                                          upper_closed({Family::SpOdd, 1, 3}, WeilVariant::SpOddWeil, 1).four_sq ==
                                              R(1, 2)}});
       }},
      {6, "finite-field lemma suite, odd q <= 121", 30,
       [] {
         return group("lemmas", {{"q=13 adjacent squares = 2", count_adjacent_squares(13) == 2},
                                 {"q=13 census = (2, 3)", sq2_census(13).split_count == 2 &&
                                                              sq2_census(13).nonsplit_count == 3}});
       }},
      {7, "moment reproduction", 10, [] { return group("moments"); }},
      {8, "cutoff window GU(50,9)", 1,
       [] {
         const auto p = profile({Family::GU, 50, 9}, WeilVariant::GUWeil, 44, 54);
         std::ostringstream vals;
         vals.precision(4);
         vals << std::showpoint;
         vals << "upper(52) = " << *p.rows[8].upper << ", lower(46) closed = " << *p.rows[2].lower_closed;
         auto o = group("cutoff");
         o.note += "; " + vals.str();
         return o;
       }},
      {9, "Monte Carlo suite at 3 sigma, deterministic reruns", 180,
       [] {
         // Byte-identical rerun of a serialized histogram.
         auto render = [] {
           const auto h = mc_transv_product({Family::SpOdd, 10, 3}, 2, 100000, 7, TransvectionClass::Any, 2);
           std::ostringstream os;
           for (const auto& [k, c] : h.counts) os << k << ":" << c << ";";
           return os.str();
         };
         const bool same = render() == render();
         return group("monte-carlo", {{"serialized rerun identical", same}});
       }},
  };

  bool all = true;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream t;
    t.precision(3);
    t << secs;
    std::string note = o.note + ", " + t.str() + " s";
    if (secs > c.budget_seconds) {
      o.ok = false;
      note += ", over the " + std::to_string(int(c.budget_seconds)) + " s budget";
    }
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " (" << note << ")"
              << std::endl;
    all = all && o.ok;
  }
  return all ? EXIT_SUCCESS : EXIT_FAILURE;
}
