#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "hrc/builtin_scenarios.hpp"
#include "hrc/coefficients.hpp"

using namespace hrc;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

Scenario fig2_with_probe() {
  BuiltinOptions o;
  o.gamma_over_g = 1.5;
  return builtin_scenario("fig2", o);
}

}  // namespace

// Ratios c_n / c_1 from 50-digit evaluations of the explicit quotient forms
// at the figure parameters with Gamma = 1.5 g and z = 0.0165.
TEST(Coefficients, GoldenRatios) {
  const CoefficientSet cs = eval_coefficients(fig2_with_probe(), 0.0165);
  struct Row {
    Family fam;
    int n;
    cplx v;
  };
  const Row rows[] = {
      {Family::g, 2, {0.0013581644653652298144, 0.016425233099048096686}},
      {Family::g, 5, {0.00016301303512173636482, -8.9621335844523486408e-7}},
      {Family::g, 11, {0.00013581644653652298144, -7.4766900951903314175e-6}},
      {Family::g, 19, {-1.9101267967549321564e-6, -7.8308939564858627563e-6}},
      {Family::f, 3, {-0.00020384957536315274613, -8.9742268201944440018e-6}},
      {Family::j, 3, {0.00015882389203048355692, 0.000034592222978485656787}},
      {Family::k, 14, {-1.9267005411901691217e-6, -0.000025901125463642409458}},
      {Family::l, 5, {-0.00015691376523372862476, -0.000042423116934971519543}},
  };
  for (const auto& r : rows)
    EXPECT_LT(rel(cs.ratio(r.fam, r.n), r.v), 1e-12) << family_name(r.fam) << r.n;
}

TEST(Coefficients, FamilySizes) {
  const CoefficientSet cs = eval_coefficients(fig2_with_probe(), 0.01);
  EXPECT_EQ(cs[Family::f].size, 8);
  EXPECT_EQ(cs[Family::g].size, 19);
  EXPECT_EQ(cs[Family::h].size, 19);
  EXPECT_EQ(cs[Family::j].size, 10);
  EXPECT_EQ(cs[Family::k].size, 16);
  EXPECT_EQ(cs[Family::l].size, 10);
  EXPECT_THROW(cs(Family::j, 11), std::out_of_range);
  EXPECT_THROW(cs(Family::j, 0), std::out_of_range);
}

TEST(Coefficients, ZeroLengthIsIdentity) {
  const CoefficientSet cs = eval_coefficients(fig2_with_probe(), 0.0);
  for (Family f : kAllFamilies)
    for (int n = 1; n <= cs[f].size; ++n) EXPECT_EQ(cs(f, n), n == 1 ? cplx(1.0) : cplx(0.0));
}

TEST(Coefficients, LeadingPhasesFollowWaveVectors) {
  Scenario s = Scenario::from_wave_vectors({}, {1, 1, 1}, {0.5, -1, 2, 3, -4, 0.25});
  const double z = 0.7;
  const CoefficientSet cs = eval_coefficients(s, z);
  EXPECT_LT(std::abs(cs(Family::f, 1) - std::polar(1.0, z * 0.5)), 1e-15);
  EXPECT_LT(std::abs(cs(Family::k, 1) - std::polar(1.0, z * -4.0)), 1e-15);
  EXPECT_LT(std::abs(cs(Family::l, 1) - std::polar(1.0, z * 0.25)), 1e-15);
}

TEST(Coefficients, PumpExchangeGivesEqualRatios) {
  const CoefficientSet cs = eval_coefficients(fig2_with_probe(), 0.04);
  for (int n = 1; n <= 19; ++n) EXPECT_EQ(cs.ratio(Family::g, n), cs.ratio(Family::h, n));
}

TEST(Coefficients, StrictTranscriptionDiffersOnlyInAuditedEntries) {
  const Scenario s = fig2_with_probe();
  const CoefficientSet d = eval_coefficients(s, 0.03), t = eval_coefficients(s, 0.03, Reading::StrictTranscription);
  const std::vector<std::pair<Family, int>> audited = {{Family::f, 5}, {Family::f, 6}, {Family::f, 7},
                                                       {Family::g, 10}, {Family::h, 7}, {Family::h, 19},
                                                       {Family::k, 9}, {Family::k, 10}, {Family::k, 13}};
  for (Family f : kAllFamilies)
    for (int n = 1; n <= d[f].size; ++n) {
      const bool is_audited = std::find(audited.begin(), audited.end(), std::pair{f, n}) != audited.end();
      if (!is_audited) EXPECT_EQ(d(f, n), t(f, n)) << family_name(f) << n;
    }
  EXPECT_NE(d(Family::g, 10), t(Family::g, 10));
}

// Every coefficient is continuous as each mismatch, or each combination,
// tends to zero: the limit value agrees with the mean of the +-1e-4
// approach values to 1e-8 relative, and each one-sided value is within
// a first-order step of it. The reference size is max(|c|, z^2 / 2).
TEST(Coefficients, ContinuousAtPhaseMatching) {
  CoherentAmplitudes a;
  const Couplings c{0.8, 1.1, 0.6};
  const double base[3] = {-1.7, 2.3, 0.9};
  const double z = 0.4, eps = 1e-4;
  struct Target {
    const char* name;
    std::array<double, 3> dir;   // (dkS, dkA, dkD) direction moving the target
    std::array<double, 3> zero;  // base point with the target at 0
  };
  const Target targets[] = {
      {"dkS", {1, 0, 0}, {0, base[1], base[2]}},
      {"dkA", {0, 1, 0}, {base[0], 0, base[2]}},
      {"dkD", {0, 0, 1}, {base[0], base[1], 0}},
      {"dk1", {0, 1, 0}, {base[0], base[0], base[2]}},
      {"dk2", {0, 1, 0}, {base[0], -base[0], base[2]}},
      {"dk3", {0, 0, 1}, {base[0], base[1], -base[0]}},
      {"dk4", {0, 0, 1}, {base[0], base[1], base[1]}},
  };
  for (const auto& t : targets) {
    const auto at = [&](double e) {
      return eval_coefficients(Scenario::from_mismatches(a, c, t.zero[0] + e * t.dir[0], t.zero[1] + e * t.dir[1],
                                                         t.zero[2] + e * t.dir[2]),
                               z);
    };
    const CoefficientSet lim = at(0.0), lo = at(-eps), hi = at(eps);
    for (Family f : kAllFamilies)
      for (int n = 2; n <= lim[f].size; ++n) {
        const cplx v = lim.ratio(f, n);
        if (v == cplx{}) continue;
        const double scale = std::max(std::abs(v), 0.5 * z * z);
        const cplx mean = 0.5 * (lo.ratio(f, n) + hi.ratio(f, n));
        EXPECT_LT(std::abs(mean - v) / scale, 1e-8) << t.name << ' ' << family_name(f) << n;
        EXPECT_LT(std::abs(hi.ratio(f, n) - v) / scale, 10 * z * eps) << t.name << ' ' << family_name(f) << n;
      }
  }
}

TEST(Coefficients, LimitBranchRecorded) {
  const CoefficientSet cs = eval_coefficients(Scenario::from_mismatches({}, {1, 1, 1}, 0, 2, 3), 0.1);
  EXPECT_TRUE(cs[Family::g].limit_branch[11]);
  bool noted = false;
  for (const auto& n : cs.notes) noted |= n.combination == "dkS=0";
  EXPECT_TRUE(noted);
}

TEST(Coefficients, CsvDump) {
  std::ostringstream os;
  write_coefficients_csv(os, eval_coefficients(fig2_with_probe(), 0.02));
  const std::string s = os.str();
  EXPECT_EQ(s.rfind("family,index,re,im,limit_branch\n", 0), 0u);
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 1 + 8 + 19 + 19 + 10 + 16 + 10);
}

TEST(Coefficients, RejectsNegativeLength) {
  EXPECT_THROW(eval_coefficients(fig2_with_probe(), -1e-3), std::invalid_argument);
}
