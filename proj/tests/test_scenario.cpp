#include <gtest/gtest.h>

#include <random>

#include "hrc/builtin_scenarios.hpp"
#include "hrc/scenario.hpp"
#include "hrc/scenario_io.hpp"

using namespace hrc;

TEST(Mismatches, StokesVanishesForBalancedWaveVectors) {
  WaveVectors k;
  k.k_a1 = k.k_a2 = 1.0;
  k.k_b = 1.5;
  k.k_c = 0.5;
  EXPECT_EQ(derive_mismatches(k).dkS, 0.0);
}

TEST(Mismatches, AntiStokesVanishesForBalancedWaveVectors) {
  WaveVectors k;
  k.k_a1 = k.k_a2 = 1.0;
  k.k_c = 0.5;
  k.k_d = 2.5;
  EXPECT_EQ(derive_mismatches(k).dkA, 0.0);
}

TEST(Mismatches, CombinationsForFigureParameters) {
  const auto m = PhaseMismatches::from_base(-10, 19, 9);
  EXPECT_EQ(m.dk1, 29);
  EXPECT_EQ(m.dk2, 9);
  EXPECT_EQ(m.dk3, -1);
  EXPECT_EQ(m.dk4, 10);
}

TEST(Mismatches, CanonicalWaveVectorsReproduceMismatches) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-20, 20);
  for (int i = 0; i < 200; ++i) {
    const auto m = PhaseMismatches::from_base(u(rng), u(rng), u(rng));
    const auto back = derive_mismatches(canonical_wave_vectors(m));
    EXPECT_DOUBLE_EQ(back.dkS, m.dkS);
    EXPECT_DOUBLE_EQ(back.dkA, m.dkA);
    EXPECT_DOUBLE_EQ(back.dkD, m.dkD);
  }
}

TEST(Mismatches, IdentitiesHoldForRandomWaveVectors) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int i = 0; i < 1000; ++i) {
    WaveVectors k{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
    const auto m = derive_mismatches(k);
    EXPECT_NEAR(m.dk1, m.dkA - m.dkS, 1e-12);
    EXPECT_NEAR(m.dk2, m.dkA + m.dkS, 1e-12);
    EXPECT_NEAR(m.dk3, m.dkS + m.dkD, 1e-12);
    EXPECT_NEAR(m.dk4, m.dkA - m.dkD, 1e-12);
  }
}

TEST(Mismatches, InvariantUnderShiftsPreservingBaseMismatches) {
  WaveVectors k{0.3, 1.1, -0.4, 2.0, 0.7, -1.3};
  const double s = 0.37;
  WaveVectors q = k;
  q.k_p += 2 * s;
  q.k_a1 += s;
  q.k_a2 += s;
  q.k_b += 1.5 * s;  // b + c shifted by 2s
  q.k_c += 0.5 * s;
  q.k_d += 2.5 * s;  // keeps dkA
  const auto a = derive_mismatches(k), b = derive_mismatches(q);
  EXPECT_NEAR(a.dkS, b.dkS, 1e-14);
  EXPECT_NEAR(a.dkA, b.dkA, 1e-14);
  EXPECT_NEAR(a.dkD, b.dkD, 1e-14);
}

TEST(Validity, ZeroCouplingAlwaysValid) {
  CoherentAmplitudes a;
  a.alpha1 = 100.0;
  auto s = Scenario::from_mismatches(a, {}, 1, 2, 3, linspace(0, 10, 5));
  EXPECT_TRUE(validate_scenario(s).all_valid());
}

TEST(Validity, BoundArithmetic) {
  CoherentAmplitudes a;
  a.alpha1 = 8.5;
  auto s = Scenario::from_mismatches(a, {1, 0, 0}, 0, 0, 0, {0.05, 0.2});
  const auto r = validate_scenario(s);
  EXPECT_NEAR(r.bound[0], 0.425, 1e-15);
  EXPECT_TRUE(r.valid[0]);
  EXPECT_NEAR(r.bound[1], 1.7, 1e-15);
  EXPECT_FALSE(r.valid[1]);
  EXPECT_FALSE(r.all_valid());
}

TEST(Scenario, PhaseNormalization) {
  EXPECT_DOUBLE_EQ(normalize_phase(std::numbers::pi), std::numbers::pi);
  EXPECT_DOUBLE_EQ(normalize_phase(-std::numbers::pi), std::numbers::pi);
  EXPECT_NEAR(normalize_phase(3 * std::numbers::pi / 2), -std::numbers::pi / 2, 1e-15);
}

TEST(Scenario, WellFormedRejectsBadGrid) {
  auto s = Scenario::from_mismatches({}, {}, 0, 0, 0, {0.1, 0.05});
  EXPECT_THROW(check_well_formed(s), std::invalid_argument);
  s.z_grid = {-0.1, 0.2};
  EXPECT_THROW(check_well_formed(s), std::invalid_argument);
  EXPECT_THROW(linspace(0, 1, 1), std::invalid_argument);
}

namespace {

Scenario random_scenario(std::mt19937_64& rng, bool wave_vectors) {
  std::uniform_real_distribution<double> u(-30, 30);
  CoherentAmplitudes a;
  for (ModeId m : kAllModes) a[m] = {u(rng) / 3, u(rng) / 7};
  Couplings c{u(rng), u(rng), u(rng)};
  std::vector<double> z{0.0, std::abs(u(rng)) * 1e-3 + 1e-9};
  z.push_back(z.back() * 3.1);
  if (wave_vectors) return Scenario::from_wave_vectors(a, c, {u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)}, z);
  return Scenario::from_mismatches(a, c, u(rng), u(rng), u(rng), z);
}

}  // namespace

TEST(ScenarioIO, RoundTripIsBitExact) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 300; ++i) {
    const Scenario s = random_scenario(rng, i % 2 == 1);
    const Scenario back = parse_scenario(dump_scenario(s));
    EXPECT_EQ(back, s);
    EXPECT_EQ(dump_scenario(back), dump_scenario(s));
  }
}

TEST(ScenarioIO, BuiltinsRoundTrip) {
  for (const auto& b : kBuiltinScenarios) {
    const Scenario s = builtin_scenario(b.name);
    EXPECT_EQ(parse_scenario(dump_scenario(s)), s) << b.name;
  }
}

TEST(ScenarioIO, PolarAmplitudesAndGridRange) {
  const Scenario s = parse_scenario(R"({
    "amplitudes": {"alpha1": {"mag": 2, "phase": 1.5707963267948966}, "delta": -1, "beta": {"re": 7}},
    "couplings": {"g": 1, "chi": 1.2},
    "mismatches": {"dkS": -10, "dkA": 19, "dkD": 9},
    "z_grid": {"start": 0.01, "stop": 0.05, "count": 5}
  })");
  EXPECT_NEAR(s.amplitudes.alpha1.imag(), 2.0, 1e-15);
  EXPECT_NEAR(s.amplitudes.alpha1.real(), 0.0, 1e-15);
  EXPECT_EQ(s.amplitudes.delta, cplx(-1.0, 0.0));
  EXPECT_EQ(s.amplitudes.beta, cplx(7.0, 0.0));
  EXPECT_EQ(s.couplings.Gamma, 0.0);
  EXPECT_EQ(s.mismatches.dk3, -1.0);
  ASSERT_EQ(s.z_grid.size(), 5u);
  EXPECT_DOUBLE_EQ(s.z_grid[2], 0.03);
}

TEST(ScenarioIO, WaveVectorInput) {
  const Scenario s = parse_scenario(R"({"wave_vectors": {"k_a1": 1, "k_a2": 1, "k_b": 1.5, "k_c": 0.5}})");
  ASSERT_TRUE(s.wave_vectors.has_value());
  EXPECT_EQ(s.mismatches.dkS, 0.0);
  EXPECT_EQ(s.effective_wave_vectors(), *s.wave_vectors);
}

TEST(ScenarioIO, Errors) {
  EXPECT_THROW(parse_scenario("{"), ScenarioParseError);
  EXPECT_THROW(parse_scenario(R"({"couplings": {"g": 1}})"), ScenarioParseError);
  EXPECT_THROW(parse_scenario(R"({"mismatches": {"dkS": 0, "dkA": 0, "dkD": 0}, "wave_vectors": {}})"),
               ScenarioParseError);
  EXPECT_THROW(parse_scenario(R"({"mismatches": {"dkS": 0, "dkA": 0}})"), ScenarioParseError);
  EXPECT_THROW(parse_scenario(R"({"mismatches": {"dkS": 0, "dkA": 0, "dkD": 0}, "amplitudes": {"e": 1}})"),
               ScenarioParseError);
  EXPECT_THROW(
      parse_scenario(R"({"mismatches": {"dkS": 0, "dkA": 0, "dkD": 0}, "amplitudes": {"beta": {"re": 1, "mag": 1}}})"),
      ScenarioParseError);
  EXPECT_THROW(parse_scenario(R"({"mismatches": {"dkS": 0, "dkA": 0, "dkD": 0}, "z_grid": [0.2, 0.1]})"),
               ScenarioParseError);
  EXPECT_THROW(load_scenario("/nonexistent/scenario.json"), ScenarioParseError);
}

TEST(Builtins, FigureTwoEncodesCaption) {
  const Scenario s = builtin_scenario("fig2");
  EXPECT_EQ(s.amplitudes.alpha, cplx(0.0));
  EXPECT_EQ(s.amplitudes.alpha1, cplx(8.5));
  EXPECT_EQ(s.amplitudes.alpha2, cplx(8.3));
  EXPECT_EQ(s.amplitudes.beta, cplx(7.0));
  EXPECT_EQ(s.amplitudes.gamma, cplx(0.01));
  EXPECT_EQ(s.amplitudes.delta, cplx(-1.0));
  EXPECT_EQ(s.couplings, (Couplings{1.0, 1.2, 0.0}));
  EXPECT_EQ(s.mismatches, PhaseMismatches::from_base(-10, 19, 9));
  EXPECT_FALSE(s.wave_vectors.has_value());
  ASSERT_EQ(s.z_grid.size(), 200u);
  EXPECT_EQ(s.z_grid.front(), 0.001);
  EXPECT_EQ(s.z_grid.back(), 0.1);
}

TEST(Builtins, PhaseVariants) {
  EXPECT_EQ(builtin_scenario("fig3").amplitudes.alpha1, cplx(8.5));
  for (const char* n : {"fig3b", "fig4"}) {
    const Scenario s = builtin_scenario(n);
    EXPECT_NEAR(std::arg(s.amplitudes.alpha1), std::numbers::pi / 2, 1e-15) << n;
    EXPECT_NEAR(std::abs(s.amplitudes.alpha1), 8.5, 1e-14) << n;
    EXPECT_EQ(s.mismatches, builtin_scenario("fig2").mismatches);
  }
  EXPECT_THROW(builtin_scenario("fig9"), std::invalid_argument);
}

TEST(Builtins, OverridesAndDkdUnit) {
  BuiltinOptions o;
  o.g = 2.0;
  o.gamma_over_g = 1.5;
  o.probe_alpha = cplx(-9.0, 0.0);
  Scenario s = builtin_scenario("fig2", o);
  EXPECT_EQ(s.couplings.Gamma, 3.0);
  EXPECT_EQ(s.couplings.chi, 2.4);
  EXPECT_EQ(s.amplitudes.alpha, cplx(-9.0));
  EXPECT_EQ(s.mismatches.dkD, 18.0);
  EXPECT_EQ(s.mismatches.dkS, -20.0);
  EXPECT_DOUBLE_EQ(s.z_grid.back(), 0.05);
  o.dkd_unit = DkdUnit::Absolute;
  s = builtin_scenario("fig2", o);
  EXPECT_EQ(s.mismatches.dkD, 9.0);
  EXPECT_EQ(parse_dkd_unit("absolute"), DkdUnit::Absolute);
  EXPECT_THROW(parse_dkd_unit("meters"), std::invalid_argument);
}
