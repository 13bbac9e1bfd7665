// Acceptance run: one PASS/FAIL line per criterion, followed by indented
// detail lines. Exit status is nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "hrc/builtin_scenarios.hpp"
#include "hrc/oracle/compare.hpp"
#include "hrc/sweep.hpp"
#include "hrc/witnesses.hpp"

using namespace hrc;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;
std::vector<std::string> pending;  // detail lines, printed under the next verdict

void verdict(int id, bool ok, const std::string& what) {
  std::printf("[%s] %d. %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
  for (const auto& line : pending) std::printf("       %s\n", line.c_str());
  pending.clear();
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <class... Args>
void detail(const char* fmt, Args... args) {
  char buf[512];
  if constexpr (sizeof...(Args) == 0)
    std::snprintf(buf, sizeof buf, "%s", fmt);
  else
    std::snprintf(buf, sizeof buf, fmt, args...);
  pending.emplace_back(buf);
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

BuiltinOptions with_gamma(double gamma_over_g, double probe = 0.0) {
  BuiltinOptions o;
  o.gamma_over_g = gamma_over_g;
  o.probe_alpha = probe;
  return o;
}

std::vector<double> curve(const std::string& witness, const Scenario& s) {
  std::vector<double> v;
  const WitnessKind k = parse_witness(witness);
  for (double z : s.z_grid) v.push_back(evaluate_witness(k, eval_coefficients(s, z), s.amplitudes));
  return v;
}

bool any_negative(const std::vector<double>& v) {
  return std::any_of(v.begin(), v.end(), [](double x) { return x < 0.0; });
}

void threshold_reproduction() {
  const auto t0 = Clock::now();
  const Scenario s = builtin_scenario("fig2", with_gamma(0.0));
  const auto a = find_threshold(parse_witness("S_a1->d"), s, 0.001, 0.1, 1e-5);
  const auto b = find_threshold(parse_witness("S_d->a1"), s, 0.001, 0.1, 1e-5);
  const double dt = seconds_since(t0);
  const bool ok = a.sign_changes == 1 && a.z_star >= 0.012 && a.z_star <= 0.022 && b.sign_changes == 1 &&
                  b.z_star >= 0.05 && b.z_star <= 0.085 && dt < 5.0;
  detail("S_a1->d: gz* = %.5f, sign changes %zu (window [0.012, 0.022])", a.z_star, a.sign_changes);
  detail("S_d->a1: gz* = %.5f, sign changes %zu (window [0.05, 0.085])", b.z_star, b.sign_changes);
  detail("runtime %.3f s (limit 5 s)", dt);
  verdict(1, ok, "threshold reproduction (fig2, Gamma = 0)");
}

void asymmetric_steering() {
  const Scenario s = builtin_scenario("fig2", with_gamma(0.0));
  const CoefficientSet cs = eval_coefficients(s, 0.03);
  const double ad = evaluate_witness(parse_witness("S_a1->d"), cs, s.amplitudes);
  const double da = evaluate_witness(parse_witness("S_d->a1"), cs, s.amplitudes);
  detail("S_a1->d = %.6g, S_d->a1 = %.6g", ad, da);
  verdict(2, ad < 0.0 && da > 0.0, "asymmetric steering at gz = 0.03");
}

void persistent_pump_anti_stokes_entanglement() {
  const std::vector<double> e0 = curve("HZ1_a1d", builtin_scenario("fig2", with_gamma(0.0, 9.0)));
  const std::vector<double> e15 = curve("HZ1_a1d", builtin_scenario("fig2", with_gamma(1.5, 9.0)));
  const auto all_neg = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x < 0.0; });
  };
  std::size_t less_negative = 0;
  for (std::size_t i = 0; i < e0.size(); ++i) less_negative += e15[i] > e0[i];
  const double frac = static_cast<double>(less_negative) / static_cast<double>(e0.size());
  detail("E_a1d < 0 on all %zu points: Gamma = 0 %s, Gamma = 1.5g %s", e0.size(), all_neg(e0) ? "yes" : "no",
         all_neg(e15) ? "yes" : "no");
  detail("Gamma = 1.5g, alpha = 9 less negative at %zu/%zu points (%.1f%%, need >= 90%%)", less_negative, e0.size(),
         100 * frac);
  detail("at gz = 0.1: Gamma = 0 %.6g, Gamma = 1.5g %.6g", e0.back(), e15.back());
  verdict(3, all_neg(e0) && all_neg(e15) && frac >= 0.9, "persistent pump/anti-Stokes entanglement");
}

void probe_independence() {
  const char* names[] = {"HZ1_bd", "HZ2_bc", "D_b", "D_c", "D_d"};
  bool ok = true;
  for (const char* n : names) {
    const auto a = curve(n, builtin_scenario("fig2", with_gamma(0.0)));
    const auto b = curve(n, builtin_scenario("fig2", with_gamma(10.0)));
    std::size_t differ = 0;
    for (std::size_t i = 0; i < a.size(); ++i) differ += a[i] != b[i];
    ok &= differ == 0;
    detail("%-6s  points differing between Gamma = 0 and 10g: %zu", n, differ);
  }
  verdict(4, ok, "probe independence (exact equality, Gamma = 0 vs 10g, probe vacuum)");
}

void phase_controlled_nonclassicality() {
  const bool bd_half_pi = any_negative(curve("HZ1_bd", builtin_scenario("fig3b")));
  const bool bd_zero = any_negative(curve("HZ1_bd", builtin_scenario("fig3")));
  const bool a1_half_pi = any_negative(curve("D_a1", builtin_scenario("fig4")));
  const bool a1_zero = any_negative(curve("D_a1", builtin_scenario("fig2")));
  detail("E_bd negative somewhere: phi1 = pi/2 %s, phi1 = 0 %s", bd_half_pi ? "yes" : "no", bd_zero ? "yes" : "no");
  detail("D_a1 negative somewhere: phi1 = pi/2 %s, phi1 = 0 %s", a1_half_pi ? "yes" : "no", a1_zero ? "yes" : "no");
  verdict(5, bd_half_pi && !bd_zero && a1_half_pi && !a1_zero, "phase-controlled nonclassicality");
}

// Criteria 6 and 7 share the oracle runs.
void oracle_suite() {
  const std::vector<double> grid = {0.01, 0.02, 0.03, 0.04, 0.05};
  const auto t0 = Clock::now();
  std::size_t records = 0, failed = 0;
  double worst_ratio = 0.0, worst_conservation = 0.0;
  std::map<std::string, oracle::PooledSlope> slopes;
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const oracle::ComparisonRun run = oracle::compare(oracle::random_small_scenario(seed), grid);
    worst_conservation = std::max(worst_conservation, run.conservation.worst());
    std::map<std::string, std::vector<double>> dev;
    for (const auto& r : run.records) {
      ++records;
      failed += !r.pass;
      worst_ratio = std::max(worst_ratio, r.abs_dev / r.tol);
      dev[to_string(r.kind)].push_back(r.abs_dev);
    }
    for (const auto& [name, d] : dev) slopes[name].add(grid, d);
  }
  const double dt = seconds_since(t0);

  double min_slope = 1e300;
  std::string min_name;
  for (const auto& [name, p] : slopes)
    if (p.slope() < min_slope) {
      min_slope = p.slope();
      min_name = name;
    }
  detail("%zu/%zu records inside C (Lambda z xi)^3 with C = %.1f; worst dev/band %.3f", records - failed, records,
         oracle::kFrozenToleranceC, worst_ratio);
  detail("smallest pooled log-log slope %.3f (%s); need >= 2.5 for each of %zu witnesses", min_slope,
         min_name.c_str(), slopes.size());
  detail("runtime %.1f s (limit 600 s)", dt);

  // For the record: the printed witness tables against the same oracle runs.
  oracle::CompareOptions printed;
  printed.form = WitnessForm::Printed;
  std::map<std::string, std::size_t> printed_fail;
  for (std::uint64_t seed = 1; seed <= 25; ++seed)
    for (const auto& r : oracle::compare(oracle::random_small_scenario(seed), grid, printed).records)
      if (!r.pass) ++printed_fail[to_string(r.kind)];
  std::string list;
  for (const auto& [name, n] : printed_fail) list += " " + name + "(" + std::to_string(n) + ")";
  detail("info: printed witness tables outside the band for %zu witnesses:%s", printed_fail.size(), list.c_str());
  verdict(6, failed == 0 && min_slope >= 2.5 && dt < 600.0, "oracle equivalence (25 scenarios, cutoff 5)");

  detail("worst relative drift over 25 runs: %.3g (limit 1e-8)", worst_conservation);
  verdict(7, worst_conservation <= 1e-8, "conservation of norm, <G>, Q1, Q2");
}

void kernel_stability() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double eps = 1e-4;

  // Continuity: 50 random base points, each mismatch and combination sent to
  // 0. Deviations are relative to max(|c|, z^2 / 2), the size bound of a
  // second-order phase integral, so coefficients that nearly cancel at the
  // base point are not held to a relative error of their own tiny value.
  std::size_t checked = 0, bad_mean = 0, bad_side = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const Couplings c{0.2 + 1.8 * u(rng), 0.2 + 1.8 * u(rng), 0.2 + 1.8 * u(rng)};
    const double S = 20 * u(rng) - 10, A = 20 * u(rng) - 10, D = 20 * u(rng) - 10;
    const double z = 0.05 + 0.5 * u(rng);
    struct Target {
      std::array<double, 3> dir, zero;
    };
    const Target targets[] = {{{1, 0, 0}, {0, A, D}}, {{0, 1, 0}, {S, 0, D}}, {{0, 0, 1}, {S, A, 0}},
                              {{0, 1, 0}, {S, S, D}}, {{0, 1, 0}, {S, -S, D}}, {{0, 0, 1}, {S, A, -S}},
                              {{0, 0, 1}, {S, A, A}}};
    for (const auto& t : targets) {
      const auto at = [&](double e) {
        return eval_coefficients(Scenario::from_mismatches({}, c, t.zero[0] + e * t.dir[0],
                                                           t.zero[1] + e * t.dir[1], t.zero[2] + e * t.dir[2]),
                                 z);
      };
      const CoefficientSet lim = at(0.0), lo = at(-eps), hi = at(eps);
      for (Family f : kAllFamilies)
        for (int n = 2; n <= lim[f].size; ++n) {
          const cplx v = lim.ratio(f, n);
          if (v == cplx{}) continue;
          ++checked;
          const double scale = std::max(std::abs(v), 0.5 * z * z);
          bad_mean += std::abs(0.5 * (lo.ratio(f, n) + hi.ratio(f, n)) - v) / scale > 1e-8;
          bad_side += std::max(std::abs(lo.ratio(f, n) - v), std::abs(hi.ratio(f, n) - v)) / scale > 10 * z * eps;
        }
    }
  }

  // Manifest signs on 10^4 random inputs inside the short-length bound.
  const char* names[] = {"HZ1_cd", "HZ2_cd", "D_b", "D_d"};
  std::vector<WitnessKind> kinds;
  for (const char* n : names) kinds.push_back(parse_witness(n));
  std::vector<std::size_t> negative(kinds.size(), 0), printed_negative(kinds.size(), 0);
  std::vector<double> most_negative(kinds.size(), 0.0);
  constexpr int kInputs = 10000;
  for (int i = 0; i < kInputs; ++i) {
    CoherentAmplitudes a;
    for (ModeId m : kAllModes) a[m] = std::polar(10.0 * u(rng), 2 * std::numbers::pi * u(rng));
    const Couplings c{2 * u(rng), 2 * u(rng), 2 * u(rng)};
    const Scenario s = Scenario::from_mismatches(a, c, 60 * u(rng) - 30, 60 * u(rng) - 30, 60 * u(rng) - 30);
    const double z = 0.9 * u(rng) / std::max(c.max_abs() * a.max_magnitude(), 1e-9);
    const CoefficientSet cs = eval_coefficients(s, z);
    const WitnessReport r = full_report(s, z, kinds);
    for (std::size_t w = 0; w < kinds.size(); ++w) {
      const double v = r.values[w].second;
      negative[w] += v < 0.0;
      most_negative[w] = std::min(most_negative[w], v);
      printed_negative[w] += evaluate_witness(kinds[w], cs, a, WitnessForm::Printed) < 0.0;
    }
  }
  const bool signs_ok = std::all_of(negative.begin(), negative.end(), [](std::size_t n) { return n == 0; });
  detail("continuity: %zu coefficient limits; mean of +-1e-4 off by > 1e-8: %zu; one-sided beyond 10 z eps: %zu",
         checked, bad_mean, bad_side);
  for (std::size_t w = 0; w < kinds.size(); ++w)
    detail("%-6s negative on %zu/%d inputs (most negative %.3g); printed table negative on %zu", names[w],
           negative[w], kInputs, most_negative[w], printed_negative[w]);
  if (!signs_ok)
    detail("cause: the second-order expansion of <N_c N_d> - |<c d^dag>|^2 is not sign-definite once |gamma| "
           "is comparable to the other amplitudes, and the Fock oracle agrees (see test_oracle); the printed "
           "non-negative form fails the oracle instead");
  verdict(8, bad_mean == 0 && bad_side == 0 && signs_ok, "kernel stability and manifest signs");
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  threshold_reproduction();
  asymmetric_steering();
  persistent_pump_anti_stokes_entanglement();
  probe_independence();
  phase_controlled_nonclassicality();
  oracle_suite();
  kernel_stability();
  std::printf("%d/8 criteria passed (%.1f s)\n", 8 - failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
