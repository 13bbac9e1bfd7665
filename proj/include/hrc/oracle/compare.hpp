#pragma once

// Perturbative-versus-exact harness: evaluates the closed-form witnesses and
// the Fock-space oracle on the same scenario and z grid.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "hrc/coefficients.hpp"
#include "hrc/csv.hpp"
#include "hrc/oracle/evolve.hpp"
#include "hrc/oracle/fock.hpp"
#include "hrc/oracle/moments.hpp"
#include "hrc/scenario.hpp"
#include "hrc/witnesses.hpp"

namespace hrc::oracle {

/// Tolerance constant C of the band C (Lambda z xi)^3, frozen from the
/// calibration sweep (tools/calibrate_oracle.cpp, seeds 2000-2099: worst
/// ratio 1.71) with a safety factor of about two.
inline constexpr double kFrozenToleranceC = 4.0;

/// Absolute floor added to every band so that rounding noise in exactly
/// solvable cases (zero couplings) cannot fail.
inline constexpr double kToleranceFloor = 1e-12;

/// Multiplies one coefficient by a factor before the closed forms are
/// evaluated. Used to check that the harness detects a wrong coefficient.
struct CoefficientFault {
  Family family = Family::g;
  int index = 2;
  double factor = 1.5;
};

struct CompareOptions {
  Occupation cutoffs{5, 5, 5, 5, 5, 5};
  std::size_t budget = kDefaultBudget;
  double tolerance_C = kFrozenToleranceC;
  Reading reading = Reading::Derived;
  WitnessForm form = WitnessForm::Expanded;
  std::vector<WitnessKind> kinds;  // empty: every tabulated pump-1 witness
  /// Replace the oracle's z = 0 witness value by the exact coherent-state
  /// value, removing the offset caused by truncating the initial state.
  bool subtract_truncation_offset = true;
  EvolveOptions evolve;
  std::optional<CoefficientFault> fault;
};

struct ComparisonRecord {
  double z = 0.0;
  WitnessKind kind;
  double closed_form = 0.0;
  double oracle = 0.0;
  double abs_dev = 0.0;
  double rel_dev = 0.0;
  double tol = 0.0;
  bool pass = false;
};

/// Largest drifts seen along one oracle run, each relative to the initial
/// value (absolute when the initial value is below one).
struct ConservationReport {
  double norm = 0.0;
  double generator = 0.0;  // <G>
  double charge_q1 = 0.0;
  double charge_q2 = 0.0;
  double initial_leakage = 0.0;

  double worst() const { return std::max({norm, generator, charge_q1, charge_q2}); }
};

struct ComparisonRun {
  std::vector<ComparisonRecord> records;
  ConservationReport conservation;

  bool all_pass() const {
    return std::all_of(records.begin(), records.end(), [](const ComparisonRecord& r) { return r.pass; });
  }
};

inline double tolerance_band(const Scenario& s, double z, double C) {
  const double b = validity_bound(s, z);
  return C * b * b * b + kToleranceFloor;
}

namespace detail {

inline double relative_drift(double now, double start) {
  return std::abs(now - start) / std::max(std::abs(start), 1.0);
}

}  // namespace detail

/// Evolves the coherent initial state through the grid (which must be
/// increasing) and compares every requested witness at each point.
inline ComparisonRun compare(const Scenario& s, const std::vector<double>& z_grid, const CompareOptions& opt = {}) {
  Scenario sc = s;
  sc.z_grid = z_grid;
  check_well_formed(sc);
  std::vector<WitnessKind> kinds = opt.kinds.empty() ? tabulated_witnesses() : opt.kinds;
  for (const auto& k : kinds) require_tabulated(k);

  const FockBasis basis(opt.cutoffs, opt.budget);
  const SparseOperator G = build_G(s, basis);
  const FockState psi0 = prepare_coherent(s.amplitudes, basis);

  const MomentTable m0 = moments(psi0);
  const double n0 = psi0.norm_squared(), e0 = expectation(G, psi0);
  const double q10 = charge_Q1(m0), q20 = charge_Q2(m0);

  const auto closed_forms = [&](double z) {
    CoefficientSet cs = eval_coefficients(s, z, opt.reading);
    if (opt.fault) cs[opt.fault->family].ratio.at(static_cast<std::size_t>(opt.fault->index)) *= opt.fault->factor;
    std::vector<double> v;
    if (opt.form == WitnessForm::Printed) {
      for (const auto& k : kinds) v.push_back(evaluate_witness(k, cs, s.amplitudes, WitnessForm::Printed));
    } else {
      expansion::SecondOrderWitnesses sw(cs, s.amplitudes);
      for (const auto& k : kinds) v.push_back(hrc::detail::expanded_value(sw, k).value);
    }
    return v;
  };

  std::vector<double> offset(kinds.size(), 0.0);
  if (opt.subtract_truncation_offset) {
    const std::vector<double> exact0 = closed_forms(0.0);
    for (std::size_t i = 0; i < kinds.size(); ++i) offset[i] = witness_from_moments(m0, kinds[i]) - exact0[i];
  }

  ComparisonRun run;
  run.conservation.initial_leakage = psi0.leakage();
  FockState psi = psi0;
  double z_prev = 0.0;
  for (double z : z_grid) {
    psi = evolve(psi, G, z - z_prev, opt.evolve);
    z_prev = z;
    const MomentTable m = moments(psi);
    auto& cr = run.conservation;
    cr.norm = std::max(cr.norm, detail::relative_drift(psi.norm_squared(), n0));
    cr.generator = std::max(cr.generator, detail::relative_drift(expectation(G, psi), e0));
    cr.charge_q1 = std::max(cr.charge_q1, detail::relative_drift(charge_Q1(m), q10));
    cr.charge_q2 = std::max(cr.charge_q2, detail::relative_drift(charge_Q2(m), q20));

    const std::vector<double> cf = closed_forms(z);
    const double tol = tolerance_band(s, z, opt.tolerance_C);
    for (std::size_t i = 0; i < kinds.size(); ++i) {
      ComparisonRecord r;
      r.z = z;
      r.kind = kinds[i];
      r.closed_form = cf[i];
      r.oracle = witness_from_moments(m, kinds[i]) - offset[i];
      r.abs_dev = std::abs(r.closed_form - r.oracle);
      r.rel_dev = r.abs_dev / std::max(std::abs(r.oracle), 1e-300);
      r.tol = tol;
      r.pass = r.abs_dev <= tol;
      run.records.push_back(r);
    }
  }
  return run;
}

inline void write_comparison_csv(std::ostream& os, const std::vector<ComparisonRecord>& recs) {
  os << "z,witness,closed_form,oracle,abs_dev,rel_dev,tol,pass\n";
  for (const auto& r : recs)
    os << format_double(r.z) << ',' << to_string(r.kind) << ',' << format_double(r.closed_form) << ','
       << format_double(r.oracle) << ',' << format_double(r.abs_dev) << ',' << format_double(r.rel_dev) << ','
       << format_double(r.tol) << ',' << (r.pass ? 1 : 0) << '\n';
}

/// Random scenario inside the oracle regime: amplitude magnitudes in
/// [0.05, 0.5] with uniform phases, couplings in [0.2, 1], mismatches in [-5, 5].
inline Scenario random_small_scenario(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CoherentAmplitudes a;
  for (ModeId m : kAllModes) a[m] = std::polar(0.05 + 0.45 * u(rng), normalize_phase(2.0 * std::numbers::pi * u(rng)));
  Couplings c{0.2 + 0.8 * u(rng), 0.2 + 0.8 * u(rng), 0.2 + 0.8 * u(rng)};
  const double S = -5.0 + 10.0 * u(rng), A = -5.0 + 10.0 * u(rng), D = -5.0 + 10.0 * u(rng);
  return Scenario::from_mismatches(a, c, S, A, D);
}

/// Least-squares slope of log|dev| against log z.
inline double loglog_slope(const std::vector<double>& z, const std::vector<double>& dev) {
  if (z.size() != dev.size() || z.size() < 2) throw std::invalid_argument("slope needs >= 2 matched points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double x = std::log(z[i]), y = std::log(std::max(dev[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Slope of log|dev| against log z pooled over several scenarios, each with
/// its own intercept (a within-scenario regression).
class PooledSlope {
 public:
  void add(const std::vector<double>& z, const std::vector<double>& dev) {
    if (z.size() != dev.size() || z.size() < 2) throw std::invalid_argument("slope needs >= 2 matched points");
    double mx = 0, my = 0;
    const double n = static_cast<double>(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
      mx += std::log(z[i]) / n;
      my += std::log(std::max(dev[i], 1e-300)) / n;
    }
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double dx = std::log(z[i]) - mx;
      sxy_ += dx * (std::log(std::max(dev[i], 1e-300)) - my);
      sxx_ += dx * dx;
    }
    ++series_;
  }
  double slope() const { return sxx_ > 0 ? sxy_ / sxx_ : 0.0; }
  std::size_t series() const { return series_; }

 private:
  double sxy_ = 0, sxx_ = 0;
  std::size_t series_ = 0;
};

}  // namespace hrc::oracle
