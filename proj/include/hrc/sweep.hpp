#pragma once

// Grid sweeps over z (and optionally one scenario parameter) and sign-change
// threshold finding.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "hrc/coefficients.hpp"
#include "hrc/csv.hpp"
#include "hrc/scenario.hpp"
#include "hrc/witnesses.hpp"

namespace hrc {

enum class Axis2Kind { ProbeMagnitude, ProbePhase, DkD };

inline std::string_view axis2_name(Axis2Kind k) {
  switch (k) {
    case Axis2Kind::ProbeMagnitude: return "alpha_mag";
    case Axis2Kind::ProbePhase: return "alpha_phase";
    case Axis2Kind::DkD: return "dkD";
  }
  return "?";
}

inline Axis2Kind parse_axis2(std::string_view s) {
  for (Axis2Kind k : {Axis2Kind::ProbeMagnitude, Axis2Kind::ProbePhase, Axis2Kind::DkD})
    if (axis2_name(k) == s) return k;
  throw std::invalid_argument("unknown secondary axis '" + std::string(s) + "' (alpha_mag, alpha_phase, dkD)");
}

struct Axis2 {
  Axis2Kind kind = Axis2Kind::ProbeMagnitude;
  std::vector<double> values;
};

/// Returns the scenario with the secondary-axis parameter set to v.
inline Scenario apply_axis2(Scenario s, Axis2Kind kind, double v) {
  switch (kind) {
    case Axis2Kind::ProbeMagnitude: s.amplitudes.alpha = polar_amplitude(v, std::arg(s.amplitudes.alpha)); break;
    case Axis2Kind::ProbePhase: s.amplitudes.alpha = std::polar(std::abs(s.amplitudes.alpha), normalize_phase(v)); break;
    case Axis2Kind::DkD:
      s.mismatches = PhaseMismatches::from_base(s.mismatches.dkS, s.mismatches.dkA, v);
      s.wave_vectors.reset();
      break;
  }
  return s;
}

struct SweepSpec {
  Scenario scenario;
  std::vector<WitnessKind> witnesses;  // empty: header-only output
  std::vector<double> z_grid;
  std::optional<Axis2> axis2;
  Reading reading = Reading::Derived;
  WitnessForm form = WitnessForm::Expanded;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct SweepRow {
  double z = 0.0;
  std::optional<double> axis2;
  WitnessKind kind;
  double value = 0.0;
};

namespace detail {

inline void check_grid(const std::vector<double>& v, const char* what) {
  if (v.size() < 2) throw std::invalid_argument(std::string(what) + ": grid needs count >= 2");
  for (double x : v)
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": grid values must be finite");
}

/// Runs task(i) for i in [0, n) on a pool of workers. The first exception
/// stops further work and is rethrown.
inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& task) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; !failed && (i = next++) < n;) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          failed = true;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace detail

/// Evaluates every witness on the grid. Rows are ordered by z, then the
/// secondary axis, then witness name, independent of worker scheduling.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  detail::check_grid(spec.z_grid, "z");
  if (spec.axis2) detail::check_grid(spec.axis2->values, "axis2");
  check_well_formed(spec.scenario);
  if (spec.witnesses.empty()) return {};

  std::vector<WitnessKind> kinds = spec.witnesses;
  for (const auto& k : kinds) require_tabulated(k);
  std::sort(kinds.begin(), kinds.end(),
            [](const WitnessKind& a, const WitnessKind& b) { return to_string(a) < to_string(b); });
  kinds.erase(std::unique(kinds.begin(), kinds.end()), kinds.end());

  const std::size_t n2 = spec.axis2 ? spec.axis2->values.size() : 1;
  const std::size_t cells = spec.z_grid.size() * n2;
  std::vector<SweepRow> rows(cells * kinds.size());
  detail::parallel_for(cells, spec.threads, [&](std::size_t cell) {
    const double z = spec.z_grid[cell / n2];
    Scenario s = spec.scenario;
    std::optional<double> a2;
    if (spec.axis2) {
      a2 = spec.axis2->values[cell % n2];
      s = apply_axis2(std::move(s), spec.axis2->kind, *a2);
    }
    const WitnessReport rep = full_report(s, z, kinds, spec.reading, spec.form);
    for (std::size_t w = 0; w < kinds.size(); ++w) rows[cell * kinds.size() + w] = {z, a2, kinds[w], rep.values[w].second};
  });
  return rows;
}

/// Columns z, [axis2 name], witness, value, nonclassical.
inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows,
                            const std::optional<Axis2Kind>& axis2 = std::nullopt) {
  os << "z,";
  if (axis2) os << axis2_name(*axis2) << ',';
  os << "witness,value,nonclassical\n";
  for (const auto& r : rows) {
    os << format_double(r.z) << ',';
    if (axis2) os << format_double(r.axis2.value_or(0.0)) << ',';
    os << to_string(r.kind) << ',' << format_double(r.value) << ',' << (r.value < 0.0 ? 1 : 0) << '\n';
  }
}

class NoSignChange : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ThresholdResult {
  WitnessKind kind;
  double z_lo = 0.0, z_hi = 0.0;  // bracket, |z_hi - z_lo| <= tol
  double z_star = 0.0;            // bracket midpoint
  int direction = 0;              // -1: positive to negative, +1: negative to positive
  std::size_t sign_changes = 0;   // sign changes seen on the scan grid
};

struct Crossing {
  double lo = 0.0, hi = 0.0, mid = 0.0;
  int direction = 0;
  std::size_t sign_changes = 0;
};

/// First sign change of f on [lo, hi]: a uniform scan brackets it, then
/// bisection shrinks the bracket below tol. Zero counts as non-negative.
inline Crossing find_crossing(const std::function<double(double)>& f, double lo, double hi, double tol,
                              std::size_t scan_points = 200) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) throw std::invalid_argument("threshold range must satisfy lo < hi");
  if (!(tol > 0.0)) throw std::invalid_argument("threshold tolerance must be > 0");
  if (scan_points < 2) throw std::invalid_argument("scan needs >= 2 points");
  const auto neg = [](double v) { return v < 0.0; };
  const std::vector<double> zs = linspace(lo, hi, scan_points);
  std::vector<double> vs(zs.size());
  for (std::size_t i = 0; i < zs.size(); ++i) vs[i] = f(zs[i]);

  Crossing c;
  std::optional<std::size_t> first;
  for (std::size_t i = 1; i < vs.size(); ++i)
    if (neg(vs[i]) != neg(vs[i - 1])) {
      ++c.sign_changes;
      if (!first) first = i;
    }
  if (!first) throw NoSignChange("no sign change on [" + format_double(lo) + ", " + format_double(hi) + "]");

  double a = zs[*first - 1], b = zs[*first];
  const bool neg_a = neg(vs[*first - 1]);
  c.direction = neg_a ? 1 : -1;
  while (b - a > tol) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    (neg(f(m)) == neg_a ? a : b) = m;
  }
  c.lo = a;
  c.hi = b;
  c.mid = 0.5 * (a + b);
  return c;
}

inline ThresholdResult find_threshold(const WitnessKind& kind, const Scenario& s, double z_lo, double z_hi,
                                      double tol, Reading reading = Reading::Derived,
                                      WitnessForm form = WitnessForm::Expanded, std::size_t scan_points = 200) {
  require_tabulated(kind);
  const auto f = [&](double z) { return evaluate_witness(kind, eval_coefficients(s, z, reading), s.amplitudes, form); };
  Crossing c;
  try {
    c = find_crossing(f, z_lo, z_hi, tol, scan_points);
  } catch (const NoSignChange& e) {
    throw NoSignChange(to_string(kind) + ": " + e.what());
  }
  return {kind, c.lo, c.hi, c.mid, c.direction, c.sign_changes};
}

}  // namespace hrc
