#pragma once

// Removable-singularity kernels for the perturbative coefficients.
//
// Every first-order coefficient ratio is a first divided difference of
// u(t) = exp(i t) at the nodes {0, z*dk}, and every second-order ratio is a
// second divided difference at {0, z*dk_a, z*dk_b}. Evaluating them through
// divided differences keeps full precision when mismatches vanish or
// coincide (phase matching), where the textbook quotients lose all digits.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

namespace hrc {

using cplx = std::complex<double>;

namespace detail {

/// Below this node spread the Taylor series replaces the explicit formula.
inline constexpr double kSeriesSpread = 0.5;
inline constexpr double kSmallTheta = 1e-3;
inline constexpr int kSeriesTerms = 32;

inline cplx expi(double x) { return {std::cos(x), std::sin(x)}; }

}  // namespace detail

/// E(theta) = (e^{i theta} - 1) / theta, with E(0) = i.
inline cplx phase_E(double theta) {
  if (std::abs(theta) < detail::kSmallTheta) {
    // i * sum_{n>=0} (i theta)^n / (n+1)!
    cplx term{0.0, 1.0};
    cplx sum = term;
    for (int n = 1; n < 12; ++n) {
      term *= cplx(0.0, theta) / static_cast<double>(n + 1);
      sum += term;
    }
    return sum;
  }
  // e^{i theta} - 1 = -2 sin^2(theta/2) + i sin(theta) has no cancellation.
  const double s = std::sin(0.5 * theta);
  return cplx(-2.0 * s * s, std::sin(theta)) / theta;
}

/// First divided difference of e^{it} at nodes x0, x1.
inline cplx exp_divdiff1(double x0, double x1) { return detail::expi(x0) * phase_E(x1 - x0); }

/// Second divided difference of e^{it} at nodes x0, x1, x2 (any order, any
/// coincidences). `used_series` reports whether the Taylor branch was taken.
inline cplx exp_divdiff2(double x0, double x1, double x2, bool* used_series = nullptr) {
  std::array<double, 3> y{x0, x1, x2};
  std::sort(y.begin(), y.end());
  const double spread = y[2] - y[0];
  if (spread > detail::kSeriesSpread) {
    if (used_series) *used_series = false;
    return (exp_divdiff1(y[1], y[2]) - exp_divdiff1(y[0], y[1])) / spread;
  }
  if (used_series) *used_series = true;
  // e^{i y0} * sum_{n>=2} i^n h_{n-2}(0, d1, d2) / n!, where h_m is the
  // complete homogeneous symmetric polynomial of degree m.
  const double d1 = y[1] - y[0];
  const double d2 = y[2] - y[0];
  double h = 1.0;       // h_0
  double d1pow = 1.0;   // d1^m
  cplx ipow{-1.0, 0.0}; // i^2
  double inv_fact = 0.5;
  cplx sum = ipow * h * inv_fact;
  for (int n = 3; n < detail::kSeriesTerms; ++n) {
    d1pow *= d1;
    h = d2 * h + d1pow;  // h_m(0,d1,d2) = d2 h_{m-1} + d1^m
    ipow *= cplx(0.0, 1.0);
    inv_fact /= static_cast<double>(n);
    sum += ipow * h * inv_fact;
  }
  return detail::expi(y[0]) * sum;
}

/// F(theta) = (1 + i theta - e^{i theta}) / theta^2, with F(0) = 1/2.
inline cplx phase_F(double theta) { return -exp_divdiff2(0.0, 0.0, theta); }

/// Phase-factor building blocks at a fixed propagation length z:
///   first(x)    = (e^{izx} - 1)/x                  = z E(zx)
///   second(x,y) = divided difference of e^{iz.} at {0, x, y}
/// so that, e.g., (e^{izx} - 1 - izx)/x^2 = second(0, x).
class PhaseCalculus {
 public:
  explicit PhaseCalculus(double z) : z_(z) {}

  double z() const { return z_; }

  cplx first(double x) const { return z_ * phase_E(z_ * x); }

  cplx second(double x, double y, bool* used_series = nullptr) const {
    return z_ * z_ * exp_divdiff2(0.0, z_ * x, z_ * y, used_series);
  }

 private:
  double z_;
};

}  // namespace hrc
