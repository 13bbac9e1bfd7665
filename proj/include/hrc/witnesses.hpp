#pragma once

// Closed-form nonclassicality witnesses for the coherent initial state,
// written in terms of the operator-solution coefficients. Terms of the form
// "{X} + c.c." are evaluated as 2 Re X.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hrc/coefficients.hpp"
#include "hrc/csv.hpp"
#include "hrc/expansion.hpp"
#include "hrc/scenario.hpp"
#include "hrc/witness_kind.hpp"

namespace hrc {

/// Which witness expressions to use. `Expanded` evaluates every moment of
/// the second-order operator solution mechanically (expansion.hpp) and
/// truncates consistently at second order; `Printed` uses the tabulated
/// closed forms verbatim. Several printed forms differ from the expansion
/// at second order, so `Printed` is kept for auditing only.
enum class WitnessForm { Expanded, Printed };

namespace detail {

/// Amplitude shorthands used by every closed form.
struct Amps {
  cplx a, a1, a2, b, c, d;  // alpha, alpha1, alpha2, beta, gamma, delta
  double na, n1, n2, nb, nc, nd;

  explicit Amps(const CoherentAmplitudes& x)
      : a(x.alpha), a1(x.alpha1), a2(x.alpha2), b(x.beta), c(x.gamma), d(x.delta),
        na(std::norm(a)), n1(std::norm(a1)), n2(std::norm(a2)), nb(std::norm(b)),
        nc(std::norm(c)), nd(std::norm(d)) {}
};

/// Coefficient accessors mirroring the table notation: g(2) is g_2, etc.
struct Coeffs {
  const CoefficientSet& cs;
  cplx g(int n) const { return cs(Family::g, n); }
  cplx j(int n) const { return cs(Family::j, n); }
  cplx k(int n) const { return cs(Family::k, n); }
  cplx l(int n) const { return cs(Family::l, n); }
};

inline cplx cj(cplx x) { return std::conj(x); }
inline double n2(cplx x) { return std::norm(x); }
inline double twice_re(cplx x) { return 2.0 * x.real(); }

// ---------------------------------------------------------------- steering

inline double steering_a1_b(const Coeffs& C, const Amps& A) {
  const auto g = [&](int n) { return C.g(n); };
  const double r =
      A.n1 / 2.0 +
      n2(g(2)) * (A.n1 * A.n1 * A.n2 + A.nb * A.nb * A.nc - 0.5 * (A.n1 - A.n2 - 1.0) * A.nb * A.nc -
                  0.5 * A.n1 * A.n2 * (3.0 * A.nb + A.nc + 1.0)) +
      n2(g(3)) * ((A.n2 - A.nc) * A.nb * A.nd + (A.n2 + 1.0) * (A.nc + 1.0) * A.nd / 2.0 +
                  0.5 * A.n1 * A.nd * (A.n2 + A.nc + 1.0) - A.n1 * A.n2 * A.nc / 2.0) +
      n2(g(4)) * (A.na / 2.0 * (2.0 * A.nb + A.n2 + A.n1 + 1.0) - A.n1 * A.n2 / 2.0);
  const cplx x = g(1) * cj(g(2)) / 2.0 * A.a1 * A.a2 * cj(A.b) * cj(A.c) +
                 g(1) * cj(g(3)) / 2.0 * A.a1 * A.a2 * A.c * cj(A.d) +
                 g(1) * cj(g(4)) / 2.0 * cj(A.a) * A.a1 * A.a2 +
                 (cj(g(1)) * g(6) - g(1) * cj(g(5))) / 2.0 * A.n1 * cj(A.b) * cj(A.c * A.c) * A.d +
                 (cj(g(1)) * g(8) - g(1) * cj(g(7))) / 2.0 * A.n1 * A.a * cj(A.b) * cj(A.c) +
                 (cj(g(1)) * g(9) + g(1) * cj(g(10))) / 2.0 * A.n1 * A.a * A.c * cj(A.d) +
                 (A.nb + (A.n2 + 1.0) / 2.0) *
                     (g(2) * cj(g(3)) * A.b * A.c * A.c * cj(A.d) + g(2) * cj(g(4)) * cj(A.a) * A.b * A.c +
                      g(3) * cj(g(4)) * cj(A.a) * cj(A.c) * A.d);
  return r + twice_re(x);
}

inline double steering_a1_c(const Coeffs& C, const Amps& A) {
  const auto g = [&](int n) { return C.g(n); };
  const auto k = [&](int n) { return C.k(n); };
  const double r =
      A.n1 / 2.0 +
      n2(g(2)) * (A.n1 * A.n2 / 2.0 * (2.0 * A.n1 - A.nb - 3.0 * A.nc - 1.0) -
                  0.5 * (A.n1 - A.n2 - 2.0 * A.nc - 1.0) * A.nb * A.nc) +
      n2(g(3)) * ((A.n1 * A.n1 + A.nc * A.nc) * A.nd + 3.0 * A.nd * (A.n2 + 1.0) * (A.n1 + A.nc) +
                  A.n1 * A.nd / 2.0 * (A.n2 + 3.0 * A.nc + 1.0) +
                  A.nd * (A.n2 + (A.n2 + 1.0) * (A.nc + 1.0) / 2.0) - 1.5 * A.n1 * A.n2 * A.nc) +
      n2(g(4)) * (A.na * (A.nc + (A.n1 + A.n2 + 1.0) / 2.0) - A.n1 * A.n2 / 2.0);
  const cplx x =
      g(1) * cj(g(2)) / 2.0 * A.a1 * A.a2 * cj(A.b) * cj(A.c) +
      1.5 * g(1) * cj(g(3)) * A.a1 * A.a2 * A.c * cj(A.d) +
      g(1) * cj(g(4)) / 2.0 * cj(A.a) * A.a1 * A.a2 +
      (g(1) * cj(g(5)) + 5.0 * g(1) * cj(g(6))) / 2.0 * A.n1 * A.b * A.c * A.c * cj(A.d) +
      (cj(g(1)) * g(8) - g(1) * cj(g(7))) / 2.0 * A.a * A.n1 * cj(A.b) * cj(A.c) +
      (cj(g(1)) * g(10) + 3.0 * g(1) * cj(g(9))) / 2.0 * A.a * A.n1 * A.c * cj(A.d) +
      g(2) * cj(g(3)) * (-A.n1 + A.n2 + A.nc + 1.0 + (A.n2 + 1.0) / 2.0) * A.b * A.c * A.c * cj(A.d) +
      ((A.n2 + 1.0) / 2.0) *
          (g(2) * cj(g(4)) * cj(A.a) * A.b * A.c + 3.0 * g(3) * cj(g(4)) * cj(A.a) * cj(A.c) * A.d) +
      A.nc * (g(2) * cj(g(4)) * cj(A.a) * A.b * A.c + g(3) * cj(g(4)) * cj(A.a) * cj(A.c) * A.d) +
      ((g(1) * cj(g(19)) + cj(g(1)) * g(19)) / 2.0 - k(2) * cj(k(3))) * A.a1 * A.a1 * A.a2 * A.a2 *
          cj(A.b) * cj(A.d);
  return r + twice_re(x);
}

inline double steering_a1_d(const Coeffs& C, const Amps& A) {
  const auto g = [&](int n) { return C.g(n); };
  const double r =
      n2(g(2)) * ((A.nd + (A.n1 + A.n2 + 1.0) / 2.0) * A.nb * A.nc -
                  A.n1 * A.n2 / 2.0 * (A.nb + A.nc + 1.0)) +
      n2(g(3)) * (-A.n1 * A.nd / 2.0 * (A.n2 + A.nc + 1.0) + A.nd / 2.0 * (A.n2 + A.nc + 1.0) +
                  A.nd * A.nd * (A.n2 + A.nc + 1.0) + A.n2 * A.nc / 2.0 * (A.n1 + A.nd)) +
      n2(g(4)) * (A.na * A.nd + A.na / 2.0 * (A.n2 + A.n1 + 1.0) - A.n1 * A.n2 / 2.0) + A.n1 / 2.0;
  const cplx x =
      g(1) * cj(g(2)) / 2.0 * A.a1 * A.a2 * cj(A.b) * cj(A.c) +
      g(1) * cj(g(3)) / 2.0 * A.a1 * A.a2 * A.c * cj(A.d) +
      g(1) * cj(g(4)) / 2.0 * cj(A.a) * A.a1 * A.a2 +
      (cj(g(1)) * g(5) - g(1) * cj(g(6))) / 2.0 * A.n1 * A.b * A.c * A.c * cj(A.d) +
      (g(1) * cj(g(7)) + cj(g(1)) * g(8)) / 2.0 * A.a * A.n1 * cj(A.b) * cj(A.c) +
      (cj(g(1)) * g(10) - g(1) * cj(g(9))) / 2.0 * A.a * A.n1 * A.c * cj(A.d) +
      g(1) * cj(g(19)) / 2.0 * A.a1 * A.a1 * A.a2 * A.a2 * cj(A.b) * cj(A.d) +
      (A.nd + (A.n2 + 1.0) / 2.0) *
          (g(2) * cj(g(3)) * A.b * A.c * A.c * cj(A.d) + g(2) * cj(g(4)) * cj(A.a) * A.b * A.c +
           g(3) * cj(g(4)) * cj(A.a) * cj(A.c) * A.d);
  return r + twice_re(x);
}

inline double steering_b_c(const Coeffs& C, const Amps& A) {
  const auto j = [&](int n) { return C.j(n); };
  const auto k = [&](int n) { return C.k(n); };
  const double s = A.n1 + A.n2 + 1.0;
  const double r = A.nb / 2.0 + n2(j(2)) / 2.0 *
                                    (A.n1 * A.n2 * (7.0 * A.nb + 7.0 * A.nc + 3.0) -
                                     3.0 * A.nb * A.nc * s);
  const cplx x = 1.5 * j(1) * cj(j(2)) * cj(A.a1) * cj(A.a2) * A.b * A.c +
                 1.5 * j(1) * cj(j(6)) * s * cj(A.a) * A.b * A.c +
                 2.5 * j(1) * cj(j(4)) * s * A.b * A.c * A.c * cj(A.d) +
                 (k(2) * cj(k(3)) + cj(j(1)) * j(3) / 2.0) * A.a1 * A.a1 * A.a2 * A.a2 * cj(A.b) * cj(A.d);
  return r + twice_re(x);
}

inline double steering_b_d(const Coeffs& C, const Amps& A) {
  const auto j = [&](int n) { return C.j(n); };
  const auto l = [&](int n) { return C.l(n); };
  const double s = A.n1 + A.n2 + 1.0;
  const double r = A.nb / 2.0 + n2(j(2)) * (A.n1 * A.n2 * (A.nd + (A.nb + A.nc + 1.0) / 2.0) -
                                            0.5 * s * A.nb * A.nc);
  const cplx x = (cj(l(1)) * l(5) + cj(j(1)) * j(3) / 2.0) * A.a1 * A.a1 * A.a2 * A.a2 * cj(A.b) * cj(A.d) +
                 cj(j(1)) * j(2) / 2.0 * A.a1 * A.a2 * cj(A.b) * cj(A.c) +
                 j(1) * cj(j(4)) / 2.0 * s * A.b * A.c * A.c * cj(A.d) +
                 j(1) * cj(j(6)) / 2.0 * s * cj(A.a) * A.b * A.c;
  return r + twice_re(x);
}

inline double steering_c_d(const Coeffs& C, const Amps& A) {
  const auto k = [&](int n) { return C.k(n); };
  const double s = A.n1 + A.n2 + 1.0;
  const double r = A.nc / 2.0 +
                   n2(k(2)) * (A.n1 * A.n2 * (A.nb + A.nd + 1.0 + A.nc / 2.0) - 0.5 * s * A.nb * A.nc) +
                   n2(k(3)) * (A.n1 * A.n2 * (A.nd - A.nc) / 2.0 +
                               s * A.nd * (A.nd + 1.5 * A.nc + 2.5));
  const cplx x = k(1) * cj(k(2)) / 2.0 * cj(A.a1) * cj(A.a2) * A.b * A.c +
                 k(1) * cj(k(3)) / 2.0 * A.a1 * A.a2 * A.c * cj(A.d) +
                 k(1) * cj(k(4)) / 2.0 * s * cj(A.a) * A.b * A.c +
                 k(1) * cj(k(6)) / 2.0 * s * A.a * A.c * cj(A.d) +
                 k(1) * cj(k(14)) / 2.0 * s * A.b * A.c * A.c * cj(A.d) +
                 k(2) * cj(k(3)) * A.a1 * A.a1 * A.a2 * A.a2 * cj(A.b) * cj(A.d);
  return r + twice_re(x);
}

inline double steering_d_a1(const Coeffs& C, const Amps& A) {
  const auto g = [&](int n) { return C.g(n); };
  const auto l = [&](int n) { return C.l(n); };
  const double r =
      A.nd / 2.0 + n2(g(2)) * A.nb * A.nc * A.nd +
      n2(g(3)) * ((A.n2 + A.nc + 1.0) * A.nd * (A.nd - 0.5) - 1.5 * A.n1 * A.nd * (A.n2 + 1.0) -
                  A.nc * A.nd / 2.0 * (3.0 * A.n1 + A.n2) + A.n1 * A.n2 * A.nc / 2.0) +
      n2(g(4)) * A.na * A.nd;
  const cplx bc2d = A.b * A.c * A.c * cj(A.d);
  const cplx x = (-g(1) * cj(g(6)) + cj(l(1)) * l(3) / 2.0) * A.n1 * bc2d +
                 (-g(1) * cj(g(9)) + cj(l(1)) * l(6) / 2.0) * A.n1 * A.a * A.c * cj(A.d) +
                 g(2) * cj(g(3)) * A.nd * bc2d + g(2) * cj(g(4)) * cj(A.a) * A.b * A.c * A.nd +
                 g(3) * cj(g(4)) * A.nd * cj(A.a) * cj(A.c) * A.d +
                 cj(l(1)) * l(2) * A.a1 * A.a2 * A.c * cj(A.d) / 2.0 + cj(l(1)) * l(3) * bc2d / 2.0 +
                 cj(l(1)) * l(4) * A.n2 * bc2d / 2.0 +
                 cj(l(1)) * l(5) * A.a1 * A.a1 * A.a2 * A.a2 * cj(A.b) * cj(A.d) / 2.0 +
                 cj(l(1)) * l(6) * (A.n1 + 1.0) * A.a * A.c * cj(A.d) / 2.0 +
                 cj(l(1)) * l(7) * A.n2 * cj(A.a1 * A.a1) * cj(A.a2 * A.a2) * A.b * A.d / 2.0;
  return r + twice_re(x);
}

// ------------------------------------------------------------------- HZ-1

inline double hz1_a1_b(const Coeffs& C, const Amps& A) {
  const auto g = [&](int n) { return C.g(n); };
  const double r = n2(g(2)) * (A.n1 * A.n1 * A.n2 + A.nb * A.nb * A.nc - A.n1 * A.nb * (A.n2 + A.nc)) +
                   n2(g(3)) * (A.n2 + A.nc) * A.nb * A.nd + n2(g(4)) * A.na * A.nb;
  const cplx x = -g(1) * cj(g(5)) * A.n1 * cj(A.b) * cj(A.c * A.c) * A.d -
                 g(1) * cj(g(7)) * A.n1 * A.a * cj(A.b) * cj(A.c) +
                 g(2) * cj(g(3)) * A.nb * A.b * A.c * A.c * cj(A.d) +
                 g(2) * cj(g(4)) * A.nb * cj(A.a) * A.b * A.c +
                 g(3) * cj(g(4)) * A.nb * cj(A.a) * cj(A.c) * A.d;
  return r + twice_re(x);
}

inline double hz1_a1_c(const Coeffs& C, const Amps& A) {
  const auto g = [&](int n) { return C.g(n); };
  const auto k = [&](int n) { return C.k(n); };
  const double r =
      n2(g(2)) * (A.n1 - A.nc) * (A.n1 * A.n2 - A.nb * A.nc) +
      n2(g(3)) * (3.0 * A.n1 * (A.n2 + 1.0) * A.nd + (A.n1 + A.n2 + 1.0) * A.nc * A.nd +
                  A.n1 * A.n1 * A.nd + A.n2 * A.nd - A.n1 * A.n2 * A.nc) +
      n2(g(4)) * A.na * A.nc;
  const cplx x = g(1) * cj(g(3)) * A.a1 * A.a2 * A.c * cj(A.d) +
                 2.0 * g(1) * cj(g(6)) * A.n1 * A.b * A.c * A.c * cj(A.d) +
                 g(2) * cj(g(3)) * (-A.n1 + A.n2 + A.nc + 1.0) * A.b * A.c * A.c * cj(A.d) -
                 g(1) * cj(g(7)) * A.n1 * A.a * cj(A.b) * cj(A.c) +
                 cj(g(2)) * g(4) * A.nc * A.a * cj(A.b) * cj(A.c) +
                 g(1) * cj(g(9)) * A.n1 * A.a * A.c * cj(A.d) +
                 cj(g(3)) * g(4) * (A.n2 + A.nc + 1.0) * A.a * A.c * cj(A.d) -
                 k(2) * cj(k(3)) * A.a1 * A.a1 * A.a2 * A.a2 * cj(A.b) * cj(A.d);
  return r + twice_re(x);
}

inline double hz1_a1_d(const Coeffs& C, const Amps& A) {
  const auto g = [&](int n) { return C.g(n); };
  const auto l = [&](int n) { return C.l(n); };
  const double t = A.n2 + A.nc + 1.0;
  const double r = n2(g(2)) * A.nb * A.nc * A.nd +
                   n2(g(3)) * (A.nd + 1.0) * (t * A.nd - A.n2 * A.nc) + n2(g(4)) * A.na * A.nd -
                   n2(l(2)) * (A.n1 * t * A.nd + t * A.nd - A.n2 * A.nc * (A.nd + 1.0));
  const cplx x = -g(1) * cj(g(6)) * A.n1 * A.b * A.c * A.c * cj(A.d) -
                 g(1) * cj(g(9)) * A.n1 * A.a * A.c * cj(A.d) +
                 g(2) * cj(g(3)) * A.nd * A.b * A.c * A.c * cj(A.d) +
                 g(2) * cj(g(4)) * cj(A.a) * A.b * A.c * A.nd +
                 g(3) * cj(g(4)) * A.nd * cj(A.a) * cj(A.c) * A.d;
  return r + twice_re(x);
}

inline double hz1_b_c(const Coeffs& C, const Amps& A) {
  const auto j = [&](int n) { return C.j(n); };
  const auto k = [&](int n) { return C.k(n); };
  const double s = A.n1 + A.n2 + 1.0;
  const double r = n2(j(2)) * (A.n1 * A.n2 * (3.0 * A.nb + 3.0 * A.nc + 1.0) - A.nb * A.nc * s);
  const cplx x = j(1) * cj(j(2)) * cj(A.a1) * cj(A.a2) * A.b * A.c +
                 k(2) * cj(k(3)) * A.a1 * A.a1 * A.a2 * A.a2 * cj(A.b) * cj(A.d) +
                 j(1) * cj(j(6)) * s * cj(A.a) * A.b * A.c +
                 2.0 * j(1) * cj(j(4)) * s * A.b * A.c * A.c * cj(A.d);
  return r + twice_re(x);
}

inline double hz1_b_d(const Coeffs& C, const Amps& A) {
  const double r = n2(C.j(2)) * A.n1 * A.n2 * A.nd;
  const cplx x = cj(C.l(1)) * C.l(5) * A.a1 * A.a1 * A.a2 * A.a2 * cj(A.b) * cj(A.d);
  return r + twice_re(x);
}

inline double hz1_c_d(const Coeffs& C, const Amps& A) {
  return n2(C.k(2)) * A.n1 * A.n2 * A.nd +
         n2(C.k(3)) * (A.n1 + A.n2 + 1.0) * A.nd * (A.nc + A.nd + 2.0);
}

// ------------------------------------------------------------------- HZ-2

inline double hz2_a1_b(const Coeffs& C, const Amps& A) {
  const auto g = [&](int n) { return C.g(n); };
  const auto j = [&](int n) { return C.j(n); };
  const double r = n2(g(2)) * (A.nb * A.nb * A.nc + A.n1 * A.n1 * A.n2 + A.n1 * A.n2 * A.nb +
                               A.n1 * A.nb * A.nc) +
                   n2(g(3)) * (A.n2 + A.nc + 1.0) * A.nb * A.nd + n2(g(4)) * A.na * A.nb;
  const cplx x = g(2) * cj(g(3)) * A.b * A.c * A.c * cj(A.d) * A.nb +
                 g(2) * cj(g(4)) * cj(A.a) * A.b * A.c * A.nb +
                 g(3) * cj(g(4)) * cj(A.a) * cj(A.c) * A.d * A.nb -
                 cj(j(1)) * j(4) * A.n1 * cj(A.b) * cj(A.c * A.c) * A.d -
                 j(1) * cj(j(6)) * A.n1 * cj(A.a) * A.b * A.c;
  return r + twice_re(x);
}

inline double hz2_a1_c(const Coeffs& C, const Amps& A) {
  const auto g = [&](int n) { return C.g(n); };
  const auto k = [&](int n) { return C.k(n); };
  const double r =
      n2(g(2)) * (A.nb * A.nc * A.nc + A.n1 * A.n1 * A.n2 + A.n1 * A.n2 * A.nc - A.n1 * A.nb * A.nc) +
      n2(g(3)) * ((A.n2 + A.nc + 1.0) * A.nc * A.nd - 2.0 * A.n2 * A.nc * A.nd + A.n1 * A.n1 * A.nd -
                  A.n1 * A.n2 * A.nd + A.n1 * A.nd - A.n2 * A.nd) +
      n2(g(4)) * A.na * A.nc;
  const cplx x = -k(1) * cj(k(14)) * A.n1 * A.b * A.c * A.c * cj(A.d) -
                 k(1) * cj(k(4)) * A.n1 * cj(A.a) * A.b * A.c -
                 cj(k(1)) * k(6) * A.n1 * cj(A.a) * cj(A.c) * A.d +
                 g(2) * cj(g(3)) * (A.nc - A.n2) * A.b * A.c * A.c * cj(A.d) +
                 g(2) * cj(g(4)) * A.nc * cj(A.a) * A.b * A.c +
                 g(3) * cj(g(4)) * (A.nc - A.n2) * cj(A.a) * cj(A.c) * A.d -
                 k(2) * cj(k(3)) * A.a1 * A.a1 * A.a2 * A.a2 * cj(A.b) * cj(A.d);
  return r + twice_re(x);
}

inline double hz2_a1_d(const Coeffs& C, const Amps& A) {
  const auto g = [&](int n) { return C.g(n); };
  const auto l = [&](int n) { return C.l(n); };
  const double r = n2(g(2)) * (A.nb * A.nc + A.n1 * A.nc + A.n1 * A.n2 + A.n1) * A.nd +
                   n2(g(3)) * (A.n2 + A.nc + 1.0) * A.nd * A.nd + n2(g(4)) * A.na * A.nd;
  const cplx x = g(2) * cj(g(3)) * A.b * A.c * A.c * cj(A.d) * A.nd +
                 g(2) * cj(g(4)) * cj(A.a) * A.b * A.c * A.nd +
                 g(3) * cj(g(4)) * cj(A.a) * cj(A.c) * A.d * A.nd -
                 cj(l(1)) * l(3) * A.n1 * A.b * A.c * A.c * cj(A.d) -
                 l(1) * cj(l(6)) * A.n1 * cj(A.a) * cj(A.c) * A.d;
  return r + twice_re(x);
}

inline double hz2_b_c(const Coeffs& C, const Amps& A) {
  const auto j = [&](int n) { return C.j(n); };
  const auto k = [&](int n) { return C.k(n); };
  const double s = A.n1 + A.n2 + 1.0;
  const double r = -n2(j(2)) * A.n1 * A.n2 * (A.nb + A.nc + 1.0) + n2(k(3)) * s * A.nb * A.nd;
  const cplx x = k(1) * cj(k(2)) * cj(A.a1) * cj(A.a2) * A.b * A.c +
                 k(1) * cj(k(4)) * s * cj(A.a) * A.b * A.c +
                 k(2) * cj(k(3)) * A.a1 * A.a1 * A.a2 * A.a2 * cj(A.b) * cj(A.d) +
                 (j(1) * cj(j(2)) * k(1) * cj(k(3)) + k(1) * cj(k(14))) * s * A.b * A.c * A.c * cj(A.d);
  return r - twice_re(x);
}

inline double hz2_b_d(const Coeffs& C, const Amps& A) {
  const double r = n2(C.j(2)) * A.n1 * A.n2 * A.nd;
  const cplx x = cj(C.l(1)) * C.l(5) * A.a1 * A.a1 * A.a2 * A.a2 * cj(A.b) * cj(A.d);
  return r - twice_re(x);
}

inline double hz2_c_d(const Coeffs& C, const Amps& A) {
  return n2(C.k(2)) * A.n1 * A.n2 * A.nd +
         n2(C.k(3)) * (A.n1 + A.n2 + 1.0) * (A.nc + A.nd) * A.nd;
}

// ------------------------------------------------------------ antibunching

inline double antibunching_a1(const Coeffs& C, const Amps& A) {
  const auto g = [&](int n) { return C.g(n); };
  const double r = 2.0 * n2(g(2)) * A.n1 * A.nb * A.nc +
                   2.0 * n2(g(3)) * A.n1 * (A.n2 + A.nc + 1.0) * A.nd + 2.0 * n2(g(4)) * A.na * A.n1;
  const cplx x = cj(g(1)) * g(2) * cj(g(1)) * g(3) * cj(A.a1 * A.a1) * cj(A.a2 * A.a2) * A.b * A.d +
                 2.0 * g(2) * cj(g(3)) * A.n1 * A.b * A.c * A.c * cj(A.d) +
                 2.0 * g(2) * cj(g(4)) * cj(A.a) * A.n1 * A.b * A.c +
                 2.0 * g(3) * cj(g(4)) * cj(A.a) * A.n1 * cj(A.c) * A.d;
  return r + twice_re(x);
}

inline double antibunching_b(const Coeffs& C, const Amps& A) {
  return 2.0 * n2(C.j(2)) * A.n1 * A.n2 * A.nb;
}

inline double antibunching_c(const Coeffs& C, const Amps& A) {
  const auto k = [&](int n) { return C.k(n); };
  const double r = 2.0 * n2(k(2)) * A.n1 * A.n2 * (A.nb + 1.0) * A.nc +
                   2.0 * n2(k(3)) * (A.n1 + 1.0) * (A.n2 + 1.0) * A.nc * A.nd;
  const cplx x = cj(k(1)) * k(2) * cj(k(1)) * k(3) * (A.n1 + A.n2 + 1.0) * cj(A.b) * cj(A.c * A.c) * A.d;
  return r + twice_re(x);
}

inline double antibunching_d(const Coeffs& C, const Amps& A) {
  return 2.0 * n2(C.l(2)) * A.n1 * A.n2 * A.nc * A.nd;
}

inline double printed_witness(const WitnessKind& k, const Coeffs& C, const Amps& A) {
  using M = ModeId;
  switch (k.criterion) {
    case Criterion::Steering:
      if (k.first == M::a1 && k.second == M::b) return steering_a1_b(C, A);
      if (k.first == M::a1 && k.second == M::c) return steering_a1_c(C, A);
      if (k.first == M::a1 && k.second == M::d) return steering_a1_d(C, A);
      if (k.first == M::b && k.second == M::c) return steering_b_c(C, A);
      if (k.first == M::b && k.second == M::d) return steering_b_d(C, A);
      if (k.first == M::c && k.second == M::d) return steering_c_d(C, A);
      if (k.first == M::d && k.second == M::a1) return steering_d_a1(C, A);
      break;
    case Criterion::HZ1:
      if (k.first == M::a1 && k.second == M::b) return hz1_a1_b(C, A);
      if (k.first == M::a1 && k.second == M::c) return hz1_a1_c(C, A);
      if (k.first == M::a1 && k.second == M::d) return hz1_a1_d(C, A);
      if (k.first == M::b && k.second == M::c) return hz1_b_c(C, A);
      if (k.first == M::b && k.second == M::d) return hz1_b_d(C, A);
      if (k.first == M::c && k.second == M::d) return hz1_c_d(C, A);
      break;
    case Criterion::HZ2:
      if (k.first == M::a1 && k.second == M::b) return hz2_a1_b(C, A);
      if (k.first == M::a1 && k.second == M::c) return hz2_a1_c(C, A);
      if (k.first == M::a1 && k.second == M::d) return hz2_a1_d(C, A);
      if (k.first == M::b && k.second == M::c) return hz2_b_c(C, A);
      if (k.first == M::b && k.second == M::d) return hz2_b_d(C, A);
      if (k.first == M::c && k.second == M::d) return hz2_c_d(C, A);
      break;
    case Criterion::Antibunching:
      if (k.first == M::a1) return antibunching_a1(C, A);
      if (k.first == M::b) return antibunching_b(C, A);
      if (k.first == M::c) return antibunching_c(C, A);
      if (k.first == M::d) return antibunching_d(C, A);
      break;
  }
  throw WitnessNotDerived(to_string(k));
}

}  // namespace detail

/// Pump-exchanged amplitudes (alpha1 <-> alpha2).
inline CoherentAmplitudes swap_pump_amplitudes(CoherentAmplitudes a) {
  std::swap(a.alpha1, a.alpha2);
  return a;
}

/// A witness value with the imaginary residue left over by the complex
/// arithmetic, relative to the size of the contributing terms.
struct WitnessValue {
  double value = 0.0;
  double imag_residue = 0.0;
};

inline constexpr double kRealTolerance = 1e-10;

/// Relative size, against the cancelling moment terms, below which an
/// expanded witness is reported as exactly zero (D_d vanishes identically at
/// second order and would otherwise show rounding noise of either sign).
inline constexpr double kCancellationTolerance = 1e-12;

namespace detail {

inline WitnessValue expanded_value(expansion::SecondOrderWitnesses& sw, const WitnessKind& k) {
  const auto r = sw.evaluate_complex(k);
  const double scale = std::max(r.scale, 1e-300);
  // A result below the rounding level of the cancelling moments is zero.
  const double re = std::abs(r.value.real()) <= kCancellationTolerance * r.scale ? 0.0 : r.value.real();
  return {re, std::abs(r.value.imag()) / scale};
}

inline double printed_value(const WitnessKind& kind, const CoefficientSet& cs, const CoherentAmplitudes& amps) {
  if (!uses_pump2(kind)) return printed_witness(kind, Coeffs{cs}, Amps(amps));
  // Pump-2 form: exchange the pump amplitudes and use the h family for g.
  CoefficientSet swapped = cs;
  swapped[Family::g] = cs[Family::h];
  return printed_witness(to_pump1(kind), Coeffs{swapped}, Amps(swap_pump_amplitudes(amps)));
}

}  // namespace detail

/// Evaluates one witness from a coefficient set and the initial amplitudes.
inline double evaluate_witness(const WitnessKind& kind, const CoefficientSet& cs, const CoherentAmplitudes& amps,
                               WitnessForm form = WitnessForm::Expanded) {
  require_tabulated(kind);
  if (form == WitnessForm::Printed) return detail::printed_value(kind, cs, amps);
  expansion::SecondOrderWitnesses sw(cs, amps);
  return detail::expanded_value(sw, kind).value;
}

inline double steering(const WitnessKind& kind, const CoefficientSet& cs, const CoherentAmplitudes& amps,
                       WitnessForm form = WitnessForm::Expanded) {
  if (kind.criterion != Criterion::Steering) throw std::invalid_argument("not a steering witness");
  return evaluate_witness(kind, cs, amps, form);
}
inline double entanglement_hz1(const WitnessKind& kind, const CoefficientSet& cs, const CoherentAmplitudes& amps,
                               WitnessForm form = WitnessForm::Expanded) {
  if (kind.criterion != Criterion::HZ1) throw std::invalid_argument("not an HZ-1 witness");
  return evaluate_witness(kind, cs, amps, form);
}
inline double entanglement_hz2(const WitnessKind& kind, const CoefficientSet& cs, const CoherentAmplitudes& amps,
                               WitnessForm form = WitnessForm::Expanded) {
  if (kind.criterion != Criterion::HZ2) throw std::invalid_argument("not an HZ-2 witness");
  return evaluate_witness(kind, cs, amps, form);
}
inline double antibunching_D(ModeId mode, const CoefficientSet& cs, const CoherentAmplitudes& amps,
                             WitnessForm form = WitnessForm::Expanded) {
  return evaluate_witness({Criterion::Antibunching, mode, mode}, cs, amps, form);
}

class ImaginaryResidue : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct WitnessReport {
  double z = 0.0;
  std::vector<std::pair<WitnessKind, double>> values;  // in request order
  double max_imag_residue = 0.0;

  bool nonclassical(std::size_t i) const { return values.at(i).second < 0.0; }

  std::optional<double> find(const WitnessKind& k) const {
    for (const auto& [kind, v] : values)
      if (kind == k) return v;
    return std::nullopt;
  }
};

/// Evaluates the given witnesses (all tabulated pump-1 witnesses when empty)
/// at z. Expanded values whose imaginary residue exceeds kRealTolerance
/// raise ImaginaryResidue.
inline WitnessReport full_report(const Scenario& s, double z, std::vector<WitnessKind> kinds = {},
                                 Reading reading = Reading::Derived, WitnessForm form = WitnessForm::Expanded) {
  if (kinds.empty()) kinds = tabulated_witnesses();
  for (const auto& k : kinds) require_tabulated(k);
  const CoefficientSet cs = eval_coefficients(s, z, reading);
  WitnessReport rep;
  rep.z = z;
  if (form == WitnessForm::Printed) {
    for (const auto& k : kinds) rep.values.emplace_back(k, detail::printed_value(k, cs, s.amplitudes));
    return rep;
  }
  expansion::SecondOrderWitnesses sw(cs, s.amplitudes);
  for (const auto& k : kinds) {
    const WitnessValue v = detail::expanded_value(sw, k);
    if (v.imag_residue > kRealTolerance)
      throw ImaginaryResidue("witness " + to_string(k) + " has relative imaginary residue " +
                             format_double(v.imag_residue));
    rep.max_imag_residue = std::max(rep.max_imag_residue, v.imag_residue);
    rep.values.emplace_back(k, v.value);
  }
  return rep;
}

/// One row per witness: z, kind, value, nonclassical (0/1).
inline void write_report_csv(std::ostream& os, const std::vector<WitnessReport>& reports, bool header = true) {
  if (header) os << "z,kind,value,nonclassical\n";
  for (const auto& r : reports)
    for (std::size_t i = 0; i < r.values.size(); ++i)
      os << format_double(r.z) << ',' << to_string(r.values[i].first) << ',' << format_double(r.values[i].second)
         << ',' << (r.nonclassical(i) ? 1 : 0) << '\n';
}

}  // namespace hrc
