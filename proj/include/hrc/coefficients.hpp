#pragma once

// Closed-form coefficients of the second-order perturbative operator
// solution. For each mode X the solution reads
//
//   X(z) = c_1 X(0) + sum_{n>=2} c_n M_n,
//
// where M_n are fixed monomials in the initial ladder operators (see
// expansion.hpp for the full operator list) and c_1 = e^{i z k_X}. The
// families are f (probe), g (pump 1), h (pump 2), j (Stokes), k (phonon)
// and l (anti-Stokes). Only the ratios c_n / c_1 depend on the mismatches;
// the leading phase is stored separately.

#include <algorithm>
#include <array>
#include <complex>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hrc/csv.hpp"
#include "hrc/phase_kernels.hpp"
#include "hrc/scenario.hpp"

namespace hrc {

enum class Family : int { f = 0, g, h, j, k, l };

inline constexpr std::array<Family, 6> kAllFamilies = {Family::f, Family::g, Family::h,
                                                       Family::j, Family::k, Family::l};

constexpr std::string_view family_name(Family fam) noexcept {
  constexpr std::array<std::string_view, 6> names = {"f", "g", "h", "j", "k", "l"};
  return names[static_cast<int>(fam)];
}

/// Number of coefficients per family (f1-f8, g1-g19, h1-h19, j1-j10, k1-k16, l1-l10).
constexpr int family_size(Family fam) noexcept {
  constexpr std::array<int, 6> sizes = {8, 19, 19, 10, 16, 10};
  return sizes[static_cast<int>(fam)];
}

constexpr ModeId family_mode(Family fam) noexcept {
  constexpr std::array<ModeId, 6> modes = {ModeId::p, ModeId::a1, ModeId::a2,
                                           ModeId::b, ModeId::c,  ModeId::d};
  return modes[static_cast<int>(fam)];
}

/// How ambiguous or misprinted table entries are read.
///
/// `Derived` uses the forms that follow from integrating the coefficient
/// equations (and the a1 <-> a2 exchange symmetry). `StrictTranscription`
/// evaluates the printed formulas literally, for auditing:
///   f5 = f6 with e^{+iz dk4}, f7 = f8 - Gamma^2(...)e^{izk_p}/dkD^2,
///   g10 with the unsubscripted "dk" read as dkA, h7 and h19 with the stray
///   e^{izk_a1} factor, k9 = k10 = -k13 with e^{+iz dkS}.
enum class Reading { Derived, StrictTranscription };

/// One coefficient family: ratios c_n / c_1 (index 1..N, ratio[1] == 1) and
/// the unit-modulus leading phase c_1.
struct CoefficientFamily {
  std::array<cplx, 20> ratio{};
  std::array<bool, 20> limit_branch{};
  cplx lead{1.0, 0.0};
  int size = 0;

  cplx full(int n) const { return lead * ratio.at(static_cast<std::size_t>(n)); }
};

struct LimitNote {
  Family family;
  int index;
  std::string combination;  // which mismatch combination vanished
};

struct CoefficientSet {
  double z = 0.0;
  Reading reading = Reading::Derived;
  std::array<CoefficientFamily, 6> families{};
  std::vector<LimitNote> notes;

  const CoefficientFamily& operator[](Family fam) const { return families[static_cast<int>(fam)]; }
  CoefficientFamily& operator[](Family fam) { return families[static_cast<int>(fam)]; }

  /// Full coefficient c_n = c_1 * (c_n / c_1).
  cplx operator()(Family fam, int n) const {
    const auto& fm = (*this)[fam];
    if (n < 1 || n > fm.size) throw std::out_of_range("coefficient index out of range");
    return fm.full(n);
  }
  cplx ratio(Family fam, int n) const {
    const auto& fm = (*this)[fam];
    if (n < 1 || n > fm.size) throw std::out_of_range("coefficient index out of range");
    return fm.ratio[static_cast<std::size_t>(n)];
  }
};

namespace detail {

/// Records which kernel branch and which vanishing mismatches each formula hit.
class CoefficientBuilder {
 public:
  CoefficientBuilder(double z, CoefficientSet& out) : pc_(z), out_(out) {}

  const PhaseCalculus& pc() const { return pc_; }

  cplx first(Family fam, int n, double x, std::string_view name) {
    note_if_zero(fam, n, x, name);
    return pc_.first(x);
  }

  cplx second(Family fam, int n, double x, std::string_view xname, double y,
              std::string_view yname) {
    bool series = false;
    const cplx v = pc_.second(x, y, &series);
    out_[fam].limit_branch[static_cast<std::size_t>(n)] = series;
    note_if_zero(fam, n, x, xname);
    note_if_zero(fam, n, y, yname);
    if (x != 0.0 && y != 0.0 && near(x, y))
      out_.notes.push_back({fam, n, std::string(xname) + "=" + std::string(yname)});
    return v;
  }

 private:
  static bool near(double x, double y) {
    return std::abs(x - y) <= 1e-12 * std::max({std::abs(x), std::abs(y), 1.0});
  }
  void note_if_zero(Family fam, int n, double x, std::string_view name) {
    if (name != "0" && near(x, 0.0)) out_.notes.push_back({fam, n, std::string(name) + "=0"});
  }

  PhaseCalculus pc_;
  CoefficientSet& out_;
};

}  // namespace detail

/// Evaluates every coefficient at propagation length z.
inline CoefficientSet eval_coefficients(const Scenario& s, double z,
                                        Reading reading = Reading::Derived) {
  if (!(z >= 0.0)) throw std::invalid_argument("z must be >= 0");
  CoefficientSet cs;
  cs.z = z;
  cs.reading = reading;
  for (Family fam : kAllFamilies) {
    auto& fm = cs[fam];
    fm.size = family_size(fam);
    fm.ratio.fill(cplx{});
    fm.ratio[1] = 1.0;
  }

  const double g = s.couplings.g, chi = s.couplings.chi, G = s.couplings.Gamma;
  const PhaseMismatches& m = s.mismatches;
  const double S = m.dkS, A = m.dkA, D = m.dkD;
  const double d1 = m.dk1, d2 = m.dk2, d3 = m.dk3, d4 = m.dk4;
  const WaveVectors k = s.effective_wave_vectors();

  using detail::expi;
  detail::CoefficientBuilder b(z, cs);
  auto& f = cs[Family::f].ratio;
  auto& ga = cs[Family::g].ratio;
  auto& ha = cs[Family::h].ratio;
  auto& jb = cs[Family::j].ratio;
  auto& kc = cs[Family::k].ratio;
  auto& ld = cs[Family::l].ratio;

  cs[Family::f].lead = expi(z * k.k_p);
  cs[Family::g].lead = expi(z * k.k_a1);
  cs[Family::h].lead = expi(z * k.k_a2);
  cs[Family::j].lead = expi(z * k.k_b);
  cs[Family::k].lead = expi(z * k.k_c);
  cs[Family::l].lead = expi(z * k.k_d);

  // Probe a_p.
  f[2] = G * b.first(Family::f, 2, D, "dkD");
  f[3] = f[4] = G * g * b.second(Family::f, 3, D, "dkD", d3, "dk3");
  f[5] = f[6] = G * chi * b.second(Family::f, 5, D, "dkD", -d4, "dk4");
  f[7] = f[8] = G * G * b.second(Family::f, 7, D, "dkD", 0.0, "0");

  // Pump a1 (g) and, by the a1 <-> a2 exchange, pump a2 (h).
  for (Family fam : {Family::g, Family::h}) {
    auto& r = cs[fam].ratio;
    r[2] = g * b.first(fam, 2, S, "dkS");
    r[3] = chi * b.first(fam, 3, -A, "dkA");
    r[4] = G * b.first(fam, 4, -D, "dkD");
    r[5] = -g * chi * b.second(fam, 5, S, "dkS", d2, "dk2");
    r[6] = -g * chi * b.second(fam, 6, -A, "dkA", -d2, "dk2");
    r[7] = -G * g * b.second(fam, 7, S, "dkS", d3, "dk3");
    r[8] = -G * g * b.second(fam, 8, -D, "dkD", -d3, "dk3");
    r[9] = -G * chi * b.second(fam, 9, -A, "dkA", -d4, "dk4");
    r[10] = -G * chi * b.second(fam, 10, -D, "dkD", d4, "dk4");
    r[11] = -g * g * b.second(fam, 11, S, "dkS", 0.0, "0");
    r[12] = r[13] = -r[11];
    r[14] = r[15] = -chi * chi * b.second(fam, 14, -A, "dkA", 0.0, "0");
    r[17] = -r[14];
    r[16] = -G * G * b.second(fam, 16, -D, "dkD", 0.0, "0");
    r[18] = -r[16];
    r[19] = g * chi *
            (b.second(fam, 19, S, "dkS", -d1, "dk1") - b.second(fam, 19, -A, "dkA", -d1, "dk1"));
  }

  // Stokes b.
  jb[2] = g * b.first(Family::j, 2, -S, "dkS");
  jb[3] = -g * chi * b.second(Family::j, 3, -S, "dkS", d1, "dk1");
  jb[4] = jb[5] = g * chi * b.second(Family::j, 4, -S, "dkS", -d2, "dk2");
  jb[6] = jb[7] = g * G * b.second(Family::j, 6, -S, "dkS", -d3, "dk3");
  jb[8] = -g * g * b.second(Family::j, 8, -S, "dkS", 0.0, "0");
  jb[9] = jb[10] = -jb[8];

  // Phonon c. The printed table attaches the chi^2 term of the shared
  // monomial a1'a1 a2'a2 c to k8 and the g^2 term to k13; that labeling is kept.
  kc[2] = g * b.first(Family::k, 2, -S, "dkS");
  kc[3] = chi * b.first(Family::k, 3, -A, "dkA");
  kc[4] = kc[5] = g * G * b.second(Family::k, 4, -S, "dkS", -d3, "dk3");
  kc[6] = kc[7] = -G * chi * b.second(Family::k, 6, -A, "dkA", -d4, "dk4");
  kc[11] = kc[12] = -chi * chi * b.second(Family::k, 11, -A, "dkA", 0.0, "0");
  kc[8] = -kc[11];
  kc[9] = kc[10] = g * g * b.second(Family::k, 9, -S, "dkS", 0.0, "0");
  kc[13] = -kc[9];
  kc[14] = kc[15] = kc[16] =
      g * chi *
      (b.second(Family::k, 14, -S, "dkS", -d2, "dk2") - b.second(Family::k, 14, -A, "dkA", -d2, "dk2"));

  // Anti-Stokes d.
  ld[2] = chi * b.first(Family::l, 2, A, "dkA");
  ld[3] = ld[4] = g * chi * b.second(Family::l, 3, A, "dkA", d2, "dk2");
  ld[5] = g * chi * b.second(Family::l, 5, A, "dkA", d1, "dk1");
  ld[6] = ld[7] = G * chi * b.second(Family::l, 6, A, "dkA", d4, "dk4");
  ld[8] = ld[9] = ld[10] = chi * chi * b.second(Family::l, 8, A, "dkA", 0.0, "0");

  if (reading == Reading::StrictTranscription) {
    const cplx I{0.0, 1.0};
    // Literal quotients; these are singular where their denominators vanish.
    f[5] = f[6] = G * chi * (d4 * expi(z * D) + D * expi(z * d4) - A) / (A * D * d4);
    f[7] = f[8] - G * G * (1.0 + I * z * D - expi(z * D)) * expi(z * k.k_p) / (D * D);
    ga[10] = G * chi * (A - D * expi(z * d4) - A * expi(-z * D)) / (A * D * d4);
    ha[7] = ga[7] * expi(z * k.k_a1);
    ha[19] = ga[19] * expi(z * k.k_a1);
    kc[9] = kc[10] = -g * g * (1.0 - expi(z * S) - I * S * z) / (S * S);
    kc[13] = -kc[9];
  }
  return cs;
}

/// Debug dump: one row per coefficient (family, index, re, im, limit flag).
inline void write_coefficients_csv(std::ostream& os, const CoefficientSet& cs) {
  os << "family,index,re,im,limit_branch\n";
  for (Family fam : kAllFamilies) {
    const auto& fm = cs[fam];
    for (int n = 1; n <= fm.size; ++n) {
      const cplx v = fm.full(n);
      os << family_name(fam) << ',' << n << ',' << format_double(v.real()) << ','
         << format_double(v.imag()) << ',' << (fm.limit_branch[static_cast<std::size_t>(n)] ? 1 : 0)
         << '\n';
    }
  }
}

}  // namespace hrc
