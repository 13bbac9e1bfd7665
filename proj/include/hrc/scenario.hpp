#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hrc {

using cplx = std::complex<double>;

/// The six bosonic modes of the probed coupler. The order is fixed and is
/// used for serialization and for Fock-space indexing.
enum class ModeId : int { p = 0, a1 = 1, a2 = 2, b = 3, c = 4, d = 5 };

inline constexpr int kNumModes = 6;
inline constexpr std::array<ModeId, kNumModes> kAllModes = {ModeId::p,  ModeId::a1, ModeId::a2,
                                                            ModeId::b,  ModeId::c,  ModeId::d};

constexpr int index_of(ModeId m) noexcept { return static_cast<int>(m); }

constexpr std::string_view mode_name(ModeId m) noexcept {
  switch (m) {
    case ModeId::p: return "p";
    case ModeId::a1: return "a1";
    case ModeId::a2: return "a2";
    case ModeId::b: return "b";
    case ModeId::c: return "c";
    case ModeId::d: return "d";
  }
  return "?";
}

inline std::optional<ModeId> parse_mode(std::string_view s) {
  for (ModeId m : kAllModes)
    if (mode_name(m) == s) return m;
  return std::nullopt;
}

/// Maps a phase onto (-pi, pi].
inline double normalize_phase(double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(phi, two_pi);  // [-pi, pi]
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

inline cplx polar_amplitude(double magnitude, double phase) {
  if (!(magnitude >= 0.0)) throw std::invalid_argument("amplitude magnitude must be >= 0");
  return std::polar(magnitude, phase);
}

/// Coherent amplitudes of the initial product state |alpha>|alpha1>|alpha2>|beta>|gamma>|delta>.
struct CoherentAmplitudes {
  cplx alpha{};   // probe
  cplx alpha1{};  // pump 1
  cplx alpha2{};  // pump 2
  cplx beta{};    // Stokes
  cplx gamma{};   // phonon
  cplx delta{};   // anti-Stokes

  cplx operator[](ModeId m) const noexcept {
    switch (m) {
      case ModeId::p: return alpha;
      case ModeId::a1: return alpha1;
      case ModeId::a2: return alpha2;
      case ModeId::b: return beta;
      case ModeId::c: return gamma;
      case ModeId::d: return delta;
    }
    return {};
  }
  cplx& operator[](ModeId m) noexcept {
    switch (m) {
      case ModeId::p: return alpha;
      case ModeId::a1: return alpha1;
      case ModeId::a2: return alpha2;
      case ModeId::b: return beta;
      case ModeId::c: return gamma;
      case ModeId::d: break;
    }
    return delta;
  }

  double magnitude(ModeId m) const { return std::abs((*this)[m]); }
  double phase(ModeId m) const { return normalize_phase(std::arg((*this)[m])); }

  double max_magnitude() const {
    double r = 0.0;
    for (ModeId m : kAllModes) r = std::max(r, magnitude(m));
    return r;
  }

  friend bool operator==(const CoherentAmplitudes&, const CoherentAmplitudes&) = default;
};

/// Nonlinear coupling constants (inverse-length units).
struct Couplings {
  double g = 0.0;      // Stokes
  double chi = 0.0;    // anti-Stokes
  double Gamma = 0.0;  // probe-pump

  double max_abs() const { return std::max({std::abs(g), std::abs(chi), std::abs(Gamma)}); }
  friend bool operator==(const Couplings&, const Couplings&) = default;
};

struct WaveVectors {
  double k_p = 0.0, k_a1 = 0.0, k_a2 = 0.0, k_b = 0.0, k_c = 0.0, k_d = 0.0;

  double operator[](ModeId m) const noexcept {
    switch (m) {
      case ModeId::p: return k_p;
      case ModeId::a1: return k_a1;
      case ModeId::a2: return k_a2;
      case ModeId::b: return k_b;
      case ModeId::c: return k_c;
      case ModeId::d: return k_d;
    }
    return 0.0;
  }
  friend bool operator==(const WaveVectors&, const WaveVectors&) = default;
};

/// Stokes (dkS), anti-Stokes (dkA) and probe-pump (dkD) mismatches plus the
/// four combinations dk1 = dkA - dkS, dk2 = dkA + dkS, dk3 = dkS + dkD,
/// dk4 = dkA - dkD.
struct PhaseMismatches {
  double dkS = 0.0, dkA = 0.0, dkD = 0.0;
  double dk1 = 0.0, dk2 = 0.0, dk3 = 0.0, dk4 = 0.0;

  static PhaseMismatches from_base(double dkS, double dkA, double dkD) {
    return {dkS, dkA, dkD, dkA - dkS, dkA + dkS, dkS + dkD, dkA - dkD};
  }
  friend bool operator==(const PhaseMismatches&, const PhaseMismatches&) = default;
};

inline PhaseMismatches derive_mismatches(const WaveVectors& k) {
  return PhaseMismatches::from_base(-k.k_a1 - k.k_a2 + k.k_b + k.k_c,
                                    k.k_a1 + k.k_a2 + k.k_c - k.k_d,
                                    k.k_a1 + k.k_a2 - k.k_p);
}

/// A representative set of wave vectors reproducing the given mismatches:
/// k_a1 = k_a2 = k_c = 0, k_b = dkS, k_d = -dkA, k_p = -dkD.
inline WaveVectors canonical_wave_vectors(const PhaseMismatches& m) {
  WaveVectors k;
  k.k_b = m.dkS;
  k.k_d = -m.dkA;
  k.k_p = -m.dkD;
  return k;
}

struct Scenario {
  CoherentAmplitudes amplitudes;
  Couplings couplings;
  PhaseMismatches mismatches;
  /// Present when the scenario was specified through absolute wave vectors.
  std::optional<WaveVectors> wave_vectors;
  std::vector<double> z_grid;

  /// Absolute wave vectors: the stored ones, or the canonical representative.
  WaveVectors effective_wave_vectors() const {
    return wave_vectors ? *wave_vectors : canonical_wave_vectors(mismatches);
  }

  static Scenario from_mismatches(CoherentAmplitudes a, Couplings c, double dkS, double dkA,
                                  double dkD, std::vector<double> z = {}) {
    Scenario s;
    s.amplitudes = a;
    s.couplings = c;
    s.mismatches = PhaseMismatches::from_base(dkS, dkA, dkD);
    s.z_grid = std::move(z);
    return s;
  }

  static Scenario from_wave_vectors(CoherentAmplitudes a, Couplings c, const WaveVectors& k,
                                    std::vector<double> z = {}) {
    Scenario s;
    s.amplitudes = a;
    s.couplings = c;
    s.mismatches = derive_mismatches(k);
    s.wave_vectors = k;
    s.z_grid = std::move(z);
    return s;
  }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Structural checks that make a scenario unusable (as opposed to the
/// short-length validity bound, which only marks points).
inline void check_well_formed(const Scenario& s) {
  const auto finite = [](double x) { return std::isfinite(x); };
  for (ModeId m : kAllModes) {
    const cplx v = s.amplitudes[m];
    if (!finite(v.real()) || !finite(v.imag()))
      throw std::invalid_argument("non-finite amplitude for mode " + std::string(mode_name(m)));
  }
  const auto& c = s.couplings;
  if (!finite(c.g) || !finite(c.chi) || !finite(c.Gamma))
    throw std::invalid_argument("non-finite coupling constant");
  const auto& m = s.mismatches;
  for (double x : {m.dkS, m.dkA, m.dkD, m.dk1, m.dk2, m.dk3, m.dk4})
    if (!finite(x)) throw std::invalid_argument("non-finite phase mismatch");
  for (std::size_t i = 0; i < s.z_grid.size(); ++i) {
    if (!finite(s.z_grid[i]) || s.z_grid[i] < 0.0)
      throw std::invalid_argument("z grid entries must be finite and >= 0");
    if (i > 0 && !(s.z_grid[i] > s.z_grid[i - 1]))
      throw std::invalid_argument("z grid must be strictly increasing");
  }
}

struct ValidityReport {
  double lambda = 0.0;  // max coupling magnitude
  double xi = 0.0;      // max amplitude magnitude
  std::vector<double> bound;  // |lambda * z * xi| per grid point
  std::vector<bool> valid;    // bound < 1
  double max_bound = 0.0;

  bool all_valid() const { return std::all_of(valid.begin(), valid.end(), [](bool v) { return v; }); }
};

inline double validity_bound(const Scenario& s, double z) {
  return std::abs(s.couplings.max_abs() * z * s.amplitudes.max_magnitude());
}

/// Evaluates the short-length validity bound |Lambda z xi| < 1 on the grid.
/// Scenarios that violate it are reported, never rejected.
inline ValidityReport validate_scenario(const Scenario& s) {
  ValidityReport r;
  r.lambda = s.couplings.max_abs();
  r.xi = s.amplitudes.max_magnitude();
  r.bound.reserve(s.z_grid.size());
  r.valid.reserve(s.z_grid.size());
  for (double z : s.z_grid) {
    const double b = std::abs(r.lambda * z * r.xi);
    r.bound.push_back(b);
    r.valid.push_back(b < 1.0);
    r.max_bound = std::max(r.max_bound, b);
  }
  return r;
}

/// Evenly spaced grid including both ends.
inline std::vector<double> linspace(double start, double stop, std::size_t count) {
  if (count < 2) throw std::invalid_argument("grid count must be >= 2");
  if (!std::isfinite(start) || !std::isfinite(stop)) throw std::invalid_argument("grid range must be finite");
  std::vector<double> v(count);
  const double step = (stop - start) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) v[i] = start + step * static_cast<double>(i);
  v.back() = stop;
  return v;
}

}  // namespace hrc
