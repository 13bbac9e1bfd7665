#pragma once

// Built-in scenarios encoding the figure captions. Quantities are given in
// units of g; the z grid covers gz in [0.001, 0.1] with 200 points.

#include <array>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hrc/scenario.hpp"

namespace hrc {

/// How the caption's bare "dkD = 9" is read.
enum class DkdUnit { G, Absolute };

inline DkdUnit parse_dkd_unit(std::string_view s) {
  if (s == "g") return DkdUnit::G;
  if (s == "absolute") return DkdUnit::Absolute;
  throw std::invalid_argument("dkD unit must be 'g' or 'absolute', got '" + std::string(s) + "'");
}

struct BuiltinOptions {
  double g = 1.0;
  std::optional<double> gamma_over_g;  // default 0
  std::optional<cplx> probe_alpha;     // default 0
  DkdUnit dkd_unit = DkdUnit::G;
};

struct BuiltinInfo {
  std::string_view name;
  std::string_view description;
};

inline constexpr std::array<BuiltinInfo, 4> kBuiltinScenarios = {{
    {"fig2", "steering and HZ entanglement: a1=8.5, a2=8.3, b=7, c=0.01, d=-1, chi=1.2g, "
             "dkS=-10g, dkA=19g, dkD=9g"},
    {"fig3", "fig2 parameters with pump-1 phase 0"},
    {"fig3b", "fig2 parameters with pump-1 phase pi/2"},
    {"fig4", "fig2 parameters with pump-1 phase pi/2 (antibunching)"},
}};

inline std::vector<double> builtin_gz_grid() { return linspace(0.001, 0.1, 200); }

inline Scenario builtin_scenario(std::string_view name, const BuiltinOptions& opt = {}) {
  double phi1 = 0.0;
  if (name == "fig2" || name == "fig3") {
    phi1 = 0.0;
  } else if (name == "fig3b" || name == "fig4") {
    phi1 = std::numbers::pi / 2;
  } else {
    throw std::invalid_argument("unknown built-in scenario '" + std::string(name) + "'");
  }
  if (!(opt.g > 0.0)) throw std::invalid_argument("g must be > 0");
  const double g = opt.g;

  CoherentAmplitudes a;
  a.alpha = opt.probe_alpha.value_or(cplx{});
  a.alpha1 = std::polar(8.5, phi1);
  a.alpha2 = 8.3;
  a.beta = 7.0;
  a.gamma = 0.01;
  a.delta = -1.0;
  Couplings c{g, 1.2 * g, opt.gamma_over_g.value_or(0.0) * g};
  const double dkD = opt.dkd_unit == DkdUnit::G ? 9.0 * g : 9.0;

  std::vector<double> z = builtin_gz_grid();
  for (double& x : z) x /= g;
  return Scenario::from_mismatches(a, c, -10.0 * g, 19.0 * g, dkD, std::move(z));
}

inline bool is_builtin(std::string_view name) {
  for (const auto& b : kBuiltinScenarios)
    if (b.name == name) return true;
  return false;
}

}  // namespace hrc
