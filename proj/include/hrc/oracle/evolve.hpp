#pragma once

// Spatial evolution of a truncated Fock state under the momentum operator.
//
// The coefficient tables use X(z) = e^{-iGz} X e^{iGz} (so that free
// evolution gives X(z) = e^{izk_X} X), hence the dual state evolution is
// psi(z) = e^{+iGz} psi(0). The opposite sign is available for checks.

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "hrc/oracle/fock.hpp"

namespace hrc::oracle {

enum class EvolutionSign { Positive, Negative };

class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EvolveOptions {
  EvolutionSign sign = EvolutionSign::Positive;
  double step_norm = 1.0;           // h * ||G||_inf per step
  double term_tolerance = 1e-17;    // stop the Taylor series below this
  double doubling_tolerance = 1e-9; // acceptance for the step-doubling check
  int max_terms = 80;
  int max_doublings = 6;
};

struct EvolveStats {
  std::size_t steps = 0;
  std::size_t matvecs = 0;
  double doubling_difference = 0.0;
  double norm_drift = 0.0;
};

namespace detail {

inline std::vector<cplx> taylor_propagate(const SparseOperator& G, std::vector<cplx> psi, double z,
                                          std::size_t steps, const EvolveOptions& opt, std::size_t& matvecs) {
  const double sgn = opt.sign == EvolutionSign::Positive ? 1.0 : -1.0;
  const double h = z / static_cast<double>(steps);
  std::vector<cplx> term(psi.size()), next(psi.size());
  for (std::size_t s = 0; s < steps; ++s) {
    term = psi;
    for (int n = 1; n <= opt.max_terms; ++n) {
      G.apply(term, next);
      ++matvecs;
      const cplx f = cplx(0.0, sgn * h / static_cast<double>(n));
      double tn = 0.0;
      for (std::size_t i = 0; i < psi.size(); ++i) {
        term[i] = f * next[i];
        psi[i] += term[i];
        tn += std::norm(term[i]);
      }
      if (std::sqrt(tn) < opt.term_tolerance) break;
      if (n == opt.max_terms) throw NonConvergence("Taylor series did not converge within max_terms");
    }
  }
  return psi;
}

inline double distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace detail

/// psi(z) = exp(+-iGz) psi(0) by a step-wise Taylor series. The step count
/// keeps h ||G|| <= step_norm; the result is accepted once doubling the
/// step count changes the state by less than doubling_tolerance.
inline FockState evolve(const FockState& state, const SparseOperator& G, double z,
                        const EvolveOptions& opt = {}, EvolveStats* stats = nullptr) {
  if (!(z >= 0.0)) throw std::invalid_argument("z must be >= 0");
  if (G.dim != state.amp.size()) throw std::invalid_argument("operator and state dimensions differ");
  EvolveStats st;
  FockState out = state;
  if (z == 0.0) {
    if (stats) *stats = st;
    return out;
  }
  std::size_t steps = static_cast<std::size_t>(std::ceil(z * G.norm_inf() / opt.step_norm));
  if (steps == 0) steps = 1;
  std::vector<cplx> coarse = detail::taylor_propagate(G, state.amp, z, steps, opt, st.matvecs);
  for (int attempt = 0;; ++attempt) {
    std::vector<cplx> fine = detail::taylor_propagate(G, state.amp, z, 2 * steps, opt, st.matvecs);
    st.doubling_difference = detail::distance(coarse, fine);
    steps *= 2;
    if (st.doubling_difference < opt.doubling_tolerance) {
      out.amp = std::move(fine);
      break;
    }
    if (attempt + 1 >= opt.max_doublings)
      throw NonConvergence("step doubling changed the state by " + std::to_string(st.doubling_difference));
    coarse = std::move(fine);
  }
  st.steps = steps;
  st.norm_drift = std::abs(out.norm_squared() - state.norm_squared());
  if (stats) *stats = st;
  return out;
}

}  // namespace hrc::oracle
