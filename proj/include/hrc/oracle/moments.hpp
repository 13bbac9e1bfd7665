#pragma once

// Moments of a truncated Fock state and the witnesses defined from them.
// Only lowering operators are applied, so every moment is exact within the
// truncated space.

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "hrc/oracle/fock.hpp"
#include "hrc/witness_kind.hpp"

namespace hrc::oracle {

struct MomentTable {
  template <class T>
  using Grid = std::array<std::array<T, kNumModes>, kNumModes>;

  std::array<cplx, kNumModes> mean{};        // <i>
  std::array<double, kNumModes> number{};    // <i'i>
  Grid<double> number_product{};             // <N_i N_j>
  Grid<cplx> cross_dagger{};                 // <i j'>
  Grid<cplx> cross{};                        // <i j>
  std::array<double, kNumModes> second_factorial{};  // <i'^2 i^2>
  double norm_squared = 0.0;

  static std::size_t ix(ModeId m) { return static_cast<std::size_t>(index_of(m)); }
  double N(ModeId i) const { return number[ix(i)]; }
  double NN(ModeId i, ModeId j) const { return number_product[ix(i)][ix(j)]; }
  cplx ijdag(ModeId i, ModeId j) const { return cross_dagger[ix(i)][ix(j)]; }
  cplx ij(ModeId i, ModeId j) const { return cross[ix(i)][ix(j)]; }
  double factorial2(ModeId i) const { return second_factorial[ix(i)]; }
};

inline MomentTable moments(const FockState& st) {
  MomentTable t;
  const auto& psi = st.amp;
  t.norm_squared = norm_squared(psi);
  std::array<std::vector<cplx>, kNumModes> L;
  for (ModeId m : kAllModes) L[MomentTable::ix(m)] = lower(st.basis, m, psi);
  for (ModeId i : kAllModes) {
    const auto a = MomentTable::ix(i);
    t.mean[a] = inner(psi, L[a]);
    t.number[a] = norm_squared(L[a]);
  }
  for (ModeId i : kAllModes) {
    const auto a = MomentTable::ix(i);
    for (ModeId j : kAllModes) {
      const auto b = MomentTable::ix(j);
      if (b < a) continue;
      const std::vector<cplx> Lij = lower(st.basis, i, L[b]);  // i j psi
      const double q = norm_squared(Lij);
      const cplx c = inner(psi, Lij);
      t.cross[a][b] = t.cross[b][a] = c;
      if (a == b) {
        t.second_factorial[a] = q;
        t.number_product[a][a] = q + t.number[a];
        t.cross_dagger[a][a] = t.number[a] + 1.0;
      } else {
        t.number_product[a][b] = t.number_product[b][a] = q;
        // <i j'> = <j' i> = <j psi | i psi> for distinct modes.
        t.cross_dagger[a][b] = inner(L[b], L[a]);
        t.cross_dagger[b][a] = std::conj(t.cross_dagger[a][b]);
      }
    }
  }
  return t;
}

/// Witness values straight from the definitions:
///   HZ-1  E_ij  = <N_i N_j> - |<i j'>|^2
///   HZ-2  E'_ij = <N_i><N_j> - |<i j>|^2
///   S_i->j      = E_ij + <N_i>/2
///   D_i         = <i'^2 i^2> - <N_i>^2
inline double witness_from_moments(const MomentTable& m, const WitnessKind& k) {
  switch (k.criterion) {
    case Criterion::HZ1: return m.NN(k.first, k.second) - std::norm(m.ijdag(k.first, k.second));
    case Criterion::HZ2: return m.N(k.first) * m.N(k.second) - std::norm(m.ij(k.first, k.second));
    case Criterion::Steering:
      return m.NN(k.first, k.second) - std::norm(m.ijdag(k.first, k.second)) + 0.5 * m.N(k.first);
    case Criterion::Antibunching: return m.factorial2(k.first) - m.N(k.first) * m.N(k.first);
  }
  return 0.0;
}

/// Conserved charges of the momentum operator.
inline double charge_Q1(const MomentTable& m) {
  using M = ModeId;
  return 2 * m.N(M::p) + m.N(M::a1) + m.N(M::a2) + 2 * m.N(M::b) + 2 * m.N(M::d);
}
inline double charge_Q2(const MomentTable& m) {
  using M = ModeId;
  return 2 * m.N(M::p) + m.N(M::a1) + m.N(M::a2) + m.N(M::b) + m.N(M::c) + 3 * m.N(M::d);
}

inline double expectation(const SparseOperator& G, const FockState& st) {
  std::vector<cplx> y;
  G.apply(st.amp, y);
  return inner(st.amp, y).real();
}

}  // namespace hrc::oracle
