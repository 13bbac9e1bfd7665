#pragma once

// Truncated six-mode Fock space: basis codec, coherent state preparation and
// the sparse momentum operator.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "hrc/scenario.hpp"

namespace hrc::oracle {

using Occupation = std::array<int, kNumModes>;

inline constexpr std::size_t kDefaultBudget = 2'000'000;

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LeakageTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Product basis with per-mode cutoffs n_max (occupations 0..n_max).
/// The flat index is sum_m n_m * stride_m with the probe mode slowest.
class FockBasis {
 public:
  explicit FockBasis(const Occupation& cutoffs, std::size_t budget = kDefaultBudget) : cutoffs_(cutoffs) {
    std::size_t dim = 1;
    for (int m = kNumModes - 1; m >= 0; --m) {
      if (cutoffs_[static_cast<std::size_t>(m)] < 1) throw std::invalid_argument("Fock cutoffs must be >= 1");
      strides_[static_cast<std::size_t>(m)] = dim;
      dim *= static_cast<std::size_t>(cutoffs_[static_cast<std::size_t>(m)] + 1);
      if (dim > budget)
        throw BudgetExceeded("Fock dimension exceeds budget of " + std::to_string(budget) + " amplitudes");
    }
    dim_ = dim;
  }

  static FockBasis uniform(int cutoff, std::size_t budget = kDefaultBudget) {
    Occupation c;
    c.fill(cutoff);
    return FockBasis(c, budget);
  }

  std::size_t dimension() const noexcept { return dim_; }
  const Occupation& cutoffs() const noexcept { return cutoffs_; }
  int cutoff(ModeId m) const noexcept { return cutoffs_[static_cast<std::size_t>(index_of(m))]; }
  std::size_t stride(ModeId m) const noexcept { return strides_[static_cast<std::size_t>(index_of(m))]; }

  std::size_t encode(const Occupation& n) const {
    std::size_t idx = 0;
    for (std::size_t m = 0; m < kNumModes; ++m) {
      if (n[m] < 0 || n[m] > cutoffs_[m]) throw std::out_of_range("occupation outside truncated basis");
      idx += static_cast<std::size_t>(n[m]) * strides_[m];
    }
    return idx;
  }

  Occupation decode(std::size_t idx) const {
    if (idx >= dim_) throw std::out_of_range("basis index out of range");
    Occupation n{};
    for (std::size_t m = 0; m < kNumModes; ++m) {
      n[m] = static_cast<int>(idx / strides_[m]);
      idx %= strides_[m];
    }
    return n;
  }

  /// Occupation of mode m in basis state idx without a full decode.
  int occupation(std::size_t idx, ModeId m) const noexcept {
    const auto k = static_cast<std::size_t>(index_of(m));
    return static_cast<int>((idx / strides_[k]) % static_cast<std::size_t>(cutoffs_[k] + 1));
  }

  friend bool operator==(const FockBasis& a, const FockBasis& b) { return a.cutoffs_ == b.cutoffs_; }

 private:
  Occupation cutoffs_{};
  std::array<std::size_t, kNumModes> strides_{};
  std::size_t dim_ = 0;
};

struct FockState {
  FockBasis basis;
  std::vector<cplx> amp;

  double norm_squared() const {
    double s = 0.0;
    for (const cplx& x : amp) s += std::norm(x);
    return s;
  }
  double leakage() const { return 1.0 - norm_squared(); }
};

inline constexpr double kMaxLeakage = 1e-6;

/// Truncated product of coherent states. The result is not renormalized;
/// a total leakage above kMaxLeakage is an error.
inline FockState prepare_coherent(const CoherentAmplitudes& amps, const FockBasis& basis,
                                  double max_leakage = kMaxLeakage) {
  std::array<std::vector<cplx>, kNumModes> per_mode;
  double kept = 1.0;
  for (ModeId m : kAllModes) {
    const cplx a = amps[m];
    const int nmax = basis.cutoff(m);
    auto& c = per_mode[static_cast<std::size_t>(index_of(m))];
    c.resize(static_cast<std::size_t>(nmax + 1));
    c[0] = std::exp(-0.5 * std::norm(a));
    double s = std::norm(c[0]);
    for (int n = 1; n <= nmax; ++n) {
      c[static_cast<std::size_t>(n)] = c[static_cast<std::size_t>(n - 1)] * a / std::sqrt(static_cast<double>(n));
      s += std::norm(c[static_cast<std::size_t>(n)]);
    }
    kept *= s;
  }
  if (1.0 - kept > max_leakage)
    throw LeakageTooLarge("coherent-state truncation leakage " + std::to_string(1.0 - kept) +
                          " exceeds limit; raise the cutoffs or lower the amplitudes");
  FockState st{basis, std::vector<cplx>(basis.dimension())};
  for (std::size_t i = 0; i < st.amp.size(); ++i) {
    cplx v{1.0, 0.0};
    for (ModeId m : kAllModes)
      v *= per_mode[static_cast<std::size_t>(index_of(m))][static_cast<std::size_t>(basis.occupation(i, m))];
    st.amp[i] = v;
  }
  return st;
}

/// Compressed-sparse-row complex matrix.
struct SparseOperator {
  std::size_t dim = 0;
  std::vector<std::size_t> row_ptr;
  std::vector<std::size_t> col;
  std::vector<cplx> val;
  bool hermitian = false;

  std::size_t nonzeros() const noexcept { return val.size(); }

  cplx at(std::size_t r, std::size_t c) const {
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
      if (col[k] == c) return val[k];
    return {};
  }

  void apply(const std::vector<cplx>& x, std::vector<cplx>& y) const {
    y.assign(dim, cplx{});
    for (std::size_t r = 0; r < dim; ++r) {
      cplx s{};
      for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += val[k] * x[col[k]];
      y[r] = s;
    }
  }

  /// Maximum absolute row sum (induced infinity norm).
  double norm_inf() const {
    double best = 0.0;
    for (std::size_t r = 0; r < dim; ++r) {
      double s = 0.0;
      for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += std::abs(val[k]);
      best = std::max(best, s);
    }
    return best;
  }

  /// max |G_rc - conj(G_cr)| over stored entries.
  double hermiticity_defect() const {
    double d = 0.0;
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
        d = std::max(d, std::abs(val[k] - std::conj(at(col[k], r))));
    return d;
  }
};

namespace detail {

struct LadderStep {
  ModeId mode;
  bool create;
};

/// Applies a product of ladder operators (rightmost first) to basis state
/// idx. Returns false if the result leaves the truncated space or vanishes.
inline bool apply_ladders(const FockBasis& basis, std::size_t idx, const std::vector<LadderStep>& ops,
                          std::size_t& out, double& factor) {
  Occupation n = basis.decode(idx);
  factor = 1.0;
  for (auto it = std::rbegin(ops); it != std::rend(ops); ++it) {
    auto& k = n[static_cast<std::size_t>(index_of(it->mode))];
    if (it->create) {
      if (k == basis.cutoff(it->mode)) return false;
      ++k;
      factor *= std::sqrt(static_cast<double>(k));
    } else {
      if (k == 0) return false;
      factor *= std::sqrt(static_cast<double>(k));
      --k;
    }
  }
  out = basis.encode(n);
  return true;
}

}  // namespace detail

/// Momentum operator G = sum_x k_x x'x + (g a1 a2 b'c' + chi a1 a2 c d' + Gamma p a1'a2' + H.c.)
/// on the truncated basis. Each interaction term T contributes T and T'
/// explicitly, so the matrix is Hermitian by construction.
inline SparseOperator build_G(const Scenario& s, const FockBasis& basis) {
  using detail::LadderStep;
  const WaveVectors k = s.effective_wave_vectors();
  const auto& cpl = s.couplings;
  const std::size_t dim = basis.dimension();

  struct Entry {
    std::size_t row, col;
    cplx v;
  };
  std::vector<Entry> entries;
  entries.reserve(dim * 7);

  struct Interaction {
    double strength;
    std::vector<LadderStep> ops;
  };
  using M = ModeId;
  const std::vector<Interaction> terms = {
      {cpl.g, {{M::a1, false}, {M::a2, false}, {M::b, true}, {M::c, true}}},
      {cpl.chi, {{M::a1, false}, {M::a2, false}, {M::c, false}, {M::d, true}}},
      {cpl.Gamma, {{M::p, false}, {M::a1, true}, {M::a2, true}}},
  };

  for (std::size_t i = 0; i < dim; ++i) {
    double diag = 0.0;
    for (ModeId m : kAllModes) diag += k[m] * basis.occupation(i, m);
    if (diag != 0.0) entries.push_back({i, i, diag});
    for (const auto& t : terms) {
      if (t.strength == 0.0) continue;
      std::size_t j = 0;
      double f = 0.0;
      if (detail::apply_ladders(basis, i, t.ops, j, f)) {
        entries.push_back({j, i, t.strength * f});  // <j|T|i>
        entries.push_back({i, j, t.strength * f});  // <i|T'|j>, couplings are real
      }
    }
  }

  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });

  SparseOperator G;
  G.dim = dim;
  G.hermitian = true;
  G.row_ptr.assign(dim + 1, 0);
  for (std::size_t e = 0; e < entries.size();) {
    const std::size_t r = entries[e].row, c = entries[e].col;
    cplx v{};
    while (e < entries.size() && entries[e].row == r && entries[e].col == c) v += entries[e++].v;
    G.col.push_back(c);
    G.val.push_back(v);
    ++G.row_ptr[r + 1];
  }
  std::partial_sum(G.row_ptr.begin(), G.row_ptr.end(), G.row_ptr.begin());
  return G;
}

/// Lowering operator of mode m applied to a state vector (exact within the basis).
inline std::vector<cplx> lower(const FockBasis& basis, ModeId m, const std::vector<cplx>& x) {
  std::vector<cplx> y(x.size());
  const std::size_t st = basis.stride(m);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int n = basis.occupation(i, m);
    if (n < basis.cutoff(m)) {
      const std::size_t up = i + st;  // |.., n+1, ..>
      y[i] = std::sqrt(static_cast<double>(n + 1)) * x[up];
    }
  }
  return y;
}

inline cplx inner(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  cplx s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

inline double norm_squared(const std::vector<cplx>& a) {
  double s = 0.0;
  for (const cplx& x : a) s += std::norm(x);
  return s;
}

}  // namespace hrc::oracle
