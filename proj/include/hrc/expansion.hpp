#pragma once

// Ladder-operator algebra for the perturbative operator solution.
//
// Each mode operator is X(z) = sum_n c_n M_n with the monomials listed
// below. Products of such sums are kept as words in the initial ladder
// operators and evaluated in the initial coherent state by normal ordering
// each mode separately (different modes commute). Every term carries its
// order in the couplings so that expectation values can be truncated
// consistently at second order.

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hrc/coefficients.hpp"
#include "hrc/scenario.hpp"
#include "hrc/witness_kind.hpp"

namespace hrc::expansion {

inline constexpr int kMaxOrder = 4;

struct Ladder {
  ModeId mode;
  bool dagger;
};

using Word = std::vector<Ladder>;

struct Term {
  cplx coeff;
  int order = 0;
  Word word;
};

using OpPoly = std::vector<Term>;

/// Expectation value split by coupling order: value[n] is the O(lambda^n) part.
using Graded = std::array<cplx, kMaxOrder + 1>;

/// Parses "a1 a1' b c" (a trailing ' marks a creation operator; p is the probe).
inline Word parse_word(std::string_view text) {
  Word w;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    bool dag = false;
    if (!tok.empty() && tok.back() == '\'') {
      dag = true;
      tok.pop_back();
    }
    const auto m = parse_mode(tok);
    if (!m) throw std::invalid_argument("bad ladder token: " + tok);
    w.push_back({*m, dag});
  }
  return w;
}

namespace detail {

// Monomials multiplying c_1 .. c_N in each family, in the printed operator order.
inline const std::vector<std::string_view>& monomials(Family fam) {
  static const std::vector<std::string_view> f = {
      "p", "a1 a2", "a1 a1' b c", "a2' a2 b c", "a1 a1' c' d", "a2' a2 c' d", "a1 a1' p", "a2' a2 p"};
  static const std::vector<std::string_view> g = {
      "a1",           "a2' b c",       "a2' c' d",      "p a2'",          "a1 b c c d'",
      "a1 b' c' c' d", "p' a1 b c",    "p a1 b' c'",    "p' a1 c' d",     "p a1 c d'",
      "a1 b' b c' c", "a1 a2' a2 b b'", "a1 a2' a2 c' c", "a1 a2' a2 d' d", "a1 c c' d' d",
      "p' p a1",      "a1 a2' a2 c' c", "a1 a2' a2",    "a1' a2' a2' b d"};
  static const std::vector<std::string_view> j = {
      "b",           "a1 a2 c'",    "a1 a1 a2 a2 d'",  "a1 a1' c' c' d", "a2' a2 c' c' d",
      "p a1 a1' c'", "p a2' a2 c'", "a1' a1 a2' a2 b", "a1 a1' b c' c",  "a2' a2 b c' c"};
  static const std::vector<std::string_view> k = {
      "c",              "a1 a2 b'",        "a1' a2' d",      "a1 a1' p b'",    "a2' a2 p b'",
      "a1' a1 p' d",    "a2 a2' p' d",     "a1' a1 a2' a2 c", "a1 a1' b' b c", "a2' a2 b' b c",
      "a1' a1 c d' d",  "a2 a2' c d' d",   "a1' a1 a2' a2 c", "a1' a1 b' c' d", "a2' a2 b' c' d",
      "b' c' d"};
  static const std::vector<std::string_view> l = {
      "d",           "a1 a2 c",     "a1 a1' b c c",   "a2' a2 b c c",   "a1 a1 a2 a2 b'",
      "a1 a1' p c",  "a2' a2 p c",  "a1 a1' c' c d",  "a2' a2 c' c d",  "a1 a1' a2 a2' d"};
  switch (fam) {
    case Family::f: return f;
    case Family::g:
    case Family::h: return g;  // h uses the exchanged words
    case Family::j: return j;
    case Family::k: return k;
    case Family::l: return l;
  }
  return f;
}

inline ModeId exchange_pumps(ModeId m) {
  if (m == ModeId::a1) return ModeId::a2;
  if (m == ModeId::a2) return ModeId::a1;
  return m;
}

}  // namespace detail

/// Coupling order of coefficient n within a family (0, 1 or 2).
inline int coefficient_order(Family fam, int n) {
  if (n == 1) return 0;
  switch (fam) {
    case Family::f:
    case Family::j: return n == 2 ? 1 : 2;
    case Family::g:
    case Family::h: return n <= 4 ? 1 : 2;
    case Family::k: return n <= 3 ? 1 : 2;
    case Family::l: return n == 2 ? 1 : 2;
  }
  return 2;
}

/// Monomial M_n of a family as a word in the initial ladder operators.
inline Word monomial(Family fam, int n) {
  if (n < 1 || n > family_size(fam)) throw std::out_of_range("monomial index out of range");
  Word w = parse_word(detail::monomials(fam)[static_cast<std::size_t>(n - 1)]);
  if (fam == Family::h)
    for (auto& x : w) x.mode = detail::exchange_pumps(x.mode);
  return w;
}

/// X(z) for the mode carried by `fam`, as an operator polynomial.
inline OpPoly mode_solution(Family fam, const CoefficientSet& cs) {
  OpPoly p;
  for (int n = 1; n <= family_size(fam); ++n) {
    const cplx c = cs(fam, n);
    if (c == cplx{}) continue;
    p.push_back({c, coefficient_order(fam, n), monomial(fam, n)});
  }
  return p;
}

inline OpPoly mode_solution(ModeId m, const CoefficientSet& cs) {
  for (Family fam : kAllFamilies)
    if (family_mode(fam) == m) return mode_solution(fam, cs);
  throw std::invalid_argument("no family for mode");
}

inline OpPoly adjoint(const OpPoly& p) {
  OpPoly out;
  out.reserve(p.size());
  for (const auto& t : p) {
    Word w(t.word.rbegin(), t.word.rend());
    for (auto& x : w) x.dagger = !x.dagger;
    out.push_back({std::conj(t.coeff), t.order, std::move(w)});
  }
  return out;
}

/// Product truncated at `max_order` in the couplings.
inline OpPoly multiply(const OpPoly& a, const OpPoly& b, int max_order = 2) {
  OpPoly out;
  for (const auto& x : a) {
    for (const auto& y : b) {
      if (x.order + y.order > max_order) continue;
      Word w = x.word;
      w.insert(w.end(), y.word.begin(), y.word.end());
      out.push_back({x.coeff * y.coeff, x.order + y.order, std::move(w)});
    }
  }
  return out;
}

inline OpPoly truncate(OpPoly p, int max_order) {
  std::erase_if(p, [&](const Term& t) { return t.order > max_order; });
  return p;
}

/// Coherent-state expectation values of operator words.
///
/// For a single mode, a word in a and a' is normal ordered with
/// a^n a' = a' a^n + n a^(n-1); the expectation of a'^m a^n is
/// conj(alpha)^m alpha^n. Normal-ordered forms are cached per word.
class CoherentExpectation {
 public:
  explicit CoherentExpectation(const CoherentAmplitudes& amps) : amps_(amps) {}

  cplx operator()(const Word& w) {
    std::array<std::string, kNumModes> per_mode;
    for (const auto& x : w) per_mode[static_cast<std::size_t>(index_of(x.mode))] += x.dagger ? 'u' : 'l';
    cplx v{1.0, 0.0};
    for (ModeId m : kAllModes) {
      const auto& s = per_mode[static_cast<std::size_t>(index_of(m))];
      if (s.empty()) continue;
      v *= single_mode(s, amps_[m]);
      if (v == cplx{}) break;
    }
    return v;
  }

  Graded graded(const OpPoly& p) {
    Graded r{};
    for (const auto& t : p) r[static_cast<std::size_t>(t.order)] += t.coeff * (*this)(t.word);
    return r;
  }

  cplx value(const OpPoly& p, int max_order = 2) {
    const Graded r = graded(p);
    cplx s{};
    for (int n = 0; n <= max_order; ++n) s += r[static_cast<std::size_t>(n)];
    return s;
  }

 private:
  // Normal-ordered form: coefficient of a'^m a^n keyed by (m, n).
  using Normal = std::map<std::pair<int, int>, double>;

  const Normal& normal_form(const std::string& s) {
    auto it = cache_.find(s);
    if (it != cache_.end()) return it->second;
    Normal cur{{{0, 0}, 1.0}};
    for (char ch : s) {
      Normal next;
      for (const auto& [mn, c] : cur) {
        const auto [m, n] = mn;
        if (ch == 'l') {
          next[{m, n + 1}] += c;
        } else {
          next[{m + 1, n}] += c;
          if (n > 0) next[{m, n - 1}] += c * n;
        }
      }
      cur = std::move(next);
    }
    return cache_.emplace(s, std::move(cur)).first->second;
  }

  static cplx ipow(cplx x, int n) {
    cplx r{1.0, 0.0};
    for (int i = 0; i < n; ++i) r *= x;
    return r;
  }

  cplx single_mode(const std::string& s, cplx alpha) {
    cplx v{};
    const cplx ac = std::conj(alpha);
    for (const auto& [mn, c] : normal_form(s)) v += c * ipow(ac, mn.first) * ipow(alpha, mn.second);
    return v;
  }

  CoherentAmplitudes amps_;
  std::map<std::string, Normal> cache_;
};

inline Graded graded_product(const Graded& a, const Graded& b) {
  Graded r{};
  for (int i = 0; i <= kMaxOrder; ++i)
    for (int j = 0; i + j <= kMaxOrder; ++j)
      r[static_cast<std::size_t>(i + j)] += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
  return r;
}

inline double truncated_real(const Graded& g, int max_order = 2) {
  double s = 0.0;
  for (int n = 0; n <= max_order; ++n) s += g[static_cast<std::size_t>(n)].real();
  return s;
}

/// Witnesses obtained mechanically from the operator solution: every moment
/// is expanded to second order in the couplings and products of moments are
/// truncated at the same order. This is the reference the tabulated closed
/// forms must reproduce exactly.
class SecondOrderWitnesses {
 public:
  SecondOrderWitnesses(const CoefficientSet& cs, const CoherentAmplitudes& amps) : ev_(amps) {
    for (ModeId m : kAllModes) {
      auto& x = op_[static_cast<std::size_t>(index_of(m))];
      x = mode_solution(m, cs);
      dag_[static_cast<std::size_t>(index_of(m))] = adjoint(x);
    }
  }

  Graded number(ModeId i) { return ev_.graded(multiply(dag(i), op(i))); }

  /// <N_i N_j> for i != j.
  Graded number_product(ModeId i, ModeId j) {
    return ev_.graded(multiply(multiply(dag(i), op(i)), multiply(dag(j), op(j))));
  }

  Graded cross_dagger(ModeId i, ModeId j) { return ev_.graded(multiply(op(i), dag(j))); }
  Graded cross(ModeId i, ModeId j) { return ev_.graded(multiply(op(i), op(j))); }
  Graded second_factorial(ModeId i) {
    return ev_.graded(multiply(multiply(dag(i), dag(i)), multiply(op(i), op(i))));
  }

  Graded hz1(ModeId i, ModeId j) {
    const Graded c = cross_dagger(i, j);
    return minus(number_product(i, j), graded_product(c, conj(c)));
  }
  Graded hz2(ModeId i, ModeId j) {
    const Graded c = cross(i, j);
    return minus(graded_product(number(i), number(j)), graded_product(c, conj(c)));
  }
  Graded antibunching(ModeId i) {
    const Graded n = number(i);
    return minus(second_factorial(i), graded_product(n, n));
  }

  struct Complex {
    cplx value;    // truncated at second order
    double scale;  // summed moduli of the moment terms before they cancel
  };

  /// Witness = plus - minus, with both sides kept apart so that the size of
  /// the cancelling terms is known.
  Complex evaluate_complex(const WitnessKind& k) {
    Graded plus{}, minus_part{};
    switch (k.criterion) {
      case Criterion::Steering:
      case Criterion::HZ1: {
        const Graded c = cross_dagger(k.first, k.second);
        plus = number_product(k.first, k.second);
        minus_part = graded_product(c, conj(c));
        if (k.criterion == Criterion::Steering) {
          const Graded n = number(k.first);
          for (int q = 0; q <= kMaxOrder; ++q) plus[static_cast<std::size_t>(q)] += 0.5 * n[static_cast<std::size_t>(q)];
        }
        break;
      }
      case Criterion::HZ2: {
        const Graded c = cross(k.first, k.second);
        plus = graded_product(number(k.first), number(k.second));
        minus_part = graded_product(c, conj(c));
        break;
      }
      case Criterion::Antibunching: {
        const Graded n = number(k.first);
        plus = second_factorial(k.first);
        minus_part = graded_product(n, n);
        break;
      }
    }
    Complex r{{}, 0.0};
    for (std::size_t q = 0; q <= 2; ++q) {
      r.value += plus[q] - minus_part[q];
      r.scale += std::abs(plus[q]) + std::abs(minus_part[q]);
    }
    return r;
  }

  double evaluate(const WitnessKind& k) { return evaluate_complex(k).value.real(); }

 private:
  const OpPoly& op(ModeId m) const { return op_[static_cast<std::size_t>(index_of(m))]; }
  const OpPoly& dag(ModeId m) const { return dag_[static_cast<std::size_t>(index_of(m))]; }

  static Graded conj(Graded g) {
    for (auto& x : g) x = std::conj(x);
    return g;
  }
  static Graded minus(Graded a, const Graded& b) {
    for (int q = 0; q <= kMaxOrder; ++q) a[static_cast<std::size_t>(q)] -= b[static_cast<std::size_t>(q)];
    return a;
  }

  CoherentExpectation ev_;
  std::array<OpPoly, kNumModes> op_;
  std::array<OpPoly, kNumModes> dag_;
};

/// |<[a1(z), a1'(z)]> - 1| for the perturbative solution, keeping all
/// products up to fourth order. Second-order terms cancel when the
/// coefficients are consistent, so the defect is O((lambda z)^3).
inline double commutator_defect(const CoefficientSet& cs, const CoherentAmplitudes& amps,
                                ModeId mode = ModeId::a1) {
  const OpPoly a = mode_solution(mode, cs);
  const OpPoly ad = adjoint(a);
  CoherentExpectation ev(amps);
  const cplx c = ev.value(multiply(a, ad, kMaxOrder), kMaxOrder) - ev.value(multiply(ad, a, kMaxOrder), kMaxOrder);
  return std::abs(c - 1.0);
}

/// Same commutator with every product truncated at second order; vanishes
/// (to rounding) for a consistent coefficient set.
inline double commutator_defect_second_order(const CoefficientSet& cs, const CoherentAmplitudes& amps,
                                             ModeId mode = ModeId::a1) {
  const OpPoly a = mode_solution(mode, cs);
  const OpPoly ad = adjoint(a);
  CoherentExpectation ev(amps);
  const cplx c = ev.value(multiply(a, ad, 2)) - ev.value(multiply(ad, a, 2));
  return std::abs(c - 1.0);
}

}  // namespace hrc::expansion
