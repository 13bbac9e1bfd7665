#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hrc/scenario.hpp"

namespace hrc {

enum class Criterion { Steering, HZ1, HZ2, Antibunching };

/// A nonclassicality witness: steering S_{first->second}, Hillery-Zubairy
/// E_{first second} (HZ-1) or E'_{first second} (HZ-2), or antibunching D_first.
struct WitnessKind {
  Criterion criterion = Criterion::Steering;
  ModeId first = ModeId::a1;
  ModeId second = ModeId::b;  // unused for antibunching

  friend bool operator==(const WitnessKind&, const WitnessKind&) = default;
};

class WitnessNotDerived : public std::invalid_argument {
 public:
  explicit WitnessNotDerived(const std::string& what)
      : std::invalid_argument("witness not derived in paper: " + what) {}
};

namespace detail {

struct ModePair {
  ModeId first, second;
};

inline constexpr std::array<ModePair, 7> kSteeringPairs = {{{ModeId::a1, ModeId::b},
                                                            {ModeId::a1, ModeId::c},
                                                            {ModeId::a1, ModeId::d},
                                                            {ModeId::b, ModeId::c},
                                                            {ModeId::b, ModeId::d},
                                                            {ModeId::c, ModeId::d},
                                                            {ModeId::d, ModeId::a1}}};

inline constexpr std::array<ModePair, 6> kEntanglementPairs = {{{ModeId::a1, ModeId::b},
                                                                {ModeId::a1, ModeId::c},
                                                                {ModeId::a1, ModeId::d},
                                                                {ModeId::b, ModeId::c},
                                                                {ModeId::b, ModeId::d},
                                                                {ModeId::c, ModeId::d}}};

inline constexpr std::array<ModeId, 4> kAntibunchingModes = {ModeId::a1, ModeId::b, ModeId::c,
                                                             ModeId::d};

/// Pump-2 witnesses follow from the tabulated pump-1 ones by the a1 <-> a2 exchange.
constexpr ModeId swap_pumps(ModeId m) {
  if (m == ModeId::a1) return ModeId::a2;
  if (m == ModeId::a2) return ModeId::a1;
  return m;
}

}  // namespace detail

/// True if the kind involves pump 2 and must be evaluated through the exchange.
inline bool uses_pump2(const WitnessKind& k) {
  return k.first == ModeId::a2 || (k.criterion != Criterion::Antibunching && k.second == ModeId::a2);
}

/// The pump-1 counterpart of a pump-2 kind (identity otherwise).
inline WitnessKind to_pump1(WitnessKind k) {
  if (!uses_pump2(k)) return k;
  k.first = detail::swap_pumps(k.first);
  k.second = detail::swap_pumps(k.second);
  return k;
}

inline bool is_tabulated(const WitnessKind& raw) {
  if (raw.first == ModeId::a1 || (raw.criterion != Criterion::Antibunching && raw.second == ModeId::a1)) {
    if (uses_pump2(raw)) return false;  // both pumps at once is not tabulated
  }
  const WitnessKind k = to_pump1(raw);
  switch (k.criterion) {
    case Criterion::Steering:
      return std::any_of(detail::kSteeringPairs.begin(), detail::kSteeringPairs.end(),
                         [&](auto p) { return p.first == k.first && p.second == k.second; });
    case Criterion::HZ1:
    case Criterion::HZ2:
      return std::any_of(detail::kEntanglementPairs.begin(), detail::kEntanglementPairs.end(),
                         [&](auto p) { return p.first == k.first && p.second == k.second; });
    case Criterion::Antibunching:
      return std::find(detail::kAntibunchingModes.begin(), detail::kAntibunchingModes.end(),
                       k.first) != detail::kAntibunchingModes.end();
  }
  return false;
}

inline std::string to_string(const WitnessKind& k) {
  const std::string a(mode_name(k.first)), b(mode_name(k.second));
  switch (k.criterion) {
    case Criterion::Steering: return "S_" + a + "->" + b;
    case Criterion::HZ1: return "HZ1_" + a + b;
    case Criterion::HZ2: return "HZ2_" + a + b;
    case Criterion::Antibunching: return "D_" + a;
  }
  return "?";
}

inline void require_tabulated(const WitnessKind& k) {
  if (!is_tabulated(k)) throw WitnessNotDerived(to_string(k));
}

/// Every witness with a closed form (pump-1 versions), in table order.
inline std::vector<WitnessKind> tabulated_witnesses() {
  std::vector<WitnessKind> out;
  for (auto p : detail::kSteeringPairs) out.push_back({Criterion::Steering, p.first, p.second});
  for (auto p : detail::kEntanglementPairs) out.push_back({Criterion::HZ1, p.first, p.second});
  for (auto p : detail::kEntanglementPairs) out.push_back({Criterion::HZ2, p.first, p.second});
  for (ModeId m : detail::kAntibunchingModes) out.push_back({Criterion::Antibunching, m, m});
  return out;
}

namespace detail {

inline std::optional<std::pair<ModeId, std::size_t>> leading_mode(std::string_view s) {
  for (std::string_view name : {"a1", "a2", "p", "b", "c", "d"}) {
    if (s.substr(0, name.size()) == name) return std::pair{*parse_mode(name), name.size()};
  }
  return std::nullopt;
}

}  // namespace detail

/// Parses "S_a1->d", "HZ1_a1d", "HZ2_bc", "D_a1" (the forms printed by to_string).
inline WitnessKind parse_witness(std::string_view s) {
  const auto bad = [&] { return std::invalid_argument("unknown witness name: " + std::string(s)); };
  WitnessKind k;
  std::string_view rest;
  if (s.rfind("S_", 0) == 0) {
    k.criterion = Criterion::Steering;
    rest = s.substr(2);
    const auto arrow = rest.find("->");
    if (arrow == std::string_view::npos) throw bad();
    const auto m1 = parse_mode(rest.substr(0, arrow));
    const auto m2 = parse_mode(rest.substr(arrow + 2));
    if (!m1 || !m2) throw bad();
    k.first = *m1;
    k.second = *m2;
  } else if (s.rfind("HZ1_", 0) == 0 || s.rfind("HZ2_", 0) == 0) {
    k.criterion = s[2] == '1' ? Criterion::HZ1 : Criterion::HZ2;
    rest = s.substr(4);
    const auto m1 = detail::leading_mode(rest);
    if (!m1) throw bad();
    const auto m2 = parse_mode(rest.substr(m1->second));
    if (!m2) throw bad();
    k.first = m1->first;
    k.second = *m2;
  } else if (s.rfind("D_", 0) == 0) {
    k.criterion = Criterion::Antibunching;
    const auto m = parse_mode(s.substr(2));
    if (!m) throw bad();
    k.first = k.second = *m;
  } else {
    throw bad();
  }
  require_tabulated(k);
  return k;
}

}  // namespace hrc
