#pragma once

// JSON scenario files.
//
// {
//   "amplitudes": {"alpha": C, "alpha1": C, "alpha2": C, "beta": C, "gamma": C, "delta": C},
//   "couplings":  {"g": x, "chi": x, "Gamma": x},
//   "mismatches": {"dkS": x, "dkA": x, "dkD": x}          (or)
//   "wave_vectors": {"k_p": x, "k_a1": x, "k_a2": x, "k_b": x, "k_c": x, "k_d": x},
//   "z_grid": [z0, z1, ...]  or  {"start": x, "stop": x, "count": n}
// }
//
// C is {"re": x, "im": x} or {"mag": x, "phase": x}; a bare number is read
// as a real amplitude. Missing amplitudes and couplings default to zero.
// Writing always uses the Cartesian form and an explicit z list, so a
// written file reads back to an identical Scenario.

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "hrc/scenario.hpp"

namespace hrc {

using json = nlohmann::json;

class ScenarioParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline constexpr std::array<const char*, kNumModes> kAmplitudeKeys = {"alpha", "alpha1", "alpha2",
                                                                      "beta",  "gamma",  "delta"};

inline double number_at(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ScenarioParseError(where + ": missing \"" + key + "\"");
  const json& v = j.at(key);
  if (!v.is_number()) throw ScenarioParseError(where + "." + key + ": expected a number");
  return v.get<double>();
}

inline double optional_number(const json& j, const char* key, const std::string& where) {
  return j.contains(key) ? number_at(j, key, where) : 0.0;
}

inline cplx complex_from_json(const json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (!v.is_object()) throw ScenarioParseError(where + ": expected a complex number object");
  const bool cart = v.contains("re") || v.contains("im");
  const bool pol = v.contains("mag") || v.contains("phase");
  if (cart == pol) throw ScenarioParseError(where + ": use either {re, im} or {mag, phase}");
  if (cart) return {optional_number(v, "re", where), optional_number(v, "im", where)};
  const double mag = number_at(v, "mag", where);
  if (mag < 0.0) throw ScenarioParseError(where + ".mag: must be >= 0");
  return std::polar(mag, normalize_phase(optional_number(v, "phase", where)));
}

inline std::vector<double> grid_from_json(const json& v) {
  if (v.is_array()) {
    std::vector<double> z;
    for (const auto& e : v) {
      if (!e.is_number()) throw ScenarioParseError("z_grid: entries must be numbers");
      z.push_back(e.get<double>());
    }
    return z;
  }
  if (v.is_object()) {
    const double a = number_at(v, "start", "z_grid"), b = number_at(v, "stop", "z_grid");
    if (!v.contains("count") || !v.at("count").is_number_integer())
      throw ScenarioParseError("z_grid.count: expected an integer");
    const auto n = v.at("count").get<std::int64_t>();
    if (n < 2) throw ScenarioParseError("z_grid.count: must be >= 2");
    return linspace(a, b, static_cast<std::size_t>(n));
  }
  throw ScenarioParseError("z_grid: expected an array or {start, stop, count}");
}

}  // namespace detail

inline Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw ScenarioParseError("scenario: expected a JSON object");
  for (const auto& [key, _] : j.items())
    if (key != "amplitudes" && key != "couplings" && key != "mismatches" && key != "wave_vectors" &&
        key != "z_grid" && key != "name")
      throw ScenarioParseError("scenario: unknown key \"" + key + "\"");

  CoherentAmplitudes a;
  if (j.contains("amplitudes")) {
    const json& ja = j.at("amplitudes");
    if (!ja.is_object()) throw ScenarioParseError("amplitudes: expected an object");
    for (const auto& [key, _] : ja.items())
      if (std::find_if(detail::kAmplitudeKeys.begin(), detail::kAmplitudeKeys.end(),
                       [&](const char* k) { return key == k; }) == detail::kAmplitudeKeys.end())
        throw ScenarioParseError("amplitudes: unknown mode \"" + key + "\"");
    for (ModeId m : kAllModes) {
      const char* key = detail::kAmplitudeKeys[static_cast<std::size_t>(index_of(m))];
      if (ja.contains(key)) a[m] = detail::complex_from_json(ja.at(key), std::string("amplitudes.") + key);
    }
  }

  Couplings c;
  if (j.contains("couplings")) {
    const json& jc = j.at("couplings");
    c.g = detail::optional_number(jc, "g", "couplings");
    c.chi = detail::optional_number(jc, "chi", "couplings");
    c.Gamma = detail::optional_number(jc, "Gamma", "couplings");
  }

  const bool has_m = j.contains("mismatches"), has_k = j.contains("wave_vectors");
  if (has_m == has_k) throw ScenarioParseError("scenario: give exactly one of \"mismatches\" or \"wave_vectors\"");
  std::vector<double> z = j.contains("z_grid") ? detail::grid_from_json(j.at("z_grid")) : std::vector<double>{};

  Scenario s;
  if (has_m) {
    const json& jm = j.at("mismatches");
    s = Scenario::from_mismatches(a, c, detail::number_at(jm, "dkS", "mismatches"),
                                  detail::number_at(jm, "dkA", "mismatches"),
                                  detail::number_at(jm, "dkD", "mismatches"), std::move(z));
  } else {
    const json& jk = j.at("wave_vectors");
    WaveVectors k;
    k.k_p = detail::optional_number(jk, "k_p", "wave_vectors");
    k.k_a1 = detail::optional_number(jk, "k_a1", "wave_vectors");
    k.k_a2 = detail::optional_number(jk, "k_a2", "wave_vectors");
    k.k_b = detail::optional_number(jk, "k_b", "wave_vectors");
    k.k_c = detail::optional_number(jk, "k_c", "wave_vectors");
    k.k_d = detail::optional_number(jk, "k_d", "wave_vectors");
    s = Scenario::from_wave_vectors(a, c, k, std::move(z));
  }
  try {
    check_well_formed(s);
  } catch (const std::invalid_argument& e) {
    throw ScenarioParseError(e.what());
  }
  return s;
}

inline json scenario_to_json(const Scenario& s) {
  json j;
  json ja = json::object();
  for (ModeId m : kAllModes) {
    const cplx v = s.amplitudes[m];
    ja[detail::kAmplitudeKeys[static_cast<std::size_t>(index_of(m))]] = {{"re", v.real()}, {"im", v.imag()}};
  }
  j["amplitudes"] = ja;
  j["couplings"] = {{"g", s.couplings.g}, {"chi", s.couplings.chi}, {"Gamma", s.couplings.Gamma}};
  if (s.wave_vectors) {
    const auto& k = *s.wave_vectors;
    j["wave_vectors"] = {{"k_p", k.k_p}, {"k_a1", k.k_a1}, {"k_a2", k.k_a2},
                         {"k_b", k.k_b}, {"k_c", k.k_c},   {"k_d", k.k_d}};
  } else {
    j["mismatches"] = {{"dkS", s.mismatches.dkS}, {"dkA", s.mismatches.dkA}, {"dkD", s.mismatches.dkD}};
  }
  j["z_grid"] = s.z_grid;
  return j;
}

inline Scenario parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioParseError(std::string("scenario JSON: ") + e.what());
  }
  return scenario_from_json(j);
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioParseError("cannot open scenario file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

inline std::string dump_scenario(const Scenario& s) { return scenario_to_json(s).dump(2) + "\n"; }

inline void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write scenario file: " + path);
  out << dump_scenario(s);
}

/// 64-bit FNV-1a of the canonical (compact) JSON form.
inline std::uint64_t scenario_hash(const Scenario& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : scenario_to_json(s).dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace hrc
