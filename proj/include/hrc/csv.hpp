#pragma once

#include <charconv>
#include <stdexcept>
#include <cmath>
#include <string>
#include <string_view>
#include <system_error>

namespace hrc {

/// Shortest representation that round-trips to the same double (at most 17
/// significant digits). Locale independent.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return std::signbit(x) ? "-0" : "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  if (res.ec != std::errc{}) return "nan";
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::invalid_argument("not a number: " + std::string(s));
  return v;
}

}  // namespace hrc
