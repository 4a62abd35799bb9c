#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace tdm::detail {

/// Shortest round-trip decimal form; `inf` / `-inf` / `nan` for non-finite.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// Fixed-precision form for SVG attributes.
inline std::string format_fixed(double v, int digits = 3) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, digits);
  std::string s(buf, res.ptr);
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

} // namespace tdm::detail
