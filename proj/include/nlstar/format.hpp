#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace nlstar {

// Shortest decimal that round-trips, in fixed notation for ordinary magnitudes;
// "inf" / "-inf" / "nan" for non-finite values.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[400];
  const double mag = std::abs(x);
  const auto format = mag == 0.0 || (mag >= 1e-7 && mag < 1e16) ? std::chars_format::fixed : std::chars_format{};
  const auto [end, ec] = format == std::chars_format{} ? std::to_chars(buf, buf + sizeof buf, x)
                                                       : std::to_chars(buf, buf + sizeof buf, x, format);
  return ec == std::errc{} ? std::string(buf, end) : std::to_string(x);
}

} // namespace nlstar
