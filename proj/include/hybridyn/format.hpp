#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <system_error>

#include "hybridyn/errors.hpp"

namespace hybridyn {

// Shortest text of the form %.17g, independent of the C locale.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw Error("cannot parse number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace hybridyn
