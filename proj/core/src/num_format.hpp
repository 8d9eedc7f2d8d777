#pragma once

// Internal: shortest round-trip number formatting for CSV emission.

#include <charconv>
#include <stdexcept>
#include <string>

namespace skewflect::detail {

inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

}  // namespace skewflect::detail
