#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace iflow::detail {

// Shortest decimal representation that round-trips the exact double.
inline std::string fmt(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace iflow::detail
