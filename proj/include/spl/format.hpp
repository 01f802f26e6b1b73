#pragma once
// Shortest round-trip decimal formatting for doubles, so emitted tables are
// byte-stable across runs and thread counts.

#include <charconv>
#include <string>

namespace spl {

inline std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace spl
