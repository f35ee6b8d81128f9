#pragma once

#include <charconv>
#include <string>

namespace qsc {

/// Shortest text that reads back to the same double; used by every file
/// writer so output bytes depend only on the values.
inline std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

}  // namespace qsc
