#pragma once

#include <cstdio>
#include <string>

namespace qent {

/// Shortest round-trippable-to-12-digits decimal form used in every output file.
inline std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace qent
