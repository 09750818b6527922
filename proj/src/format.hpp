#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace rwlab {

/// Scientific notation with 17 significant digits; "nan" for NaN.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

}  // namespace rwlab
