#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace crancap {

// Input exceeds a hard resource guard (alphabet/table/codebook size).
struct capacity_error : std::runtime_error {
  explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed textual input; line is 1-based, 0 when not tied to a line.
struct parse_error : std::runtime_error {
  int line;
  parse_error(int line_, const std::string& what)
      : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) + ": " + what : what),
        line(line_) {}
};

// Fixed 12-significant-digit rendering used by all CSV output. The C locale
// is never changed, so the decimal separator is always '.'.
inline std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Axis list {i : bit i of mask set}, ascending.
inline std::vector<int> mask_to_axes(unsigned mask) {
  std::vector<int> axes;
  for (int i = 0; mask >> i; ++i)
    if (mask >> i & 1u) axes.push_back(i);
  return axes;
}

}  // namespace crancap
