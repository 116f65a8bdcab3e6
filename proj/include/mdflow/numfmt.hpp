#pragma once

#include <charconv>
#include <string>
#include <system_error>

#include "mdflow/flowcore.hpp"

namespace mdflow {

// Shortest round-trip decimal form; deterministic across runs, so emitted
// files are byte-stable.
inline std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc()) throw Error("number formatting failed");
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw InputError("not a number: '" + s + "'");
  }
  return v;
}

}  // namespace mdflow
