#pragma once

#include <iosfwd>
#include <string>

#include "crancap/pmf.hpp"

namespace crancap {

// Textual channel description:
//
//   # comment
//   M 2
//   X 2
//   Y 3
//   channel
//   1 0 0        <- one line per input tuple, relay-major, |Y| entries
//   0 1 0
//   0 1 0
//   0 0 1
//   pmf          <- optional; |X|^M weights, whitespace separated
//   0.25 0.25 0.25 0.25
//
// Header lines may appear in any order before `channel`; `#` starts a
// comment anywhere. Malformed input raises parse_error with the 1-based
// line number.
struct ChannelSpec {
  DiscreteMac mac;
  bool has_pmf = false;
  SymmetricPmf pmf;  // meaningful only when has_pmf
};

ChannelSpec load_channel(std::istream& in);
ChannelSpec load_channel_file(const std::string& path);

}  // namespace crancap
