#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace chainpart {

// Costs and weights are exact integers; sums of costs (n * max s) must stay
// within kKeyLimit so that heap-key arithmetic never overflows int64.
using Cost = int64_t;
using Weight = int64_t;
using VertexId = int32_t;

// Wide key used where composite keys exceed the int64 range.
using WideKey = __int128;

inline constexpr int64_t kKeyLimit = int64_t(1) << 59;

inline std::string to_string(WideKey v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? -(unsigned __int128)v : (unsigned __int128)v;
  std::string out;
  while (u > 0) {
    out.push_back(char('0' + int(u % 10)));
    u /= 10;
  }
  if (neg) out.push_back('-');
  return std::string(out.rbegin(), out.rend());
}

}  // namespace chainpart
