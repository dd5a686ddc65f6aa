#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace secrd {

// Fixed-width unsigned fields; parts[i] < 2^widths[i].
struct Cryptogram {
  std::vector<std::uint64_t> parts;
  std::vector<int> widths;

  int total_width() const {
    int s = 0;
    for (int w : widths) s += w;
    return s;
  }
  std::string to_string() const;

  auto operator<=>(const Cryptogram&) const = default;
};

inline std::uint64_t low_mask(int width) { return width >= 64 ? ~0ULL : ((1ULL << width) - 1); }

}  // namespace secrd
