#include "secrd/combinatorics.hpp"

#include <cmath>
#include <limits>

namespace secrd {

namespace {

constexpr std::uint64_t kU64Max = std::numeric_limits<std::uint64_t>::max();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  u128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // acc * (n - k + i) / i stays integral at every step
    acc = acc * (n - k + i) / i;
    if (acc > kU64Max) throw std::overflow_error("binomial coefficient exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(acc);
}

std::uint64_t multinomial(std::span<const int> counts) {
  u128 acc = 1;
  std::uint64_t running = 0;
  for (int c : counts) {
    if (c < 0) throw std::invalid_argument("negative count in multinomial");
    running += static_cast<std::uint64_t>(c);
    acc *= binomial(running, static_cast<std::uint64_t>(c));
    if (acc > kU64Max) throw std::overflow_error("multinomial coefficient exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(acc);
}

double log2_multinomial(std::span<const int> counts) {
  double n = 0.0;
  double acc = 0.0;
  for (int c : counts) {
    n += c;
    acc -= std::lgamma(c + 1.0);
  }
  acc += std::lgamma(n + 1.0);
  return acc / std::log(2.0);
}

unsigned index_width(std::uint64_t count) {
  if (count <= 1) return 0;
  std::uint64_t top = count - 1;
  unsigned w = 0;
  while (top != 0) {
    ++w;
    top >>= 1;
  }
  return w;
}

std::vector<std::vector<int>> compositions(int total, int parts) {
  std::vector<std::vector<int>> out;
  if (parts <= 0 || total < 0) return out;
  std::vector<int> cur(static_cast<std::size_t>(parts), 0);
  // Recursive fill: first part ranges 0..total, remaining parts absorb the rest.
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == parts - 1) {
      cur[static_cast<std::size_t>(pos)] = left;
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      cur[static_cast<std::size_t>(pos)] = v;
      self(self, pos + 1, left - v);
    }
  };
  rec(rec, 0, total);
  return out;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(master ^ splitmix64(stream)) + index);
}

}  // namespace secrd
