#include "ergo/lattice.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ergo {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > std::numeric_limits<std::uint64_t>::max())
      return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

LatticeCodec::LatticeCodec(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw std::invalid_argument("lattice dimension must be >= 1");
}

std::uint64_t LatticeCodec::level_offset(std::size_t level) const {
  // #{x in Z_+^d : |x| <= level-1} = C(level-1+d, d)
  if (level == 0) return 0;
  return binomial(level - 1 + dim_, dim_);
}

std::uint64_t LatticeCodec::level_size(std::size_t level) const {
  return binomial(level + dim_ - 1, dim_ - 1);
}

// Points of Z_+^m with sum s.
static std::uint64_t count_fixed_sum(std::size_t m, std::uint64_t s) {
  if (m == 0) return s == 0 ? 1 : 0;
  return binomial(s + m - 1, m - 1);
}

std::uint64_t LatticeCodec::rank(const LatticePoint& x) const {
  if (x.size() != dim_) throw std::invalid_argument("lattice point has wrong dimension");
  std::uint64_t level = std::accumulate(x.begin(), x.end(), std::uint64_t{0});
  std::uint64_t r = level_offset(level);
  std::uint64_t rest = level;
  for (std::size_t c = 0; c + 1 < dim_; ++c) {
    // points whose coordinate c is larger come first
    for (std::uint64_t v = rest; v > x[c]; --v) r += count_fixed_sum(dim_ - c - 1, rest - v);
    rest -= x[c];
  }
  return r;
}

std::size_t LatticeCodec::level_of(std::uint64_t index) const {
  std::size_t lo = 0, hi = 1;
  while (level_offset(hi + 1) <= index) hi *= 2;
  // invariant: level_offset(lo) <= index < level_offset(hi + 1)
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo + 1) / 2;
    if (level_offset(mid) <= index) lo = mid; else hi = mid - 1;
  }
  return lo;
}

LatticePoint LatticeCodec::unrank(std::uint64_t index) const {
  std::size_t level = level_of(index);
  std::uint64_t r = index - level_offset(level);
  LatticePoint x(dim_, 0);
  std::uint64_t rest = level;
  for (std::size_t c = 0; c + 1 < dim_; ++c) {
    std::uint64_t v = rest;
    for (;; --v) {
      std::uint64_t block = count_fixed_sum(dim_ - c - 1, rest - v);
      if (r < block) break;
      r -= block;
    }
    x[c] = static_cast<std::uint32_t>(v);
    rest -= v;
  }
  x[dim_ - 1] = static_cast<std::uint32_t>(rest);
  return x;
}

std::string LatticeCodec::format(const LatticePoint& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(x[i]);
  }
  return s + ")";
}

}  // namespace ergo
