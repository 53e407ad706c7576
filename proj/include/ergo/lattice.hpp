#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ergo {

using LatticePoint = std::vector<std::uint32_t>;

// Level-major codec for Z_+^d: points are ordered by |x|, and inside a
// level by descending lexicographic order, so (1,0) precedes (0,1).
class LatticeCodec {
 public:
  explicit LatticeCodec(std::size_t dim);

  std::size_t dim() const { return dim_; }

  // Number of points with |x| < level.
  std::uint64_t level_offset(std::size_t level) const;
  std::uint64_t level_size(std::size_t level) const;

  std::uint64_t rank(const LatticePoint& x) const;
  LatticePoint unrank(std::uint64_t index) const;
  std::size_t level_of(std::uint64_t index) const;

  static std::string format(const LatticePoint& x);

 private:
  std::size_t dim_;
};

// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

}  // namespace ergo
