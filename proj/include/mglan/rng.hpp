#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace mglan {

/// splitmix64 finalizer; used to derive well-mixed child seeds from
/// (base seed, stream id) tuples so parallel generators stay decorrelated
/// and scheduling-independent.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
  return splitmix64(splitmix64(base ^ splitmix64(a)) ^ splitmix64(b));
}

inline double uniform01(std::mt19937_64& rng) {
  // 53-bit mantissa draw in [0, 1)
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// Walker/Vose alias table for O(1) draws from a fixed discrete distribution.
class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(std::span<const double> weights);

  bool empty() const { return prob_.empty(); }
  std::size_t size() const { return prob_.size(); }
  std::size_t sample(std::mt19937_64& rng) const;

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

}  // namespace mglan
