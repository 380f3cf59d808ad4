#include "mglan/rng.hpp"

#include "mglan/error.hpp"

namespace mglan {

AliasTable::AliasTable(std::span<const double> weights) {
  const std::size_t n = weights.size();
  if (n == 0) return;
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) fail(ErrorCode::InvalidArgument, "alias table weights must be non-negative");
    total += w;
  }
  if (total <= 0.0) fail(ErrorCode::InvalidArgument, "alias table needs positive total weight");

  prob_.assign(n, 0.0);
  alias_.assign(n, 0);
  std::vector<double> scaled(n);
  for (std::size_t i = 0; i < n; ++i) scaled[i] = weights[i] * static_cast<double>(n) / total;

  std::vector<std::uint32_t> small, large;
  small.reserve(n);
  large.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    small.pop_back();
    const std::uint32_t l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (std::uint32_t i : large) prob_[i] = 1.0;
  for (std::uint32_t i : small) prob_[i] = 1.0;  // numerical leftovers
}

std::size_t AliasTable::sample(std::mt19937_64& rng) const {
  const std::size_t n = prob_.size();
  const std::size_t slot = static_cast<std::size_t>(rng() % n);
  return uniform01(rng) < prob_[slot] ? slot : alias_[slot];
}

}  // namespace mglan
