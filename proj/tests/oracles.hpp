#pragma once

// Brute-force oracles, independent of the library implementation paths they
// check. Membership is re-derived from the raw definitions; sums are plain
// ascending loops over doubles.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracles {

// n is in a block (b^j, b^{j+1}] with j mod p in `on`.
inline bool blocks_member(std::int64_t base, std::int64_t period,
                          const std::vector<std::int64_t>& on, std::int64_t n) {
  if (n < 2) return false;
  std::int64_t j = 0;
  std::int64_t power = base;
  while (power < n) {
    power *= base;
    ++j;
  }
  for (std::int64_t r : on)
    if (j % period == r) return true;
  return false;
}

inline std::int64_t count_by_scan(const std::function<bool(std::int64_t)>& member,
                                  std::int64_t n) {
  std::int64_t c = 0;
  for (std::int64_t k = 1; k <= n; ++k) c += member(k) ? 1 : 0;
  return c;
}

inline std::vector<std::int64_t> first_elements(const std::function<bool(std::int64_t)>& member,
                                                std::size_t how_many, std::int64_t cap) {
  std::vector<std::int64_t> out;
  for (std::int64_t k = 1; k <= cap && out.size() < how_many; ++k)
    if (member(k)) out.push_back(k);
  return out;
}

inline double weighted_sum(const std::function<bool(std::int64_t)>& member, double alpha,
                           std::int64_t n) {
  double s = 0.0;
  for (std::int64_t k = 1; k <= n; ++k)
    if (member(k)) s += std::pow(static_cast<double>(k), alpha);
  return s;
}

// Windowed count ratio (A(n) - A(t)) / (n - t) by direct scan.
inline double window_ratio(const std::function<bool(std::int64_t)>& member, std::int64_t t,
                           std::int64_t n) {
  std::int64_t c = 0;
  for (std::int64_t k = t + 1; k <= n; ++k) c += member(k) ? 1 : 0;
  return static_cast<double>(c) / static_cast<double>(n - t);
}

// Largest consecutive-element ratio over elements in [lo, hi].
inline double max_gap_ratio(const std::function<bool(std::int64_t)>& member, std::int64_t lo,
                            std::int64_t hi) {
  double best = 0.0;
  std::int64_t prev = 0;
  for (std::int64_t k = lo; k <= hi; ++k) {
    if (!member(k)) continue;
    if (prev) best = std::max(best, static_cast<double>(k) / static_cast<double>(prev));
    prev = k;
  }
  return best;
}

}  // namespace oracles
