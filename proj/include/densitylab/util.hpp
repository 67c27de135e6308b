#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace densitylab {

// splitmix64; used wherever a reproducible, order-independent draw is needed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform draw in [0, 1) from a hashed key.
inline double uniform01(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Neumaier compensated accumulator. Fixed ascending evaluation order keeps
// results bit-reproducible regardless of the thread budget.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x))
      carry += (sum - t) + x;
    else
      carry += (x - t) + sum;
    sum = t;
  }

  double value() const { return sum + carry; }
};

// Thread budget: DENSITYLAB_THREADS caps hardware concurrency.
int thread_budget();

// Runs fn(i) for i in [0, n). Items must be independent; any result merge is
// the caller's job and must be index-ordered so output stays deterministic.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn);

}  // namespace densitylab
