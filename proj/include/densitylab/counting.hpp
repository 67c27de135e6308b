#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "densitylab/set_expr.hpp"

namespace densitylab {

// Supported exponent range: k^alpha stays inside double range for k <= 2^24.
constexpr double kAlphaMin = -1.0;
constexpr double kAlphaMax = 40.0;

void require_alpha(double alpha);

// Exact |expr ∩ [1,n]|. Closed forms for primitive shapes; general boolean
// shapes stream membership with per-expression stride memoization.
std::int64_t count(const SetExpr& expr, std::int64_t n);

// A_alpha(n) = sum of k^alpha over members k <= n, ascending compensated
// summation. Equals count() exactly at alpha = 0.
double weighted_count(const SetExpr& expr, double alpha, std::int64_t n);

// N_alpha(n) = weighted_count(nat, alpha, n).
double normalizer(double alpha, std::int64_t n);

// Diagnostic ratio: n^{alpha+1} / N_alpha(n) for alpha > -1 (limit alpha+1),
// ln(n) / N_{-1}(n) at alpha = -1 (limit 1).
double normalizer_ratio(double alpha, std::int64_t n);

inline constexpr std::int64_t kDefaultElementSearchCap = std::int64_t(1) << 26;

// i-th smallest element, or nullopt when the set has fewer than i elements.
// Throws HorizonExceeded when the scan passes search_cap undecided.
std::optional<std::int64_t> nth_element(const SetExpr& expr, std::int64_t i,
                                        std::int64_t search_cap = kDefaultElementSearchCap);

// Memoized prefix data at a checkpoint grid, filled in one ascending pass.
struct CountingProfile {
  SetExpr expr;
  double alpha = 0.0;
  std::vector<std::int64_t> checkpoints;  // strictly increasing
  std::vector<std::int64_t> counts;       // A(n_j)
  std::vector<double> weighted;           // A_alpha(n_j)
  std::vector<double> normalizers;        // N_alpha(n_j)
};

CountingProfile make_counting_profile(const SetExpr& expr, double alpha,
                                      std::vector<std::int64_t> checkpoints);

// Shared cache; each fill is atomic, concurrent reads are safe.
std::shared_ptr<const CountingProfile> cached_counting_profile(
    const SetExpr& expr, double alpha, std::vector<std::int64_t> checkpoints);

}  // namespace densitylab
