#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "densitylab/set_expr.hpp"

namespace densitylab {

struct GridOptions {
  double ratio = 1.05;              // geometric checkpoint spacing
  std::int64_t tail_divisor = 64;   // tail window is [horizon/tail_divisor, horizon]
  int min_tail_checkpoints = 32;
};

// Strictly increasing integers lo, ..., hi spaced by `ratio`.
std::vector<std::int64_t> geometric_points(std::int64_t lo, std::int64_t hi, double ratio);

// Block boundaries b^j of every Blocks subterm, scaled through MCopy
// (a boundary c of the inner set maps to both m*c and m*c + m).
std::vector<std::int64_t> critical_points(const SetExpr& expr, std::int64_t hi);

// Geometric grid merged with critical points, restricted to the tail window.
// Throws InsufficientHorizon when fewer than min_tail_checkpoints survive.
std::vector<std::int64_t> tail_checkpoints(const SetExpr& expr, std::int64_t horizon,
                                           const GridOptions& opts = {});

// (base, period) of the Blocks subterm with the largest multiplicative period
// base^period; nullopt when the expression has no Blocks subterm.
std::optional<std::pair<std::int64_t, std::int64_t>> dominant_log_period(const SetExpr& expr);

// Integer lag for the log-scale Stolz windows used at alpha = -1: a power of
// the dominant base^period raised until the window spans at least a factor 16.
std::int64_t stolz_lag(const SetExpr& expr);

}  // namespace densitylab
