#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "densitylab/grid.hpp"
#include "densitylab/rational.hpp"
#include "densitylab/set_expr.hpp"

namespace densitylab {

struct DensityEstimate {
  double liminf_est = 0.0;
  double limsup_est = 0.0;
  bool exists = false;                // numerical verdict, not a proof
  std::optional<double> value;        // midpoint, set iff exists
  std::optional<Rational> exact;      // set when the decidable fragment applies
  std::int64_t horizon = 0;
  double alpha = 0.0;
  int checkpoint_count = 0;
};

struct EstimateOptions {
  double tol_exist = 5e-3;
  GridOptions grid;
};

// liminf/limsup of A_alpha(n)/N_alpha(n) over tail checkpoints. At
// alpha = -1 ratios are taken over period-matched log-scale Stolz windows,
// which cancels the additive constants that otherwise decay like 1/ln n.
DensityEstimate estimate_alpha_density(const SetExpr& expr, double alpha,
                                       std::int64_t horizon,
                                       const EstimateOptions& opts = {});

inline DensityEstimate estimate_density(const SetExpr& expr, std::int64_t horizon,
                                        const EstimateOptions& opts = {}) {
  return estimate_alpha_density(expr, 0.0, horizon, opts);
}

// Exact d(expr) on the decidable fragment: boolean combinations of Finite
// and AP, plus m-copies of such. Nothing otherwise (any Blocks subterm).
std::optional<Rational> exact_density(const SetExpr& expr);

// Closed-form (lower, upper) alpha-density for a pure Blocks expression,
// alpha > -1: phase-wise geometric-series limits at the block boundaries.
std::optional<std::pair<double, double>> exact_alpha_extremes(const SetExpr& expr, double alpha);

struct CheckRow {
  std::string label;
  double observed = 0.0;
  double bound = 0.0;
  bool ok = false;
};

struct CheckReport {
  std::string title;
  bool pass = false;
  std::vector<CheckRow> rows;
};

// |estimate(alpha) - d| <= tol for each alpha in the grid; d must be exact.
CheckReport fuchs_consistency_check(const SetExpr& expr, const std::vector<double>& alpha_grid,
                                    std::int64_t horizon, double tol = 1e-2);

// lda_beta <= lda_alpha <= uda_alpha <= uda_beta for alpha <= beta, with slack.
CheckReport rajagopal_monotonicity_check(const SetExpr& expr, double alpha, double beta,
                                         std::int64_t horizon, double slack = 1e-2);

// max_n |ratio_alpha - ratio_{alpha+delta}| < 2*delta/(alpha+1) + eps, and the
// alpha-delta variant against 2*delta/(alpha-delta+1).
CheckReport ggm_continuity_check(const SetExpr& expr, double alpha, double delta,
                                 std::int64_t horizon, double eps = 1e-2);

// max over n in [horizon/2, horizon] of |r(n) - r(n+1)|, dense scan.
double oscillation_diagnostic(const SetExpr& expr, double alpha, std::int64_t horizon);

}  // namespace densitylab
