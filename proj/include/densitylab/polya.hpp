#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "densitylab/grid.hpp"
#include "densitylab/set_expr.hpp"

namespace densitylab {

struct ThetaRow {
  double theta = 0.0;
  double liminf = 0.0;
  double limsup = 0.0;
};

struct PolyaEstimate {
  double lld_est = 0.0;  // windowed liminf at the largest theta
  double uud_est = 0.0;  // windowed limsup at the largest theta
  std::vector<double> theta_grid;
  std::vector<ThetaRow> per_theta;
  std::int64_t horizon = 0;
  // Checkpoints attaining (within 1e-9) the extreme window ratios at the
  // largest theta; these seed the filter surrogates of range_witness.
  std::vector<std::int64_t> argmin_indices;
  std::vector<std::int64_t> argmax_indices;
};

std::vector<double> default_theta_grid();

// Windowed ratios (A(n) - A(floor(theta*n))) / (n - floor(theta*n)) over
// tail checkpoints, per theta.
PolyaEstimate polya_bounds(const SetExpr& expr, const std::vector<double>& theta_grid,
                           std::int64_t horizon, const GridOptions& opts = {});

inline PolyaEstimate polya_bounds(const SetExpr& expr, std::int64_t horizon) {
  return polya_bounds(expr, default_theta_grid(), horizon);
}

struct GapDensity {
  bool infinite = false;
  double value = 0.0;  // meaningful when !infinite
};

// lambda(A) = limsup a_{i+1}/a_i, estimated over consecutive elements in the
// tail window. Flags Infinite when ratios grow monotonically through the
// last decade (thin-set heuristic).
GapDensity gap_density(const SetExpr& expr, std::int64_t horizon);

// (upper bound on lda_inf, lower bound on uda_inf) over the alpha grid;
// exact block closed forms where they apply, numeric estimates otherwise.
std::pair<double, double> alpha_envelopes(const SetExpr& expr,
                                          const std::vector<double>& alpha_grid,
                                          std::int64_t horizon);

struct DensityPoint {
  double ld = 0.0;
  double ud = 0.0;
  double keep_probability = 0.0;
};

struct DensitySetOptions {
  std::vector<double> palette = {0.1, 0.25, 0.5, 0.75, 0.9};
  double eps_line = 0.05;
};

struct DensitySetSample {
  std::vector<DensityPoint> points;
  double lambda_est = 0.0;
  bool line_ok = false;  // ud >= lambda*ld - eps_line for every point
  double eps_line = 0.05;
};

// Random subsets of expr (per-element inclusion, probabilities cycled from
// the palette, seeded and order-independent) with their density estimates.
DensitySetSample density_set_sample(const SetExpr& expr, int num_subsets,
                                    std::int64_t horizon, std::uint64_t seed,
                                    const DensitySetOptions& opts = {});

}  // namespace densitylab
