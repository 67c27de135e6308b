#include "densitylab/polya.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "densitylab/counting.hpp"
#include "densitylab/errors.hpp"
#include "densitylab/density.hpp"
#include "densitylab/util.hpp"

namespace densitylab {

std::vector<double> default_theta_grid() {
  return {1 - 0x1.0p-4, 1 - 0x1.0p-6, 1 - 0x1.0p-8, 1 - 0x1.0p-10};
}

PolyaEstimate polya_bounds(const SetExpr& expr, const std::vector<double>& theta_grid,
                           std::int64_t horizon, const GridOptions& opts) {
  if (theta_grid.empty()) throw DomainError("theta grid must be nonempty");
  for (std::size_t i = 0; i < theta_grid.size(); ++i) {
    if (!(theta_grid[i] > 0.0 && theta_grid[i] < 1.0))
      throw DomainError("theta values must lie in (0,1)");
    if (i && theta_grid[i] <= theta_grid[i - 1])
      throw DomainError("theta grid must be increasing");
  }
  if (horizon < (std::int64_t(1) << 12))
    throw InsufficientHorizon("polya_bounds requires horizon >= 2^12");

  const std::vector<std::int64_t> cps = tail_checkpoints(expr, horizon, opts);
  const double theta_max = theta_grid.back();
  for (std::int64_t n : cps) {
    const std::int64_t t = static_cast<std::int64_t>(std::floor(theta_max * static_cast<double>(n)));
    if (n - t < 16)
      throw InsufficientHorizon("largest theta leaves a window with fewer than 16 integers");
  }

  std::vector<std::int64_t> points = cps;
  for (double theta : theta_grid)
    for (std::int64_t n : cps) {
      const auto t = static_cast<std::int64_t>(std::floor(theta * static_cast<double>(n)));
      if (t >= 1) points.push_back(t);
    }
  auto profile = cached_counting_profile(expr, 0.0, points);
  auto count_at = [&](std::int64_t n) -> std::int64_t {
    if (n < 1) return 0;
    const auto it = std::lower_bound(profile->checkpoints.begin(), profile->checkpoints.end(), n);
    return profile->counts[static_cast<std::size_t>(it - profile->checkpoints.begin())];
  };

  PolyaEstimate pe;
  pe.theta_grid = theta_grid;
  pe.horizon = horizon;
  for (double theta : theta_grid) {
    ThetaRow row;
    row.theta = theta;
    row.liminf = 2.0;
    row.limsup = -1.0;
    for (std::int64_t n : cps) {
      const std::int64_t t = static_cast<std::int64_t>(std::floor(theta * static_cast<double>(n)));
      const double w = static_cast<double>(count_at(n) - count_at(t)) / static_cast<double>(n - t);
      row.liminf = std::min(row.liminf, w);
      row.limsup = std::max(row.limsup, w);
    }
    pe.per_theta.push_back(row);
  }

  const ThetaRow& last = pe.per_theta.back();
  pe.lld_est = std::max(0.0, last.liminf);
  pe.uud_est = std::min(1.0, last.limsup);

  // Checkpoints attaining the extremes, with enough entries for a usable
  // filter surrogate even when the exact extreme is hit only once.
  std::vector<std::pair<double, std::int64_t>> ranked;
  for (std::int64_t n : cps) {
    const std::int64_t t = static_cast<std::int64_t>(std::floor(theta_max * static_cast<double>(n)));
    const double w = static_cast<double>(count_at(n) - count_at(t)) / static_cast<double>(n - t);
    ranked.emplace_back(w, n);
  }
  std::sort(ranked.begin(), ranked.end());
  const std::size_t floor_count = std::min<std::size_t>(8, ranked.size());
  for (std::size_t i = 0; i < ranked.size(); ++i)
    if (i < floor_count || ranked[i].first <= last.liminf + 1e-3)
      pe.argmin_indices.push_back(ranked[i].second);
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const std::size_t j = ranked.size() - 1 - i;
    if (i < floor_count || ranked[j].first >= last.limsup - 1e-3)
      pe.argmax_indices.push_back(ranked[j].second);
  }
  std::sort(pe.argmin_indices.begin(), pe.argmin_indices.end());
  std::sort(pe.argmax_indices.begin(), pe.argmax_indices.end());
  return pe;
}

GapDensity gap_density(const SetExpr& expr, std::int64_t horizon) {
  if (horizon < 128) throw DomainError("gap_density requires horizon >= 128");
  const std::int64_t tail_lo = std::max<std::int64_t>(2, horizon / 64);

  std::int64_t prev = 0;
  double best = 0.0;
  std::int64_t pairs = 0;
  std::vector<double> last_decade;
  const std::int64_t decade_lo = horizon / 10;
  for (std::int64_t n = tail_lo; n <= horizon; ++n) {
    if (!expr.contains(n)) continue;
    if (prev) {
      const double r = static_cast<double>(n) / static_cast<double>(prev);
      best = std::max(best, r);
      ++pairs;
      if (n >= decade_lo) last_decade.push_back(r);
    }
    prev = n;
  }
  if (pairs < 1)
    throw InsufficientElements("fewer than 2 elements in the tail window [" +
                               std::to_string(tail_lo) + ", " + std::to_string(horizon) + "]");

  GapDensity g;
  g.value = best;
  if (last_decade.size() >= 3) {
    bool growing = true;
    for (std::size_t i = 1; i < last_decade.size(); ++i)
      growing = growing && last_decade[i] > last_decade[i - 1] + 1e-12;
    g.infinite = growing;
  } else {
    // So few tail elements that the ratio trend cannot flatten: thin set.
    g.infinite = last_decade.size() >= 1 && best > 4.0;
  }
  return g;
}

std::pair<double, double> alpha_envelopes(const SetExpr& expr,
                                          const std::vector<double>& alpha_grid,
                                          std::int64_t horizon) {
  if (alpha_grid.empty()) throw DomainError("alpha grid must be nonempty");
  double lda_inf = 2.0, uda_inf = -1.0;
  for (double a : alpha_grid) {
    require_alpha(a);
    double lo, hi;
    if (a > -1.0 && expr.kind() == SetExpr::Kind::Blocks) {
      const auto exact = exact_alpha_extremes(expr, a);
      lo = exact->first;
      hi = exact->second;
    } else {
      const auto est = estimate_alpha_density(expr, a, horizon);
      lo = est.liminf_est;
      hi = est.limsup_est;
    }
    lda_inf = std::min(lda_inf, lo);
    uda_inf = std::max(uda_inf, hi);
  }
  return {lda_inf, uda_inf};
}

DensitySetSample density_set_sample(const SetExpr& expr, int num_subsets,
                                    std::int64_t horizon, std::uint64_t seed,
                                    const DensitySetOptions& opts) {
  if (num_subsets < 1) throw DomainError("density_set_sample requires num_subsets >= 1");
  if (opts.palette.empty()) throw DomainError("density_set_sample requires a palette");
  const std::vector<std::int64_t> cps = tail_checkpoints(expr, horizon);

  // Ambient membership materialized once; each subset replays it with its
  // own order-independent coin per element.
  std::vector<std::uint8_t> member(static_cast<std::size_t>(horizon) + 1, 0);
  for (std::int64_t n = 1; n <= horizon; ++n) member[static_cast<std::size_t>(n)] = expr.contains(n);

  DensitySetSample out;
  out.eps_line = opts.eps_line;
  out.points.resize(static_cast<std::size_t>(num_subsets));

  parallel_for(num_subsets, [&](std::int64_t s) {
    const double keep = opts.palette[static_cast<std::size_t>(s) % opts.palette.size()];
    std::int64_t c = 0;
    std::size_t j = 0;
    double lo = 2.0, hi = -1.0;
    for (std::int64_t n = 1; n <= horizon; ++n) {
      if (member[static_cast<std::size_t>(n)]) {
        const std::uint64_t h = splitmix64(seed ^ (static_cast<std::uint64_t>(s) * 0xd1342543de82ef95ULL) ^
                                           (static_cast<std::uint64_t>(n) * 0x9e3779b97f4a7c15ULL));
        if (uniform01(h) < keep) ++c;
      }
      while (j < cps.size() && cps[j] == n) {
        const double r = static_cast<double>(c) / static_cast<double>(n);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        ++j;
      }
    }
    out.points[static_cast<std::size_t>(s)] = DensityPoint{lo, hi, keep};
  });

  const GapDensity g = gap_density(expr, horizon);
  out.lambda_est = g.infinite ? std::numeric_limits<double>::infinity() : g.value;
  out.line_ok = true;
  for (const auto& pt : out.points) {
    if (g.infinite) {
      // Thin ambient set: every subset must have lower density ~ 0.
      if (pt.ld > opts.eps_line) out.line_ok = false;
    } else if (pt.ud < out.lambda_est * pt.ld - opts.eps_line) {
      out.line_ok = false;
    }
  }
  return out;
}

}  // namespace densitylab
