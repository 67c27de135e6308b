#include "densitylab/grid.hpp"

#include <algorithm>
#include <cmath>

#include "densitylab/errors.hpp"

namespace densitylab {

std::vector<std::int64_t> geometric_points(std::int64_t lo, std::int64_t hi, double ratio) {
  std::vector<std::int64_t> out;
  if (lo < 1) lo = 1;
  if (ratio <= 1.0) throw DomainError("grid ratio must exceed 1");
  for (std::int64_t n = lo; n < hi;) {
    out.push_back(n);
    const std::int64_t next = static_cast<std::int64_t>(std::floor(static_cast<double>(n) * ratio));
    n = std::max(n + 1, next);
  }
  if (hi >= lo) out.push_back(hi);
  return out;
}

namespace {

void collect_critical(const SetExpr& e, std::int64_t hi, std::vector<std::int64_t>& out) {
  switch (e.kind()) {
    case SetExpr::Kind::Blocks: {
      for (std::int64_t b : e.blocks_boundaries()) {
        if (b > hi) break;
        if (b >= 1) out.push_back(b);
      }
      return;
    }
    case SetExpr::Kind::Union:
    case SetExpr::Kind::Inter:
    case SetExpr::Kind::Diff:
      collect_critical(e.child_a(), hi, out);
      collect_critical(e.child_b(), hi, out);
      return;
    case SetExpr::Kind::Compl:
      collect_critical(e.child_a(), hi, out);
      return;
    case SetExpr::Kind::MCopy: {
      const std::int64_t m = e.mcopy_factor();
      std::vector<std::int64_t> inner;
      collect_critical(e.mcopy_inner(), hi / m + 1, inner);
      for (std::int64_t c : inner) {
        if (m * c <= hi) out.push_back(m * c);
        if (m * c + m <= hi) out.push_back(m * c + m);
      }
      return;
    }
    default:
      return;
  }
}

}  // namespace

std::vector<std::int64_t> critical_points(const SetExpr& expr, std::int64_t hi) {
  std::vector<std::int64_t> out;
  collect_critical(expr, hi, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::int64_t> tail_checkpoints(const SetExpr& expr, std::int64_t horizon,
                                           const GridOptions& opts) {
  if (horizon < 2) throw InsufficientHorizon("horizon too small for a checkpoint grid");
  const std::int64_t lo = std::max<std::int64_t>(2, horizon / opts.tail_divisor);
  std::vector<std::int64_t> cps = geometric_points(lo, horizon, opts.ratio);
  for (std::int64_t c : critical_points(expr, horizon))
    if (c >= lo) cps.push_back(c);
  std::sort(cps.begin(), cps.end());
  cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
  if (static_cast<int>(cps.size()) < opts.min_tail_checkpoints)
    throw InsufficientHorizon("only " + std::to_string(cps.size()) +
                              " tail checkpoints at horizon " + std::to_string(horizon));
  return cps;
}

namespace {

void collect_log_periods(const SetExpr& e,
                         std::vector<std::pair<std::int64_t, std::int64_t>>& out) {
  switch (e.kind()) {
    case SetExpr::Kind::Blocks:
      out.emplace_back(e.blocks_base(), e.blocks_period());
      return;
    case SetExpr::Kind::Union:
    case SetExpr::Kind::Inter:
    case SetExpr::Kind::Diff:
      collect_log_periods(e.child_a(), out);
      collect_log_periods(e.child_b(), out);
      return;
    case SetExpr::Kind::Compl:
      collect_log_periods(e.child_a(), out);
      return;
    case SetExpr::Kind::MCopy:
      // An m-copy rescales elements by a constant factor; the multiplicative
      // period of the block pattern is unchanged.
      collect_log_periods(e.mcopy_inner(), out);
      return;
    default:
      return;
  }
}

}  // namespace

std::optional<std::pair<std::int64_t, std::int64_t>> dominant_log_period(const SetExpr& expr) {
  std::vector<std::pair<std::int64_t, std::int64_t>> periods;
  collect_log_periods(expr, periods);
  if (periods.empty()) return std::nullopt;
  std::pair<std::int64_t, std::int64_t> best = periods.front();
  double best_size = std::pow(static_cast<double>(best.first), static_cast<double>(best.second));
  for (const auto& bp : periods) {
    const double size = std::pow(static_cast<double>(bp.first), static_cast<double>(bp.second));
    if (size > best_size) {
      best = bp;
      best_size = size;
    }
  }
  return best;
}

std::int64_t stolz_lag(const SetExpr& expr) {
  const auto bp = dominant_log_period(expr);
  if (!bp) return 64;
  std::int64_t unit = 1;
  for (std::int64_t i = 0; i < bp->second; ++i) {
    if (unit > (std::int64_t(1) << 40)) break;
    unit *= bp->first;
  }
  std::int64_t lag = unit;
  while (lag < 16 && lag < (std::int64_t(1) << 20)) lag *= unit;
  return lag;
}

}  // namespace densitylab
