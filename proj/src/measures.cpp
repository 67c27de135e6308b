#include "densitylab/measures.hpp"

#include <algorithm>
#include <cmath>

#include "densitylab/counting.hpp"
#include "densitylab/polya.hpp"
#include "densitylab/util.hpp"

namespace densitylab {

FilterSurrogate FilterSurrogate::explicit_indices(std::vector<std::int64_t> indices) {
  if (indices.empty()) throw DomainError("explicit filter needs at least one index");
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 2) throw DomainError("filter indices must be >= 2");
    if (i && indices[i] <= indices[i - 1])
      throw DomainError("filter indices must be strictly increasing");
  }
  FilterSurrogate f;
  f.kind_ = Kind::Explicit;
  f.indices_ = std::move(indices);
  return f;
}

FilterSurrogate FilterSurrogate::block_boundaries(const SetExpr& expr, std::int64_t phase,
                                                  std::int64_t stride) {
  if (phase < 0) throw DomainError("block boundary phase must be >= 0");
  if (stride < 1) throw DomainError("block boundary stride must be >= 1");
  const auto bp = dominant_log_period(expr);
  if (!bp) throw DomainError("block boundary filter needs a Blocks subterm");
  FilterSurrogate f;
  f.kind_ = Kind::BlockBoundaries;
  f.expr_ = expr;
  f.base_ = bp->first;
  f.phase_ = phase;
  f.stride_ = stride;
  return f;
}

FilterSurrogate FilterSurrogate::polya_windows(double theta, std::vector<std::int64_t> indices) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("polya window theta must lie in (0,1)");
  FilterSurrogate f = explicit_indices(std::move(indices));
  f.kind_ = Kind::PolyaWindows;
  f.theta_ = theta;
  return f;
}

std::vector<std::int64_t> FilterSurrogate::indices(std::int64_t horizon, int max_terms) const {
  std::vector<std::int64_t> out;
  if (kind_ == Kind::BlockBoundaries) {
    // base^{stride*k + phase}, k = 0, 1, ...; entries below 2 are dropped.
    std::int64_t v = 1;
    for (std::int64_t i = 0; i < phase_ && v <= horizon; ++i) v *= base_;
    std::int64_t step = 1;
    for (std::int64_t i = 0; i < stride_; ++i) {
      if (step > horizon) break;
      step *= base_;
    }
    while (v <= horizon) {
      if (v >= 2) out.push_back(v);
      if (v > horizon / step) break;
      v *= step;
    }
  } else {
    for (std::int64_t v : indices_) {
      if (v > horizon) break;
      out.push_back(v);
    }
  }
  if (max_terms > 0 && static_cast<int>(out.size()) > max_terms)
    out.erase(out.begin(), out.end() - max_terms);
  return out;
}

bool FilterSurrogate::operator==(const FilterSurrogate& o) const {
  if (kind_ != o.kind_) return false;
  switch (kind_) {
    case Kind::Explicit:
      return indices_ == o.indices_;
    case Kind::PolyaWindows:
      return theta_ == o.theta_ && indices_ == o.indices_;
    case Kind::BlockBoundaries:
      return expr_ == o.expr_ && phase_ == o.phase_ && stride_ == o.stride_;
  }
  return false;
}

void MeasureSpec::validate() const {
  if (atoms.empty()) throw DomainError("measure spec needs at least one atom");
  double total = 0.0;
  for (const auto& a : atoms) {
    if (!(a.weight > 0.0)) throw DomainError("atom weights must be positive");
    total += a.weight;
    if (a.kind == MeasureAtom::Kind::Alpha) {
      require_alpha(a.param);
    } else if (!(a.param > 0.0 && a.param < 1.0)) {
      throw DomainError("theta atoms require theta in (0,1)");
    }
  }
  if (std::fabs(total - 1.0) > 1e-12)
    throw DomainError("atom weights must sum to 1 (got " + std::to_string(total) + ")");
}

double flim(const SequenceFn& values, const FilterSurrogate& filter, std::int64_t horizon,
            const FlimOptions& opts) {
  const std::vector<std::int64_t> idx = filter.indices(horizon, opts.max_terms);
  if (static_cast<int>(idx.size()) < 3)
    throw NonConvergent(1.0, "filter yields fewer than 3 indices below horizon " +
                                 std::to_string(horizon));
  const std::vector<double> vals = values(idx);

  const int m = static_cast<int>(vals.size());
  const int window = std::min(opts.window, std::max(3, m / 2));
  double mean = 0.0;
  for (int i = m - window; i < m; ++i) mean += vals[static_cast<std::size_t>(i)];
  mean /= window;
  double spread = 0.0;
  for (int i = m - window; i < m; ++i)
    spread = std::max(spread, std::fabs(vals[static_cast<std::size_t>(i)] - mean));
  if (spread > opts.tol)
    throw NonConvergent(spread, "tail spread " + std::to_string(spread) +
                                    " exceeds tol over the last " + std::to_string(window) +
                                    " filter terms");
  return mean;
}

namespace {

SequenceFn alpha_ratio_sequence(const SetExpr& expr, double alpha) {
  return [expr, alpha](std::span<const std::int64_t> idx) {
    std::vector<std::int64_t> cps(idx.begin(), idx.end());
    auto p = cached_counting_profile(expr, alpha, cps);
    std::vector<double> out;
    out.reserve(idx.size());
    for (std::int64_t n : idx) {
      const auto it = std::lower_bound(p->checkpoints.begin(), p->checkpoints.end(), n);
      const std::size_t j = static_cast<std::size_t>(it - p->checkpoints.begin());
      out.push_back(p->normalizers[j] > 0 ? p->weighted[j] / p->normalizers[j] : 0.0);
    }
    return out;
  };
}

SequenceFn theta_ratio_sequence(const SetExpr& expr, double theta) {
  return [expr, theta](std::span<const std::int64_t> idx) {
    std::vector<std::int64_t> cps(idx.begin(), idx.end());
    for (std::int64_t n : idx) {
      const auto t = static_cast<std::int64_t>(std::floor(theta * static_cast<double>(n)));
      if (t >= 1) cps.push_back(t);
    }
    auto p = cached_counting_profile(expr, 0.0, cps);
    auto count_at = [&](std::int64_t n) -> std::int64_t {
      if (n < 1) return 0;
      const auto it = std::lower_bound(p->checkpoints.begin(), p->checkpoints.end(), n);
      return p->counts[static_cast<std::size_t>(it - p->checkpoints.begin())];
    };
    std::vector<double> out;
    out.reserve(idx.size());
    for (std::int64_t n : idx) {
      const std::int64_t t = static_cast<std::int64_t>(std::floor(theta * static_cast<double>(n)));
      out.push_back(static_cast<double>(count_at(n) - count_at(t)) / static_cast<double>(n - t));
    }
    return out;
  };
}

}  // namespace

double mu_alpha(const SetExpr& expr, double alpha, const FilterSurrogate& filter,
                std::int64_t horizon, const FlimOptions& opts) {
  require_alpha(alpha);
  return flim(alpha_ratio_sequence(expr, alpha), filter, horizon, opts);
}

double mu_theta(const SetExpr& expr, double theta, const FilterSurrogate& filter,
                std::int64_t horizon, const FlimOptions& opts) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("mu_theta requires theta in (0,1)");
  return flim(theta_ratio_sequence(expr, theta), filter, horizon, opts);
}

double evaluate_measure(const MeasureSpec& spec, const SetExpr& expr, std::int64_t horizon,
                        const FlimOptions& opts) {
  spec.validate();
  double total = 0.0;
  for (std::size_t i = 0; i < spec.atoms.size(); ++i) {
    const auto& atom = spec.atoms[i];
    try {
      const double v = atom.kind == MeasureAtom::Kind::Alpha
                           ? mu_alpha(expr, atom.param, atom.filter, horizon, opts)
                           : mu_theta(expr, atom.param, atom.filter, horizon, opts);
      total += atom.weight * v;
    } catch (const NonConvergent& e) {
      throw NonConvergent(e.spread(), "atom " + std::to_string(i) + ": " + e.what());
    }
  }
  return total;
}

CheckReport additivity_check(const MeasureSpec& spec,
                             const std::vector<std::pair<SetExpr, SetExpr>>& pairs,
                             std::int64_t horizon, double eps) {
  spec.validate();
  CheckReport rep;
  rep.title = "additivity";
  rep.pass = true;
  for (const auto& [x, y] : pairs) {
    for (std::int64_t n = 1; n <= horizon; ++n)
      if (x.contains(n) && y.contains(n))
        throw NotDisjoint(n, "sets share element " + std::to_string(n));
    const double mx = evaluate_measure(spec, x, horizon);
    const double my = evaluate_measure(spec, y, horizon);
    const double mu = evaluate_measure(spec, union_of(x, y), horizon);
    const double resid = std::fabs(mu - mx - my);
    const bool ok = resid <= eps;
    rep.rows.push_back({x.text() + " | " + y.text(), resid, eps, ok});
    rep.pass = rep.pass && ok;
  }
  return rep;
}

CheckReport extension_check(const MeasureSpec& spec, const std::vector<SetExpr>& exprs,
                            std::int64_t horizon, double eps) {
  spec.validate();
  CheckReport rep;
  rep.title = "extension";
  rep.pass = true;
  for (const auto& e : exprs) {
    const auto d = exact_density(e);
    if (!d) throw PreconditionFailed("extension_check requires exact density for " + e.text());
    const double mu = evaluate_measure(spec, e, horizon);
    const double resid = std::fabs(mu - d->to_double());
    const bool ok = resid <= eps;
    rep.rows.push_back({e.text(), resid, eps, ok});
    rep.pass = rep.pass && ok;
  }
  return rep;
}

MeasureSpec range_witness(const SetExpr& expr, double target, std::int64_t horizon, double eps) {
  const PolyaEstimate pe = polya_bounds(expr, horizon);
  const double theta = pe.theta_grid.back();
  const FilterSurrogate low = FilterSurrogate::polya_windows(theta, pe.argmin_indices);
  const FilterSurrogate high = FilterSurrogate::polya_windows(theta, pe.argmax_indices);

  const double v_low = mu_theta(expr, theta, low, horizon);
  const double v_high = mu_theta(expr, theta, high, horizon);
  if (target < std::min(v_low, v_high) - eps || target > std::max(v_low, v_high) + eps)
    throw OutOfRange("target " + std::to_string(target) + " outside [" + std::to_string(v_low) +
                     ", " + std::to_string(v_high) + "]");

  MeasureSpec spec;
  if (std::fabs(v_high - v_low) < eps) {
    // degenerate interval: a single atom already hits the target
    const bool use_low = std::fabs(target - v_low) <= std::fabs(target - v_high);
    spec.atoms.push_back({1.0, MeasureAtom::Kind::Theta, theta, use_low ? low : high});
    return spec;
  }
  double lambda = (v_high - target) / (v_high - v_low);
  lambda = std::min(1.0, std::max(0.0, lambda));
  if (lambda >= 1.0 - 1e-12) {
    spec.atoms.push_back({1.0, MeasureAtom::Kind::Theta, theta, low});
  } else if (lambda <= 1e-12) {
    spec.atoms.push_back({1.0, MeasureAtom::Kind::Theta, theta, high});
  } else {
    spec.atoms.push_back({lambda, MeasureAtom::Kind::Theta, theta, low});
    spec.atoms.push_back({1.0 - lambda, MeasureAtom::Kind::Theta, theta, high});
  }
  return spec;
}

CheckReport difference_limit_check(const SetExpr& expr_a, const SetExpr& expr_b,
                                   const std::vector<MeasureSpec>& specs, std::int64_t horizon,
                                   double eps) {
  // Estimate L = lim (B(n) - A(n))/n over the tail checkpoints.
  const SetExpr merged = union_of(expr_a, expr_b);
  const auto cps = tail_checkpoints(merged, horizon);
  auto pa = cached_counting_profile(expr_a, 0.0, cps);
  auto pb = cached_counting_profile(expr_b, 0.0, cps);
  double lo = 2.0, hi = -2.0;
  for (std::size_t j = 0; j < pa->checkpoints.size(); ++j) {
    const double d = static_cast<double>(pb->counts[j] - pa->counts[j]) /
                     static_cast<double>(pa->checkpoints[j]);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  if (hi - lo > eps)
    throw PreconditionFailed("difference ratio does not stabilize: spread " +
                             std::to_string(hi - lo));
  const double limit = 0.5 * (lo + hi);

  CheckReport rep;
  rep.title = "difference_limit";
  rep.pass = true;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const double mb = evaluate_measure(specs[i], expr_b, horizon);
    const double ma = evaluate_measure(specs[i], expr_a, horizon);
    const double resid = std::fabs((mb - ma) - limit);
    const bool ok = resid <= eps;
    rep.rows.push_back({"spec " + std::to_string(i), resid, eps, ok});
    rep.pass = rep.pass && ok;
  }
  return rep;
}

}  // namespace densitylab
