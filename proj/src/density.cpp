#include "densitylab/density.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "densitylab/counting.hpp"
#include "densitylab/util.hpp"

namespace densitylab {

namespace {

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

// Ratios A_alpha(n_j)/N_alpha(n_j) at the given checkpoints.
std::vector<double> plain_ratios(const SetExpr& expr, double alpha,
                                 const std::vector<std::int64_t>& cps) {
  auto p = cached_counting_profile(expr, alpha, cps);
  std::vector<double> r(p->checkpoints.size());
  for (std::size_t j = 0; j < r.size(); ++j)
    r[j] = p->normalizers[j] > 0 ? clamp01(p->weighted[j] / p->normalizers[j]) : 0.0;
  return r;
}

// Log-scale Stolz window ratios for alpha = -1. The lag is an integer power
// of the dominant block period, so for block sets every window covers whole
// periods and the additive constants (Euler-Mascheroni and block-boundary
// corrections) cancel instead of decaying like 1/ln n.
std::vector<double> stolz_ratios(const SetExpr& expr, const std::vector<std::int64_t>& cps,
                                 std::int64_t lag) {
  std::vector<std::int64_t> points = cps;
  for (std::int64_t n : cps) points.push_back(std::max<std::int64_t>(1, n / lag));
  auto p = cached_counting_profile(expr, -1.0, points);
  auto at = [&](std::int64_t n) {
    const auto it = std::lower_bound(p->checkpoints.begin(), p->checkpoints.end(), n);
    return static_cast<std::size_t>(it - p->checkpoints.begin());
  };
  std::vector<double> r(cps.size());
  for (std::size_t j = 0; j < cps.size(); ++j) {
    const std::size_t hi = at(cps[j]);
    const std::size_t lo = at(std::max<std::int64_t>(1, cps[j] / lag));
    const double dn = p->normalizers[hi] - p->normalizers[lo];
    const double da = p->weighted[hi] - p->weighted[lo];
    r[j] = dn > 0 ? clamp01(da / dn) : 0.0;
  }
  return r;
}

}  // namespace

DensityEstimate estimate_alpha_density(const SetExpr& expr, double alpha,
                                       std::int64_t horizon, const EstimateOptions& opts) {
  require_alpha(alpha);
  if (horizon < (std::int64_t(1) << 10))
    throw InsufficientHorizon("density estimation requires horizon >= 2^10");

  const std::vector<std::int64_t> cps = tail_checkpoints(expr, horizon, opts.grid);
  const std::vector<double> ratios =
      alpha == -1.0 ? stolz_ratios(expr, cps, stolz_lag(expr)) : plain_ratios(expr, alpha, cps);

  DensityEstimate est;
  est.alpha = alpha;
  est.horizon = horizon;
  est.checkpoint_count = static_cast<int>(cps.size());
  est.liminf_est = *std::min_element(ratios.begin(), ratios.end());
  est.limsup_est = *std::max_element(ratios.begin(), ratios.end());
  est.exists = (est.limsup_est - est.liminf_est) <= opts.tol_exist;
  if (est.exists) est.value = 0.5 * (est.liminf_est + est.limsup_est);
  est.exact = exact_density(expr);
  return est;
}

namespace {

constexpr std::int64_t kMaxEventualPeriod = 10'000'000;

// Eventually periodic fragment: boolean combinations of Nat/Empty/Finite/AP.
bool eventually_periodic(const SetExpr& e) {
  switch (e.kind()) {
    case SetExpr::Kind::Nat:
    case SetExpr::Kind::Empty:
    case SetExpr::Kind::Finite:
    case SetExpr::Kind::AP:
      return true;
    case SetExpr::Kind::Union:
    case SetExpr::Kind::Inter:
    case SetExpr::Kind::Diff:
      return eventually_periodic(e.child_a()) && eventually_periodic(e.child_b());
    case SetExpr::Kind::Compl:
      return eventually_periodic(e.child_a());
    default:
      return false;
  }
}

// (period, transient bound) of the eventually periodic shape.
std::pair<std::int64_t, std::int64_t> periodicity(const SetExpr& e) {
  switch (e.kind()) {
    case SetExpr::Kind::Finite: {
      const auto& v = e.finite_elements();
      return {1, v.empty() ? 0 : v.back()};
    }
    case SetExpr::Kind::AP:
      return {e.ap_modulus(), 0};
    case SetExpr::Kind::Union:
    case SetExpr::Kind::Inter:
    case SetExpr::Kind::Diff: {
      const auto a = periodicity(e.child_a());
      const auto b = periodicity(e.child_b());
      const std::int64_t l = std::lcm(a.first, b.first);
      return {l, std::max(a.second, b.second)};
    }
    case SetExpr::Kind::Compl:
      return periodicity(e.child_a());
    default:
      return {1, 0};
  }
}

}  // namespace

std::optional<Rational> exact_density(const SetExpr& expr) {
  if (expr.kind() == SetExpr::Kind::MCopy) {
    const auto inner = exact_density(expr.mcopy_inner());
    if (!inner) return std::nullopt;
    return inner->over(expr.mcopy_factor());
  }
  if (!eventually_periodic(expr)) return std::nullopt;
  const auto [period, transient] = periodicity(expr);
  if (period > kMaxEventualPeriod) return std::nullopt;
  std::int64_t members = 0;
  for (std::int64_t n = transient + 1; n <= transient + period; ++n)
    members += expr.contains(n) ? 1 : 0;
  return Rational(members, period);
}

std::optional<std::pair<double, double>> exact_alpha_extremes(const SetExpr& expr, double alpha) {
  if (!(alpha > -1.0)) throw DomainError("exact_alpha_extremes requires alpha > -1");
  if (expr.kind() != SetExpr::Kind::Blocks) return std::nullopt;

  const std::int64_t p = expr.blocks_period();
  const auto& on = expr.blocks_on();
  const double q = std::pow(static_cast<double>(expr.blocks_base()), alpha + 1.0);
  const double qp = std::pow(q, static_cast<double>(p));

  // Limit of A_alpha(b^J)/N_alpha(b^J) along J = phi (mod p):
  //   R(phi) = sum_{s in on} q^{s - phi + p*[s < phi]} * (q - 1) / (q^p - 1).
  double lo = 2.0, hi = -1.0;
  for (std::int64_t phi = 0; phi < p; ++phi) {
    double sum = 0.0;
    for (std::int64_t s : on) {
      const double e = static_cast<double>(s - phi + (s < phi ? p : 0));
      sum += std::pow(q, e);
    }
    const double r = sum * (q - 1.0) / (qp - 1.0);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  if (on.empty()) return std::make_pair(0.0, 0.0);
  return std::make_pair(lo, hi);
}

CheckReport fuchs_consistency_check(const SetExpr& expr, const std::vector<double>& alpha_grid,
                                    std::int64_t horizon, double tol) {
  for (double a : alpha_grid)
    if (!(a > -1.0)) throw DomainError("fuchs grid requires alpha > -1");
  const auto d = exact_density(expr);
  if (!d) throw PreconditionFailed("fuchs_consistency_check requires exact density");

  CheckReport rep;
  rep.title = "fuchs_consistency";
  rep.pass = true;
  for (double a : alpha_grid) {
    const auto est = estimate_alpha_density(expr, a, horizon);
    const double mid = 0.5 * (est.liminf_est + est.limsup_est);
    const double resid = std::fabs(mid - d->to_double());
    const bool ok = resid <= tol && (est.limsup_est - est.liminf_est) <= 2 * tol;
    rep.rows.push_back({"alpha=" + std::to_string(a), resid, tol, ok});
    rep.pass = rep.pass && ok;
  }
  return rep;
}

CheckReport rajagopal_monotonicity_check(const SetExpr& expr, double alpha, double beta,
                                         std::int64_t horizon, double slack) {
  if (!(alpha <= beta)) throw DomainError("rajagopal check requires alpha <= beta");
  require_alpha(alpha);
  require_alpha(beta);
  const auto ea = estimate_alpha_density(expr, alpha, horizon);
  const auto eb = estimate_alpha_density(expr, beta, horizon);

  CheckReport rep;
  rep.title = "rajagopal_monotonicity";
  auto row = [&](const std::string& label, double lhs, double rhs) {
    const bool ok = lhs <= rhs + slack;
    rep.rows.push_back({label, lhs - rhs, slack, ok});
    return ok;
  };
  rep.pass = row("lda_beta<=lda_alpha", eb.liminf_est, ea.liminf_est);
  rep.pass = row("lda_alpha<=uda_alpha", ea.liminf_est, ea.limsup_est) && rep.pass;
  rep.pass = row("uda_alpha<=uda_beta", ea.limsup_est, eb.limsup_est) && rep.pass;
  return rep;
}

CheckReport ggm_continuity_check(const SetExpr& expr, double alpha, double delta,
                                 std::int64_t horizon, double eps) {
  if (!(delta > 0.0 && delta < alpha + 1.0))
    throw DomainError("ggm check requires 0 < delta < alpha + 1");
  const auto cps = tail_checkpoints(expr, horizon);
  const auto base = plain_ratios(expr, alpha, cps);

  CheckReport rep;
  rep.title = "ggm_continuity";
  rep.pass = true;
  const double shifts[2] = {delta, -delta};
  for (double s : shifts) {
    const auto other = plain_ratios(expr, alpha + s, cps);
    double worst = 0.0;
    for (std::size_t j = 0; j < cps.size(); ++j)
      worst = std::max(worst, std::fabs(base[j] - other[j]));
    const double bound = s > 0 ? 2 * delta / (alpha + 1.0) : 2 * delta / (alpha - delta + 1.0);
    const bool ok = worst < bound + eps;
    rep.rows.push_back({s > 0 ? "alpha+delta" : "alpha-delta", worst, bound + eps, ok});
    rep.pass = rep.pass && ok;
  }
  return rep;
}

double oscillation_diagnostic(const SetExpr& expr, double alpha, std::int64_t horizon) {
  require_alpha(alpha);
  if (horizon < 4) throw DomainError("oscillation_diagnostic requires horizon >= 4");
  const std::int64_t lo = horizon / 2;

  CompensatedSum acc, norm;
  double prev = 0.0;
  double worst = 0.0;
  for (std::int64_t k = 1; k <= horizon + 1; ++k) {
    const double w = alpha == 0.0 ? 1.0 : std::pow(static_cast<double>(k), alpha);
    norm.add(w);
    if (expr.contains(k)) acc.add(w);
    const double r = acc.value() / norm.value();
    if (k > lo) worst = std::max(worst, std::fabs(r - prev));
    prev = r;
  }
  return worst;
}

}  // namespace densitylab
