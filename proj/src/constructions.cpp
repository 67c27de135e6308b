#include "densitylab/constructions.hpp"

#include <algorithm>
#include <cmath>

#include "densitylab/counting.hpp"
#include "densitylab/density.hpp"
#include "densitylab/errors.hpp"

namespace densitylab {

ConstructedSet::ConstructedSet(std::vector<std::uint8_t> bits, std::int64_t horizon,
                               std::string provenance)
    : bits_(std::move(bits)), horizon_(horizon), provenance_(std::move(provenance)) {
  if (static_cast<std::int64_t>(bits_.size()) != horizon_ + 1)
    throw DomainError("constructed set bits must cover [1, horizon]");
  prefix_.assign(static_cast<std::size_t>(horizon_ / kBlock) + 2, 0);
  std::int64_t c = 0;
  for (std::int64_t n = 1; n <= horizon_; ++n) {
    c += bits_[static_cast<std::size_t>(n)] ? 1 : 0;
    if (n % kBlock == 0) prefix_[static_cast<std::size_t>(n / kBlock)] = c;
  }
  prefix_.back() = c;
}

bool ConstructedSet::contains(std::int64_t n) const {
  if (n < 1 || n > horizon_) return false;
  return bits_[static_cast<std::size_t>(n)] != 0;
}

std::int64_t ConstructedSet::count(std::int64_t n) const {
  if (n < 1) return 0;
  if (n > horizon_) throw HorizonExceeded("count query beyond materialized horizon");
  const std::int64_t block = n / kBlock;
  std::int64_t c = prefix_[static_cast<std::size_t>(block)];
  for (std::int64_t v = block * kBlock + 1; v <= n; ++v)
    c += bits_[static_cast<std::size_t>(v)] ? 1 : 0;
  return c;
}

ConstructedSet ConstructedSet::complement() const {
  std::vector<std::uint8_t> flipped(bits_.size());
  for (std::size_t i = 1; i < bits_.size(); ++i) flipped[i] = bits_[i] ? 0 : 1;
  return ConstructedSet(std::move(flipped), horizon_, "complement of: " + provenance_);
}

std::string ConstructedSet::to_intervals() const {
  std::string out;
  std::int64_t run_start = 0;
  for (std::int64_t n = 1; n <= horizon_ + 1; ++n) {
    const bool in = n <= horizon_ && bits_[static_cast<std::size_t>(n)];
    if (in && !run_start) run_start = n;
    if (!in && run_start) {
      if (!out.empty()) out += ',';
      out += std::to_string(run_start);
      if (n - 1 > run_start) out += "-" + std::to_string(n - 1);
      run_start = 0;
    }
  }
  return out;
}

namespace {

// Shared subset induction. Builds D' ⊆ B' tracking the
// counting function of A': n joins D' exactly when n ∈ B' and
// D'(n-1) + 1 <= A'(n). Returns D = C ∪ D'.
ConstructionResult run_induction(const SetExpr& a, const SetExpr& b, std::int64_t horizon,
                                 const ConstructionOptions& opts, std::string provenance) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(horizon) + 1, 0);
  std::vector<std::int64_t> skips;
  std::int64_t a_prime = 0;
  std::int64_t d_prime = 0;
  for (std::int64_t n = 1; n <= horizon; ++n) {
    const bool in_a = a.contains(n);
    const bool in_b = b.contains(n);
    if (in_a && in_b) {
      bits[static_cast<std::size_t>(n)] = 1;  // C = A ∩ B
      continue;
    }
    if (in_a) ++a_prime;
    if (in_b) {
      if (d_prime + 1 <= a_prime) {
        ++d_prime;
        bits[static_cast<std::size_t>(n)] = 1;
      } else if (opts.trace) {
        skips.push_back(n);
      }
    }
  }
  return ConstructionResult{ConstructedSet(std::move(bits), horizon, std::move(provenance)),
                            std::move(skips)};
}

double resolved_density(const SetExpr& e, std::int64_t horizon, double tol,
                        const char* role) {
  if (const auto exact = exact_density(e)) return exact->to_double();
  const auto est = estimate_density(e, std::max<std::int64_t>(horizon, 1 << 12));
  if (est.limsup_est - est.liminf_est > tol)
    throw PreconditionFailed(std::string(role) + " has no resolved density (spread " +
                             std::to_string(est.limsup_est - est.liminf_est) + ")");
  return 0.5 * (est.liminf_est + est.limsup_est);
}

}  // namespace

ConstructionResult intermediate_subset(const SetExpr& a, const SetExpr& b, std::int64_t horizon,
                                       const ConstructionOptions& opts) {
  if (horizon < 1) throw DomainError("horizon must be >= 1");
  const double da = resolved_density(a, horizon, opts.tol, "A");
  const double db = resolved_density(b, horizon, opts.tol, "B");
  if (!(db - da >= 3 * opts.tol))
    throw PreconditionFailed("requires d(A) < d(B) with gap >= 3*tol; got d(A)=" +
                             std::to_string(da) + ", d(B)=" + std::to_string(db));
  return run_induction(a, b, horizon, opts,
                       "intermediate_subset(" + a.text() + ", " + b.text() + ")");
}

ConstructionResult difference_matching_subset(const SetExpr& a, const SetExpr& b,
                                              std::int64_t horizon,
                                              const ConstructionOptions& opts) {
  if (horizon < 1) throw DomainError("horizon must be >= 1");
  // lim (B(n) - A(n))/n must stabilize; the degenerate limit 0 (e.g. A = B)
  // is allowed and reduces to D = A ∩ B.
  const auto cps = tail_checkpoints(union_of(a, b), std::max<std::int64_t>(horizon, 1 << 12));
  double lo = 2.0, hi = -2.0;
  for (std::int64_t n : cps) {
    const double d = static_cast<double>(count(b, n) - count(a, n)) / static_cast<double>(n);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  if (hi - lo > opts.tol)
    throw PreconditionFailed("(B(n)-A(n))/n does not stabilize: spread " +
                             std::to_string(hi - lo));
  if (hi < -opts.tol)
    throw PreconditionFailed("lim (B(n)-A(n))/n is negative; no matching subset of B exists");
  return run_induction(a, b, horizon, opts,
                       "difference_matching_subset(" + a.text() + ", " + b.text() + ")");
}

SetExpr counterexample_set() { return SetExpr::blocks(2, 2, {0}); }

ConstructionResult corollary_superset(const SetExpr& a, const SetExpr& b, std::int64_t horizon,
                                      const ConstructionOptions& opts) {
  if (horizon < 1) throw DomainError("horizon must be >= 1");
  const double da = resolved_density(a, horizon, opts.tol, "A");
  const double db = resolved_density(b, horizon, opts.tol, "B");
  if (!(db - da >= 3 * opts.tol))
    throw PreconditionFailed("requires d(A) < d(B) with gap >= 3*tol; got d(A)=" +
                             std::to_string(da) + ", d(B)=" + std::to_string(db));
  // Run the induction on the complements and return the complement of the
  // result: E with N∖(A∪B) ⊆ E ⊆ N∖A and d(E) = d(N∖B); D = N∖E.
  ConstructionResult inner =
      run_induction(compl_of(b), compl_of(a), horizon, opts,
                    "corollary_superset(" + a.text() + ", " + b.text() + ")");
  return ConstructionResult{inner.set.complement(), std::move(inner.skip_positions)};
}

}  // namespace densitylab
