#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "densitylab/density.hpp"
#include "densitylab/set_expr.hpp"

namespace densitylab {

// Computable stand-in for a free ultrafilter: a strictly increasing index
// sequence. A limit taken along it is honest only when the sequence forces a
// single cluster point; flim reports NonConvergent otherwise.
class FilterSurrogate {
 public:
  enum class Kind { Explicit, BlockBoundaries, PolyaWindows };

  // Default-constructed surrogates carry no indices and fail at evaluation.
  FilterSurrogate() = default;

  // Strictly increasing indices, first >= 2.
  static FilterSurrogate explicit_indices(std::vector<std::int64_t> indices);
  // Powers base^{stride*k + phase} of the expression's dominant block base.
  static FilterSurrogate block_boundaries(const SetExpr& expr, std::int64_t phase,
                                          std::int64_t stride);
  // Explicit indices with Polya-window provenance (the theta they came from).
  static FilterSurrogate polya_windows(double theta, std::vector<std::int64_t> indices);

  Kind kind() const { return kind_; }
  double theta() const { return theta_; }
  std::int64_t phase() const { return phase_; }
  std::int64_t stride() const { return stride_; }
  const SetExpr& expr() const { return expr_; }
  const std::vector<std::int64_t>& stored_indices() const { return indices_; }

  // Indices <= horizon; at most max_terms of them, keeping the largest.
  std::vector<std::int64_t> indices(std::int64_t horizon, int max_terms) const;

  bool operator==(const FilterSurrogate& o) const;

 private:
  Kind kind_ = Kind::Explicit;
  std::vector<std::int64_t> indices_;
  SetExpr expr_;
  std::int64_t base_ = 2;
  std::int64_t phase_ = 0;
  std::int64_t stride_ = 1;
  double theta_ = 0.0;
};

struct MeasureAtom {
  enum class Kind { Alpha, Theta };
  double weight = 1.0;
  Kind kind = Kind::Alpha;
  double param = 0.0;  // alpha in [-1, 40] or theta in (0, 1)
  FilterSurrogate filter;
};

// Finite convex combination of (filter, alpha) and (filter, theta) atoms.
struct MeasureSpec {
  std::vector<MeasureAtom> atoms;
  void validate() const;  // weights sum to 1 within 1e-12, params in range
};

struct FlimOptions {
  double tol = 1e-2;
  int max_terms = 64;
  int window = 16;  // convergence window; shrinks when fewer terms exist
};

// Batch evaluator for a bounded sequence at the given ascending indices.
using SequenceFn = std::function<std::vector<double>(std::span<const std::int64_t>)>;

// Limit of the sequence along the surrogate. Succeeds when the last
// min(window, max(3, terms/2)) evaluated terms lie within tol of their mean;
// throws NonConvergent with the observed spread otherwise.
double flim(const SequenceFn& values, const FilterSurrogate& filter, std::int64_t horizon,
            const FlimOptions& opts = {});

// mu_alpha^F(A): flim of A_alpha(n)/N_alpha(n) along the filter.
double mu_alpha(const SetExpr& expr, double alpha, const FilterSurrogate& filter,
                std::int64_t horizon, const FlimOptions& opts = {});

// mu_theta(A): flim of (A(n) - A(floor(theta*n)))/(n - floor(theta*n)).
double mu_theta(const SetExpr& expr, double theta, const FilterSurrogate& filter,
                std::int64_t horizon, const FlimOptions& opts = {});

double evaluate_measure(const MeasureSpec& spec, const SetExpr& expr, std::int64_t horizon,
                        const FlimOptions& opts = {});

// |mu(X u Y) - mu(X) - mu(Y)| <= eps per pair; pairs verified disjoint on
// [1, horizon] first (NotDisjoint carries the first common element).
CheckReport additivity_check(const MeasureSpec& spec,
                             const std::vector<std::pair<SetExpr, SetExpr>>& pairs,
                             std::int64_t horizon, double eps = 2e-2);

// |mu(E) - d(E)| <= eps for eventually periodic expressions.
CheckReport extension_check(const MeasureSpec& spec, const std::vector<SetExpr>& exprs,
                            std::int64_t horizon, double eps = 2e-2);

// Two-atom theta spec hitting a prescribed value x in [lld, uud], built from
// the argmin/argmax window sequences of polya_bounds.
MeasureSpec range_witness(const SetExpr& expr, double target, std::int64_t horizon,
                          double eps = 2e-2);

// L = lim (B(n)-A(n))/n must stabilize; then mu(B) - mu(A) = L per spec.
CheckReport difference_limit_check(const SetExpr& expr_a, const SetExpr& expr_b,
                                   const std::vector<MeasureSpec>& specs, std::int64_t horizon,
                                   double eps = 1e-2);

}  // namespace densitylab
