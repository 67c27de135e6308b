#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "densitylab/set_expr.hpp"

namespace densitylab {

// Finite materialization of a constructed subset: bit-indexed membership on
// [1, horizon] with O(1) prefix counts. The generating induction is
// prefix-deterministic, so re-materializing at a larger horizon reproduces
// the same prefix.
class ConstructedSet {
 public:
  ConstructedSet(std::vector<std::uint8_t> bits, std::int64_t horizon, std::string provenance);

  std::int64_t horizon() const { return horizon_; }
  const std::string& provenance() const { return provenance_; }

  bool contains(std::int64_t n) const;
  std::int64_t count(std::int64_t n) const;  // |D ∩ [1, n]|, n <= horizon

  ConstructedSet complement() const;

  // Run-length interval list "a-b,c-d,..." for inspection.
  std::string to_intervals() const;

 private:
  std::vector<std::uint8_t> bits_;        // bits_[n] for n in [1, horizon]
  std::vector<std::int64_t> prefix_;      // counts at multiples of kBlock
  std::int64_t horizon_;
  std::string provenance_;
  static constexpr std::int64_t kBlock = 4096;
};

struct ConstructionOptions {
  bool trace = false;         // collect positions where the skip case fired
  double tol = 1e-2;          // density-gap resolution tolerance
};

struct ConstructionResult {
  ConstructedSet set;
  std::vector<std::int64_t> skip_positions;  // trace of the proof's m(n), optional
};

// Intermediate-subset induction: D with A∩B ⊆ D ⊆ B and d(D) = d(A), for
// d(A) < d(B) resolved with a strict gap. Guarantees D'(n) <= A'(n) for all n.
ConstructionResult intermediate_subset(const SetExpr& a, const SetExpr& b, std::int64_t horizon,
                                       const ConstructionOptions& opts = {});

// Same induction on the primed sets: D with A∩B ⊆ D ⊆ B and
// (D(n) - A(n))/n -> 0, requiring lim (B(n)-A(n))/n to stabilize and be >= 0.
ConstructionResult difference_matching_subset(const SetExpr& a, const SetExpr& b,
                                              std::int64_t horizon,
                                              const ConstructionOptions& opts = {});

// The block set whose asymptotic density does not exist: the union of
// the intervals (2^{2k}, 2^{2k+1}], with lower density 1/3 and upper 2/3.
SetExpr counterexample_set();

// D with A ⊆ D ⊆ A∪B and d(D) = d(B), via the complement construction.
ConstructionResult corollary_superset(const SetExpr& a, const SetExpr& b, std::int64_t horizon,
                                      const ConstructionOptions& opts = {});

}  // namespace densitylab
