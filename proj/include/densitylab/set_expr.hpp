#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "densitylab/errors.hpp"

namespace densitylab {

// Rule pinning down the free choice in an m-copy: the i-th element of the
// copy is m*a_i + t with t in [1, m]. The choice is a pure function of the
// element value, so membership stays O(1) and equal seeds reproduce equal
// sets.
struct CopyRule {
  enum class Kind { First, Offset, Seeded };

  Kind kind = Kind::First;
  std::int64_t offset = 1;   // Offset only, 1 <= offset <= m
  std::uint64_t seed = 0;    // Seeded only

  static CopyRule first() { return CopyRule{}; }
  static CopyRule at_offset(std::int64_t t);
  static CopyRule seeded(std::uint64_t seed);

  // Chosen slot t in [1, m] for source element a.
  std::int64_t slot(std::int64_t a, std::int64_t m) const;

  std::string str() const;
  bool operator==(const CopyRule& o) const;
};

// Symbolic subset of N = {1, 2, 3, ...}. Immutable node DAG with value
// semantics; copies are cheap. The canonical text form doubles as the
// identity for caching and equality.
class SetExpr {
 public:
  enum class Kind { Nat, Empty, Finite, AP, Blocks, Union, Inter, Diff, Compl, MCopy };

  SetExpr() : SetExpr(empty()) {}

  static SetExpr nat();
  static SetExpr empty();
  // Strictly increasing positive elements.
  static SetExpr finite(std::vector<std::int64_t> elements);
  // {n >= 1 : n = residue (mod modulus)}, 0 <= residue < modulus.
  static SetExpr ap(std::int64_t residue, std::int64_t modulus);
  // Union of intervals (base^j, base^{j+1}] over j >= 0 with j mod period in `on`.
  static SetExpr blocks(std::int64_t base, std::int64_t period, std::vector<std::int64_t> on);

  friend SetExpr union_of(const SetExpr& a, const SetExpr& b);
  friend SetExpr inter_of(const SetExpr& a, const SetExpr& b);
  friend SetExpr diff_of(const SetExpr& a, const SetExpr& b);
  friend SetExpr compl_of(const SetExpr& a);
  friend SetExpr m_copy(const SetExpr& inner, std::int64_t m, const CopyRule& rule);

  Kind kind() const;
  const std::string& text() const;  // canonical grammar form

  bool contains(std::int64_t n) const;

  // Exact |expr ∩ [1,n]| when a closed form exists (primitives, complements
  // and m-copies of those); nullopt for general boolean shapes.
  std::optional<std::int64_t> closed_count(std::int64_t n) const;

  // Largest possible element for structurally finite shapes.
  std::optional<std::int64_t> max_element_bound() const;

  // Accessors; only valid for the matching kind.
  const std::vector<std::int64_t>& finite_elements() const;
  std::int64_t ap_residue() const;
  std::int64_t ap_modulus() const;
  std::int64_t blocks_base() const;
  std::int64_t blocks_period() const;
  const std::vector<std::int64_t>& blocks_on() const;
  // Precomputed base^0, base^1, ... while they fit in int64.
  const std::vector<std::int64_t>& blocks_boundaries() const;
  SetExpr child_a() const;
  SetExpr child_b() const;
  SetExpr mcopy_inner() const;
  std::int64_t mcopy_factor() const;
  const CopyRule& mcopy_rule() const;

  bool operator==(const SetExpr& o) const { return text() == o.text(); }
  bool operator!=(const SetExpr& o) const { return !(*this == o); }

 private:
  struct Node;
  explicit SetExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

SetExpr union_of(const SetExpr& a, const SetExpr& b);
SetExpr inter_of(const SetExpr& a, const SetExpr& b);
SetExpr diff_of(const SetExpr& a, const SetExpr& b);
SetExpr compl_of(const SetExpr& a);
SetExpr m_copy(const SetExpr& inner, std::int64_t m, const CopyRule& rule = CopyRule::first());

}  // namespace densitylab
