#include "densitylab/set_expr.hpp"

#include <algorithm>
#include <limits>

#include "densitylab/util.hpp"

namespace densitylab {

namespace {

constexpr std::int64_t kMaxInt = std::numeric_limits<std::int64_t>::max();

std::string join_ints(const std::vector<std::int64_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

CopyRule CopyRule::at_offset(std::int64_t t) {
  if (t < 1) throw DomainError("copy rule offset must be >= 1");
  CopyRule r;
  r.kind = Kind::Offset;
  r.offset = t;
  return r;
}

CopyRule CopyRule::seeded(std::uint64_t seed) {
  CopyRule r;
  r.kind = Kind::Seeded;
  r.seed = seed;
  return r;
}

std::int64_t CopyRule::slot(std::int64_t a, std::int64_t m) const {
  switch (kind) {
    case Kind::First:
      return 1;
    case Kind::Offset:
      return offset;
    case Kind::Seeded: {
      const std::uint64_t h = splitmix64(seed ^ (static_cast<std::uint64_t>(a) * 0x9e3779b97f4a7c15ULL));
      return 1 + static_cast<std::int64_t>(h % static_cast<std::uint64_t>(m));
    }
  }
  return 1;
}

std::string CopyRule::str() const {
  switch (kind) {
    case Kind::First:
      return "first";
    case Kind::Offset:
      return "offset:" + std::to_string(offset);
    case Kind::Seeded:
      return "seed:" + std::to_string(seed);
  }
  return "first";
}

bool CopyRule::operator==(const CopyRule& o) const {
  if (kind != o.kind) return false;
  if (kind == Kind::Offset) return offset == o.offset;
  if (kind == Kind::Seeded) return seed == o.seed;
  return true;
}

struct SetExpr::Node {
  Kind kind = Kind::Empty;

  std::vector<std::int64_t> elems;  // Finite, strictly increasing
  std::int64_t residue = 0;         // AP
  std::int64_t modulus = 1;         // AP
  std::int64_t base = 2;            // Blocks
  std::int64_t period = 1;          // Blocks
  std::vector<std::int64_t> on;     // Blocks, sorted residues mod period
  std::vector<std::int64_t> bounds; // Blocks, base^0, base^1, ...

  std::shared_ptr<const Node> a, b;

  std::int64_t factor = 1;          // MCopy
  CopyRule rule;                    // MCopy

  std::string text;
};

SetExpr SetExpr::nat() {
  auto n = std::make_shared<SetExpr::Node>();
  n->kind = Kind::Nat;
  n->text = "nat";
  return SetExpr(std::move(n));
}

SetExpr SetExpr::empty() {
  auto n = std::make_shared<SetExpr::Node>();
  n->kind = Kind::Empty;
  n->text = "empty";
  return SetExpr(std::move(n));
}

SetExpr SetExpr::finite(std::vector<std::int64_t> elements) {
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (elements[i] < 1) throw DomainError("finite set elements must be >= 1");
    if (i && elements[i] <= elements[i - 1])
      throw DomainError("finite set elements must be strictly increasing");
  }
  auto n = std::make_shared<SetExpr::Node>();
  n->kind = Kind::Finite;
  n->text = "finite{" + join_ints(elements) + "}";
  n->elems = std::move(elements);
  return SetExpr(std::move(n));
}

SetExpr SetExpr::ap(std::int64_t residue, std::int64_t modulus) {
  if (modulus < 1) throw DomainError("ap modulus must be >= 1");
  if (residue < 0 || residue >= modulus)
    throw DomainError("ap residue must satisfy 0 <= r < m");
  auto n = std::make_shared<SetExpr::Node>();
  n->kind = Kind::AP;
  n->residue = residue;
  n->modulus = modulus;
  n->text = "ap(" + std::to_string(residue) + "," + std::to_string(modulus) + ")";
  return SetExpr(std::move(n));
}

SetExpr SetExpr::blocks(std::int64_t base, std::int64_t period, std::vector<std::int64_t> on) {
  if (base < 2) throw DomainError("blocks base must be >= 2");
  if (period < 1) throw DomainError("blocks period must be >= 1");
  std::sort(on.begin(), on.end());
  on.erase(std::unique(on.begin(), on.end()), on.end());
  for (std::int64_t r : on)
    if (r < 0 || r >= period) throw DomainError("blocks residue out of [0, period)");
  auto n = std::make_shared<SetExpr::Node>();
  n->kind = Kind::Blocks;
  n->base = base;
  n->period = period;
  n->on = std::move(on);
  std::int64_t p = 1;
  while (true) {
    n->bounds.push_back(p);
    if (p > kMaxInt / base) break;
    p *= base;
  }
  n->text = "blocks(" + std::to_string(base) + "," + std::to_string(period) +
            ",on=[" + join_ints(n->on) + "])";
  return SetExpr(std::move(n));
}

SetExpr union_of(const SetExpr& a, const SetExpr& b) {
  auto n = std::make_shared<SetExpr::Node>();
  n->kind = SetExpr::Kind::Union;
  n->a = a.node_;
  n->b = b.node_;
  n->text = "union(" + a.text() + "," + b.text() + ")";
  return SetExpr(std::move(n));
}

SetExpr inter_of(const SetExpr& a, const SetExpr& b) {
  auto n = std::make_shared<SetExpr::Node>();
  n->kind = SetExpr::Kind::Inter;
  n->a = a.node_;
  n->b = b.node_;
  n->text = "inter(" + a.text() + "," + b.text() + ")";
  return SetExpr(std::move(n));
}

SetExpr diff_of(const SetExpr& a, const SetExpr& b) {
  auto n = std::make_shared<SetExpr::Node>();
  n->kind = SetExpr::Kind::Diff;
  n->a = a.node_;
  n->b = b.node_;
  n->text = "diff(" + a.text() + "," + b.text() + ")";
  return SetExpr(std::move(n));
}

SetExpr compl_of(const SetExpr& a) {
  auto n = std::make_shared<SetExpr::Node>();
  n->kind = SetExpr::Kind::Compl;
  n->a = a.node_;
  n->text = "compl(" + a.text() + ")";
  return SetExpr(std::move(n));
}

SetExpr m_copy(const SetExpr& inner, std::int64_t m, const CopyRule& rule) {
  if (m < 1) throw DomainError("mcopy factor must be >= 1");
  if (rule.kind == CopyRule::Kind::Offset && rule.offset > m)
    throw DomainError("mcopy offset rule must satisfy 1 <= t <= m");
  auto n = std::make_shared<SetExpr::Node>();
  n->kind = SetExpr::Kind::MCopy;
  n->a = inner.node_;
  n->factor = m;
  n->rule = rule;
  n->text = "mcopy(" + inner.text() + "," + std::to_string(m) + "," + rule.str() + ")";
  return SetExpr(std::move(n));
}

SetExpr::Kind SetExpr::kind() const { return node_->kind; }
const std::string& SetExpr::text() const { return node_->text; }

const std::vector<std::int64_t>& SetExpr::finite_elements() const { return node_->elems; }
std::int64_t SetExpr::ap_residue() const { return node_->residue; }
std::int64_t SetExpr::ap_modulus() const { return node_->modulus; }
std::int64_t SetExpr::blocks_base() const { return node_->base; }
std::int64_t SetExpr::blocks_period() const { return node_->period; }
const std::vector<std::int64_t>& SetExpr::blocks_on() const { return node_->on; }
const std::vector<std::int64_t>& SetExpr::blocks_boundaries() const { return node_->bounds; }
SetExpr SetExpr::child_a() const { return SetExpr(node_->a); }
SetExpr SetExpr::child_b() const { return SetExpr(node_->b); }
SetExpr SetExpr::mcopy_inner() const { return SetExpr(node_->a); }
std::int64_t SetExpr::mcopy_factor() const { return node_->factor; }
const CopyRule& SetExpr::mcopy_rule() const { return node_->rule; }

bool SetExpr::contains(std::int64_t n) const {
  if (n < 1) return false;
  const Node* nd = node_.get();
  switch (nd->kind) {
    case Kind::Nat:
      return true;
    case Kind::Empty:
      return false;
    case Kind::Finite:
      return std::binary_search(nd->elems.begin(), nd->elems.end(), n);
    case Kind::AP:
      return n % nd->modulus == nd->residue;
    case Kind::Blocks: {
      if (n < 2) return false;  // the point 1 belongs to no block
      // j with base^j < n <= base^{j+1}
      auto it = std::lower_bound(nd->bounds.begin(), nd->bounds.end(), n);
      const std::int64_t j = static_cast<std::int64_t>(it - nd->bounds.begin()) - 1;
      return std::binary_search(nd->on.begin(), nd->on.end(), j % nd->period);
    }
    case Kind::Union:
      return SetExpr(nd->a).contains(n) || SetExpr(nd->b).contains(n);
    case Kind::Inter:
      return SetExpr(nd->a).contains(n) && SetExpr(nd->b).contains(n);
    case Kind::Diff:
      return SetExpr(nd->a).contains(n) && !SetExpr(nd->b).contains(n);
    case Kind::Compl:
      return !SetExpr(nd->a).contains(n);
    case Kind::MCopy: {
      const std::int64_t m = nd->factor;
      const std::int64_t a = (n - 1) / m;
      if (a < 1) return false;
      const std::int64_t t = n - m * a;
      const SetExpr inner(nd->a);
      return inner.contains(a) && nd->rule.slot(a, m) == t;
    }
  }
  return false;
}

std::optional<std::int64_t> SetExpr::closed_count(std::int64_t n) const {
  if (n < 1) return 0;
  const Node* nd = node_.get();
  switch (nd->kind) {
    case Kind::Nat:
      return n;
    case Kind::Empty:
      return 0;
    case Kind::Finite: {
      auto it = std::upper_bound(nd->elems.begin(), nd->elems.end(), n);
      return static_cast<std::int64_t>(it - nd->elems.begin());
    }
    case Kind::AP: {
      if (nd->residue == 0) return n / nd->modulus;
      if (n < nd->residue) return 0;
      return (n - nd->residue) / nd->modulus + 1;
    }
    case Kind::Blocks: {
      std::int64_t total = 0;
      for (std::size_t j = 0; j + 1 < nd->bounds.size() && nd->bounds[j] < n; ++j) {
        if (!std::binary_search(nd->on.begin(), nd->on.end(),
                                static_cast<std::int64_t>(j) % nd->period))
          continue;
        total += std::min(n, nd->bounds[j + 1]) - nd->bounds[j];
      }
      // Tail beyond the precomputed table cannot occur for n in int64 range.
      return total;
    }
    case Kind::Compl: {
      auto inner = SetExpr(nd->a).closed_count(n);
      if (!inner) return std::nullopt;
      return n - *inner;
    }
    case Kind::MCopy: {
      const std::int64_t m = nd->factor;
      if (n <= m) return 0;
      const std::int64_t q = (n - 1) / m;
      const SetExpr inner(nd->a);
      auto below = inner.closed_count(q - 1);
      if (!below) return std::nullopt;
      std::int64_t total = *below;
      if (inner.contains(q) && m * q + nd->rule.slot(q, m) <= n) ++total;
      return total;
    }
    default:
      return std::nullopt;
  }
}

std::optional<std::int64_t> SetExpr::max_element_bound() const {
  const Node* nd = node_.get();
  switch (nd->kind) {
    case Kind::Empty:
      return 0;
    case Kind::Finite:
      return nd->elems.empty() ? 0 : nd->elems.back();
    case Kind::Union: {
      auto x = SetExpr(nd->a).max_element_bound();
      auto y = SetExpr(nd->b).max_element_bound();
      if (x && y) return std::max(*x, *y);
      return std::nullopt;
    }
    case Kind::Inter: {
      auto x = SetExpr(nd->a).max_element_bound();
      auto y = SetExpr(nd->b).max_element_bound();
      if (x && y) return std::min(*x, *y);
      if (x) return x;
      return y;
    }
    case Kind::Diff:
      return SetExpr(nd->a).max_element_bound();
    case Kind::MCopy: {
      auto x = SetExpr(nd->a).max_element_bound();
      if (!x) return std::nullopt;
      if (*x > (kMaxInt - nd->factor) / nd->factor) return std::nullopt;
      return nd->factor * *x + nd->factor;
    }
    default:
      return std::nullopt;
  }
}

}  // namespace densitylab
