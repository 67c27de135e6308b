#include "densitylab/counting.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>

#include "densitylab/util.hpp"

namespace densitylab {

void require_alpha(double alpha) {
  if (!(alpha >= kAlphaMin && alpha <= kAlphaMax))
    throw DomainError("alpha outside supported range [-1, 40]");
}

namespace {

// Stride-spaced prefix counts per expression, extended on demand.
class CountMemo {
 public:
  static constexpr std::int64_t kStride = 1 << 16;

  std::int64_t count(const SetExpr& expr, std::int64_t n) {
    Entry* e = entry_for(expr);
    std::lock_guard<std::mutex> lock(e->fill);
    // counts[k] = |expr ∩ [1, k*kStride]|
    const std::int64_t want = n / kStride;
    while (static_cast<std::int64_t>(e->counts.size()) - 1 < want) {
      const std::int64_t k = static_cast<std::int64_t>(e->counts.size());
      std::int64_t c = e->counts.back();
      for (std::int64_t v = (k - 1) * kStride + 1; v <= k * kStride; ++v)
        c += expr.contains(v) ? 1 : 0;
      e->counts.push_back(c);
    }
    std::int64_t c = e->counts[want];
    for (std::int64_t v = want * kStride + 1; v <= n; ++v)
      c += expr.contains(v) ? 1 : 0;
    return c;
  }

 private:
  struct Entry {
    std::mutex fill;
    std::vector<std::int64_t> counts{0};
  };

  Entry* entry_for(const SetExpr& expr) {
    std::lock_guard<std::mutex> lock(map_mutex_);
    auto& slot = entries_[expr.text()];
    if (!slot) slot = std::make_unique<Entry>();
    return slot.get();
  }

  std::mutex map_mutex_;
  std::map<std::string, std::unique_ptr<Entry>> entries_;
};

CountMemo& count_memo() {
  static CountMemo memo;
  return memo;
}

}  // namespace

std::int64_t count(const SetExpr& expr, std::int64_t n) {
  if (n < 1) return 0;
  if (auto closed = expr.closed_count(n)) return *closed;
  return count_memo().count(expr, n);
}

CountingProfile make_counting_profile(const SetExpr& expr, double alpha,
                                      std::vector<std::int64_t> checkpoints) {
  require_alpha(alpha);
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
  if (!checkpoints.empty() && checkpoints.front() < 1)
    throw DomainError("checkpoints must be >= 1");

  CountingProfile p;
  p.expr = expr;
  p.alpha = alpha;
  p.checkpoints = std::move(checkpoints);
  const std::size_t m = p.checkpoints.size();
  p.counts.resize(m);
  p.weighted.resize(m);
  p.normalizers.resize(m);
  if (m == 0) return p;

  if (alpha == 0.0) {
    // Exact integer path; weighted == counts by definition.
    const bool closed = expr.closed_count(1).has_value();
    if (closed) {
      for (std::size_t j = 0; j < m; ++j) p.counts[j] = *expr.closed_count(p.checkpoints[j]);
    } else {
      std::int64_t c = 0;
      std::size_t j = 0;
      for (std::int64_t k = 1; k <= p.checkpoints.back(); ++k) {
        c += expr.contains(k) ? 1 : 0;
        while (j < m && p.checkpoints[j] == k) {
          p.counts[j] = c;
          ++j;
        }
      }
    }
    for (std::size_t j = 0; j < m; ++j) {
      p.weighted[j] = static_cast<double>(p.counts[j]);
      p.normalizers[j] = static_cast<double>(p.checkpoints[j]);
    }
    return p;
  }

  CompensatedSum acc;
  CompensatedSum norm;
  std::int64_t c = 0;
  std::size_t j = 0;
  for (std::int64_t k = 1; k <= p.checkpoints.back(); ++k) {
    const double w = std::pow(static_cast<double>(k), alpha);
    norm.add(w);
    if (expr.contains(k)) {
      acc.add(w);
      ++c;
    }
    while (j < m && p.checkpoints[j] == k) {
      p.counts[j] = c;
      p.weighted[j] = acc.value();
      p.normalizers[j] = norm.value();
      ++j;
    }
  }
  return p;
}

namespace {

struct ProfileKey {
  std::string text;
  std::uint64_t alpha_bits;
  std::uint64_t cp_hash;
  std::size_t cp_size;

  bool operator<(const ProfileKey& o) const {
    if (text != o.text) return text < o.text;
    if (alpha_bits != o.alpha_bits) return alpha_bits < o.alpha_bits;
    if (cp_hash != o.cp_hash) return cp_hash < o.cp_hash;
    return cp_size < o.cp_size;
  }
};

std::uint64_t hash_checkpoints(const std::vector<std::int64_t>& cps) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (std::int64_t v : cps) h = splitmix64(h ^ static_cast<std::uint64_t>(v));
  return h;
}

}  // namespace

std::shared_ptr<const CountingProfile> cached_counting_profile(
    const SetExpr& expr, double alpha, std::vector<std::int64_t> checkpoints) {
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());

  static std::mutex mutex;
  static std::map<ProfileKey, std::shared_ptr<const CountingProfile>> cache;

  std::uint64_t ab;
  static_assert(sizeof(double) == sizeof(std::uint64_t));
  std::memcpy(&ab, &alpha, sizeof ab);
  ProfileKey key{expr.text(), ab, hash_checkpoints(checkpoints), checkpoints.size()};

  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto filled = std::make_shared<const CountingProfile>(
      make_counting_profile(expr, alpha, std::move(checkpoints)));
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (cache.size() > 512) cache.clear();
    cache.emplace(key, filled);
  }
  return filled;
}

double weighted_count(const SetExpr& expr, double alpha, std::int64_t n) {
  require_alpha(alpha);
  if (n < 1) throw DomainError("weighted_count requires n >= 1");
  if (alpha == 0.0) return static_cast<double>(count(expr, n));
  auto p = cached_counting_profile(expr, alpha, {n});
  return p->weighted.back();
}

double normalizer(double alpha, std::int64_t n) {
  return weighted_count(SetExpr::nat(), alpha, n);
}

double normalizer_ratio(double alpha, std::int64_t n) {
  require_alpha(alpha);
  if (n < 1) throw DomainError("normalizer_ratio requires n >= 1");
  const double nn = normalizer(alpha, n);
  if (alpha == -1.0) return std::log(static_cast<double>(n)) / nn;
  return std::pow(static_cast<double>(n), alpha + 1.0) / nn;
}

namespace {

// Closed-form i-th element for primitive shapes.
std::optional<std::int64_t> nth_closed(const SetExpr& e, std::int64_t i) {
  switch (e.kind()) {
    case SetExpr::Kind::Nat:
      return i;
    case SetExpr::Kind::Empty:
      return 0;  // caller turns 0 into "absent"
    case SetExpr::Kind::Finite: {
      const auto& v = e.finite_elements();
      if (i > static_cast<std::int64_t>(v.size())) return 0;
      return v[static_cast<std::size_t>(i - 1)];
    }
    case SetExpr::Kind::AP: {
      const std::int64_t r = e.ap_residue(), m = e.ap_modulus();
      return r == 0 ? i * m : r + (i - 1) * m;
    }
    case SetExpr::Kind::Blocks: {
      const auto& bounds = e.blocks_boundaries();
      std::int64_t seen = 0;
      for (std::size_t j = 0; j + 1 < bounds.size(); ++j) {
        if (!std::binary_search(e.blocks_on().begin(), e.blocks_on().end(),
                                static_cast<std::int64_t>(j) % e.blocks_period()))
          continue;
        const std::int64_t size = bounds[j + 1] - bounds[j];
        if (seen + size >= i) return bounds[j] + (i - seen);
        seen += size;
      }
      return std::nullopt;  // beyond the representable boundary table
    }
    case SetExpr::Kind::MCopy: {
      auto a = nth_closed(e.mcopy_inner(), i);
      if (!a) return std::nullopt;
      if (*a == 0) return 0;
      const std::int64_t m = e.mcopy_factor();
      return m * *a + e.mcopy_rule().slot(*a, m);
    }
    default:
      return std::nullopt;
  }
}

}  // namespace

std::optional<std::int64_t> nth_element(const SetExpr& expr, std::int64_t i,
                                        std::int64_t search_cap) {
  if (i < 1) throw DomainError("nth_element index must be >= 1");
  if (auto closed = nth_closed(expr, i)) {
    if (*closed == 0) return std::nullopt;
    return closed;
  }
  const auto bound = expr.max_element_bound();
  const std::int64_t limit = bound ? std::min(*bound, search_cap) : search_cap;
  std::int64_t seen = 0;
  for (std::int64_t n = 1; n <= limit; ++n) {
    if (expr.contains(n) && ++seen == i) return n;
  }
  if (bound && *bound <= search_cap) return std::nullopt;
  throw HorizonExceeded("nth_element scan passed cap " + std::to_string(search_cap) +
                        " with only " + std::to_string(seen) + " elements found");
}

}  // namespace densitylab
