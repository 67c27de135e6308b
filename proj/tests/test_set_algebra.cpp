#include <doctest.h>

#include <cmath>

#include "densitylab/counting.hpp"
#include "densitylab/density.hpp"
#include "densitylab/set_expr.hpp"
#include "densitylab/util.hpp"
#include "oracles.hpp"

using namespace densitylab;

namespace {

const SetExpr kCounterexample = SetExpr::blocks(2, 2, {0});

bool oracle_counterexample(std::int64_t n) { return oracles::blocks_member(2, 2, {0}, n); }

// Small pool of expressions exercising every variant, seeded deterministically.
std::vector<SetExpr> expression_pool() {
  return {
      kCounterexample,
      SetExpr::ap(0, 2),
      SetExpr::ap(2, 5),
      SetExpr::finite({1, 4, 9, 16, 25}),
      SetExpr::blocks(3, 3, {0, 2}),
      union_of(kCounterexample, SetExpr::ap(1, 7)),
      inter_of(kCounterexample, SetExpr::ap(0, 2)),
      diff_of(SetExpr::nat(), kCounterexample),
      compl_of(SetExpr::ap(0, 3)),
      m_copy(SetExpr::ap(0, 2), 3, CopyRule::first()),
      m_copy(kCounterexample, 2, CopyRule::seeded(42)),
  };
}

}  // namespace

TEST_CASE("membership basics") {
  CHECK(SetExpr::ap(0, 2).contains(4));
  CHECK_FALSE(SetExpr::ap(0, 2).contains(5));

  // paper counterexample: 2 in (1,2], 3 in the off block (2,4]
  CHECK(kCounterexample.contains(2));
  CHECK_FALSE(kCounterexample.contains(3));
  CHECK_FALSE(kCounterexample.contains(1));

  CHECK_FALSE(compl_of(SetExpr::nat()).contains(7));
  CHECK(SetExpr::nat().contains(7));
  CHECK_FALSE(SetExpr::empty().contains(1));
}

TEST_CASE("membership matches the block-definition oracle") {
  for (std::int64_t n = 1; n <= 5000; ++n)
    CHECK(kCounterexample.contains(n) == oracle_counterexample(n));
  const SetExpr other = SetExpr::blocks(3, 3, {0, 2});
  for (std::int64_t n = 1; n <= 5000; ++n)
    CHECK(other.contains(n) == oracles::blocks_member(3, 3, {0, 2}, n));
}

TEST_CASE("count closed forms and streaming agree with scans") {
  CHECK(count(SetExpr::ap(0, 3), 10) == 3);
  CHECK(count(SetExpr::nat(), 100) == 100);
  // oracle: direct loop over 1..8 testing the block condition
  CHECK(oracles::count_by_scan(oracle_counterexample, 8) == 5);
  CHECK(count(kCounterexample, 8) == 5);

  for (const auto& e : expression_pool()) {
    for (std::int64_t n : {1, 7, 63, 64, 65, 1000, 4097}) {
      const std::int64_t expected =
          oracles::count_by_scan([&](std::int64_t k) { return e.contains(k); }, n);
      CHECK(count(e, n) == expected);
    }
  }
}

TEST_CASE("count increments equal membership") {
  for (const auto& e : expression_pool()) {
    std::int64_t prev = 0;
    for (std::int64_t n = 1; n <= 800; ++n) {
      const std::int64_t c = count(e, n);
      CHECK(c - prev == (e.contains(n) ? 1 : 0));
      prev = c;
    }
  }
}

TEST_CASE("complement and inclusion-exclusion identities") {
  for (const auto& e : expression_pool()) {
    const SetExpr ce = compl_of(e);
    for (std::int64_t n : {5, 100, 2048}) CHECK(count(ce, n) + count(e, n) == n);
  }
  const SetExpr x = kCounterexample;
  const SetExpr y = SetExpr::ap(0, 3);
  for (std::int64_t n : {10, 100, 1000, 5000})
    CHECK(count(union_of(x, y), n) + count(inter_of(x, y), n) == count(x, n) + count(y, n));
}

TEST_CASE("weighted_count basics and invariants") {
  CHECK(weighted_count(SetExpr::nat(), 0, 5) == doctest::Approx(5.0));
  CHECK(weighted_count(SetExpr::empty(), 2, 1000000) == 0.0);
  CHECK_THROWS_AS(weighted_count(SetExpr::nat(), 41.0, 10), DomainError);
  CHECK_THROWS_AS(weighted_count(SetExpr::nat(), -1.5, 10), DomainError);

  // against the plain-loop oracle
  for (double alpha : {-1.0, -0.5, 1.0, 3.0}) {
    const double expected = oracles::weighted_sum(oracle_counterexample, alpha, 4096);
    CHECK(weighted_count(kCounterexample, alpha, 4096) ==
          doctest::Approx(expected).epsilon(1e-12));
  }

  // monotone in n; additive over disjoint expressions
  const SetExpr evens_in = inter_of(kCounterexample, SetExpr::ap(0, 2));
  const SetExpr odds_in = inter_of(kCounterexample, SetExpr::ap(1, 2));
  for (double alpha : {-1.0, 0.0, 2.0}) {
    double prev = 0.0;
    for (std::int64_t n : {64, 128, 1024, 8192}) {
      const double w = weighted_count(kCounterexample, alpha, n);
      CHECK(w >= prev);
      prev = w;
      const double total = weighted_count(union_of(evens_in, odds_in), alpha, n);
      const double parts =
          weighted_count(evens_in, alpha, n) + weighted_count(odds_in, alpha, n);
      CHECK(total == doctest::Approx(parts).epsilon(1e-12));
    }
  }
}

TEST_CASE("normalizer asymptotics") {
  CHECK(normalizer(0, 1000) == doctest::Approx(1000.0));
  CHECK(normalizer(-1, 1) == doctest::Approx(1.0));

  // n^{alpha+1}/N_alpha(n) -> alpha + 1
  const std::int64_t n = std::int64_t(1) << 20;
  CHECK(normalizer_ratio(1.0, n) == doctest::Approx(2.0).epsilon(0.01));
  CHECK(normalizer_ratio(0.0, n) == doctest::Approx(1.0).epsilon(0.01));

  // At alpha = -1 the limit of ln(n)/N_{-1}(n) is 1; at any desk-scale n the
  // gap is the Euler-Mascheroni constant over ln n, so test the sharp form.
  const double gamma = 0.5772156649015329;
  const double h = normalizer(-1.0, n);
  CHECK(std::fabs(h - (std::log(static_cast<double>(n)) + gamma)) < 1e-5);
  CHECK(normalizer_ratio(-1.0, n) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("counting profile invariants") {
  std::vector<std::int64_t> cps = {16, 64, 256, 1024, 4096};
  for (double alpha : {-1.0, 0.0, 1.5}) {
    const auto p = make_counting_profile(kCounterexample, alpha, cps);
    for (std::size_t j = 0; j < p.checkpoints.size(); ++j) {
      CHECK(p.counts[j] >= (j ? p.counts[j - 1] : 0));
      CHECK(p.counts[j] <= p.checkpoints[j]);
      CHECK(p.weighted[j] >= 0.0);
      CHECK(p.weighted[j] <= p.normalizers[j] * (1 + 1e-12));
      if (alpha == 0.0) CHECK(p.weighted[j] == static_cast<double>(p.counts[j]));
    }
  }
}

TEST_CASE("nth_element") {
  CHECK(nth_element(SetExpr::ap(0, 2), 3) == 6);
  CHECK(nth_element(kCounterexample, 1) == 2);
  CHECK(nth_element(SetExpr::finite({5}), 2) == std::nullopt);
  CHECK(nth_element(SetExpr::empty(), 1) == std::nullopt);

  // first elements of the counterexample set, against the scan oracle
  const auto expected = oracles::first_elements(oracle_counterexample, 6, 64);
  for (std::size_t i = 0; i < expected.size(); ++i)
    CHECK(nth_element(kCounterexample, static_cast<std::int64_t>(i + 1)) == expected[i]);

  // composite path: streaming with a finite structural bound
  const SetExpr capped = inter_of(union_of(kCounterexample, SetExpr::ap(0, 3)),
                                  SetExpr::finite({2, 3, 6, 7}));
  CHECK(nth_element(capped, 4) == 7);
  CHECK(nth_element(capped, 5) == std::nullopt);

  CHECK_THROWS_AS(nth_element(inter_of(kCounterexample, SetExpr::ap(1, 2)), 1000000000, 100000),
                  HorizonExceeded);
}

TEST_CASE("m-copy semantics") {
  // elements {7, 13, 19, ...}: a_i in {2,4,6,...} mapped to 3*a_i + 1
  const SetExpr copy = m_copy(SetExpr::ap(0, 2), 3, CopyRule::first());
  CHECK(copy.contains(7));
  CHECK(copy.contains(13));
  CHECK_FALSE(copy.contains(8));
  CHECK_FALSE(copy.contains(6));
  CHECK(nth_element(copy, 1) == 7);
  CHECK(nth_element(copy, 3) == 19);

  // enumeration oracle: b_i = m*a_i + t for each inner element
  for (const CopyRule& rule :
       {CopyRule::first(), CopyRule::at_offset(2), CopyRule::seeded(11)}) {
    const SetExpr c = m_copy(kCounterexample, 3, rule);
    std::vector<bool> expected(4000, false);
    for (std::int64_t a = 1; a < 1300; ++a) {
      if (!oracle_counterexample(a)) continue;
      const std::int64_t b = 3 * a + rule.slot(a, 3);
      if (b < 4000) expected[static_cast<std::size_t>(b)] = true;
    }
    for (std::int64_t n = 1; n < 3900; ++n) CHECK(c.contains(n) == expected[n]);
  }

  // equal seeds reproduce identical sets
  const SetExpr s1 = m_copy(kCounterexample, 5, CopyRule::seeded(99));
  const SetExpr s2 = m_copy(kCounterexample, 5, CopyRule::seeded(99));
  const SetExpr s3 = m_copy(kCounterexample, 5, CopyRule::seeded(100));
  bool any_diff = false;
  for (std::int64_t n = 1; n <= 3000; ++n) {
    CHECK(s1.contains(n) == s2.contains(n));
    any_diff = any_diff || (s1.contains(n) != s3.contains(n));
  }
  CHECK(any_diff);

  // |count(copy, m*n + m) - count(e, n)| <= 1
  for (const CopyRule& rule : {CopyRule::first(), CopyRule::seeded(3)}) {
    const SetExpr c = m_copy(kCounterexample, 4, rule);
    for (std::int64_t n = 1; n <= 1200; ++n) {
      const std::int64_t diff = count(c, 4 * n + 4) - count(kCounterexample, n);
      CHECK(diff >= -1);
      CHECK(diff <= 1);
    }
  }

  // m = 1 forces b_i = a_i + 1: counts shift by at most 1
  const SetExpr shift = m_copy(kCounterexample, 1, CopyRule::first());
  for (std::int64_t n = 1; n <= 2000; ++n) {
    const std::int64_t d = count(shift, n) - count(kCounterexample, n);
    CHECK(d >= -1);
    CHECK(d <= 1);
  }
}

namespace {

// Hand-rolled generator for random expression trees, splitmix-seeded.
SetExpr random_expr(std::uint64_t& state, int depth) {
  const auto draw = [&state](std::uint64_t bound) {
    state = splitmix64(state);
    return state % bound;
  };
  if (depth == 0 || draw(3) == 0) {
    switch (draw(5)) {
      case 0:
        return SetExpr::nat();
      case 1: {
        const std::int64_t m = 1 + static_cast<std::int64_t>(draw(9));
        return SetExpr::ap(static_cast<std::int64_t>(draw(static_cast<std::uint64_t>(m))), m);
      }
      case 2: {
        std::vector<std::int64_t> elems;
        std::int64_t v = 0;
        const std::uint64_t n = 1 + draw(6);
        for (std::uint64_t i = 0; i < n; ++i) {
          v += 1 + static_cast<std::int64_t>(draw(40));
          elems.push_back(v);
        }
        return SetExpr::finite(std::move(elems));
      }
      case 3: {
        const std::int64_t base = 2 + static_cast<std::int64_t>(draw(2));
        const std::int64_t period = 2 + static_cast<std::int64_t>(draw(3));
        std::vector<std::int64_t> on;
        for (std::int64_t r = 0; r < period; ++r)
          if (draw(2)) on.push_back(r);
        if (on.empty()) on.push_back(static_cast<std::int64_t>(draw(static_cast<std::uint64_t>(period))));
        return SetExpr::blocks(base, period, std::move(on));
      }
      default:
        return SetExpr::empty();
    }
  }
  switch (draw(5)) {
    case 0:
      return union_of(random_expr(state, depth - 1), random_expr(state, depth - 1));
    case 1:
      return inter_of(random_expr(state, depth - 1), random_expr(state, depth - 1));
    case 2:
      return diff_of(random_expr(state, depth - 1), random_expr(state, depth - 1));
    case 3:
      return compl_of(random_expr(state, depth - 1));
    default: {
      const std::int64_t m = 1 + static_cast<std::int64_t>(draw(4));
      const CopyRule rule = draw(2) ? CopyRule::seeded(draw(1000)) : CopyRule::first();
      return m_copy(random_expr(state, depth - 1), m, rule);
    }
  }
}

}  // namespace

TEST_CASE("randomized expression property suite") {
  std::uint64_t state = 0xdecafbadULL;
  for (int trial = 0; trial < 40; ++trial) {
    const SetExpr e = random_expr(state, 3);
    CAPTURE(e.text());

    // count increments track membership
    std::int64_t prev = 0;
    for (std::int64_t n = 1; n <= 400; ++n) {
      const std::int64_t c = count(e, n);
      REQUIRE(c - prev == (e.contains(n) ? 1 : 0));
      prev = c;
    }

    // complement partitions [1, n]
    const SetExpr ce = compl_of(e);
    for (std::int64_t n : {3, 57, 400, 2222}) REQUIRE(count(ce, n) + count(e, n) == n);

    // inclusion-exclusion against a fresh partner
    const SetExpr f = random_expr(state, 2);
    for (std::int64_t n : {40, 700}) {
      REQUIRE(count(union_of(e, f), n) + count(inter_of(e, f), n) ==
              count(e, n) + count(f, n));
    }

    // m-copy counting bound
    const SetExpr copy = m_copy(e, 3, CopyRule::first());
    for (std::int64_t n : {10, 100, 333}) {
      const std::int64_t diff = count(copy, 3 * n + 3) - count(e, n);
      REQUIRE(diff >= -1);
      REQUIRE(diff <= 1);
    }
  }
}

TEST_CASE("m-copy density scales by 1/m") {
  const SetExpr copy = m_copy(SetExpr::ap(0, 2), 3, CopyRule::first());
  CHECK(*exact_density(copy) == Rational(1, 6));
  const auto est = estimate_density(copy, std::int64_t(1) << 18);
  CHECK(est.exists);
  CHECK(*est.value == doctest::Approx(1.0 / 6).epsilon(0.06));
}

TEST_CASE("shared caches are safe under concurrent access") {
  const SetExpr e = union_of(kCounterexample, m_copy(SetExpr::ap(1, 3), 2, CopyRule::seeded(4)));
  // serial reference values
  std::vector<std::int64_t> ns;
  std::vector<std::int64_t> expected_counts;
  std::vector<double> expected_weighted;
  for (std::int64_t n = 500; n <= 40000; n += 1777) {
    ns.push_back(n);
    expected_counts.push_back(count(e, n));
    expected_weighted.push_back(weighted_count(e, 1.5, n));
  }
  // hammer the same queries from many tasks; results must be identical
  std::vector<std::uint8_t> ok(64, 0);
  parallel_for(64, [&](std::int64_t task) {
    bool good = true;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      good = good && count(e, ns[i]) == expected_counts[i];
      good = good && weighted_count(e, 1.5, ns[i]) == expected_weighted[i];
    }
    const auto p = cached_counting_profile(e, 1.5, ns);
    good = good && p->weighted.size() == ns.size();
    ok[static_cast<std::size_t>(task)] = good;
  });
  for (auto flag : ok) CHECK(flag == 1);
}

TEST_CASE("factory invariants") {
  CHECK_THROWS_AS(SetExpr::ap(5, 3), DomainError);
  CHECK_THROWS_AS(SetExpr::ap(0, 0), DomainError);
  CHECK_THROWS_AS(SetExpr::finite({3, 2}), DomainError);
  CHECK_THROWS_AS(SetExpr::finite({0, 2}), DomainError);
  CHECK_THROWS_AS(SetExpr::blocks(1, 2, {0}), DomainError);
  CHECK_THROWS_AS(SetExpr::blocks(2, 2, {2}), DomainError);
  CHECK_THROWS_AS(m_copy(SetExpr::nat(), 0, CopyRule::first()), DomainError);
  CHECK_THROWS_AS(m_copy(SetExpr::nat(), 2, CopyRule::at_offset(3)), DomainError);
}
