#include <doctest.h>

#include <cmath>

#include "densitylab/counting.hpp"
#include "densitylab/density.hpp"
#include "oracles.hpp"

using namespace densitylab;

namespace {

const SetExpr kCounterexample = SetExpr::blocks(2, 2, {0});

bool oracle_counterexample(std::int64_t n) { return oracles::blocks_member(2, 2, {0}, n); }

double closed_low(double alpha) { return 1.0 / (std::exp2(alpha + 1.0) + 1.0); }
double closed_high(double alpha) {
  const double q = std::exp2(alpha + 1.0);
  return q / (q + 1.0);
}

}  // namespace

TEST_CASE("exact_alpha_extremes closed forms") {
  for (double alpha : {0.0, 0.5, 1.0, 2.0, 5.0}) {
    const auto ex = exact_alpha_extremes(kCounterexample, alpha);
    REQUIRE(ex.has_value());
    CHECK(ex->first == doctest::Approx(closed_low(alpha)).epsilon(1e-13));
    CHECK(ex->second == doctest::Approx(closed_high(alpha)).epsilon(1e-13));
    // the two components partition the unit mass
    CHECK(ex->first + ex->second == doctest::Approx(1.0).epsilon(1e-13));
  }
  // alpha = 0 -> (1/3, 2/3); alpha = 1 -> (1/5, 4/5)
  CHECK(exact_alpha_extremes(kCounterexample, 0.0)->first == doctest::Approx(1.0 / 3));
  CHECK(exact_alpha_extremes(kCounterexample, 1.0)->first == doctest::Approx(0.2));
  CHECK(exact_alpha_extremes(kCounterexample, 1.0)->second == doctest::Approx(0.8));

  // cofinite degenerate: all blocks on
  const auto full = exact_alpha_extremes(SetExpr::blocks(2, 2, {0, 1}), 1.3);
  CHECK(full->first == doctest::Approx(1.0));
  CHECK(full->second == doctest::Approx(1.0));

  CHECK_FALSE(exact_alpha_extremes(SetExpr::ap(0, 2), 1.0).has_value());
  CHECK_THROWS_AS(exact_alpha_extremes(kCounterexample, -1.0), DomainError);
}

TEST_CASE("closed forms are monotone in alpha (Rajagopal direction)") {
  double prev_lo = 1.0, prev_hi = 0.0;
  for (double alpha : {-0.9, -0.5, 0.0, 1.0, 2.0, 4.0, 8.0}) {
    const auto ex = exact_alpha_extremes(kCounterexample, alpha);
    CHECK(ex->first <= prev_lo + 1e-12);
    CHECK(ex->second >= prev_hi - 1e-12);
    prev_lo = ex->first;
    prev_hi = ex->second;
  }
}

TEST_CASE("closed forms agree with the numerical route on other block shapes") {
  const std::vector<std::pair<SetExpr, double>> cases = {
      {SetExpr::blocks(3, 3, {0, 2}), 0.7},
      {SetExpr::blocks(2, 3, {1}), 2.0},
      {SetExpr::blocks(3, 2, {1}), 0.0},
      {SetExpr::blocks(2, 4, {0, 3}), 1.0},
  };
  for (const auto& [expr, alpha] : cases) {
    CAPTURE(expr.text());
    const auto exact = exact_alpha_extremes(expr, alpha);
    REQUIRE(exact.has_value());
    const auto est = estimate_alpha_density(expr, alpha, std::int64_t(1) << 20);
    CHECK(est.liminf_est == doctest::Approx(exact->first).epsilon(0.02));
    CHECK(est.limsup_est == doctest::Approx(exact->second).epsilon(0.02));
  }
}

TEST_CASE("exact_density on the decidable fragment") {
  CHECK(*exact_density(SetExpr::ap(0, 3)) == Rational(1, 3));
  CHECK(*exact_density(diff_of(SetExpr::ap(0, 2), SetExpr::finite({2, 4}))) == Rational(1, 2));
  CHECK(*exact_density(SetExpr::nat()) == Rational(1, 1));
  CHECK(*exact_density(SetExpr::empty()) == Rational(0, 1));
  CHECK(*exact_density(SetExpr::finite({3, 5, 100})) == Rational(0, 1));
  CHECK(*exact_density(compl_of(SetExpr::ap(0, 4))) == Rational(3, 4));
  CHECK(*exact_density(inter_of(SetExpr::ap(0, 2), SetExpr::ap(0, 3))) == Rational(1, 6));
  CHECK(*exact_density(union_of(SetExpr::ap(0, 4), SetExpr::ap(1, 4))) == Rational(1, 2));
  CHECK(*exact_density(m_copy(SetExpr::ap(0, 2), 3, CopyRule::seeded(5))) == Rational(1, 6));
  CHECK(*exact_density(m_copy(m_copy(SetExpr::nat(), 2), 2)) == Rational(1, 4));

  CHECK_FALSE(exact_density(kCounterexample).has_value());
  CHECK_FALSE(exact_density(union_of(SetExpr::ap(0, 2), kCounterexample)).has_value());
  CHECK_FALSE(exact_density(union_of(m_copy(SetExpr::nat(), 2), SetExpr::ap(0, 3))).has_value());
}

TEST_CASE("estimate_alpha_density on the counterexample at alpha 0") {
  const auto est = estimate_alpha_density(kCounterexample, 0.0, std::int64_t(1) << 18);
  CHECK(est.liminf_est == doctest::Approx(1.0 / 3).epsilon(0.01));
  CHECK(est.limsup_est == doctest::Approx(2.0 / 3).epsilon(0.01));
  CHECK_FALSE(est.exists);
  CHECK_FALSE(est.value.has_value());
  CHECK_FALSE(est.exact.has_value());
  CHECK(est.checkpoint_count >= 32);
}

TEST_CASE("estimate_alpha_density on periodic sets") {
  const auto est = estimate_alpha_density(SetExpr::ap(0, 2), 0.0, std::int64_t(1) << 16);
  CHECK(est.exists);
  REQUIRE(est.value.has_value());
  CHECK(*est.value == doctest::Approx(0.5).epsilon(0.005));
  REQUIRE(est.exact.has_value());
  CHECK(*est.exact == Rational(1, 2));
  CHECK(est.liminf_est <= est.limsup_est);
  CHECK(est.liminf_est >= 0.0);
  CHECK(est.limsup_est <= 1.0);
}

TEST_CASE("log-density of the counterexample exists and equals 1/2") {
  const std::int64_t horizon = std::int64_t(1) << 20;
  const auto est = estimate_alpha_density(kCounterexample, -1.0, horizon);
  CHECK(est.exists);
  REQUIRE(est.value.has_value());
  CHECK(*est.value == doctest::Approx(0.5).epsilon(0.01));

  // oracle: direct harmonic-weighted summation; each block contributes ~ln 2,
  // read through a period-aligned window so the constants cancel
  const double a_hi = oracles::weighted_sum(oracle_counterexample, -1.0, horizon);
  const double a_lo = oracles::weighted_sum(oracle_counterexample, -1.0, horizon / 16);
  const double n_hi = oracles::weighted_sum([](std::int64_t) { return true; }, -1.0, horizon);
  const double n_lo =
      oracles::weighted_sum([](std::int64_t) { return true; }, -1.0, horizon / 16);
  const double oracle = (a_hi - a_lo) / (n_hi - n_lo);
  CHECK(oracle == doctest::Approx(0.5).epsilon(0.002));
  CHECK(*est.value == doctest::Approx(oracle).epsilon(0.01));
}

TEST_CASE("log-density of periodic sets matches the asymptotic density") {
  for (const auto& e : {SetExpr::ap(0, 2), SetExpr::ap(2, 5), compl_of(SetExpr::ap(0, 3))}) {
    const auto est = estimate_alpha_density(e, -1.0, std::int64_t(1) << 18);
    const double d = exact_density(e)->to_double();
    CHECK(est.exists);
    CHECK(*est.value == doctest::Approx(d).epsilon(0.01));
  }
}

TEST_CASE("estimate input validation") {
  CHECK_THROWS_AS(estimate_alpha_density(SetExpr::nat(), 0.0, 512), InsufficientHorizon);
  CHECK_THROWS_AS(estimate_alpha_density(SetExpr::nat(), 99.0, 1 << 12), DomainError);
}

TEST_CASE("fuchs consistency across the alpha grid") {
  const auto rep = fuchs_consistency_check(SetExpr::ap(0, 2), {-0.5, 0.0, 1.0, 2.0},
                                           std::int64_t(1) << 18);
  CHECK(rep.pass);
  CHECK(rep.rows.size() == 4);

  const auto nat_rep =
      fuchs_consistency_check(SetExpr::nat(), {0.0, 3.0}, std::int64_t(1) << 14);
  CHECK(nat_rep.pass);

  // derived case: d = 1/4 by periodicity
  const auto quarter = fuchs_consistency_check(diff_of(SetExpr::ap(1, 4), SetExpr::finite({1})),
                                               {0.0, 3.0}, std::int64_t(1) << 18);
  CHECK(quarter.pass);

  CHECK_THROWS_AS(fuchs_consistency_check(kCounterexample, {0.0}, 1 << 14), PreconditionFailed);
  CHECK_THROWS_AS(fuchs_consistency_check(SetExpr::nat(), {-1.0}, 1 << 14), DomainError);
}

TEST_CASE("rajagopal monotonicity chains") {
  // closed forms give 1/5 <= 1/3 <= 2/3 <= 4/5 at alpha=0, beta=1
  const auto rep =
      rajagopal_monotonicity_check(kCounterexample, 0.0, 1.0, std::int64_t(1) << 18);
  CHECK(rep.pass);

  const auto degenerate =
      rajagopal_monotonicity_check(kCounterexample, 1.0, 1.0, std::int64_t(1) << 16);
  CHECK(degenerate.pass);

  const auto other = rajagopal_monotonicity_check(SetExpr::blocks(3, 2, {0}), 0.0, 2.0,
                                                  std::int64_t(1) << 18);
  CHECK(other.pass);

  CHECK_THROWS_AS(rajagopal_monotonicity_check(SetExpr::nat(), 2.0, 1.0, 1 << 14), DomainError);
}

TEST_CASE("ggm continuity bounds") {
  const auto rep = ggm_continuity_check(kCounterexample, 0.0, 0.1, std::int64_t(1) << 18);
  CHECK(rep.pass);
  CHECK(rep.rows[0].observed <= 0.2 + 1e-2);

  const auto nat = ggm_continuity_check(SetExpr::nat(), 1.0, 0.5, std::int64_t(1) << 14);
  CHECK(nat.pass);
  CHECK(nat.rows[0].observed == doctest::Approx(0.0).epsilon(1e-9));

  CHECK_THROWS_AS(ggm_continuity_check(SetExpr::nat(), 0.0, 1.5, 1 << 14), DomainError);
}

TEST_CASE("oscillation diagnostic") {
  const std::int64_t h = std::int64_t(1) << 14;
  for (const auto& e : {kCounterexample, SetExpr::ap(0, 2)}) {
    const double d = oscillation_diagnostic(e, 0.0, h);
    CHECK(d <= 2.0 / (h / 2));
  }
  CHECK(oscillation_diagnostic(SetExpr::empty(), 1.0, h) == 0.0);
  CHECK(oscillation_diagnostic(kCounterexample, 1.0, std::int64_t(1) << 16) <= 1e-3);
}

TEST_CASE("complement duality of estimates") {
  for (double alpha : {0.0, 1.0}) {
    const auto e = estimate_alpha_density(kCounterexample, alpha, std::int64_t(1) << 18);
    const auto c = estimate_alpha_density(compl_of(kCounterexample), alpha,
                                          std::int64_t(1) << 18);
    CHECK(c.liminf_est == doctest::Approx(1.0 - e.limsup_est).epsilon(0.02));
    CHECK(c.limsup_est == doctest::Approx(1.0 - e.liminf_est).epsilon(0.02));
  }
}

TEST_CASE("exact density sits inside alpha-0 estimates") {
  for (const auto& e : {SetExpr::ap(2, 7), union_of(SetExpr::ap(0, 4), SetExpr::ap(1, 4))}) {
    const auto est = estimate_density(e, std::int64_t(1) << 16);
    const double d = exact_density(e)->to_double();
    CHECK(d >= est.liminf_est - 0.01);
    CHECK(d <= est.limsup_est + 0.01);
  }
}
