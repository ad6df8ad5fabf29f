#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cgm/analysis.hpp"
#include "cgm/lpp.hpp"
#include "cgm/stationary.hpp"

using namespace cgm;

TEST_CASE("ballot formula values") {
  CHECK(rw_first_passage_exact({2, 1}, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(rw_first_passage_exact({2, 1}, 3) == doctest::Approx(16.0 / 243.0).epsilon(1e-12));
  CHECK_THROWS_AS(rw_first_passage_exact({1, 2}, 1), std::invalid_argument);
  // large n stays finite in log space
  CHECK(rw_first_passage_exact({2, 1}, 5000) > 0.0);
  CHECK(rw_first_passage_exact({2, 1}, 5000) < 1e-200);
}

TEST_CASE("first passage probabilities sum to one under negative drift") {
  CHECK(rw_ballot_sum({2, 1}) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rw_ballot_sum({1, 0.5}) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rw_ballot_sum({0.7, 0.3}) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("ballot formula against direct simulation") {
  const RwParams grid[] = {{2, 1}, {1, 0.5}, {0.7, 0.3}};
  for (const RwParams& p : grid) {
    for (long long n : {1, 2, 3, 5, 8}) {
      const double exact = rw_first_passage_exact(p, n);
      const long long reps = 200000;
      const Seed seed = Seed{7, 101}.derived(static_cast<std::uint64_t>(n))
                            .derived(static_cast<std::uint64_t>(p.alpha * 1000));
      const double mc = rw_first_passage_mc(p, n, reps, seed, 2);
      const double se = std::sqrt(exact * (1 - exact) / static_cast<double>(reps));
      CHECK(std::abs(mc - exact) < 4 * se);
    }
  }
}

TEST_CASE("never-negative limit") {
  CHECK(rw_never_negative_limit({2, 1}) == doctest::Approx(0.5));
  CHECK(rw_never_negative_limit({1.0, 0.999}) == doctest::Approx(0.001).epsilon(1e-9));
  const double mc = rw_never_negative_mc({2, 1}, 10000, 100000, Seed{8, 102}, 2);
  // horizon bias is positive and bounded by the residual tail, tiny at 1e4
  CHECK(mc >= 0.5 - 4 * std::sqrt(0.25 / 100000.0));
  CHECK(mc <= 0.5 + 4 * std::sqrt(0.25 / 100000.0) + 1e-6);
}

TEST_CASE("stay-positive and stay-negative estimates and bound shapes") {
  StayBoundCheck c1 = rw_stay_bound_check({2, 1}, 1, 10000, Seed{1, 100}, 2);
  CHECK(std::abs(c1.stay_positive.mean - 1.0 / 3.0) < 0.005);
  CHECK(c1.never_negative == doctest::Approx(0.5));

  StayBoundCheck c16 = rw_stay_bound_check({2, 1}, 16, 100000, Seed{2, 100}, 2);
  StayBoundCheck c64 = rw_stay_bound_check({2, 1}, 64, 100000, Seed{2, 100}, 2);
  CHECK(c64.stay_positive.mean < c16.stay_positive.mean);  // nested events
  CHECK(c64.stay_negative.mean <= c16.stay_negative.mean);
  // stay-negative converges to the never-negative limit from above
  CHECK(c64.stay_negative.mean >= c64.never_negative - 4 * c64.stay_negative.se);

  // the geometric decay rate: the exact series slope over a deep grid matches
  // ln(1 - q^2) within 20%; the n^{-3/2} prefactor rules the shallow grid out
  auto exact_stay_positive = [](double a, double b, long long n) {
    double s = 0;
    for (long long k = n + 1; k < 4000; ++k) s += rw_first_passage_exact({a, b}, k);
    return s;
  };
  std::vector<double> xs, ys;
  for (long long n : {48, 64, 80}) {
    xs.push_back(static_cast<double>(n));
    ys.push_back(std::log(exact_stay_positive(2, 1, n)));
  }
  const TailFit fit = fit_line(xs, ys);
  const double rate = std::log(1.0 - std::pow(1.0 / 3.0, 2));
  CHECK(std::abs(fit.slope - rate) < 0.2 * std::abs(rate));
  // and the MC estimator agrees with the exact series where counts are healthy
  for (long long n : {4, 8}) {
    const double exact = exact_stay_positive(2, 1, n);
    StayBoundCheck c = rw_stay_bound_check({2, 1}, n, 400000, Seed{3, 100}, 2);
    CHECK(std::abs(c.stay_positive.mean - exact) < 4 * c.stay_positive.se);
  }
}

TEST_CASE("variance identity at the closed-form point") {
  VarianceCheckResult r = variance_formula_check(0.5, 1, 1, 300000, Seed{11, 103}, 2);
  // both sides equal 6: Var[max of two Exp(1/2)] + 1 and -4 + 4 + 4 E[I; I>J]
  CHECK(std::abs(r.lhs - 6.0) < 4 * r.lhs_se);
  CHECK(std::abs(r.rhs - 6.0) < 4 * r.rhs_se);
  CHECK(std::abs(r.lhs - r.rhs) < 4 * (r.lhs_se + r.rhs_se));
  CHECK(std::abs(r.mean_g - 4.0) < 0.05);  // E[max(I,J)] + E[omega] = 3 + 1
  CHECK_THROWS_AS(variance_formula_check(1.5, 1, 1, 100, Seed{1, 1}, 1), std::invalid_argument);
}

TEST_CASE("variance identity off the closed-form point") {
  VarianceCheckResult r = variance_formula_check(0.4, 6, 9, 200000, Seed{12, 104}, 2);
  CHECK(std::abs(r.lhs - r.rhs) < 4 * (r.lhs_se + r.rhs_se));
  // J increment at the target is Exp(rho)
  const McSummary j = summarize(r.j_increment);
  CHECK(std::abs(j.mean - 1.0 / 0.4) < 4 * j.se);
}

TEST_CASE("exit exponent experiment at reduced scale") {
  ExitExponentResult r =
      exit_exponent_experiment(0.5, {16, 32, 64}, 500, Seed{13, 105}, 2, {1, 2}, 32);
  CHECK(r.fit.slope > 0.35);
  CHECK(r.fit.slope < 1.0);
  REQUIRE(r.tail_p.size() == 2);
  CHECK(r.tail_p[0] >= r.tail_p[1]);  // nested events
  for (double p : r.tail_p) {
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
  }
  CHECK_THROWS_AS(exit_exponent_experiment(0.5, {16, 32}, 10, Seed{1, 1}, 1, {1}, 16),
                  std::invalid_argument);
}

TEST_CASE("no-axis divergence: exact small cases and the monotone trend") {
  SUBCASE("closed forms at the smallest targets") {
    for (int rep = 0; rep < 50; ++rep) {
      WeightField f{{static_cast<std::uint64_t>(rep), 106}};
      CHECK(lpp(f, {0, 0}, {0, 1}) - lpp(f, {0, 1}, {0, 1}) ==
            doctest::Approx(f({0, 0})).epsilon(1e-12));
      const double d11 = lpp(f, {0, 0}, {1, 1}) - lpp(f, {0, 1}, {1, 1});
      CHECK(d11 == doctest::Approx(f({0, 0}) + std::max(f({1, 0}), f({0, 1})) - f({0, 1}))
                       .epsilon(1e-12));
    }
  }
  SUBCASE("medians increase along the direction list") {
    NoAxisResult r =
        no_axis_divergence({0.6, 0.75, 0.9}, {16, 32, 64, 128}, 300, Seed{14, 107}, 2);
    REQUIRE(r.medians.size() == 3);
    CHECK(r.medians[0] < r.medians[1]);
    CHECK(r.medians[1] < r.medians[2]);
  }
  CHECK_THROWS_AS(no_axis_divergence({0.9, 0.6}, {16}, 10, Seed{1, 1}, 1),
                  std::invalid_argument);
}

TEST_CASE("shape function") {
  CHECK(shape_function(1, 0) == doctest::Approx(1.0));
  CHECK(shape_function(0.25, 0.25) == doctest::Approx(1.0));
  CHECK_THROWS_AS(shape_function(-0.1, 1), std::invalid_argument);
  // characteristic consistency: xi1/(1-rho) + xi2/rho = g(xi) at rho(xi)
  for (int k = 1; k < 20; ++k) {
    const double xi1 = k / 20.0;
    const double rho = xi_to_rho(xi1);
    const double lhs = xi1 / (1 - rho) + (1 - xi1) / rho;
    CHECK(lhs == doctest::Approx(shape_function(xi1, 1 - xi1)).epsilon(1e-12));
  }
  // strict inequality off the characteristic density
  const double eta1 = 0.9, lambda = 0.3;
  CHECK(lambda > xi_to_rho(eta1));
  const double lhs = eta1 / (1 - lambda) + (1 - eta1) / lambda;
  CHECK(lhs - shape_function(eta1, 1 - eta1) > 0.0);
}

TEST_CASE("least squares fit recovers exact lines") {
  TailFit f = fit_line({1, 2, 3, 4}, {3, 5, 7, 9});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r_squared == doctest::Approx(1.0));
  // log-log: y = 4 x^{-3}
  std::vector<double> xs{1, 2, 4, 8}, ys;
  for (double x : xs) ys.push_back(4.0 * std::pow(x, -3.0));
  TailFit g = fit_loglog(xs, ys);
  CHECK(g.slope == doctest::Approx(-3.0).epsilon(1e-9));
  // zero estimates are dropped rather than mapped to -inf
  TailFit h = fit_loglog({1, 2, 4, 8}, {1.0, 0.125, 0.0, 0.0});
  CHECK(h.x.size() == 2);
}

TEST_CASE("confidence intervals cover the analytic mean in repeated trials") {
  int cover = 0;
  for (int t = 0; t < 100; ++t) {
    Seed s = Seed{1, 200}.replica(static_cast<std::uint64_t>(t));
    std::vector<double> xs(1000);
    for (int i = 0; i < 1000; ++i) xs[static_cast<std::size_t>(i)] = exp_at(s, i, 1.0);
    const McSummary m = summarize(xs);
    if (m.ci_lo <= 1.0 && 1.0 <= m.ci_hi) ++cover;
  }
  CHECK(cover >= 95);
}

TEST_CASE("W event baseline at N=32 is a nondegenerate probability") {
  WEventResult r = w_event_probability(32, 0.25, 1000, Seed{15, 108}, 2);
  CHECK(r.p.mean > 0.0);
  CHECK(r.p.mean < 1.0);
  CHECK(r.p.se > 0.0);
}

TEST_CASE("cylinder experiment: misses shrink as the band widens") {
  CylinderResult r = cylinder_experiment(0.5, 32, 8, {0.25, 0.5, 1.0}, 2000, Seed{16, 109}, 2);
  REQUIRE(r.p_miss.size() == 3);
  CHECK(r.p_miss[0].mean >= r.p_miss[1].mean);
  CHECK(r.p_miss[1].mean >= r.p_miss[2].mean);
  CHECK(r.p_miss[0].mean > 0.0);
}

TEST_CASE("block connection estimates are proper probabilities") {
  BlockConnectionResult r = block_connection_probability(16, 0.25, 1.0, 1.0, 2.0, 1000,
                                                         Seed{17, 110}, 2);
  CHECK(r.opposite.mean >= 0.0);
  CHECK(r.opposite.mean <= 1.0);
  CHECK(r.far.mean >= 0.0);
  CHECK(r.far.mean <= 1.0);
  CHECK(r.opposite.ci_hi - r.opposite.ci_lo < 0.1);
  CHECK(r.far.ci_hi - r.far.ci_lo < 0.1);
  CHECK_THROWS_AS(block_connection_probability(16, 0.25, 1.0, 1.0, 2.0, 50, Seed{1, 1}, 1),
                  std::invalid_argument);
}

TEST_CASE("block connection probability falls as the scale doubles") {
  std::vector<McSummary> opp;
  for (Coord N : {32, 64, 128}) {
    BlockConnectionResult r = block_connection_probability(
        N, 0.25, 1.0, 1.0, std::pow(static_cast<double>(N), 1.0 / 8.0), 400, Seed{21, 300}, 2);
    opp.push_back(r.opposite);
  }
  for (std::size_t k = 1; k < opp.size(); ++k) {
    const bool decreasing = opp[k].mean <= opp[k - 1].mean;
    const bool overlap = opp[k].ci_lo <= opp[k - 1].ci_hi && opp[k - 1].ci_lo <= opp[k].ci_hi;
    CHECK((decreasing || overlap));
  }
}

TEST_CASE("sandwich experiment counts qualifying instances and violations") {
  SandwichExperimentResult r = sandwich_experiment(32, 0.25, 1.2, 1.0, 200, Seed{18, 111}, 2);
  CHECK(r.qualifying + r.skipped == 200);
  CHECK(r.qualifying > 0);
  CHECK(r.violations == 0);
  CHECK(r.qualifying_ne > 0);
  CHECK(r.violations_ne == 0);
}
