#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cgm/lpp.hpp"
#include "cgm/rng.hpp"
#include "cgm/stationary.hpp"

using namespace cgm;

namespace {

double correlation(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

}  // namespace

TEST_CASE("characteristic direction maps") {
  CHECK(rho_to_xi1(0.5) == doctest::Approx(0.5));
  CHECK(rho_to_xi1(1.0 / 3.0) == doctest::Approx(0.8));
  CHECK(xi_to_rho(0.5) == doctest::Approx(0.5));
  for (int k = 0; k < 100; ++k) {
    const double rho = uniform01_from_hash(hash_at(Seed{7, 7}, (Coord)k));
    CHECK(xi_to_rho(rho_to_xi1(rho)) == doctest::Approx(rho).epsilon(1e-12));
  }
  CHECK_THROWS_AS(rho_to_xi1(0.0), std::invalid_argument);
  CHECK_THROWS_AS(xi_to_rho(1.0), std::invalid_argument);
}

TEST_CASE("a-factor values and bounds") {
  CHECK(a_factor(0.5) == doctest::Approx(2.0));
  CHECK(a_factor(1e-9) == doctest::Approx(1.0).epsilon(1e-6));
  for (int k = 1; k < 100; ++k) {
    const double rho = k / 100.0;
    const double a = a_factor(rho);
    CHECK(a >= 1.0);
    CHECK(a <= 2.0);
  }
}

TEST_CASE("boundary point density") {
  CHECK(boundary_point_to_rho({-37, -37}) == doctest::Approx(0.5));
  CHECK(boundary_point_to_rho({-4, -1}) == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(boundary_point_to_rho({0, -1}), std::invalid_argument);
  // characteristic direction of rho(o) is parallel to -o
  for (Coord a = 1; a <= 7; ++a)
    for (Coord b = 1; b <= 7; ++b) {
      const Point o{-a, -b};
      const double xi1 = rho_to_xi1(boundary_point_to_rho(o));
      CHECK(xi1 == doctest::Approx(static_cast<double>(a) / static_cast<double>(a + b))
                       .epsilon(1e-12));
    }
}

TEST_CASE("boundary sums and the one-step recursion") {
  WeightField f{{3, 1}};
  const Point u{-2, 5};
  StationaryBoundary b = make_independent_boundary(u, 0.4, 6, 6, Seed{9, 2});
  CHECK(stationary_lpp(f, b, u) == doctest::Approx(0.0));
  CHECK(stationary_lpp(f, b, u + 3 * e1) == doctest::Approx(b.I[0] + b.I[1] + b.I[2]));
  CHECK(stationary_lpp(f, b, u + 2 * e2) == doctest::Approx(b.J[0] + b.J[1]));
  CHECK(stationary_lpp(f, b, u + e1 + e2) ==
        doctest::Approx(std::max(b.I[0], b.J[0]) + f(u + e1 + e2)));
  CHECK_THROWS_AS(stationary_lpp(f, b, u - e1), std::invalid_argument);
}

TEST_CASE("Burke min identity at every bulk vertex") {
  for (int rep = 0; rep < 200; ++rep) {
    WeightField f{{static_cast<std::uint64_t>(rep), 31}};
    StationaryBoundary b =
        make_independent_boundary({0, 0}, 0.3 + 0.4 * (rep % 5) / 4.0, 8, 8, Seed{11, (std::uint64_t)rep});
    ValueTable t = stationary_table(f, b, {8, 8});
    for (Coord i = 1; i <= 8; ++i)
      for (Coord j = 1; j <= 8; ++j) {
        const double inc_i = t.at_point({i, j}) - t.at_point({i - 1, j});
        const double inc_j = t.at_point({i, j}) - t.at_point({i, j - 1});
        const double scale = std::max(1.0, std::abs(t.at_point({i, j})));
        CHECK(std::abs(std::min(inc_i, inc_j) - f({i, j})) <= 1e-12 * scale);
      }
  }
}

TEST_CASE("increment marginals and independence at a bulk vertex") {
  const int n = 10000;
  std::vector<double> i_at(n), j_at(n), i_right(n), j_up(n);
  const Point v{3, 2};
  const std::vector<Point> pts{v, v + e1, v + e2};
  for (int rep = 0; rep < n; ++rep) {
    const Seed s{static_cast<std::uint64_t>(rep), 32};
    WeightField f{s.derived(streams::bulk)};
    StationaryBoundary b = make_independent_boundary({0, 0}, 0.5, 5, 4, s);
    IncrementPair ip = increments_on_path(f, b, pts);
    i_at[rep] = ip.I[0];
    j_at[rep] = ip.J[0];
    i_right[rep] = ip.I[1];
    j_up[rep] = ip.J[2];
  }
  auto mean = [](const std::vector<double>& x) {
    double m = 0;
    for (double t : x) m += t;
    return m / static_cast<double>(x.size());
  };
  CHECK(std::abs(mean(j_at) - 2.0) < 0.06);
  CHECK(std::abs(mean(i_at) - 2.0) < 0.06);
  // I at v+e1 and J at v+e2 are independent (down-right path increments)
  CHECK(std::abs(correlation(i_right, j_up)) < 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("exit point at the minimal target") {
  int positive = 0;
  const int n = 10000;
  for (int rep = 0; rep < n; ++rep) {
    const Seed s{static_cast<std::uint64_t>(rep), 33};
    WeightField f{s.derived(streams::bulk)};
    StationaryBoundary b = make_independent_boundary({0, 0}, 0.5, 1, 1, s);
    const ExitResult ex = exit_point(f, b, {1, 1});
    CHECK((ex.z == 1 || ex.z == -1));
    CHECK(ex.z == (b.I[0] > b.J[0] ? 1 : -1));
    if (ex.z >= 1) ++positive;
  }
  CHECK(std::abs(positive / static_cast<double>(n) - 0.5) < 0.016);
}

TEST_CASE("exit sign equals the first step of the stationary geodesic") {
  for (int rep = 0; rep < 1000; ++rep) {
    const Seed s{static_cast<std::uint64_t>(rep), 34};
    WeightField f{s.derived(streams::bulk)};
    StationaryBoundary b = make_independent_boundary({0, 0}, 0.4, 7, 6, s);
    const ExitResult ex = exit_point(f, b, {7, 6});
    ValueTable t = stationary_table(f, b, {7, 6});
    UpRightPath path = backtrack_upright(t);
    CHECK((ex.z > 0) == (path.pts[1] == Point{1, 0}));
    CHECK(ex.value == doctest::Approx(t.at_point({7, 6})).epsilon(1e-12));
    CHECK_THROWS_AS(exit_point(f, b, Point{3, 0}), std::invalid_argument);
  }
}

TEST_CASE("reversed stationary boundary sums and reflection equivalence") {
  WeightField f{{8, 35}};
  const Point ohat{0, 0};
  ReversedBoundary rb = make_independent_reversed_boundary(ohat, 0.45, 6, 6, Seed{10, 5});
  CHECK(reversed_stationary_lpp(f, rb, ohat - 2 * e2) == doctest::Approx(rb.Jhat[0] + rb.Jhat[1]));
  CHECK(reversed_stationary_lpp(f, rb, ohat - 3 * e1) ==
        doctest::Approx(rb.Ihat[0] + rb.Ihat[1] + rb.Ihat[2]));

  // mirror: reversed process at 0 equals forward process on the negated field
  for (int rep = 0; rep < 100; ++rep) {
    const Seed s{static_cast<std::uint64_t>(rep), 36};
    WeightField g{s.derived(streams::bulk)};
    ReversedBoundary r = make_independent_reversed_boundary({0, 0}, 0.35, 6, 5, s);
    StationaryBoundary fw{{0, 0}, 0.35, BoundaryMode::independent, r.Ihat, r.Jhat, {}, {}};
    fw.build_prefixes();
    WeightField neg = reflect(g);
    const Point x{-6, -5};
    CHECK(reversed_stationary_lpp(g, r, x) ==
          doctest::Approx(stationary_lpp(neg, fw, -x)).epsilon(1e-12));
    const ExitResult a = reversed_boundary_exit(g, r, x);
    const ExitResult b = exit_point(neg, fw, -x);
    CHECK(a.z == b.z);
  }
}

TEST_CASE("induced boundary process: corner case, decomposition, shift") {
  SUBCASE("v = u removes exactly the corner weight") {
    for (int rep = 0; rep < 50; ++rep) {
      WeightField f{{static_cast<std::uint64_t>(rep), 37}};
      const Point u{1, 2}, y{6, 7};
      CHECK(induced_boundary_lpp(f, u, u, y) ==
            doctest::Approx(lpp(f, u, y) - f(u)).epsilon(1e-12));
    }
  }
  SUBCASE("decomposition identity") {
    for (int rep = 0; rep < 1000; ++rep) {
      WeightField f{{static_cast<std::uint64_t>(rep), 38}};
      const Point u{0, 0};
      const Point v{1 + rep % 4, 1 + (rep / 4) % 4};
      const Point y{v.x1 + 4, v.x2 + 5};
      const double whole = lpp(f, u, y);
      const double split = lpp(f, u, v) + induced_boundary_lpp(f, u, v, y);
      CHECK(whole == doctest::Approx(split).epsilon(1e-9));
    }
  }
  SUBCASE("shift relation between exit points") {
    int checked = 0;
    for (int rep = 0; rep < 1000; ++rep) {
      const Seed s{static_cast<std::uint64_t>(rep), 39};
      WeightField f{s.derived(streams::bulk)};
      const Point u{0, 0}, p{9, 6};
      // plain-LPP exit point: boundary weights are the omega weights themselves
      std::vector<double> ip{0}, jp{0};
      for (Coord k = 1; k <= p.x1; ++k) ip.push_back(ip.back() + f({k, 0}));
      for (Coord l = 1; l <= p.x2; ++l) jp.push_back(jp.back() + f({0, l}));
      const long long z = boundary_exit(f, u, ip, jp, p).z;
      for (Coord k = 1; k <= 3; ++k) {
        if (z > k) {
          const long long zk = induced_exit(f, u, u + k * e1, p).z;
          CHECK(zk == z - k);
          ++checked;
        }
      }
    }
    CHECK(checked > 100);
  }
}

TEST_CASE("scaled-from-bulk boundary dominates the base-normalized bulk process") {
  for (int rep = 0; rep < 200; ++rep) {
    WeightField f{{static_cast<std::uint64_t>(rep), 40}};
    const Point u{0, 0};
    StationaryBoundary b = make_scaled_boundary(f, u, 0.5, 8, 8);
    for (Coord i = 1; i <= 8; i += 3)
      for (Coord j = 1; j <= 8; j += 3) {
        CHECK(stationary_lpp(f, b, {i, j}) >= lpp(f, u, {i, j}) - f(u) - 1e-9);
        CHECK(b.I[static_cast<std::size_t>(i - 1)] >= f({i, 0}));
        CHECK(b.J[static_cast<std::size_t>(j - 1)] >= f({0, j}));
      }
  }
}

TEST_CASE("increment stationarity under base shifts") {
  const int n = 8000;
  std::vector<double> i_origin(n), i_shifted(n), j_origin(n), j_shifted(n);
  for (int rep = 0; rep < n; ++rep) {
    const Seed s{static_cast<std::uint64_t>(rep), 41};
    WeightField f{s.derived(streams::bulk)};
    StationaryBoundary b = make_independent_boundary({0, 0}, 0.6, 8, 7, s);
    ValueTable t = stationary_table(f, b, {8, 7});
    i_origin[rep] = t.at_point({1, 1}) - t.at_point({0, 1});
    j_origin[rep] = t.at_point({1, 1}) - t.at_point({1, 0});
    i_shifted[rep] = t.at_point({6, 5}) - t.at_point({5, 5});
    j_shifted[rep] = t.at_point({6, 5}) - t.at_point({6, 4});
  }
  auto moments = [](const std::vector<double>& x) {
    double m = 0, m2 = 0;
    for (double t : x) m += t;
    m /= static_cast<double>(x.size());
    for (double t : x) m2 += (t - m) * (t - m);
    m2 /= static_cast<double>(x.size() - 1);
    return std::pair{m, m2};
  };
  auto [mi0, vi0] = moments(i_origin);
  auto [mi1, vi1] = moments(i_shifted);
  auto [mj0, vj0] = moments(j_origin);
  auto [mj1, vj1] = moments(j_shifted);
  const double se_mean_i = std::sqrt((vi0 + vi1) / n), se_mean_j = std::sqrt((vj0 + vj1) / n);
  CHECK(std::abs(mi0 - mi1) < 4 * se_mean_i);
  CHECK(std::abs(mj0 - mj1) < 4 * se_mean_j);
  // marginals are Exp(1-rho) and Exp(rho)
  CHECK(std::abs(mi0 - 2.5) < 4 * std::sqrt(vi0 / n));
  CHECK(std::abs(mj0 - 1.0 / 0.6) < 4 * std::sqrt(vj0 / n));
}

TEST_CASE("queue-coupled pair: marginals and vertical-line independence") {
  const int n = 3000;
  const double rho = 0.55, lambda = 0.3;
  std::vector<double> j_rho_mean(n), j_lam_mean(n), i_rho_first(n), i_lam_first(n);
  std::vector<double> lam_below(n), rho_above(n), col2_rho(n);
  for (int rep = 0; rep < n; ++rep) {
    const Seed s{static_cast<std::uint64_t>(rep), 42};
    WeightField f{s.derived(streams::bulk)};
    auto [brho, blam] = make_queue_coupled_pair(f, {0, 0}, rho, lambda, 3, 6, s.derived(77));
    double mr = 0, ml = 0;
    for (double v : brho.J) mr += v;
    for (double v : blam.J) ml += v;
    j_rho_mean[rep] = mr / 6.0;
    j_lam_mean[rep] = ml / 6.0;
    i_rho_first[rep] = brho.I[0];
    i_lam_first[rep] = blam.I[0];

    CoupledColumns cc = halfplane_coupled_columns(f, {0, 0}, rho, lambda, 2, {0, 1}, s.derived(77));
    lam_below[rep] = cc.j_lambda.at(0);
    rho_above[rep] = cc.j_rho.at(1);
    col2_rho[rep] = cc.j_rho.at(0);
  }
  // increment marginals persist across columns of the half-plane process
  {
    double m = 0, v = 0;
    for (double x : col2_rho) m += x;
    m /= static_cast<double>(n);
    for (double x : col2_rho) v += (x - m) * (x - m);
    v /= static_cast<double>(n - 1);
    CHECK(std::abs(m - 1.0 / rho) < 4 * std::sqrt(v / n));
  }
  auto mean = [](const std::vector<double>& x) {
    double m = 0;
    for (double t : x) m += t;
    return m / static_cast<double>(x.size());
  };
  CHECK(std::abs(mean(j_rho_mean) - 1.0 / rho) < 0.05);
  CHECK(std::abs(mean(j_lam_mean) - 1.0 / lambda) < 0.12);
  CHECK(std::abs(mean(i_rho_first) - 1.0 / (1 - rho)) < 0.12);
  CHECK(std::abs(mean(i_lam_first) - 1.0 / (1 - lambda)) < 0.08);
  // J^lambda below a bulk vertex is independent of J^rho above it
  CHECK(std::abs(correlation(lam_below, rho_above)) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK_THROWS_AS(make_queue_coupled_pair(WeightField{{1, 0}}, Point{0, 0}, 0.3, 0.5, 2, 2,
                                          Seed{1, 1}),
                  std::invalid_argument);
}
