#include "cgm/analysis.hpp"

#include <cmath>

#include "cgm/events.hpp"
#include "cgm/lpp.hpp"
#include "cgm/stationary.hpp"

namespace cgm {

namespace {

// one walk step Exp(alpha) - Exp(beta), two counters per index
double walk_step(const Seed& s, long long i, double alpha, double beta) {
  return exp_at(s.derived(1), i, alpha) - exp_at(s.derived(2), i, beta);
}

}  // namespace

double rw_first_passage_exact(const RwParams& p, long long n) {
  require(p.alpha > p.beta && p.beta > 0, "rw: need alpha > beta > 0");
  require(n >= 1, "rw: need n >= 1");
  // log-space: log C_{n-1} + n log a + (n-1) log b - (2n-1) log(a+b)
  const double la = std::log(p.alpha), lb = std::log(p.beta), lab = std::log(p.alpha + p.beta);
  const double lcat = std::lgamma(2.0 * static_cast<double>(n) - 1.0) -
                      std::lgamma(static_cast<double>(n) + 1.0) -
                      std::lgamma(static_cast<double>(n));
  return std::exp(lcat + static_cast<double>(n) * la + static_cast<double>(n - 1) * lb -
                  static_cast<double>(2 * n - 1) * lab);
}

double rw_never_negative_limit(const RwParams& p) {
  require(p.alpha > p.beta && p.beta > 0, "rw: need alpha > beta > 0");
  return (p.alpha - p.beta) / p.alpha;
}

double rw_ballot_sum(const RwParams& p, double term_tol) {
  require(p.alpha > p.beta && p.beta > 0, "rw: need alpha > beta > 0");
  double sum = 0;
  for (long long n = 1;; ++n) {
    const double t = rw_first_passage_exact(p, n);
    sum += t;
    if (t < term_tol) break;
    require(n < 100000000, "rw_ballot_sum: series did not converge");
  }
  return sum;
}

double rw_first_passage_mc(const RwParams& p, long long n, long long replicas, const Seed& seed,
                           int threads) {
  require(p.alpha > p.beta && p.beta > 0, "rw: need alpha > beta > 0");
  std::vector<double> hits = run_replicas(replicas, threads, [&](long long rep) {
    const Seed s = seed.replica(static_cast<std::uint64_t>(rep));
    double sum = 0;
    for (long long i = 1; i <= n; ++i) {
      sum += walk_step(s, i, p.alpha, p.beta);
      if (sum < 0) return i == n ? 1.0 : 0.0;  // first passage below 0 at step i
      if (sum == 0) return 0.0;
    }
    return 0.0;
  });
  return summarize(hits).mean;
}

double rw_never_negative_mc(const RwParams& p, long long horizon, long long replicas,
                            const Seed& seed, int threads) {
  require(p.alpha > p.beta && p.beta > 0, "rw: need alpha > beta > 0");
  // the never-negative event of the limit (alpha-beta)/alpha is for the walk
  // with steps Exp(beta) - Exp(alpha), i.e. positive drift
  std::vector<double> hits = run_replicas(replicas, threads, [&](long long rep) {
    const Seed s = seed.replica(static_cast<std::uint64_t>(rep));
    double sum = 0;
    for (long long i = 1; i <= horizon; ++i) {
      sum += walk_step(s, i, p.beta, p.alpha);
      if (sum < 0) return 0.0;
    }
    return 1.0;
  });
  return summarize(hits).mean;
}

StayBoundCheck rw_stay_bound_check(const RwParams& p, long long n, long long replicas,
                                   const Seed& seed, int threads) {
  require(p.alpha > p.beta && p.beta > 0, "rw: need alpha > beta > 0");
  std::vector<double> pos(static_cast<std::size_t>(replicas));
  std::vector<double> neg(static_cast<std::size_t>(replicas));
  parallel_for(replicas, threads, [&](long long rep) {
    const Seed s = seed.replica(static_cast<std::uint64_t>(rep));
    double sum = 0;
    bool all_pos = true, all_neg = true;
    for (long long i = 1; i <= n && (all_pos || all_neg); ++i) {
      sum += walk_step(s, i, p.alpha, p.beta);
      all_pos = all_pos && sum > 0;
      all_neg = all_neg && sum < 0;
    }
    pos[static_cast<std::size_t>(rep)] = all_pos ? 1.0 : 0.0;
    neg[static_cast<std::size_t>(rep)] = all_neg ? 1.0 : 0.0;
  });
  StayBoundCheck out;
  out.n = n;
  out.stay_positive = summarize(pos);
  out.stay_negative = summarize(neg);
  const double q = (p.alpha - p.beta) / (p.alpha + p.beta);
  out.shape = std::pow(1.0 - q * q, static_cast<double>(n)) / std::sqrt(static_cast<double>(n));
  out.never_negative = (p.alpha - p.beta) / p.alpha;
  return out;
}

VarianceCheckResult variance_formula_check(double rho, Coord m, Coord n, long long replicas,
                                           const Seed& seed, int threads) {
  require(rho > 0 && rho < 1, "variance check: rho must be in (0,1)");
  require(m >= 1 && n >= 1, "variance check: need m, n >= 1");
  require(replicas >= 2, "variance check: need replicas >= 2");
  VarianceCheckResult out;
  out.rho = rho;
  out.m = m;
  out.n = n;
  out.replicas = replicas;
  out.g.resize(static_cast<std::size_t>(replicas));
  out.s_zplus.resize(static_cast<std::size_t>(replicas));
  out.j_increment.resize(static_cast<std::size_t>(replicas));
  const Point x{m, n};
  parallel_for(replicas, threads, [&](long long rep) {
    const Seed s = seed.replica(static_cast<std::uint64_t>(rep));
    const WeightField f{s.derived(streams::bulk)};
    const StationaryBoundary b = make_independent_boundary({0, 0}, rho, m, n, s);
    const ExitResult ex = exit_point(f, b, x);
    std::vector<double> prof =
        n >= 2 ? stationary_profile_to_column(f, b, m, n - 1, n) : std::vector<double>{};
    const double g = n >= 2 ? prof[1] : ex.value;
    const double g_below = n >= 2 ? prof[0] : b.i_prefix[static_cast<std::size_t>(m)];
    out.g[static_cast<std::size_t>(rep)] = g;
    out.s_zplus[static_cast<std::size_t>(rep)] = boundary_sum_to_exit(b, ex.z);
    out.j_increment[static_cast<std::size_t>(rep)] = g - g_below;
  });
  const McSummary sg = summarize(out.g);
  out.mean_g = sg.mean;
  // sample variance and its moment-based standard error
  double var = 0, m4 = 0;
  for (double v : out.g) {
    const double d = v - sg.mean;
    var += d * d;
    m4 += d * d * d * d;
  }
  var /= static_cast<double>(replicas - 1);
  m4 /= static_cast<double>(replicas);
  out.lhs = var;
  out.lhs_se = std::sqrt(std::max(0.0, m4 - var * var) / static_cast<double>(replicas));
  const McSummary ss = summarize(out.s_zplus);
  out.rhs = -static_cast<double>(m) / ((1 - rho) * (1 - rho)) +
            static_cast<double>(n) / (rho * rho) + 2.0 / (1 - rho) * ss.mean;
  out.rhs_se = 2.0 / (1 - rho) * ss.se;
  return out;
}

ExitExponentResult exit_exponent_experiment(double rho, const std::vector<Coord>& sizes,
                                            long long replicas, const Seed& seed, int threads,
                                            const std::vector<double>& tail_t, Coord tail_size) {
  require(rho > 0 && rho < 1, "exit exponent: rho must be in (0,1)");
  require(sizes.size() >= 3, "exit exponent: need at least 3 sizes");
  ExitExponentResult out;
  out.rho = rho;
  out.sizes = sizes;
  out.tail_size = tail_size;
  out.tail_t = tail_t;
  const double xi1 = rho_to_xi1(rho);
  for (Coord N : sizes) {
    const Point x{static_cast<Coord>(std::floor(static_cast<double>(N) * xi1)),
                  static_cast<Coord>(std::floor(static_cast<double>(N) * (1 - xi1)))};
    require(x.x1 >= 1 && x.x2 >= 1, "exit exponent: characteristic point degenerate");
    const Seed size_seed = seed.derived(static_cast<std::uint64_t>(N));
    std::vector<double> absz = run_replicas(replicas, threads, [&](long long rep) {
      const Seed s = size_seed.replica(static_cast<std::uint64_t>(rep));
      const WeightField f{s.derived(streams::bulk)};
      const StationaryBoundary b = make_independent_boundary({0, 0}, rho, x.x1, x.x2, s);
      return static_cast<double>(std::llabs(exit_point(f, b, x).z));
    });
    const McSummary ms = summarize(absz);
    out.mean_absz.push_back(ms.mean);
    out.se_absz.push_back(ms.se);
    out.absz.push_back(std::move(absz));
  }
  std::vector<double> xs(sizes.size()), ys(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    xs[i] = static_cast<double>(sizes[i]);
    ys[i] = out.mean_absz[i];
  }
  out.fit = fit_loglog(xs, ys);

  // tail of |Z| at tail_size, nested thresholds estimated from one sample set
  const std::vector<double>* tail_samples = nullptr;
  std::vector<double> extra;
  for (std::size_t i = 0; i < sizes.size(); ++i)
    if (sizes[i] == tail_size) tail_samples = &out.absz[i];
  if (tail_samples == nullptr && !tail_t.empty()) {
    const Point x{static_cast<Coord>(std::floor(static_cast<double>(tail_size) * xi1)),
                  static_cast<Coord>(std::floor(static_cast<double>(tail_size) * (1 - xi1)))};
    const Seed size_seed = seed.derived(static_cast<std::uint64_t>(tail_size));
    extra = run_replicas(replicas, threads, [&](long long rep) {
      const Seed s = size_seed.replica(static_cast<std::uint64_t>(rep));
      const WeightField f{s.derived(streams::bulk)};
      const StationaryBoundary b = make_independent_boundary({0, 0}, rho, x.x1, x.x2, s);
      return static_cast<double>(std::llabs(exit_point(f, b, x).z));
    });
    tail_samples = &extra;
  }
  if (tail_samples != nullptr) {
    const double n23 = std::pow(static_cast<double>(tail_size), 2.0 / 3.0);
    for (double t : tail_t) {
      std::vector<double> ind(tail_samples->size());
      for (std::size_t k = 0; k < tail_samples->size(); ++k)
        ind[k] = (*tail_samples)[k] >= t * n23 ? 1.0 : 0.0;
      const McSummary ms = summarize(ind);
      out.tail_p.push_back(ms.mean);
      out.tail_se.push_back(ms.se);
    }
  }
  return out;
}

NoAxisResult no_axis_divergence(const std::vector<double>& etas, const std::vector<Coord>& ns,
                                long long replicas, const Seed& seed, int threads) {
  require(!etas.empty() && !ns.empty(), "no_axis: empty parameter lists");
  for (std::size_t k = 1; k < etas.size(); ++k)
    require(etas[k] > etas[k - 1], "no_axis: eta list must be strictly increasing");
  for (double e : etas) require(e > 0 && e < 1, "no_axis: eta1 must be in (0,1)");

  // bounding box over all targets w(n,k) = (floor(n eta), n - floor(n eta))
  Coord bx = 1, by = 1;
  for (double e : etas)
    for (Coord n : ns) {
      const Coord w1 = static_cast<Coord>(std::floor(static_cast<double>(n) * e));
      require(w1 >= 1 && n - w1 >= 1, "no_axis: target degenerate");
      bx = std::max(bx, w1);
      by = std::max(by, n - w1);
    }

  NoAxisResult out;
  out.eta1 = etas;
  out.ns = ns;
  out.sup_values.assign(etas.size(), std::vector<double>(static_cast<std::size_t>(replicas)));
  parallel_for(replicas, threads, [&](long long rep) {
    const Seed s = seed.replica(static_cast<std::uint64_t>(rep));
    const WeightField f{s.derived(streams::bulk)};
    const TableField w = materialize(f, {0, 0}, {bx, by});
    const ValueTable g0 = forward_table(w, {0, 0}, {bx, by});
    const ValueTable g2 = forward_table(w, {0, 1}, {bx, by});
    for (std::size_t k = 0; k < etas.size(); ++k) {
      double sup = -1e300;
      for (Coord n : ns) {
        const Coord w1 = static_cast<Coord>(std::floor(static_cast<double>(n) * etas[k]));
        const Point p{w1, n - w1};
        sup = std::max(sup, g0.at_point(p) - g2.at_point(p));
      }
      out.sup_values[k][static_cast<std::size_t>(rep)] = sup;
    }
  });
  for (std::size_t k = 0; k < etas.size(); ++k) out.medians.push_back(median(out.sup_values[k]));
  return out;
}

double shape_function(double a, double b) {
  require(a >= 0 && b >= 0, "shape_function: arguments must be nonnegative");
  const double s = std::sqrt(a) + std::sqrt(b);
  return s * s;
}

WEventResult w_event_probability(Coord N, double epsilon, long long replicas, const Seed& seed,
                                 int threads) {
  WEventResult out;
  out.N = N;
  out.epsilon = epsilon;
  out.replicas = replicas;
  out.indicators = run_replicas(replicas, threads, [&](long long rep) {
    const Seed s = seed.replica(static_cast<std::uint64_t>(rep));
    const WeightField f{s.derived(streams::bulk)};
    const TableField w = materialize(f, {-N, -N}, {N, N});
    return detect_W(w, N, epsilon).found ? 1.0 : 0.0;
  });
  out.p = summarize(out.indicators);
  return out;
}

CylinderResult cylinder_experiment(double xi1, Coord N, Coord i, const std::vector<double>& rs,
                                   long long replicas, const Seed& seed, int threads) {
  require(!rs.empty(), "cylinder experiment: empty r grid");
  CylinderResult out;
  out.N = N;
  out.xi1 = xi1;
  out.i = i;
  out.replicas = replicas;
  out.r = rs;
  std::vector<std::vector<double>> miss(rs.size(),
                                        std::vector<double>(static_cast<std::size_t>(replicas)));
  const Point p{static_cast<Coord>(std::floor(static_cast<double>(N) * xi1)),
                static_cast<Coord>(std::floor(static_cast<double>(N) * (1 - xi1)))};
  parallel_for(replicas, threads, [&](long long rep) {
    const Seed s = seed.replica(static_cast<std::uint64_t>(rep));
    const WeightField f{s.derived(streams::bulk)};
    const TableField w = materialize(f, {0, 0}, p);
    const UpRightPath geo = geodesic(w, {0, 0}, p);
    const auto [ylo, yhi] = heights_at_column(geo, i);
    const double center = static_cast<double>(i) * (1 - xi1) / xi1;
    for (std::size_t k = 0; k < rs.size(); ++k) {
      const double hw = rs[k] * std::pow(static_cast<double>(N), 2.0 / 3.0);
      const Coord blo = static_cast<Coord>(std::ceil(center - hw));
      const Coord bhi = static_cast<Coord>(std::floor(center + hw));
      const bool hit = std::max(ylo, blo) <= std::min(yhi, bhi);
      miss[k][static_cast<std::size_t>(rep)] = hit ? 0.0 : 1.0;
    }
  });
  for (auto& v : miss) out.p_miss.push_back(summarize(v));
  return out;
}

BlockConnectionResult block_connection_probability(Coord N, double epsilon, double r, double d1,
                                                   double d2, long long replicas, const Seed& seed,
                                                   int threads) {
  require(replicas >= 100, "block connection: need at least 100 replicas");
  require(r > 0 && d1 > 0 && d2 > 0, "block connection: parameters must be positive");
  BlockConnectionResult out;
  out.N = N;
  out.replicas = replicas;
  const Point o{-N, -N};
  std::vector<double> opp(static_cast<std::size_t>(replicas)),
      far(static_cast<std::size_t>(replicas));
  parallel_for(replicas, threads, [&](long long rep) {
    const Seed s = seed.replica(static_cast<std::uint64_t>(rep));
    const WeightField f{s.derived(streams::bulk)};
    const TableField w = materialize(f, {-N, -N}, {N, N});
    const BlockConnectionSample bc = block_connection_sample(w, N, epsilon, d1, d2, o);
    opp[static_cast<std::size_t>(rep)] = bc.opposite ? 1.0 : 0.0;
    far[static_cast<std::size_t>(rep)] = bc.far ? 1.0 : 0.0;
  });
  out.opposite = summarize(opp);
  out.far = summarize(far);
  return out;
}

SandwichExperimentResult sandwich_experiment(Coord N, double epsilon, double r, double d1,
                                             long long instances, const Seed& seed, int threads) {
  SandwichExperimentResult out;
  out.instances = instances;
  const Point o{-N, -N};
  std::vector<double> occurred(static_cast<std::size_t>(instances)),
      held(static_cast<std::size_t>(instances)),
      occurred_ne(static_cast<std::size_t>(instances)),
      held_ne(static_cast<std::size_t>(instances));
  parallel_for(instances, threads, [&](long long rep) {
    const Seed s = seed.replica(static_cast<std::uint64_t>(rep));
    const WeightField f{s.derived(streams::bulk)};
    const TableField w = materialize(f, {-N - 1, -N - 1}, {N + 1, N + 1});
    const SandwichResult sr = sandwich_event_check(w, N, epsilon, o, r, d1);
    occurred[static_cast<std::size_t>(rep)] = sr.event_occurred ? 1.0 : 0.0;
    held[static_cast<std::size_t>(rep)] = sr.implication_held ? 1.0 : 0.0;
    const SandwichResult ne = reversed_sandwich_event_check(w, N, epsilon, -o, r, d1);
    occurred_ne[static_cast<std::size_t>(rep)] = ne.event_occurred ? 1.0 : 0.0;
    held_ne[static_cast<std::size_t>(rep)] = ne.implication_held ? 1.0 : 0.0;
  });
  for (long long i = 0; i < instances; ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    if (occurred[k] > 0.5) {
      ++out.qualifying;
      if (held[k] < 0.5) ++out.violations;
    } else {
      ++out.skipped;
    }
    if (occurred_ne[k] > 0.5) {
      ++out.qualifying_ne;
      if (held_ne[k] < 0.5) ++out.violations_ne;
    }
  }
  return out;
}

}  // namespace cgm
