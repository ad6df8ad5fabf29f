#pragma once

#include <vector>

#include "cgm/lattice.hpp"
#include "cgm/mc.hpp"
#include "cgm/rng.hpp"

namespace cgm {

// ---- exact random-walk formulas, steps Exp(alpha) - Exp(beta)

struct RwParams {
  double alpha{0};
  double beta{0};
};

// P(first passage below 0 at step n): C_{n-1} alpha^n beta^{n-1} / (alpha+beta)^{2n-1}
double rw_first_passage_exact(const RwParams& p, long long n);

// P(S_n > 0 for all n) for the reflected walk: (alpha - beta)/alpha
double rw_never_negative_limit(const RwParams& p);

// sum of first-passage probabilities, truncated when terms drop below term_tol
double rw_ballot_sum(const RwParams& p, double term_tol = 1e-12);

double rw_first_passage_mc(const RwParams& p, long long n, long long replicas, const Seed& seed,
                           int threads);
double rw_never_negative_mc(const RwParams& p, long long horizon, long long replicas,
                            const Seed& seed, int threads);

struct StayBoundCheck {
  long long n{0};
  McSummary stay_positive, stay_negative;
  double shape{0};           // (1 - ((a-b)/(a+b))^2)^n / sqrt(n), the bound shape without C
  double never_negative{0};  // the additive (alpha-beta)/alpha term
};
StayBoundCheck rw_stay_bound_check(const RwParams& p, long long n, long long replicas,
                                   const Seed& seed, int threads);

// ---- variance identity of the stationary process

struct VarianceCheckResult {
  double rho{0};
  Coord m{0}, n{0};
  long long replicas{0};
  double lhs{0}, lhs_se{0};  // sample variance of G^rho with moment-based SE
  double rhs{0}, rhs_se{0};  // -m/(1-rho)^2 + n/rho^2 + 2/(1-rho) E[S_{Z+}]
  double mean_g{0};
  std::vector<double> g, s_zplus, j_increment;  // per-replica records
};
VarianceCheckResult variance_formula_check(double rho, Coord m, Coord n, long long replicas,
                                           const Seed& seed, int threads);

// ---- exit-point scaling

struct ExitExponentResult {
  double rho{0};
  std::vector<Coord> sizes;
  std::vector<double> mean_absz, se_absz;
  TailFit fit;  // log E|Z| vs log N
  Coord tail_size{0};
  std::vector<double> tail_t, tail_p, tail_se;
  std::vector<std::vector<double>> absz;  // per-size samples
};
ExitExponentResult exit_exponent_experiment(double rho, const std::vector<Coord>& sizes,
                                            long long replicas, const Seed& seed, int threads,
                                            const std::vector<double>& tail_t = {1, 2, 3, 4},
                                            Coord tail_size = 256);

// ---- no-axis divergence

struct NoAxisResult {
  std::vector<double> eta1;
  std::vector<Coord> ns;
  std::vector<double> medians;                  // per eta, median over replicas of sup_n
  std::vector<std::vector<double>> sup_values;  // per eta, per replica
};
NoAxisResult no_axis_divergence(const std::vector<double>& etas, const std::vector<Coord>& ns,
                                long long replicas, const Seed& seed, int threads);

// exponential corner growth limit shape g(a,b) = (sqrt a + sqrt b)^2
double shape_function(double a, double b);

// ---- Monte Carlo drivers for the geometric events

struct WEventResult {
  Coord N{0};
  double epsilon{0};
  long long replicas{0};
  McSummary p;
  std::vector<double> indicators;
};
WEventResult w_event_probability(Coord N, double epsilon, long long replicas, const Seed& seed,
                                 int threads);

struct CylinderResult {
  Coord N{0};
  double xi1{0};
  Coord i{0};
  long long replicas{0};
  std::vector<double> r;
  std::vector<McSummary> p_miss;
};
CylinderResult cylinder_experiment(double xi1, Coord N, Coord i, const std::vector<double>& rs,
                                   long long replicas, const Seed& seed, int threads);

struct BlockConnectionResult {
  Coord N{0};
  long long replicas{0};
  McSummary opposite, far;
};
BlockConnectionResult block_connection_probability(Coord N, double epsilon, double r, double d1,
                                                   double d2, long long replicas, const Seed& seed,
                                                   int threads);

struct SandwichExperimentResult {
  long long instances{0};
  long long qualifying{0};
  long long skipped{0};
  long long violations{0};
  long long qualifying_ne{0};  // mirrored event on the northeast block
  long long violations_ne{0};
};
SandwichExperimentResult sandwich_experiment(Coord N, double epsilon, double r, double d1,
                                             long long instances, const Seed& seed, int threads);

}  // namespace cgm
