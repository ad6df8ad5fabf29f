#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "cgm/lpp.hpp"
#include "cgm/queueing.hpp"
#include "cgm/rng.hpp"

namespace cgm {

// characteristic direction xi(rho) = ((1-rho)^2, rho^2) / ((1-rho)^2 + rho^2)
inline double rho_to_xi1(double rho) {
  require(rho > 0 && rho < 1, "rho_to_xi1: rho must be in (0,1)");
  const double a = (1 - rho) * (1 - rho), b = rho * rho;
  return a / (a + b);
}

inline double xi_to_rho(double xi1) {
  require(xi1 > 0 && xi1 < 1, "xi_to_rho: xi1 must be in (0,1)");
  const double s = std::sqrt(1 - xi1);
  return s / (std::sqrt(xi1) + s);
}

inline double a_factor(double rho) {
  require(rho > 0 && rho < 1, "a_factor: rho must be in (0,1)");
  return 1.0 / ((1 - rho) * (1 - rho) + rho * rho);
}

// density associated to a southwest boundary point with negative coordinates
inline double boundary_point_to_rho(Point o) {
  require(o.x1 < 0 && o.x2 < 0, "boundary_point_to_rho: need strictly negative coordinates");
  const double s2 = std::sqrt(static_cast<double>(-o.x2));
  return s2 / (std::sqrt(static_cast<double>(-o.x1)) + s2);
}

enum class BoundaryMode { independent, scaled_from_bulk, queue_coupled_pair };

// boundary weights of an increment-stationary process on the quadrant
// base + Z_{>=0}^2; I[k-1] sits at base + k e1, J[l-1] at base + l e2
struct StationaryBoundary {
  Point base{};
  double rho{0.5};
  BoundaryMode mode{BoundaryMode::independent};
  std::vector<double> I, J;
  std::vector<double> i_prefix, j_prefix;  // prefix[k] = I_1 + ... + I_k

  void build_prefixes() {
    i_prefix.assign(I.size() + 1, 0.0);
    for (std::size_t k = 0; k < I.size(); ++k) i_prefix[k + 1] = i_prefix[k] + I[k];
    j_prefix.assign(J.size() + 1, 0.0);
    for (std::size_t l = 0; l < J.size(); ++l) j_prefix[l + 1] = j_prefix[l] + J[l];
  }
};

inline StationaryBoundary make_independent_boundary(Point base, double rho, Coord ni, Coord nj,
                                                    const Seed& seed) {
  require(rho > 0 && rho < 1, "boundary: rho must be in (0,1)");
  StationaryBoundary b{base, rho, BoundaryMode::independent, {}, {}, {}, {}};
  const Seed si = seed.derived(streams::boundary_i), sj = seed.derived(streams::boundary_j);
  b.I.resize(static_cast<std::size_t>(ni));
  b.J.resize(static_cast<std::size_t>(nj));
  for (Coord k = 1; k <= ni; ++k) b.I[static_cast<std::size_t>(k - 1)] = exp_at(si, k, 1 - rho);
  for (Coord l = 1; l <= nj; ++l) b.J[static_cast<std::size_t>(l - 1)] = exp_at(sj, l, rho);
  b.build_prefixes();
  return b;
}

// pathwise-dominating coupling: the same Exp(1) draw divided by (1-rho) or
// rho, so that omega <= I and omega <= J hold and boundaries for different
// densities are comonotone
template <WeightSource F>
StationaryBoundary make_scaled_boundary(const F& f, Point base, double rho, Coord ni, Coord nj) {
  require(rho > 0 && rho < 1, "boundary: rho must be in (0,1)");
  StationaryBoundary b{base, rho, BoundaryMode::scaled_from_bulk, {}, {}, {}, {}};
  b.I.resize(static_cast<std::size_t>(ni));
  b.J.resize(static_cast<std::size_t>(nj));
  for (Coord k = 1; k <= ni; ++k) b.I[static_cast<std::size_t>(k - 1)] = f(base + k * e1) / (1 - rho);
  for (Coord l = 1; l <= nj; ++l) b.J[static_cast<std::size_t>(l - 1)] = f(base + l * e2) / rho;
  b.build_prefixes();
  return b;
}

// G^rho_{base,.} over [base, x]
template <WeightSource F>
ValueTable stationary_table(const F& f, const StationaryBoundary& b, Point x) {
  require(leq(b.base, x), "stationary: x must lie in base + nonnegative quadrant");
  return axis_modified_table(f, b.base, x - b.base, AxisWeights{b.I, b.J}, 0.0);
}

template <WeightSource F>
double stationary_lpp(const F& f, const StationaryBoundary& b, Point x) {
  require(leq(b.base, x), "stationary: x must lie in base + nonnegative quadrant");
  const Point d = x - b.base;
  require(b.i_prefix.size() > static_cast<std::size_t>(d.x1) &&
              b.j_prefix.size() > static_cast<std::size_t>(d.x2),
          "stationary: boundary arrays too short");
  if (d.x2 == 0) return b.i_prefix[static_cast<std::size_t>(d.x1)];
  if (d.x1 == 0) return b.j_prefix[static_cast<std::size_t>(d.x2)];
  std::vector<double> row(static_cast<std::size_t>(d.x1 + 1));
  for (Coord i = 0; i <= d.x1; ++i) row[static_cast<std::size_t>(i)] = b.i_prefix[static_cast<std::size_t>(i)];
  for (Coord j = 1; j <= d.x2; ++j) {
    row[0] = b.j_prefix[static_cast<std::size_t>(j)];
    for (Coord i = 1; i <= d.x1; ++i) {
      const std::size_t ii = static_cast<std::size_t>(i);
      row[ii] = std::max(row[ii - 1], row[ii]) + f({b.base.x1 + i, b.base.x2 + j});
    }
  }
  return row[static_cast<std::size_t>(d.x1)];
}

// increment variables I^rho_x = G_x - G_{x-e1}, J^rho_x = G_x - G_{x-e2}
struct IncrementPair {
  std::vector<double> I, J;
};

template <WeightSource F>
IncrementPair increments_on_path(const F& f, const StationaryBoundary& b,
                                 std::span<const Point> vertices) {
  Point hi = b.base;
  for (Point p : vertices) {
    require(lt(b.base, p), "increments: vertices must be in base + positive quadrant");
    hi = {std::max(hi.x1, p.x1), std::max(hi.x2, p.x2)};
  }
  ValueTable t = stationary_table(f, b, hi);
  IncrementPair out;
  out.I.reserve(vertices.size());
  out.J.reserve(vertices.size());
  for (Point p : vertices) {
    out.I.push_back(t.at_point(p) - t.at_point(p - e1));
    out.J.push_back(t.at_point(p) - t.at_point(p - e2));
  }
  return out;
}

// signed exit point of the stationary geodesic from the boundary axes;
// positive along e1, negative along e2, top-level ties toward e1
struct ExitResult {
  long long z{0};
  double value{0};
};

template <WeightSource F>
ExitResult boundary_exit(const F& f, Point base, std::span<const double> i_prefix,
                         std::span<const double> j_prefix, Point x) {
  require(lt(base, x), "exit point: x must be strictly inside the quadrant");
  const Coord K = x.x1 - base.x1, L = x.x2 - base.x2;
  require(i_prefix.size() > static_cast<std::size_t>(K) &&
              j_prefix.size() > static_cast<std::size_t>(L),
          "exit point: boundary arrays too short");
  ValueTable r = reversed_table(f, x, base + e1 + e2);
  double best1 = -1e300, best2 = -1e300;
  Coord arg1 = 0, arg2 = 0;
  for (Coord k = 1; k <= K; ++k) {
    const double v = i_prefix[static_cast<std::size_t>(k)] + r.at_point({base.x1 + k, base.x2 + 1});
    if (v > best1) {
      best1 = v;
      arg1 = k;
    }
  }
  for (Coord l = 1; l <= L; ++l) {
    const double v = j_prefix[static_cast<std::size_t>(l)] + r.at_point({base.x1 + 1, base.x2 + l});
    if (v > best2) {
      best2 = v;
      arg2 = l;
    }
  }
  if (best1 >= best2) return {arg1, best1};
  return {-arg2, best2};
}

template <WeightSource F>
ExitResult exit_point(const F& f, const StationaryBoundary& b, Point x) {
  return boundary_exit(f, b.base, b.i_prefix, b.j_prefix, x);
}

// boundary sum on the x-axis up to the positive part of the exit point,
// the S^rho_{Z^+} of the variance formula
inline double boundary_sum_to_exit(const StationaryBoundary& b, long long z) {
  if (z <= 0) return 0.0;
  return b.i_prefix[static_cast<std::size_t>(z)];
}

// ---- reversed orientation: boundary on the north and east of a base point

struct ReversedBoundary {
  Point base{};
  double rho{0.5};
  BoundaryMode mode{BoundaryMode::independent};
  std::vector<double> Ihat, Jhat;  // Ihat[k-1] at base - k e1, Jhat[l-1] at base - l e2
  std::vector<double> i_prefix, j_prefix;

  void build_prefixes() {
    i_prefix.assign(Ihat.size() + 1, 0.0);
    for (std::size_t k = 0; k < Ihat.size(); ++k) i_prefix[k + 1] = i_prefix[k] + Ihat[k];
    j_prefix.assign(Jhat.size() + 1, 0.0);
    for (std::size_t l = 0; l < Jhat.size(); ++l) j_prefix[l + 1] = j_prefix[l] + Jhat[l];
  }
};

inline ReversedBoundary make_independent_reversed_boundary(Point base, double rho, Coord ni,
                                                           Coord nj, const Seed& seed) {
  require(rho > 0 && rho < 1, "boundary: rho must be in (0,1)");
  ReversedBoundary b{base, rho, BoundaryMode::independent, {}, {}, {}, {}};
  const Seed si = seed.derived(streams::boundary_i), sj = seed.derived(streams::boundary_j);
  b.Ihat.resize(static_cast<std::size_t>(ni));
  b.Jhat.resize(static_cast<std::size_t>(nj));
  for (Coord k = 1; k <= ni; ++k) b.Ihat[static_cast<std::size_t>(k - 1)] = exp_at(si, -k, 1 - rho);
  for (Coord l = 1; l <= nj; ++l) b.Jhat[static_cast<std::size_t>(l - 1)] = exp_at(sj, -l, rho);
  b.build_prefixes();
  return b;
}

template <WeightSource F>
ReversedBoundary make_scaled_reversed_boundary(const F& f, Point base, double rho, Coord ni,
                                               Coord nj) {
  require(rho > 0 && rho < 1, "boundary: rho must be in (0,1)");
  ReversedBoundary b{base, rho, BoundaryMode::scaled_from_bulk, {}, {}, {}, {}};
  b.Ihat.resize(static_cast<std::size_t>(ni));
  b.Jhat.resize(static_cast<std::size_t>(nj));
  for (Coord k = 1; k <= ni; ++k) b.Ihat[static_cast<std::size_t>(k - 1)] = f(base - k * e1) / (1 - rho);
  for (Coord l = 1; l <= nj; ++l) b.Jhat[static_cast<std::size_t>(l - 1)] = f(base - l * e2) / rho;
  b.build_prefixes();
  return b;
}

// G-hat^rho_{base,.} over [x, base]; mirror image of the forward table
template <WeightSource F>
ValueTable reversed_stationary_table(const F& f, const ReversedBoundary& b, Point x) {
  require(leq(x, b.base), "reversed stationary: x must lie in base + nonpositive quadrant");
  const Point d = b.base - x;
  require(b.i_prefix.size() > static_cast<std::size_t>(d.x1) &&
              b.j_prefix.size() > static_cast<std::size_t>(d.x2),
          "reversed stationary: boundary arrays too short");
  ValueTable t(x, static_cast<std::size_t>(d.x1 + 1), static_cast<std::size_t>(d.x2 + 1));
  const std::size_t W = t.w, H = t.h;
  for (std::size_t k = 0; k < W; ++k) t.at(W - 1 - k, H - 1) = b.i_prefix[k];
  for (std::size_t l = 1; l < H; ++l) {
    t.at(W - 1, H - 1 - l) = b.j_prefix[l];
    for (std::size_t k = 1; k < W; ++k) {
      const std::size_t i = W - 1 - k, j = H - 1 - l;
      t.at(i, j) = std::max(t.at(i + 1, j), t.at(i, j + 1)) +
                   f({x.x1 + static_cast<Coord>(i), x.x2 + static_cast<Coord>(j)});
    }
  }
  return t;
}

template <WeightSource F>
double reversed_stationary_lpp(const F& f, const ReversedBoundary& b, Point x) {
  return reversed_stationary_table(f, b, x).at_point(x);
}

template <WeightSource F>
ExitResult reversed_boundary_exit(const F& f, const ReversedBoundary& b, Point x) {
  require(lt(x, b.base), "reversed exit point: x must be strictly inside the quadrant");
  const Coord K = b.base.x1 - x.x1, L = b.base.x2 - x.x2;
  require(b.i_prefix.size() > static_cast<std::size_t>(K) &&
              b.j_prefix.size() > static_cast<std::size_t>(L),
          "reversed exit point: boundary arrays too short");
  ValueTable g = forward_table(f, x, b.base - e1 - e2);  // g.at_point(p) = G_{x,p}
  double best1 = -1e300, best2 = -1e300;
  Coord arg1 = 0, arg2 = 0;
  for (Coord k = 1; k <= K; ++k) {
    const double v = b.i_prefix[static_cast<std::size_t>(k)] +
                     g.at_point({b.base.x1 - k, b.base.x2 - 1});
    if (v > best1) {
      best1 = v;
      arg1 = k;
    }
  }
  for (Coord l = 1; l <= L; ++l) {
    const double v = b.j_prefix[static_cast<std::size_t>(l)] +
                     g.at_point({b.base.x1 - 1, b.base.x2 - l});
    if (v > best2) {
      best2 = v;
      arg2 = l;
    }
  }
  if (best1 >= best2) return {arg1, best1};
  return {-arg2, best2};
}

// ---- induced boundary process: eta weights from G_{u,.} increments on the
// axes of v, corner weight 0; satisfies G_{u,y} = G_{u,v} + G^{[u]}_{v,y}

template <WeightSource F>
AxisWeights induced_axis_weights(const F& f, Point u, Point v, Point y) {
  require(leq(u, v) && leq(v, y), "induced boundary: need u <= v <= y");
  AxisWeights aw;
  if (y.x1 > v.x1) {
    std::vector<double> row = profile_to_row(f, u, v.x2, v.x1, y.x1);
    aw.row.resize(row.size() - 1);
    for (std::size_t k = 1; k < row.size(); ++k) aw.row[k - 1] = row[k] - row[k - 1];
  }
  if (y.x2 > v.x2) {
    std::vector<double> col = profile_to_column(f, u, v.x1, v.x2, y.x2);
    aw.col.resize(col.size() - 1);
    for (std::size_t l = 1; l < col.size(); ++l) aw.col[l - 1] = col[l] - col[l - 1];
  }
  return aw;
}

template <WeightSource F>
double induced_boundary_lpp(const F& f, Point u, Point v, Point y) {
  AxisWeights aw = induced_axis_weights(f, u, v, y);
  return axis_modified_table(f, v, y - v, aw, 0.0).at_point(y);
}

template <WeightSource F>
ExitResult induced_exit(const F& f, Point u, Point v, Point y) {
  AxisWeights aw = induced_axis_weights(f, u, v, y);
  std::vector<double> ip(aw.row.size() + 1, 0.0), jp(aw.col.size() + 1, 0.0);
  for (std::size_t k = 0; k < aw.row.size(); ++k) ip[k + 1] = ip[k] + aw.row[k];
  for (std::size_t l = 0; l < aw.col.size(); ++l) jp[l + 1] = jp[l] + aw.col[l];
  return boundary_exit(f, v, ip, jp, y);
}

// profile of the stationary process along a fixed column
template <WeightSource F>
std::vector<double> stationary_profile_to_column(const F& f, const StationaryBoundary& b, Coord m,
                                                 Coord n_lo, Coord n_hi) {
  require(b.base.x1 <= m && b.base.x2 <= n_lo && n_lo <= n_hi,
          "stationary profile: range outside quadrant");
  const Coord W = m - b.base.x1;
  require(b.i_prefix.size() > static_cast<std::size_t>(W) &&
              b.j_prefix.size() > static_cast<std::size_t>(n_hi - b.base.x2),
          "stationary profile: boundary arrays too short");
  std::vector<double> row(static_cast<std::size_t>(W + 1));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_hi - n_lo + 1));
  for (Coord i = 0; i <= W; ++i) row[static_cast<std::size_t>(i)] = b.i_prefix[static_cast<std::size_t>(i)];
  if (b.base.x2 >= n_lo) out.push_back(row[static_cast<std::size_t>(W)]);
  for (Coord j = 1; j <= n_hi - b.base.x2; ++j) {
    row[0] = b.j_prefix[static_cast<std::size_t>(j)];
    for (Coord i = 1; i <= W; ++i) {
      const std::size_t ii = static_cast<std::size_t>(i);
      row[ii] = std::max(row[ii - 1], row[ii]) + f({b.base.x1 + i, b.base.x2 + j});
    }
    if (b.base.x2 + j >= n_lo) out.push_back(row[static_cast<std::size_t>(W)]);
  }
  return out;
}

// mirror image: G-hat^rho_{base,(m,n)} for n in [n_lo, n_hi]
template <WeightSource F>
std::vector<double> reversed_stationary_profile_to_column(const F& f, const ReversedBoundary& b,
                                                          Coord m, Coord n_lo, Coord n_hi) {
  require(m <= b.base.x1 && n_hi <= b.base.x2 && n_lo <= n_hi,
          "reversed stationary profile: range outside quadrant");
  ValueTable t = reversed_stationary_table(f, b, {m, n_lo});
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_hi - n_lo + 1));
  for (Coord n = n_lo; n <= n_hi; ++n) out.push_back(t.at_point({m, n}));
  return out;
}

// ---- joint two-density construction on the half-plane (finite window)

// J-increments of column k obtained from column k-1 through the queueing
// operator with the bulk weights of column k as services
template <WeightSource F>
QueueOutputs advance_column(const F& f, Point base, Coord col, const BiSequence& j_prev,
                            IndexRange out) {
  std::vector<double> sv(static_cast<std::size_t>(j_prev.window().size()));
  for (long long j = j_prev.lo(); j <= j_prev.hi(); ++j)
    sv[static_cast<std::size_t>(j - j_prev.lo())] = f({base.x1 + col, base.x2 + j});
  BiSequence services(j_prev.lo(), std::move(sv));
  return depart(j_prev, services, out);
}

// coupled boundary pair (rho, lambda), lambda < rho, built from the joint
// half-plane process: (J^rho, J^lambda) = (Y^rho, D(Y^lambda, Y^rho)) on the
// y-axis, I arrays from the sojourn outputs of successive columns
template <WeightSource F>
std::pair<StationaryBoundary, StationaryBoundary> make_queue_coupled_pair(
    const F& f, Point base, double rho, double lambda, Coord ni, Coord nj, const Seed& seed) {
  require(0 < lambda && lambda < rho && rho < 1,
          "queue coupled pair: need 0 < lambda < rho < 1");
  const long long m0 = default_burnin_margin(lambda, rho);
  const long long mcol = default_burnin_margin(rho, 1.0);
  const long long L0 = -(m0 + (ni + 1) * mcol);
  const IndexRange ywin{L0, nj};

  BiSequence y_rho = BiSequence::iid_exponential(seed.derived(streams::boundary_j), ywin, rho);
  BiSequence y_lam =
      BiSequence::iid_exponential(seed.derived(streams::boundary_j).derived(2), ywin, lambda);
  BiSequence j_rho = slice_to(y_rho, {L0 + m0, nj});
  BiSequence j_lam = depart(y_lam, y_rho, {L0 + m0, nj}).departures;

  StationaryBoundary brho{base, rho, BoundaryMode::queue_coupled_pair, {}, {}, {}, {}};
  StationaryBoundary blam{base, lambda, BoundaryMode::queue_coupled_pair, {}, {}, {}, {}};
  for (Coord l = 1; l <= nj; ++l) {
    brho.J.push_back(j_rho.at(l));
    blam.J.push_back(j_lam.at(l));
  }

  BiSequence cur_rho = j_rho, cur_lam = j_lam;
  for (Coord k = 1; k <= ni; ++k) {
    const IndexRange out{L0 + m0 + k * mcol, 0};
    QueueOutputs qr = advance_column(f, base, k, cur_rho, out);
    QueueOutputs ql = advance_column(f, base, k, cur_lam, out);
    brho.I.push_back(qr.sojourns.at(0));
    blam.I.push_back(ql.sojourns.at(0));
    cur_rho = std::move(qr.departures);
    cur_lam = std::move(ql.departures);
  }
  brho.build_prefixes();
  blam.build_prefixes();
  return {std::move(brho), std::move(blam)};
}

// J-increment sequences of the coupled pair on the vertical line at column k
struct CoupledColumns {
  BiSequence j_rho, j_lambda;
};

template <WeightSource F>
CoupledColumns halfplane_coupled_columns(const F& f, Point base, double rho, double lambda,
                                         Coord k, IndexRange out, const Seed& seed) {
  require(0 < lambda && lambda < rho && rho < 1,
          "halfplane columns: need 0 < lambda < rho < 1");
  require(k >= 0, "halfplane columns: column must be >= 0");
  const long long m0 = default_burnin_margin(lambda, rho);
  const long long mcol = default_burnin_margin(rho, 1.0);
  const long long L0 = out.lo - m0 - (k + 1) * mcol;
  const IndexRange ywin{L0, out.hi};

  BiSequence y_rho = BiSequence::iid_exponential(seed.derived(streams::boundary_j), ywin, rho);
  BiSequence y_lam =
      BiSequence::iid_exponential(seed.derived(streams::boundary_j).derived(2), ywin, lambda);
  BiSequence cur_rho = slice_to(y_rho, {L0 + m0, out.hi});
  BiSequence cur_lam = depart(y_lam, y_rho, {L0 + m0, out.hi}).departures;
  for (Coord c = 1; c <= k; ++c) {
    const IndexRange o{L0 + m0 + c * mcol, out.hi};
    cur_rho = advance_column(f, base, c, cur_rho, o).departures;
    cur_lam = advance_column(f, base, c, cur_lam, o).departures;
  }
  return {slice_to(cur_rho, out), slice_to(cur_lam, out)};
}

}  // namespace cgm
