#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "cgm/lpp.hpp"
#include "cgm/stationary.hpp"

namespace cgm {

// southwest and northeast boundary arcs of the square [-N,N]^2, slopes
// restricted to [eps, 1/eps]
struct BoundaryArcs {
  Coord N{0};
  double epsilon{0};
  std::vector<Point> sw, ne;
};

inline BoundaryArcs boundary_arcs(Coord N, double epsilon) {
  require(N >= 1 && epsilon > 0, "boundary_arcs: need N >= 1 and epsilon > 0");
  const Coord c = static_cast<Coord>(std::ceil(epsilon * static_cast<double>(N)));
  require(std::floor(epsilon * static_cast<double>(N)) >= 1.0, "boundary_arcs: need eps*N >= 1");
  BoundaryArcs a{N, epsilon, {}, {}};
  for (Coord j = -N; j <= -c; ++j) a.sw.push_back({-N, j});
  for (Coord i = -N + 1; i <= -c; ++i) a.sw.push_back({i, -N});
  for (Point p : a.sw) a.ne.push_back(-p);
  return a;
}

// 0 lies on the geodesic from u to v iff the best path through the origin
// attains the full passage time (vertex 0 counted once)
template <WeightSource F>
bool origin_on_geodesic(const F& f, Point u, Point v, double rel_tol = 1e-9) {
  require(leq(u, Point{0, 0}) && leq(Point{0, 0}, v), "origin_on_geodesic: need u <= 0 <= v");
  const double through = lpp(f, u, {0, 0}) + lpp(f, {0, 0}, v) - f({0, 0});
  const double total = lpp(f, u, v);
  return total - through <= rel_tol * std::max(1.0, std::abs(total));
}

// two-sided walk S_n built from the difference of vertical increments of the
// forward profile at column 0 and the reversed profile at column 1;
// its argmax is the height at which the geodesic crosses between the columns
struct CrossingWalk {
  Point u{}, v{};
  Coord n_lo{0}, n_hi{0};
  std::vector<double> s;  // S_n at index n - n_lo
  Coord argmax{0};
  double max_value{0};

  double at(Coord n) const { return s[static_cast<std::size_t>(n - n_lo)]; }
};

template <WeightSource F>
CrossingWalk crossing_walk(const F& f, Point u, Point v, Coord n_lo, Coord n_hi) {
  require(u.x1 <= 0 && 0 < v.x1, "crossing_walk: need u1 <= 0 < v1");
  require(u.x2 <= 0 && 0 <= v.x2, "crossing_walk: need u2 <= 0 <= v2 for the anchor");
  require(n_lo >= u.x2 && n_hi <= v.x2 && n_lo <= n_hi,
          "crossing_walk: range must lie within [u2, v2]");
  const Coord lo = std::min<Coord>(n_lo, 0), hi = std::max<Coord>(n_hi, 0);
  std::vector<double> A = profile_to_column(f, u, 0, lo, hi);
  std::vector<double> B = reversed_profile_to_column(f, v, 1, lo, hi);
  const double anchor = A[static_cast<std::size_t>(-lo)] + B[static_cast<std::size_t>(-lo)];
  CrossingWalk w{u, v, n_lo, n_hi, {}, n_lo, -1e300};
  w.s.resize(static_cast<std::size_t>(n_hi - n_lo + 1));
  for (Coord n = n_lo; n <= n_hi; ++n) {
    const std::size_t k = static_cast<std::size_t>(n - lo);
    const double sn = A[k] + B[k] - anchor;
    w.s[static_cast<std::size_t>(n - n_lo)] = sn;
    if (sn > w.max_value) {
      w.max_value = sn;
      w.argmax = n;
    }
  }
  return w;
}

// ---- the W event: some geodesic between the two arcs passes through 0

struct DetectResult {
  bool found{false};
  Point u{}, v{};
};

namespace detail {

// forward profiles G_{u,(0,.)} for each arc point u, and reversed profiles
// G-hat_{v,(1,.)} for each v, shared across all pair scans
template <WeightSource F>
struct ArcProfiles {
  BoundaryArcs arcs;
  std::vector<std::vector<double>> A;  // A[iu][n - u2] over [u2, N]
  std::vector<std::vector<double>> B;  // B[iv][n + N] over [-N, v2]

  ArcProfiles(const F& f, Coord N, double epsilon) : arcs(boundary_arcs(N, epsilon)) {
    A.reserve(arcs.sw.size());
    for (Point u : arcs.sw) A.push_back(profile_to_column(f, u, 0, u.x2, N));
    B.reserve(arcs.ne.size());
    for (Point v : arcs.ne) B.push_back(reversed_profile_to_column(f, v, 1, -N, v.x2));
  }

  // G_{u,v} via the column decomposition at the crossing between columns 0 and 1
  double pair_value(std::size_t iu, std::size_t iv) const {
    const Point u = arcs.sw[iu], v = arcs.ne[iv];
    double best = -1e300;
    for (Coord n = u.x2; n <= v.x2; ++n) {
      const double val = A[iu][static_cast<std::size_t>(n - u.x2)] +
                         B[iv][static_cast<std::size_t>(n + arcs.N)];
      if (val > best) best = val;
    }
    return best;
  }

  // argmax height of the pair walk; the geodesic uses edge ((0,j),(1,j)) at j = argmax
  Coord pair_argmax(std::size_t iu, std::size_t iv) const {
    const Point u = arcs.sw[iu], v = arcs.ne[iv];
    double best = -1e300;
    Coord arg = u.x2;
    for (Coord n = u.x2; n <= v.x2; ++n) {
      const double val = A[iu][static_cast<std::size_t>(n - u.x2)] +
                         B[iv][static_cast<std::size_t>(n + arcs.N)];
      if (val > best) {
        best = val;
        arg = n;
      }
    }
    return arg;
  }
};

}  // namespace detail

template <WeightSource F>
DetectResult detect_W(const F& f, Coord N, double epsilon, double rel_tol = 1e-9) {
  detail::ArcProfiles<F> prof(f, N, epsilon);
  const auto& arcs = prof.arcs;
  ValueTable g0 = forward_table(f, {0, 0}, {N, N});
  const double w0 = f({0, 0});
  for (std::size_t iu = 0; iu < arcs.sw.size(); ++iu) {
    const double g_u0 = prof.A[iu][static_cast<std::size_t>(-arcs.sw[iu].x2)];
    for (std::size_t iv = 0; iv < arcs.ne.size(); ++iv) {
      const double total = prof.pair_value(iu, iv);
      const double through = g_u0 + g0.at_point(arcs.ne[iv]) - w0;
      if (total - through <= rel_tol * std::max(1.0, std::abs(total)))
        return {true, arcs.sw[iu], arcs.ne[iv]};
    }
  }
  return {false, {}, {}};
}

// exhaustive oracle for tiny N: full DP + path membership for every pair
template <WeightSource F>
DetectResult detect_W_oracle(const F& f, Coord N, double epsilon) {
  BoundaryArcs arcs = boundary_arcs(N, epsilon);
  for (Point u : arcs.sw)
    for (Point v : arcs.ne)
      if (geodesic(f, u, v).visits({0, 0})) return {true, u, v};
  return {false, {}, {}};
}

// ---- coarse-grained blocks on the arcs

struct CoarseBlock {
  Point o{};
  Point corner{};              // o_c (minimal) on the sw side, o-hat_c (maximal) on ne
  std::vector<Point> members;  // I_{o,d} resp. I-hat_{o-hat,d}
};

inline CoarseBlock sw_block(const BoundaryArcs& arcs, Point o, double d1) {
  const double radius = 0.5 * d1 * std::pow(static_cast<double>(arcs.N), 2.0 / 3.0);
  CoarseBlock b{o, o, {}};
  for (Point u : arcs.sw)
    if (static_cast<double>(l1_norm(u - o)) <= radius) b.members.push_back(u);
  require(!b.members.empty(), "sw_block: block has no members");
  Point cmin = b.members.front();
  for (Point u : b.members) cmin = {std::min(cmin.x1, u.x1), std::min(cmin.x2, u.x2)};
  bool present = false;
  for (Point u : b.members) present = present || (u == cmin);
  require(present, "sw_block: no unique minimal member");
  b.corner = cmin;
  return b;
}

inline CoarseBlock ne_block(const BoundaryArcs& arcs, Point ohat, double d2) {
  const double radius = 0.5 * d2 * std::pow(static_cast<double>(arcs.N), 2.0 / 3.0);
  CoarseBlock b{ohat, ohat, {}};
  for (Point v : arcs.ne)
    if (static_cast<double>(l1_norm(v - ohat)) <= radius) b.members.push_back(v);
  require(!b.members.empty(), "ne_block: block has no members");
  Point cmax = b.members.front();
  for (Point v : b.members) cmax = {std::max(cmax.x1, v.x1), std::max(cmax.x2, v.x2)};
  bool present = false;
  for (Point v : b.members) present = present || (v == cmax);
  require(present, "ne_block: no unique maximal member");
  b.corner = cmax;
  return b;
}

inline std::vector<Point> ne_far_set(const BoundaryArcs& arcs, Point ohat, double d2) {
  const double radius = 0.5 * d2 * std::pow(static_cast<double>(arcs.N), 2.0 / 3.0);
  std::vector<Point> far;
  for (Point v : arcs.ne)
    if (static_cast<double>(l1_norm(v - ohat)) > radius) far.push_back(v);
  return far;
}

// one replica of the block-connection events: does any geodesic from the
// block around o to the opposite block (resp. far set) use edge ((0,0),(1,0))?
struct BlockConnectionSample {
  bool opposite{false};
  bool far{false};
};

template <WeightSource F>
BlockConnectionSample block_connection_sample(const F& f, Coord N, double epsilon, double d1,
                                              double d2, Point o) {
  BoundaryArcs arcs = boundary_arcs(N, epsilon);
  CoarseBlock blk = sw_block(arcs, o, d1);
  CoarseBlock opp = ne_block(arcs, -o, d2);
  std::vector<Point> far = ne_far_set(arcs, -o, d2);

  std::vector<std::vector<double>> A;
  A.reserve(blk.members.size());
  for (Point u : blk.members) A.push_back(profile_to_column(f, u, 0, u.x2, N));

  auto scan = [&](const std::vector<Point>& vs) {
    for (Point v : vs) {
      std::vector<double> B = reversed_profile_to_column(f, v, 1, -N, v.x2);
      for (std::size_t iu = 0; iu < blk.members.size(); ++iu) {
        const Point u = blk.members[iu];
        double best = -1e300;
        Coord arg = u.x2;
        for (Coord n = u.x2; n <= v.x2; ++n) {
          const double val =
              A[iu][static_cast<std::size_t>(n - u.x2)] + B[static_cast<std::size_t>(n + N)];
          if (val > best) {
            best = val;
            arg = n;
          }
        }
        if (arg == 0) return true;
      }
    }
    return false;
  };
  return {scan(opp.members), scan(far)};
}

// ---- sandwich event A_{o,d} and the increment ordering it forces

struct SandwichResult {
  bool event_occurred{false};
  bool implication_held{true};
  long long z_down{0}, z_up{0};
};

// On A_{o,d}, the bulk increments J^u on the y-axis segment are sandwiched
// between the stationary increments of the two tilted densities.  Boundaries
// use the scaled-from-bulk coupling so that omega <= I, J pathwise.
template <WeightSource F>
SandwichResult sandwich_event_check(const F& f, Coord N, double epsilon, Point o, double r,
                                    double d1, double tol = 1e-9) {
  BoundaryArcs arcs = boundary_arcs(N, epsilon);
  CoarseBlock blk = sw_block(arcs, o, d1);
  const Point oc = blk.corner;
  const Coord ni23 = static_cast<Coord>(std::ceil(std::pow(static_cast<double>(N), 2.0 / 3.0)));
  for (Point u : blk.members)
    require(u.x2 <= -ni23 - 1, "sandwich_event_check: increments not well-defined for block");

  const double rho = boundary_point_to_rho(oc);
  const double shift = r * std::pow(static_cast<double>(N), -1.0 / 3.0);
  const double rho_dn = rho - shift, rho_up = rho + shift;
  require(rho_dn > 0 && rho_up < 1, "sandwich_event_check: tilted densities outside (0,1)");

  const Coord ni = -oc.x1, nj = ni23 - oc.x2;
  StationaryBoundary b_dn = make_scaled_boundary(f, oc, rho_dn, ni, nj);
  StationaryBoundary b_up = make_scaled_boundary(f, oc, rho_up, ni, nj);

  const double d1n23 = d1 * std::pow(static_cast<double>(N), 2.0 / 3.0);
  const long long z_dn = boundary_exit(f, oc, b_dn.i_prefix, b_dn.j_prefix, {0, -ni23}).z;
  const long long z_up = boundary_exit(f, oc, b_up.i_prefix, b_up.j_prefix, {0, ni23}).z;

  SandwichResult res;
  res.z_down = z_dn;
  res.z_up = z_up;
  res.event_occurred =
      static_cast<double>(z_dn) < -d1n23 && static_cast<double>(z_up) > d1n23;
  if (!res.event_occurred) return res;

  std::vector<double> g_dn = stationary_profile_to_column(f, b_dn, 0, -ni23 - 1, ni23);
  std::vector<double> g_up = stationary_profile_to_column(f, b_up, 0, -ni23 - 1, ni23);
  for (Point u : blk.members) {
    std::vector<double> gu = profile_to_column(f, u, 0, -ni23 - 1, ni23);
    for (std::size_t k = 1; k < gu.size(); ++k) {
      const double ju = gu[k] - gu[k - 1];
      const double jup = g_up[k] - g_up[k - 1];
      const double jdn = g_dn[k] - g_dn[k - 1];
      if (!(jup <= ju + tol && ju <= jdn + tol)) {
        res.implication_held = false;
        return res;
      }
    }
  }
  return res;
}

// Mirror image on the northeast side: on B_{o-hat,d} the reversed bulk
// increments on the column-1 edges are sandwiched between the two tilted
// reversed stationary processes based at the block's maximal corner.
template <WeightSource F>
SandwichResult reversed_sandwich_event_check(const F& f, Coord N, double epsilon, Point ohat,
                                             double r, double d2, double tol = 1e-9) {
  BoundaryArcs arcs = boundary_arcs(N, epsilon);
  CoarseBlock blk = ne_block(arcs, ohat, d2);
  const Point oc = blk.corner;
  const Coord ni23 = static_cast<Coord>(std::ceil(std::pow(static_cast<double>(N), 2.0 / 3.0)));
  for (Point v : blk.members)
    require(v.x2 >= ni23 + 1 && v.x1 >= 1,
            "reversed_sandwich_event_check: increments not well-defined for block");

  const double rho = boundary_point_to_rho(-oc);
  const double shift = r * std::pow(static_cast<double>(N), -1.0 / 3.0);
  const double rho_dn = rho - shift, rho_up = rho + shift;
  require(rho_dn > 0 && rho_up < 1,
          "reversed_sandwich_event_check: tilted densities outside (0,1)");

  const Coord ni = oc.x1 - 1, nj = oc.x2 + ni23 + 1;
  ReversedBoundary b_dn = make_scaled_reversed_boundary(f, oc, rho_dn, ni, nj);
  ReversedBoundary b_up = make_scaled_reversed_boundary(f, oc, rho_up, ni, nj);

  const double d2n23 = d2 * std::pow(static_cast<double>(N), 2.0 / 3.0);
  const long long z_dn = reversed_boundary_exit(f, b_dn, {1, ni23}).z;
  const long long z_up = reversed_boundary_exit(f, b_up, {1, -ni23}).z;

  SandwichResult res;
  res.z_down = z_dn;
  res.z_up = z_up;
  res.event_occurred =
      static_cast<double>(z_dn) < -d2n23 && static_cast<double>(z_up) > d2n23;
  if (!res.event_occurred) return res;

  std::vector<double> g_dn = reversed_stationary_profile_to_column(f, b_dn, 1, -ni23 - 1, ni23);
  std::vector<double> g_up = reversed_stationary_profile_to_column(f, b_up, 1, -ni23 - 1, ni23);
  for (Point v : blk.members) {
    std::vector<double> gv = reversed_profile_to_column(f, v, 1, -ni23 - 1, ni23);
    // increments run downward: J-hat_j = G-hat(1, j-1) - G-hat(1, j)
    for (std::size_t k = 1; k < gv.size(); ++k) {
      const double jv = gv[k - 1] - gv[k];
      const double jup = g_up[k - 1] - g_up[k];
      const double jdn = g_dn[k - 1] - g_dn[k];
      if (!(jup <= jv + tol && jv <= jdn + tol)) {
        res.implication_held = false;
        return res;
      }
    }
  }
  return res;
}

// ---- cylinder intersection and chord deviation

// heights at which the geodesic visits column m (contiguous run)
inline std::pair<Coord, Coord> heights_at_column(const UpRightPath& p, Coord m) {
  Coord lo = 0, hi = -1;
  bool seen = false;
  for (Point q : p.pts)
    if (q.x1 == m) {
      if (!seen) {
        lo = hi = q.x2;
        seen = true;
      } else {
        lo = std::min(lo, q.x2);
        hi = std::max(hi, q.x2);
      }
    }
  require(seen, "heights_at_column: geodesic does not visit the column");
  return {lo, hi};
}

template <WeightSource F>
bool cylinder_intersect(const F& f, double xi1, Coord N, Coord i, double r) {
  require(xi1 > 0 && xi1 < 1, "cylinder_intersect: xi1 must be in (0,1)");
  const Point p{static_cast<Coord>(std::floor(static_cast<double>(N) * xi1)),
                static_cast<Coord>(std::floor(static_cast<double>(N) * (1 - xi1)))};
  require(i >= 0 && i <= p.x1, "cylinder_intersect: column outside [0, N*xi1]");
  UpRightPath geo = geodesic(f, {0, 0}, p);
  auto [ylo, yhi] = heights_at_column(geo, i);
  const double center = static_cast<double>(i) * (1 - xi1) / xi1;
  const double hw = r * std::pow(static_cast<double>(N), 2.0 / 3.0);
  const Coord band_lo = static_cast<Coord>(std::ceil(center - hw));
  const Coord band_hi = static_cast<Coord>(std::floor(center + hw));
  return std::max(ylo, band_lo) <= std::min(yhi, band_hi);
}

// true iff every visit of the geodesic to column m is farther than t from the
// chord through u and v
template <WeightSource F>
bool geodesic_deviation(const F& f, Point u, Point v, Coord m, double t) {
  require(u.x1 <= m && m <= v.x1, "geodesic_deviation: column outside [u1, v1]");
  require(v.x1 > u.x1, "geodesic_deviation: chord needs v1 > u1");
  UpRightPath geo = geodesic(f, u, v);
  auto [ylo, yhi] = heights_at_column(geo, m);
  const double chord = static_cast<double>(u.x2) +
                       static_cast<double>(v.x2 - u.x2) / static_cast<double>(v.x1 - u.x1) *
                           static_cast<double>(m - u.x1);
  double dist = 0.0;
  if (chord < static_cast<double>(ylo)) dist = static_cast<double>(ylo) - chord;
  else if (chord > static_cast<double>(yhi)) dist = chord - static_cast<double>(yhi);
  return dist > t;
}

}  // namespace cgm
