#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <vector>

#include "cgm/lattice.hpp"

namespace cgm {

template <class F>
concept WeightSource = requires(const F f, Point p) {
  { f(p) } -> std::convertible_to<double>;
};

// G values over a lattice rectangle, indexed from the southwest corner
struct ValueTable {
  Point lo{};
  std::size_t w{0}, h{0};
  std::vector<double> v;

  ValueTable() = default;
  ValueTable(Point lo_, std::size_t w_, std::size_t h_) : lo(lo_), w(w_), h(h_), v(w_ * h_) {}

  double& at(std::size_t i, std::size_t j) { return v[j * w + i]; }
  double at(std::size_t i, std::size_t j) const { return v[j * w + i]; }
  double at_point(Point p) const {
    return at(static_cast<std::size_t>(p.x1 - lo.x1), static_cast<std::size_t>(p.x2 - lo.x2));
  }
  bool contains(Point p) const {
    return p.x1 >= lo.x1 && p.x2 >= lo.x2 && p.x1 < lo.x1 + static_cast<Coord>(w) &&
           p.x2 < lo.x2 + static_cast<Coord>(h);
  }
};

struct UpRightPath {
  std::vector<Point> pts;

  Point start() const { return pts.front(); }
  Point end() const { return pts.back(); }
  bool visits(Point p) const {
    return std::find(pts.begin(), pts.end(), p) != pts.end();
  }
};

// G_{u,·} over [u, y]; recursion G_x = max(G_{x-e1}, G_{x-e2}) + w_x with both
// endpoints included
template <WeightSource F>
ValueTable forward_table(const F& f, Point u, Point y) {
  require(leq(u, y), "lpp: source must be <= target coordinatewise");
  ValueTable t(u, static_cast<std::size_t>(y.x1 - u.x1 + 1),
               static_cast<std::size_t>(y.x2 - u.x2 + 1));
  double acc = 0.0;
  for (std::size_t i = 0; i < t.w; ++i) {
    acc += f({u.x1 + static_cast<Coord>(i), u.x2});
    t.at(i, 0) = acc;
  }
  for (std::size_t j = 1; j < t.h; ++j) {
    Coord xj = u.x2 + static_cast<Coord>(j);
    t.at(0, j) = t.at(0, j - 1) + f({u.x1, xj});
    for (std::size_t i = 1; i < t.w; ++i)
      t.at(i, j) = std::max(t.at(i - 1, j), t.at(i, j - 1)) + f({u.x1 + static_cast<Coord>(i), xj});
  }
  return t;
}

// reversed process over [x, v]: table value at p is G-hat_{v,p} = G_{p,v}
template <WeightSource F>
ValueTable reversed_table(const F& f, Point v, Point x) {
  require(leq(x, v), "reversed lpp: target must be <= source coordinatewise");
  ValueTable t(x, static_cast<std::size_t>(v.x1 - x.x1 + 1),
               static_cast<std::size_t>(v.x2 - x.x2 + 1));
  double acc = 0.0;
  for (std::size_t k = 0; k < t.w; ++k) {
    std::size_t i = t.w - 1 - k;
    acc += f({x.x1 + static_cast<Coord>(i), v.x2});
    t.at(i, t.h - 1) = acc;
  }
  for (std::size_t k = 1; k < t.h; ++k) {
    std::size_t j = t.h - 1 - k;
    Coord xj = x.x2 + static_cast<Coord>(j);
    t.at(t.w - 1, j) = t.at(t.w - 1, j + 1) + f({v.x1, xj});
    for (std::size_t k1 = 1; k1 < t.w; ++k1) {
      std::size_t i = t.w - 1 - k1;
      t.at(i, j) = std::max(t.at(i + 1, j), t.at(i, j + 1)) + f({x.x1 + static_cast<Coord>(i), xj});
    }
  }
  return t;
}

// rolling-buffer value computation, O(width) memory
template <WeightSource F>
double lpp(const F& f, Point u, Point y) {
  require(leq(u, y), "lpp: source must be <= target coordinatewise");
  const std::size_t w = static_cast<std::size_t>(y.x1 - u.x1 + 1);
  std::vector<double> row(w);
  double acc = 0.0;
  for (std::size_t i = 0; i < w; ++i) {
    acc += f({u.x1 + static_cast<Coord>(i), u.x2});
    row[i] = acc;
  }
  for (Coord xj = u.x2 + 1; xj <= y.x2; ++xj) {
    row[0] += f({u.x1, xj});
    for (std::size_t i = 1; i < w; ++i)
      row[i] = std::max(row[i - 1], row[i]) + f({u.x1 + static_cast<Coord>(i), xj});
  }
  return row[w - 1];
}

template <WeightSource F>
double reversed_lpp(const F& f, Point v, Point x) {
  require(leq(x, v), "reversed lpp: target must be <= source coordinatewise");
  return lpp(f, x, v);
}

// backtrack from the northeast corner; float ties go to the e2-predecessor
inline UpRightPath backtrack_upright(const ValueTable& t) {
  UpRightPath p;
  std::size_t i = t.w - 1, j = t.h - 1;
  p.pts.push_back({t.lo.x1 + static_cast<Coord>(i), t.lo.x2 + static_cast<Coord>(j)});
  while (i > 0 || j > 0) {
    if (i == 0) {
      --j;
    } else if (j == 0) {
      --i;
    } else if (t.at(i, j - 1) >= t.at(i - 1, j)) {
      --j;
    } else {
      --i;
    }
    p.pts.push_back({t.lo.x1 + static_cast<Coord>(i), t.lo.x2 + static_cast<Coord>(j)});
  }
  std::reverse(p.pts.begin(), p.pts.end());
  return p;
}

template <WeightSource F>
UpRightPath geodesic(const F& f, Point u, Point y) {
  return backtrack_upright(forward_table(f, u, y));
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// test oracle: enumerate every up-right path
template <WeightSource F>
double brute_force_lpp(const F& f, Point u, Point y) {
  require(leq(u, y), "brute_force_lpp: source must be <= target");
  const Coord n = l1_norm(y - u);
  require(n <= 12, "brute_force_lpp: path length must be <= 12");
  const Coord k = (y - u).x1;
  require(binomial(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k)) <= 10000,
          "brute_force_lpp: more than 10^4 paths");
  // iterate over subsets of step positions taking e1
  std::vector<bool> is_e1(static_cast<std::size_t>(n), false);
  std::fill(is_e1.begin(), is_e1.begin() + static_cast<std::size_t>(k), true);
  std::sort(is_e1.begin(), is_e1.end());
  double best = -1e300;
  do {
    Point p = u;
    double s = f(p);
    for (Coord step = n - 1; step >= 0; --step) {
      p = p + (is_e1[static_cast<std::size_t>(step)] ? e1 : e2);
      s += f(p);
    }
    best = std::max(best, s);
  } while (std::next_permutation(is_e1.begin(), is_e1.end()));
  return best;
}

// G_{u,(m,n)} for n in [n_lo, n_hi], one sweep over the rectangle
template <WeightSource F>
std::vector<double> profile_to_column(const F& f, Point u, Coord m, Coord n_lo, Coord n_hi) {
  require(u.x1 <= m, "profile_to_column: column must be >= source column");
  require(n_lo >= u.x2, "profile_to_column: range must start at or above source row");
  require(n_lo <= n_hi, "profile_to_column: empty range");
  const std::size_t w = static_cast<std::size_t>(m - u.x1 + 1);
  std::vector<double> row(w);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_hi - n_lo + 1));
  double acc = 0.0;
  for (std::size_t i = 0; i < w; ++i) {
    acc += f({u.x1 + static_cast<Coord>(i), u.x2});
    row[i] = acc;
  }
  if (u.x2 >= n_lo) out.push_back(row[w - 1]);
  for (Coord xj = u.x2 + 1; xj <= n_hi; ++xj) {
    row[0] += f({u.x1, xj});
    for (std::size_t i = 1; i < w; ++i)
      row[i] = std::max(row[i - 1], row[i]) + f({u.x1 + static_cast<Coord>(i), xj});
    if (xj >= n_lo) out.push_back(row[w - 1]);
  }
  return out;
}

// G_{u,(m,n)} for m in [m_lo, m_hi] along the fixed row n
template <WeightSource F>
std::vector<double> profile_to_row(const F& f, Point u, Coord n, Coord m_lo, Coord m_hi) {
  require(u.x2 <= n, "profile_to_row: row must be >= source row");
  require(m_lo >= u.x1, "profile_to_row: range must start at or right of source column");
  require(m_lo <= m_hi, "profile_to_row: empty range");
  const std::size_t h = static_cast<std::size_t>(n - u.x2 + 1);
  std::vector<double> col(h);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(m_hi - m_lo + 1));
  double acc = 0.0;
  for (std::size_t j = 0; j < h; ++j) {
    acc += f({u.x1, u.x2 + static_cast<Coord>(j)});
    col[j] = acc;
  }
  if (u.x1 >= m_lo) out.push_back(col[h - 1]);
  for (Coord xi = u.x1 + 1; xi <= m_hi; ++xi) {
    col[0] += f({xi, u.x2});
    for (std::size_t j = 1; j < h; ++j)
      col[j] = std::max(col[j - 1], col[j]) + f({xi, u.x2 + static_cast<Coord>(j)});
    if (xi >= m_lo) out.push_back(col[h - 1]);
  }
  return out;
}

// G-hat_{v,(m,n)} = G_{(m,n),v} for n in [n_lo, n_hi]
template <WeightSource F>
std::vector<double> reversed_profile_to_column(const F& f, Point v, Coord m, Coord n_lo, Coord n_hi) {
  require(m <= v.x1, "reversed_profile_to_column: column must be <= source column");
  require(n_hi <= v.x2, "reversed_profile_to_column: range must end at or below source row");
  require(n_lo <= n_hi, "reversed_profile_to_column: empty range");
  const std::size_t w = static_cast<std::size_t>(v.x1 - m + 1);
  std::vector<double> row(w);
  std::vector<double> out(static_cast<std::size_t>(n_hi - n_lo + 1));
  double acc = 0.0;
  for (std::size_t k = 0; k < w; ++k) {
    acc += f({v.x1 - static_cast<Coord>(k), v.x2});
    row[w - 1 - k] = acc;
  }
  if (v.x2 <= n_hi) out[static_cast<std::size_t>(v.x2 - n_lo)] = row[0];
  for (Coord xj = v.x2 - 1; xj >= n_lo; --xj) {
    row[w - 1] += f({v.x1, xj});
    for (std::size_t k = 1; k < w; ++k) {
      std::size_t i = w - 1 - k;
      row[i] = std::max(row[i + 1], row[i]) + f({m + static_cast<Coord>(i), xj});
    }
    if (xj <= n_hi) out[static_cast<std::size_t>(xj - n_lo)] = row[0];
  }
  return out;
}

// Crossing Lemma: the four inequalities on increments from shifted base points.
// All four hold for any weights; returned in order (cr1 left, cr1 right,
// cr2 left, cr2 right).
template <WeightSource F>
std::array<bool, 4> check_crossing(const F& f, Point o, Point x, double tol = 1e-9) {
  require(leq(o + e1 + e2, x), "check_crossing: need o+e1+e2 <= x");
  const double g_o_x = lpp(f, o, x);
  const double g_o_xe1 = lpp(f, o, x + e1);
  const double g_o_xe2 = lpp(f, o, x + e2);
  const double g_oe1_x = lpp(f, o + e1, x);
  const double g_oe1_xe1 = lpp(f, o + e1, x + e1);
  const double g_oe1_xe2 = lpp(f, o + e1, x + e2);
  const double g_oe2_x = lpp(f, o + e2, x);
  const double g_oe2_xe1 = lpp(f, o + e2, x + e1);
  const double g_oe2_xe2 = lpp(f, o + e2, x + e2);
  return {
      g_oe1_xe2 - g_oe1_x <= g_o_xe2 - g_o_x + tol,
      g_o_xe2 - g_o_x <= g_oe2_xe2 - g_oe2_x + tol,
      g_oe2_xe1 - g_oe2_x <= g_o_xe1 - g_o_x + tol,
      g_o_xe1 - g_o_x <= g_oe1_xe1 - g_oe1_x + tol,
  };
}

// explicit weights on the two axes of a base point, entry k-1 sits at
// o + k*e1 (row) or o + k*e2 (col)
struct AxisWeights {
  std::vector<double> row;
  std::vector<double> col;
};

// boundary-weighted DP: corner value at o, explicit axis weights, bulk
// weights from the field
template <WeightSource F>
ValueTable axis_modified_table(const F& f, Point o, Point size, const AxisWeights& aw,
                               double corner) {
  require(size.x1 >= 0 && size.x2 >= 0, "axis_modified_table: size must be nonnegative");
  require(aw.row.size() >= static_cast<std::size_t>(size.x1) &&
              aw.col.size() >= static_cast<std::size_t>(size.x2),
          "axis_modified_table: axis arrays too short");
  ValueTable t(o, static_cast<std::size_t>(size.x1 + 1), static_cast<std::size_t>(size.x2 + 1));
  t.at(0, 0) = corner;
  for (std::size_t i = 1; i < t.w; ++i) t.at(i, 0) = t.at(i - 1, 0) + aw.row[i - 1];
  for (std::size_t j = 1; j < t.h; ++j) {
    t.at(0, j) = t.at(0, j - 1) + aw.col[j - 1];
    for (std::size_t i = 1; i < t.w; ++i)
      t.at(i, j) = std::max(t.at(i - 1, j), t.at(i, j - 1)) +
                   f({o.x1 + static_cast<Coord>(i), o.x2 + static_cast<Coord>(j)});
  }
  return t;
}

// Increment comparison lemma: raising weights on the o-row and lowering them
// on the o-column makes every horizontal increment weakly larger and every
// vertical increment weakly smaller, throughout the quadrant.
template <WeightSource F>
bool check_monotone_increments(const F& f, Point o, Point size, const AxisWeights& hi,
                               const AxisWeights& lo, double tol = 1e-9) {
  for (std::size_t i = 0; i < static_cast<std::size_t>(size.x1); ++i)
    require(hi.row[i] >= lo.row[i], "check_monotone_increments: row hypothesis violated");
  for (std::size_t j = 0; j < static_cast<std::size_t>(size.x2); ++j)
    require(hi.col[j] <= lo.col[j], "check_monotone_increments: col hypothesis violated");
  ValueTable a = axis_modified_table(f, o, size, hi, f(o));
  ValueTable b = axis_modified_table(f, o, size, lo, f(o));
  for (std::size_t j = 0; j < a.h; ++j)
    for (std::size_t i = 1; i < a.w; ++i)
      if (a.at(i, j) - a.at(i - 1, j) < b.at(i, j) - b.at(i - 1, j) - tol) return false;
  for (std::size_t j = 1; j < a.h; ++j)
    for (std::size_t i = 0; i < a.w; ++i)
      if (a.at(i, j) - a.at(i, j - 1) > b.at(i, j) - b.at(i, j - 1) + tol) return false;
  return true;
}

}  // namespace cgm
