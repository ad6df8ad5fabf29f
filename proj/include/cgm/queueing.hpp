#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cgm/rng.hpp"

namespace cgm {

struct IndexRange {
  long long lo{0};
  long long hi{0};

  long long size() const { return hi - lo + 1; }
  friend bool operator==(IndexRange a, IndexRange b) { return a.lo == b.lo && a.hi == b.hi; }
};

// finite window of a two-sided sequence, values indexed by j in [lo, hi]
class BiSequence {
 public:
  BiSequence() = default;
  BiSequence(long long lo, std::vector<double> values) : lo_(lo), v_(std::move(values)) {}

  static BiSequence constant(IndexRange r, double value) {
    return {r.lo, std::vector<double>(static_cast<std::size_t>(r.size()), value)};
  }
  static BiSequence iid_exponential(const Seed& s, IndexRange r, double rate) {
    std::vector<double> v(static_cast<std::size_t>(r.size()));
    for (long long j = r.lo; j <= r.hi; ++j)
      v[static_cast<std::size_t>(j - r.lo)] = exp_at(s, j, rate);
    return {r.lo, std::move(v)};
  }

  long long lo() const { return lo_; }
  long long hi() const { return lo_ + static_cast<long long>(v_.size()) - 1; }
  IndexRange window() const { return {lo(), hi()}; }
  bool covers(IndexRange r) const { return lo() <= r.lo && r.hi <= hi(); }

  double at(long long j) const {
    require(j >= lo() && j <= hi(), "BiSequence: index outside window");
    return v_[static_cast<std::size_t>(j - lo_)];
  }
  double& at(long long j) {
    require(j >= lo() && j <= hi(), "BiSequence: index outside window");
    return v_[static_cast<std::size_t>(j - lo_)];
  }
  const std::vector<double>& values() const { return v_; }

 private:
  long long lo_{0};
  std::vector<double> v_;
};

inline BiSequence slice_to(const BiSequence& x, IndexRange r) {
  require(x.covers(r), "slice_to: range outside window");
  std::vector<double> v(static_cast<std::size_t>(r.size()));
  for (long long j = r.lo; j <= r.hi; ++j) v[static_cast<std::size_t>(j - r.lo)] = x.at(j);
  return {r.lo, std::move(v)};
}

struct QueueOutputs {
  BiSequence departures;     // d_j
  BiSequence sojourns;       // t_j
  BiSequence dual_services;  // s-check_j = a_j ^ t_{j-1}
};

struct WindowTooShort : std::runtime_error {
  explicit WindowTooShort(const std::string& what) : std::runtime_error(what) {}
};
struct DriftViolation : std::runtime_error {
  explicit DriftViolation(const std::string& what) : std::runtime_error(what) {}
};

// burn-in margin for rate-alpha arrivals through rate-sigma services
inline long long default_burnin_margin(double alpha, double sigma) {
  require(sigma > alpha && alpha > 0, "burnin margin: need sigma > alpha > 0");
  return static_cast<long long>(std::ceil(40.0 * sigma / (sigma - alpha)));
}

// Departure operator on a finite window.  The sup
//   Gt_j = sup_{k <= j} { G_k + sum_{i=k}^{j} s_i }
// is carried in the local form t_j = Gt_j - G_j = max(t_{j-1} - a_j, 0) + s_j,
// so no anchor ever enters the arithmetic, and outputs are bitwise
// independent of the window as soon as the sup restarts inside it.  From t:
// d_j = t_j - t_{j-1} + a_j, sc_j = a_j ^ t_{j-1}.  The sup is truncated at
// the window edge; if the argmax for any value a requested output depends on
// touches the edge, truncation would be visible and we refuse to answer:
// DriftViolation when the empirical drift over the window is not negative
// (inputs are in the wrong regime), WindowTooShort otherwise.
inline QueueOutputs depart(const BiSequence& a, const BiSequence& s, IndexRange out) {
  require(a.window() == s.window(), "depart: arrival and service windows must agree");
  require(a.covers(out), "depart: output range outside window");
  require(a.lo() < out.lo, "depart: window must extend left of the output range");

  auto throw_edge = [&](long long j) {
    double ma = 0.0, ms = 0.0;
    for (long long k = a.lo(); k <= a.hi(); ++k) {
      ma += a.at(k);
      ms += s.at(k);
    }
    if (!(ms < ma))
      throw DriftViolation("depart: empirical service mean not below arrival mean (" +
                           std::to_string(ms / static_cast<double>(a.window().size())) + " vs " +
                           std::to_string(ma / static_cast<double>(a.window().size())) + ")");
    throw WindowTooShort("depart: argmax at index " + std::to_string(j) +
                         " touches the left window edge");
  };

  const long long lo = a.lo(), hi = out.hi;
  long long arg_prev = lo;
  double t_prev = 0.0;

  std::vector<double> d, t, sc;
  d.reserve(static_cast<std::size_t>(out.size()));
  t.reserve(static_cast<std::size_t>(out.size()));
  sc.reserve(static_cast<std::size_t>(out.size()));

  for (long long j = lo; j <= hi; ++j) {
    const double aj = a.at(j);
    long long arg_j;
    double t_j;
    if (j == lo || t_prev < aj) {  // sup restarts at k = j; ties keep the older argmax
      arg_j = j;
      t_j = s.at(j);
    } else {
      arg_j = arg_prev;
      t_j = (t_prev - aj) + s.at(j);
    }
    // Gt at out.lo-1 feeds the first requested departure and dual service,
    // so its argmax must stay off the edge as well.
    if (j >= out.lo - 1 && arg_j == lo) throw_edge(j);
    if (j >= out.lo) {
      d.push_back(t_j - t_prev + aj);
      t.push_back(t_j);
      sc.push_back(std::min(aj, t_prev));
    }
    arg_prev = arg_j;
    t_prev = t_j;
  }
  return {BiSequence(out.lo, std::move(d)), BiSequence(out.lo, std::move(t)),
          BiSequence(out.lo, std::move(sc))};
}

// D(D(b,a),s) == D(D(b,R(a,s)), D(a,s)) entrywise on the range.
// Each composition stage consumes a third of the left margin.
inline bool queue_identity_check(const BiSequence& b, const BiSequence& a, const BiSequence& s,
                                 IndexRange range, double tol = 1e-9) {
  require(b.window() == a.window() && a.window() == s.window(),
          "queue_identity_check: windows must agree");
  require(b.covers(range), "queue_identity_check: range outside window");
  const long long margin = range.lo - b.lo();
  require(margin >= 3, "queue_identity_check: need margin >= 3 left of range");
  const IndexRange mid1{b.lo() + margin / 3, range.hi};
  const IndexRange mid2{b.lo() + 2 * (margin / 3), range.hi};

  QueueOutputs ba = depart(b, a, mid1);
  QueueOutputs lhs = depart(ba.departures, slice_to(s, mid1), range);

  QueueOutputs as = depart(a, s, mid1);
  QueueOutputs b_ras = depart(slice_to(b, mid1), as.dual_services, mid2);
  QueueOutputs rhs = depart(b_ras.departures, slice_to(as.departures, mid2), range);

  for (long long j = range.lo; j <= range.hi; ++j)
    if (std::abs(lhs.departures.at(j) - rhs.departures.at(j)) > tol) return false;
  return true;
}

// coupled arrival pair (a1, a2) = (b1, D(b2, b1)) with rates alpha1 > alpha2
inline std::pair<BiSequence, BiSequence> multiclass_arrivals(double alpha1, double alpha2,
                                                             const Seed& seed, IndexRange out) {
  require(alpha1 > alpha2 && alpha2 > 0, "multiclass_arrivals: need alpha1 > alpha2 > 0");
  const long long margin = default_burnin_margin(alpha2, alpha1);
  IndexRange win{out.lo - margin, out.hi};
  BiSequence b1 = BiSequence::iid_exponential(seed.derived(streams::arrivals), win, alpha1);
  BiSequence b2 = BiSequence::iid_exponential(seed.derived(streams::arrivals2), win, alpha2);
  QueueOutputs q = depart(b2, b1, out);
  return {slice_to(b1, out), std::move(q.departures)};
}

struct FixedpointStats {
  long long n{0};
  double mean_d{0}, var_d{0};
  double mean_t{0}, var_t{0};
  double mean_sv{0}, var_sv{0};
  std::array<double, 5> autocorr_d{};  // lags 1..5
};

inline double sample_mean(const std::vector<double>& x) {
  double m = 0;
  for (double v : x) m += v;
  return m / static_cast<double>(x.size());
}

inline double sample_var(const std::vector<double>& x) {
  double m = sample_mean(x), s = 0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

inline double sample_autocorr(const std::vector<double>& x, std::size_t lag) {
  double m = sample_mean(x), num = 0, den = 0;
  for (std::size_t i = 0; i < x.size(); ++i) den += (x[i] - m) * (x[i] - m);
  for (std::size_t i = lag; i < x.size(); ++i) num += (x[i] - m) * (x[i - lag] - m);
  return num / den;
}

// one long run of the queue on i.i.d. inputs; departures should be i.i.d.
// Exp(alpha), sojourns Exp(sigma-alpha), dual services Exp(sigma)
inline FixedpointStats fixedpoint_stats(double alpha, double sigma, long long n,
                                        const Seed& seed) {
  require(sigma > alpha && alpha > 0, "fixedpoint_stats: need sigma > alpha > 0");
  require(n >= 10, "fixedpoint_stats: need n >= 10");
  const long long margin = default_burnin_margin(alpha, sigma);
  IndexRange win{1 - margin, n};
  BiSequence a = BiSequence::iid_exponential(seed.derived(streams::arrivals), win, alpha);
  BiSequence s = BiSequence::iid_exponential(seed.derived(streams::services), win, sigma);
  QueueOutputs q = depart(a, s, {1, n});
  FixedpointStats st;
  st.n = n;
  st.mean_d = sample_mean(q.departures.values());
  st.var_d = sample_var(q.departures.values());
  st.mean_t = sample_mean(q.sojourns.values());
  st.var_t = sample_var(q.sojourns.values());
  st.mean_sv = sample_mean(q.dual_services.values());
  st.var_sv = sample_var(q.dual_services.values());
  for (std::size_t lag = 1; lag <= 5; ++lag)
    st.autocorr_d[lag - 1] = sample_autocorr(q.departures.values(), lag);
  return st;
}

}  // namespace cgm
