#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "cgm/lattice.hpp"

namespace cgm {

struct McSummary {
  long long n{0};
  double mean{0};
  double se{0};
  double ci_lo{0}, ci_hi{0};
};

inline McSummary summarize(const std::vector<double>& x) {
  require(!x.empty(), "summarize: empty sample");
  McSummary s;
  s.n = static_cast<long long>(x.size());
  double m = 0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  double var = 0;
  for (double v : x) var += (v - m) * (v - m);
  var = x.size() > 1 ? var / static_cast<double>(x.size() - 1) : 0.0;
  s.mean = m;
  s.se = std::sqrt(var / static_cast<double>(x.size()));
  s.ci_lo = m - 1.96 * s.se;
  s.ci_hi = m + 1.96 * s.se;
  return s;
}

inline double median(std::vector<double> v) {
  require(!v.empty(), "median: empty sample");
  const std::size_t k = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
  if (v.size() % 2 == 1) return v[k];
  const double hi = v[k];
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k - 1), v.end());
  return 0.5 * (v[k - 1] + hi);
}

// least-squares line fit
struct TailFit {
  std::vector<double> x, y;  // the fitted points (already log-scale for log-log fits)
  double slope{0}, intercept{0}, r_squared{0};
};

inline TailFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, "fit_line: need >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  TailFit f;
  f.x = x;
  f.y = y;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / n;
  const double ss_tot = syy - sy * sy / n;
  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
  }
  f.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

inline TailFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size(), "fit_loglog: size mismatch");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(x[i] > 0, "fit_loglog: x must be positive");
    if (y[i] > 0) {  // zero estimates carry no log-scale information
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  return fit_line(lx, ly);
}

// error from one replica of a parallel experiment, carrying its index
struct ReplicaError : std::runtime_error {
  long long replica;
  ReplicaError(long long r, const std::string& what)
      : std::runtime_error("replica " + std::to_string(r) + ": " + what), replica(r) {}
};

// replica-parallel loop; body(i) must write only replica-local state, results
// keyed by index so the outcome is independent of scheduling.  The failure
// with the smallest replica index wins, so errors are deterministic too.
template <class Fn>
void parallel_for(long long n, int threads, Fn&& body) {
  require(n >= 0, "parallel_for: negative count");
  if (threads <= 1 || n <= 1) {
    for (long long i = 0; i < n; ++i) {
      try {
        body(i);
      } catch (const std::exception& e) {
        throw ReplicaError(i, e.what());
      }
    }
    return;
  }
  const int t = static_cast<int>(std::min<long long>(threads, n));
  std::atomic<long long> next{0};
  std::mutex err_mu;
  long long err_at = -1;
  std::string err_what;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(t));
  for (int w = 0; w < t; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const long long i = next.fetch_add(1);
        if (i >= n) return;
        try {
          body(i);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lk(err_mu);
          if (err_at < 0 || i < err_at) {
            err_at = i;
            err_what = e.what();
          }
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err_at >= 0) throw ReplicaError(err_at, err_what);
}

template <class Fn>
std::vector<double> run_replicas(long long n, int threads, Fn&& f) {
  std::vector<double> out(static_cast<std::size_t>(n));
  parallel_for(n, threads, [&](long long i) { out[static_cast<std::size_t>(i)] = f(i); });
  return out;
}

}  // namespace cgm
