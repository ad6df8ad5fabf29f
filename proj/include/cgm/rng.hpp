#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "cgm/lattice.hpp"

namespace cgm {

// Counter-based generation: every draw is a pure function of
// (seed value, stream id, counter), so any vertex or array entry can be
// evaluated on demand, in any order, from any thread.

inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 33;
  z *= 0xff51afd7ed558ccdULL;
  z ^= z >> 33;
  z *= 0xc4ceb9fe1a85ec53ULL;
  z ^= z >> 33;
  return z;
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return mix64((h + 0x9e3779b97f4a7c15ULL) ^ v);
}

inline std::uint64_t zigzag(std::int64_t x) {
  return (static_cast<std::uint64_t>(x) << 1) ^ static_cast<std::uint64_t>(x >> 63);
}

struct Seed {
  std::uint64_t value{0};
  std::uint64_t stream{0};

  Seed derived(std::uint64_t substream) const { return {value, hash_combine(stream, substream)}; }
  Seed replica(std::uint64_t r) const { return derived(hash_combine(0x7265706cULL, r)); }

  friend bool operator==(const Seed& a, const Seed& b) {
    return a.value == b.value && a.stream == b.stream;
  }
};

// substream tags used by the library
namespace streams {
inline constexpr std::uint64_t bulk = 0x01;
inline constexpr std::uint64_t boundary_i = 0x02;
inline constexpr std::uint64_t boundary_j = 0x03;
inline constexpr std::uint64_t arrivals = 0x04;
inline constexpr std::uint64_t services = 0x05;
inline constexpr std::uint64_t arrivals2 = 0x06;
}  // namespace streams

inline double uniform01_from_hash(std::uint64_t h) {
  // strictly inside (0,1); keeps -log finite
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

inline double exp_from_hash(std::uint64_t h, double rate) {
  return -std::log(uniform01_from_hash(h)) / rate;
}

inline std::uint64_t hash_at(const Seed& s, Point p) {
  std::uint64_t h = mix64(s.value);
  h = hash_combine(h, s.stream);
  h = hash_combine(h, zigzag(p.x1));
  h = hash_combine(h, zigzag(p.x2));
  return h;
}

inline std::uint64_t hash_at(const Seed& s, std::int64_t i) {
  std::uint64_t h = mix64(s.value ^ 0x1d5a86c3a5e1f0b9ULL);
  h = hash_combine(h, s.stream);
  h = hash_combine(h, zigzag(i));
  return h;
}

inline double exp_at(const Seed& s, std::int64_t i, double rate) {
  return exp_from_hash(hash_at(s, i), rate);
}

// i.i.d. Exp(rate) vertex weights, the bulk environment
struct WeightField {
  Seed seed{};
  double rate{1.0};
  bool reflected{false};

  double operator()(Point p) const {
    return exp_from_hash(hash_at(seed, reflected ? -p : p), rate);
  }
};

inline WeightField reflect(WeightField f) {
  f.reflected = !f.reflected;
  return f;
}

// dense rectangle of weights; used to pin synthetic instances in tests and
// to avoid re-hashing in replica-heavy experiments
struct TableField {
  Point lo{};
  std::size_t w{0}, h{0};
  std::vector<double> v;

  TableField() = default;
  TableField(Point lo_, std::size_t w_, std::size_t h_, double fill = 0.0)
      : lo(lo_), w(w_), h(h_), v(w_ * h_, fill) {}

  double& at(Point p) {
    return v[static_cast<std::size_t>(p.x2 - lo.x2) * w + static_cast<std::size_t>(p.x1 - lo.x1)];
  }
  double operator()(Point p) const {
    return v[static_cast<std::size_t>(p.x2 - lo.x2) * w + static_cast<std::size_t>(p.x1 - lo.x1)];
  }
  bool contains(Point p) const {
    return p.x1 >= lo.x1 && p.x2 >= lo.x2 && p.x1 < lo.x1 + static_cast<Coord>(w) &&
           p.x2 < lo.x2 + static_cast<Coord>(h);
  }
};

template <class F>
TableField materialize(const F& f, Point lo, Point hi) {
  require(leq(lo, hi), "materialize: lo must be <= hi");
  TableField t(lo, static_cast<std::size_t>(hi.x1 - lo.x1 + 1),
               static_cast<std::size_t>(hi.x2 - lo.x2 + 1));
  for (Coord j = lo.x2; j <= hi.x2; ++j)
    for (Coord i = lo.x1; i <= hi.x1; ++i) t.at({i, j}) = f({i, j});
  return t;
}

struct ConstantField {
  double value{1.0};
  double operator()(Point) const { return value; }
};

}  // namespace cgm
