#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace cgm {

using Coord = std::int64_t;

struct Point {
  Coord x1{0};
  Coord x2{0};

  friend Point operator+(Point a, Point b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
  friend Point operator-(Point a, Point b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
  friend Point operator-(Point a) { return {-a.x1, -a.x2}; }
  friend Point operator*(Coord k, Point a) { return {k * a.x1, k * a.x2}; }
  friend bool operator==(Point a, Point b) { return a.x1 == b.x1 && a.x2 == b.x2; }
  friend bool operator!=(Point a, Point b) { return !(a == b); }
};

inline constexpr Point e1{1, 0};
inline constexpr Point e2{0, 1};

// coordinatewise partial order
inline bool leq(Point a, Point b) { return a.x1 <= b.x1 && a.x2 <= b.x2; }
inline bool lt(Point a, Point b) { return a.x1 < b.x1 && a.x2 < b.x2; }

inline Coord l1_norm(Point a) { return std::llabs(a.x1) + std::llabs(a.x2); }

inline std::string to_string(Point p) {
  return "(" + std::to_string(p.x1) + "," + std::to_string(p.x2) + ")";
}

inline void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace cgm
