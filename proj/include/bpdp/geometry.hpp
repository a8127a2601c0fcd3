#pragma once

#include <algorithm>
#include <compare>
#include <stdexcept>
#include <string>
#include <vector>

namespace bpdp {

struct Site {
  int x;
  int y;
  friend auto operator<=>(const Site&, const Site&) = default;
};

// The lattice rectangle [a,c) x [b,d).
struct Rectangle {
  int a = 0;
  int b = 0;
  int c = 1;
  int d = 1;

  static Rectangle of_dims(int w, int h) { return checked(0, 0, w, h); }

  static Rectangle checked(int a, int b, int c, int d) {
    if (!(a < c && b < d)) throw std::invalid_argument("malformed rectangle");
    return {a, b, c, d};
  }

  int width() const { return c - a; }
  int height() const { return d - b; }
  int phi() const { return width() + height(); }
  int short_side() const { return std::min(width(), height()); }
  int long_side() const { return std::max(width(), height()); }
  long area() const { return long(width()) * height(); }
  bool valid() const { return a < c && b < d; }

  bool contains(Site s) const { return s.x >= a && s.x < c && s.y >= b && s.y < d; }
  bool contains(const Rectangle& r) const { return r.a >= a && r.c <= c && r.b >= b && r.d <= d; }

  Rectangle extended(int left, int down, int right, int up) const { return {a - left, b - down, c + right, d + up}; }

  std::vector<Site> sites() const {
    std::vector<Site> out;
    out.reserve(static_cast<std::size_t>(area()));
    for (int y = b; y < d; ++y)
      for (int x = a; x < c; ++x) out.push_back({x, y});
    return out;
  }

  friend bool operator==(const Rectangle&, const Rectangle&) = default;
};

inline Rectangle bounding(const Rectangle& r, const Rectangle& s) {
  return {std::min(r.a, s.a), std::min(r.b, s.b), std::max(r.c, s.c), std::max(r.d, s.d)};
}

// Graph distance between the nearest sites of two rectangles.
inline int distance(const Rectangle& r, const Rectangle& s) {
  const int dx = std::max({0, s.a - (r.c - 1), r.a - (s.c - 1)});
  const int dy = std::max({0, s.b - (r.d - 1), r.b - (s.d - 1)});
  return dx + dy;
}

inline std::string to_string(const Rectangle& r) {
  return "R(" + std::to_string(r.a) + "," + std::to_string(r.b) + ";" + std::to_string(r.c) + "," +
         std::to_string(r.d) + ")";
}

}  // namespace bpdp
