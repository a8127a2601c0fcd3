#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bpdp/numerics.hpp"
#include "bpdp/quadrature.hpp"
#include "bpdp/special_functions.hpp"
#include "bpdp/transitions.hpp"

namespace bpdp {

struct Point {
  double x;
  double y;
  friend bool operator==(const Point&, const Point&) = default;
};

// Piecewise-linear, coordinatewise non-decreasing path in the quarter plane.
class MonotonePath {
 public:
  MonotonePath() = default;
  explicit MonotonePath(std::vector<Point> vertices) : v_(std::move(vertices)) {
    if (v_.empty()) throw std::invalid_argument("path needs at least one vertex");
    for (std::size_t i = 0; i < v_.size(); ++i) {
      if (v_[i].x < 0.0 || v_[i].y < 0.0) throw std::invalid_argument("path leaves the quarter plane");
      if (i == 0) continue;
      if (v_[i] == v_[i - 1]) throw std::invalid_argument("consecutive path vertices coincide");
      if (v_[i].x < v_[i - 1].x || v_[i].y < v_[i - 1].y) throw std::invalid_argument("path is not monotone");
    }
  }

  // Drops repeated consecutive vertices before validating.
  static MonotonePath through(std::vector<Point> pts) {
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return MonotonePath(std::move(pts));
  }

  const std::vector<Point>& vertices() const { return v_; }
  Point front() const { return v_.front(); }
  Point back() const { return v_.back(); }

  MonotonePath scaled(double k) const {
    std::vector<Point> w = v_;
    for (auto& p : w) p = {p.x * k, p.y * k};
    return MonotonePath(std::move(w));
  }

  MonotonePath then(const MonotonePath& next) const {
    if (!(next.front() == back())) throw std::invalid_argument("paths do not join");
    std::vector<Point> w = v_;
    w.insert(w.end(), next.v_.begin() + 1, next.v_.end());
    return MonotonePath(std::move(w));
  }

  MonotonePath reflected() const {
    std::vector<Point> w = v_;
    for (auto& p : w) std::swap(p.x, p.y);
    return MonotonePath(std::move(w));
  }

 private:
  std::vector<Point> v_;
};

inline constexpr double path_quadrature_tol = 1e-13;

// Integral of k(x) dy + k(y) dx along one linear segment.
template <class K>
double segment_functional(K&& k, Point p0, Point p1) {
  const double dx = p1.x - p0.x;
  const double dy = p1.y - p0.y;
  double total = 0.0;
  if (dy > 0.0) {
    if (dx == 0.0) {
      if (p0.x == 0.0) throw std::domain_error("segment runs along an axis");
      total += dy * k(p0.x);
    } else {
      total += dy / dx * integrate(k, p0.x, p1.x, path_quadrature_tol);
    }
  }
  if (dx > 0.0) {
    if (dy == 0.0) {
      if (p0.y == 0.0) throw std::domain_error("segment runs along an axis");
      total += dx * k(p0.y);
    } else {
      total += dx / dy * integrate(k, p0.y, p1.y, path_quadrature_tol);
    }
  }
  return total;
}

template <class K>
double path_functional(K&& k, const MonotonePath& path) {
  const auto& v = path.vertices();
  double total = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) total += segment_functional(k, v[i - 1], v[i]);
  return total;
}

inline double W(const MonotonePath& path) {
  return path_functional([](double z) { return g(z); }, path);
}

inline double W_f(const MonotonePath& path) {
  return path_functional([](double z) { return f(z); }, path);
}

inline double W_p(const MonotonePath& path, const ModelParams& mp) { return W(path.scaled(mp.q)) / mp.q; }

inline double W_f_p(const MonotonePath& path, const ModelParams& mp) { return W_f(path.scaled(mp.q)) / mp.q; }

// Integral of P dx + Q dy along the path for a smooth field (P, Q).
template <class Field>
double line_integral(Field&& field, const MonotonePath& path) {
  const auto& v = path.vertices();
  double total = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    const Point p0 = v[i - 1];
    const double dx = v[i].x - p0.x;
    const double dy = v[i].y - p0.y;
    auto integrand = [&](double t) {
      const auto [P, Q] = field(p0.x + t * dx, p0.y + t * dy);
      return P * dx + Q * dy;
    };
    total += detail::gauss_kronrod15(integrand, 0.0, 1.0).value;
  }
  return total;
}

// The path from dims (a,b) to dims (c,d) that stays as close to the diagonal as possible.
inline MonotonePath optimal_path(double a, double b, double c, double d) {
  if (c < a || d < b) throw std::invalid_argument("target dimensions must dominate the source");
  if (d < a) return MonotonePath::through({{a, b}, {a, d}, {c, d}});
  if (c < b) return MonotonePath::through({{a, b}, {c, b}, {c, d}});
  const double hi = std::max(a, b);
  const double lo = std::min(c, d);
  return MonotonePath::through({{a, b}, {hi, hi}, {lo, lo}, {c, d}});
}

// ((0,0), (m,m), (a,b)) with m = min(a,b).
inline MonotonePath gamma_R(double a, double b) {
  const double m = std::min(a, b);
  return MonotonePath::through({{0.0, 0.0}, {m, m}, {a, b}});
}

// p^3 exp(-W_p(gamma_R)) for two-neighbour, p exp(-W^F_p(gamma_R)) for Frobose.
inline LogProb holroyd_lower(Model m, int a, int b, const ModelParams& mp) {
  if (a < 1 || b < 1) throw std::invalid_argument("rectangle dimensions must be positive");
  const MonotonePath path = gamma_R(a, b);
  if (m == Model::frobose) return std::log(mp.p) - W_f_p(path, mp);
  return 3.0 * std::log(mp.p) - W_p(path, mp);
}

// exp(1/(C3 p) - W_p(gamma_R)), with W^F_p for Frobose.
inline LogProb holroyd_upper(Model m, int a, int b, const ModelParams& mp, double C3) {
  if (a < 1 || b < 1) throw std::invalid_argument("rectangle dimensions must be positive");
  if (!(C3 > 0.0)) throw std::invalid_argument("C3 must be positive");
  const MonotonePath path = gamma_R(a, b);
  const double w = m == Model::frobose ? W_f_p(path, mp) : W_p(path, mp);
  return 1.0 / (C3 * mp.p) - w;
}

}  // namespace bpdp
