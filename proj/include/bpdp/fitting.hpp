#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bpdp/special_functions.hpp"

namespace bpdp {

struct PiRow {
  int log2_inv_p;
  double log_pi;

  double p() const { return std::ldexp(1.0, -log2_inv_p); }
  double log_inv_p() const { return log2_inv_p * std::numbers::ln2; }
};

// Rows sorted by log2(1/p); both columns strictly increasing.
class PiDataset {
 public:
  PiDataset() = default;
  explicit PiDataset(std::vector<PiRow> rows) : rows_(std::move(rows)) {
    std::sort(rows_.begin(), rows_.end(), [](const PiRow& a, const PiRow& b) { return a.log2_inv_p < b.log2_inv_p; });
    for (std::size_t i = 1; i < rows_.size(); ++i) {
      if (rows_[i].log2_inv_p == rows_[i - 1].log2_inv_p) throw std::invalid_argument("duplicate log2(1/p)");
      if (!(rows_[i].log_pi > rows_[i - 1].log_pi)) throw std::invalid_argument("log Pi must increase with 1/p");
    }
  }

  const std::vector<PiRow>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  std::vector<PiRow> last(std::size_t k) const {
    if (k > rows_.size()) throw std::invalid_argument("not enough data points");
    return {rows_.end() - static_cast<std::ptrdiff_t>(k), rows_.end()};
  }

 private:
  std::vector<PiRow> rows_;
};

// Values of log Pi(2^-k) for k = 2..17 from the reference GPU computation.
inline PiDataset reference_table() {
  return PiDataset({{2, 1.8231469544522168},  {3, 4.742671577932995},   {4, 12.392931032600497},
                    {5, 30.54732365348029},   {6, 71.22104704459092},   {7, 159.10494055779233},
                    {8, 344.5259389380065},   {9, 729.489374480061},    {10, 1519.9177238798902},
                    {11, 3130.360634994818},  {12, 6393.748024566681},  {13, 12981.361913134877},
                    {14, 26243.443273103207}, {15, 52891.342141028406}, {16, 106363.14234086743},
                    {17, 213556.78508818566}});
}

struct Line {
  double slope;
  double intercept;
};

// Ordinary least squares over the last k_last points.
inline Line linreg(const std::vector<std::pair<double, double>>& pts, std::size_t k_last) {
  if (k_last < 2 || k_last > pts.size()) throw std::invalid_argument("linreg needs 2 <= k_last <= number of points");
  const auto first = pts.end() - static_cast<std::ptrdiff_t>(k_last);
  double mx = 0.0, my = 0.0;
  for (auto it = first; it != pts.end(); ++it) {
    mx += it->first;
    my += it->second;
  }
  mx /= double(k_last);
  my /= double(k_last);
  double sxx = 0.0, sxy = 0.0;
  for (auto it = first; it != pts.end(); ++it) {
    sxx += (it->first - mx) * (it->first - mx);
    sxy += (it->first - mx) * (it->second - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("degenerate abscissae");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

inline constexpr std::size_t default_k_last = 3;

inline double lambda1_f() { return std::numbers::pi * std::numbers::pi / 6.0; }
inline double lambda2_f() { return std::numbers::pi * sqrt_two_plus_sqrt_two; }

using Points = std::vector<std::pair<double, double>>;

// Coordinates of each figure panel.
inline Points leading_order_points(const PiDataset& d) {  // (log(1/p), log log Pi)
  Points out;
  for (const auto& r : d.rows()) out.emplace_back(r.log_inv_p(), std::log(r.log_pi));
  return out;
}

inline Points inverse_p_points(const PiDataset& d) {  // (1/p, log Pi)
  Points out;
  for (const auto& r : d.rows()) out.emplace_back(1.0 / r.p(), r.log_pi);
  return out;
}

inline double second_order_residual(const PiRow& r) {
  const double res = lambda1_f() / r.p() - r.log_pi;
  if (!(res > 0.0)) throw std::domain_error("log Pi exceeds the leading term");
  return res;
}

inline Points second_order_log_points(const PiDataset& d) {  // (log(1/p), log(l1/p - log Pi))
  Points out;
  for (const auto& r : d.rows()) out.emplace_back(r.log_inv_p(), std::log(second_order_residual(r)));
  return out;
}

inline Points second_order_sqrt_points(const PiDataset& d) {  // (1/sqrt p, l1/p - log Pi)
  Points out;
  for (const auto& r : d.rows()) out.emplace_back(1.0 / std::sqrt(r.p()), second_order_residual(r));
  return out;
}

inline double third_order_residual(const PiRow& r) {
  const double res = r.log_pi - lambda1_f() / r.p() + lambda2_f() / std::sqrt(r.p());
  if (!(res > 0.0)) throw std::domain_error("non-positive third-order residual");
  return res;
}

inline Points third_order_points(const PiDataset& d) {  // (log(1/p), log(log Pi - l1/p + l2/sqrt p))
  Points out;
  for (const auto& r : d.rows()) out.emplace_back(r.log_inv_p(), std::log(third_order_residual(r)));
  return out;
}

struct PowerLaw {
  double exponent;
  double prefactor;  // exp(intercept)
};

inline PowerLaw fit_leading_order(const PiDataset& d, std::size_t k_last = default_k_last) {
  const Line l = linreg(leading_order_points(d), k_last);
  return {l.slope, std::exp(l.intercept)};
}

inline Line fit_inverse_p(const PiDataset& d, std::size_t k_last = default_k_last) {
  return linreg(inverse_p_points(d), k_last);
}

struct SecondOrderFit {
  double beta;
  double lambda2;
};

inline SecondOrderFit fit_second_order(const PiDataset& d, std::size_t k_last = default_k_last) {
  const Line l = linreg(second_order_log_points(d), k_last);
  return {l.slope, std::exp(l.intercept)};
}

inline double fit_second_order_fixed_beta(const PiDataset& d, std::size_t k_last = default_k_last) {
  return linreg(second_order_sqrt_points(d), k_last).slope;
}

inline double fit_third_order(const PiDataset& d, std::size_t k_last = default_k_last) {
  return linreg(third_order_points(d), k_last).slope;
}

struct FourParamFit {
  double alpha;
  double lambda1;
  double beta;
  double lambda2;
  double max_rel_residual;
  bool converged;
};

namespace detail {

// For fixed exponents the model is linear in (lambda1, lambda2); solve the
// relative least-squares problem and return its residual norm.
inline double four_param_inner(const std::vector<PiRow>& rows, double a, double b, double& l1, double& l2) {
  double s11 = 0.0, s12 = 0.0, s22 = 0.0, t1 = 0.0, t2 = 0.0;
  for (const auto& r : rows) {
    const double u = std::exp(a * r.log_inv_p()) / r.log_pi;
    const double v = -std::exp(b * r.log_inv_p()) / r.log_pi;
    s11 += u * u;
    s12 += u * v;
    s22 += v * v;
    t1 += u;
    t2 += v;
  }
  const double det = s11 * s22 - s12 * s12;
  if (!(std::abs(det) > 0.0)) {
    l1 = l2 = 0.0;
    return std::numeric_limits<double>::infinity();
  }
  l1 = (t1 * s22 - t2 * s12) / det;
  l2 = (s11 * t2 - s12 * t1) / det;
  double res = 0.0;
  for (const auto& r : rows) {
    const double m = l1 * std::exp(a * r.log_inv_p()) - l2 * std::exp(b * r.log_inv_p());
    const double e = m / r.log_pi - 1.0;
    res += e * e;
  }
  return std::sqrt(res);
}

inline bool solve4(std::array<std::array<double, 5>, 4> m, std::array<double, 4>& x) {
  for (int c = 0; c < 4; ++c) {
    int piv = c;
    for (int r = c + 1; r < 4; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (m[piv][c] == 0.0) return false;
    std::swap(m[c], m[piv]);
    for (int r = 0; r < 4; ++r) {
      if (r == c) continue;
      const double k = m[r][c] / m[c][c];
      for (int j = c; j < 5; ++j) m[r][j] -= k * m[c][j];
    }
  }
  for (int i = 0; i < 4; ++i) x[i] = m[i][4] / m[i][i];
  return true;
}

}  // namespace detail

// log Pi = lambda1 p^-alpha - lambda2 p^-beta through the last k_last points.
// Nelder-Mead over (alpha, beta) seeded at (1, 1/2) with (lambda1, lambda2)
// eliminated by least squares, then Newton on the full 4x4 system.
inline FourParamFit fit_four_param(const PiDataset& d, std::size_t k_last = 4) {
  if (k_last != 4) throw std::invalid_argument("the four-parameter fit uses exactly four points");
  const std::vector<PiRow> rows = d.last(k_last);
  auto objective = [&](const std::array<double, 2>& x) {
    if (!(x[0] > x[1])) return std::numeric_limits<double>::infinity();
    double l1, l2;
    return detail::four_param_inner(rows, x[0], x[1], l1, l2);
  };

  std::array<std::array<double, 2>, 3> simplex = {{{1.0, 0.5}, {1.05, 0.5}, {1.0, 0.55}}};
  std::array<double, 3> fv{};
  for (int i = 0; i < 3; ++i) fv[i] = objective(simplex[i]);
  for (int iter = 0; iter < 20000; ++iter) {
    std::array<int, 3> idx = {0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return fv[i] < fv[j]; });
    const int best = idx[0], mid = idx[1], worst = idx[2];
    if (fv[best] < 1e-12) break;
    const double size = std::abs(simplex[worst][0] - simplex[best][0]) + std::abs(simplex[worst][1] - simplex[best][1]);
    if (size < 1e-15) break;
    std::array<double, 2> centroid = {0.5 * (simplex[best][0] + simplex[mid][0]),
                                      0.5 * (simplex[best][1] + simplex[mid][1])};
    auto along = [&](double t) {
      return std::array<double, 2>{centroid[0] + t * (simplex[worst][0] - centroid[0]),
                                   centroid[1] + t * (simplex[worst][1] - centroid[1])};
    };
    const auto xr = along(-1.0);
    const double fr = objective(xr);
    if (fr < fv[best]) {
      const auto xe = along(-2.0);
      const double fe = objective(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        fv[worst] = fe;
      } else {
        simplex[worst] = xr;
        fv[worst] = fr;
      }
    } else if (fr < fv[mid]) {
      simplex[worst] = xr;
      fv[worst] = fr;
    } else {
      const auto xc = fr < fv[worst] ? along(-0.5) : along(0.5);
      const double fc = objective(xc);
      if (fc < std::min(fr, fv[worst])) {
        simplex[worst] = xc;
        fv[worst] = fc;
      } else {
        for (int i : {mid, worst}) {
          simplex[i] = {0.5 * (simplex[i][0] + simplex[best][0]), 0.5 * (simplex[i][1] + simplex[best][1])};
          fv[i] = objective(simplex[i]);
        }
      }
    }
  }
  int best = 0;
  for (int i = 1; i < 3; ++i)
    if (fv[i] < fv[best]) best = i;

  double l1, l2;
  detail::four_param_inner(rows, simplex[best][0], simplex[best][1], l1, l2);
  std::array<double, 4> x = {simplex[best][0], l1, simplex[best][1], l2};
  auto residuals = [&](const std::array<double, 4>& v) {
    std::array<double, 4> r{};
    for (int i = 0; i < 4; ++i) {
      const double L = rows[i].log_inv_p();
      r[i] = (v[1] * std::exp(v[0] * L) - v[3] * std::exp(v[2] * L)) / rows[i].log_pi - 1.0;
    }
    return r;
  };
  auto max_abs = [](const std::array<double, 4>& r) {
    double m = 0.0;
    for (double v : r) m = std::max(m, std::abs(v));
    return m;
  };
  for (int it = 0; it < 50; ++it) {
    const auto r = residuals(x);
    if (max_abs(r) < 1e-15) break;
    std::array<std::array<double, 5>, 4> jac{};
    for (int i = 0; i < 4; ++i) {
      const double L = rows[i].log_inv_p();
      const double ea = std::exp(x[0] * L), eb = std::exp(x[2] * L), y = rows[i].log_pi;
      jac[i] = {x[1] * L * ea / y, ea / y, -x[3] * L * eb / y, -eb / y, -r[i]};
    }
    std::array<double, 4> step{};
    if (!detail::solve4(jac, step)) break;
    std::array<double, 4> trial = x;
    for (int i = 0; i < 4; ++i) trial[i] += step[i];
    if (!(max_abs(residuals(trial)) < max_abs(r))) break;
    x = trial;
  }
  const double res = max_abs(residuals(x));
  return {x[0], x[1], x[2], x[3], res, res < 1e-8 && x[0] > x[2]};
}

}  // namespace bpdp
