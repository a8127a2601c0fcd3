#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace bpdp {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

struct GkResult {
  double value;
  double error;
};

// Gauss-Kronrod 7/15 on [a,b].
template <class F>
GkResult gauss_kronrod15(F&& fn, double a, double b) {
  static constexpr std::array<double, 8> xk = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr std::array<double, 8> wk = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr std::array<double, 4> wg = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

  const double c = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  const double fc = fn(c);
  double kron = wk[7] * fc;
  double gauss = wg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = hw * xk[i];
    const double f1 = fn(c - dx);
    const double f2 = fn(c + dx);
    kron += wk[i] * (f1 + f2);
    if (i % 2 == 1) gauss += wg[i / 2] * (f1 + f2);
  }
  return {kron * hw, std::fabs((kron - gauss) * hw)};
}

template <class F>
double adaptive(F& fn, double a, double b, double tol, int depth, int max_depth) {
  const GkResult whole = gauss_kronrod15(fn, a, b);
  if (whole.error <= tol || std::fabs(b - a) < 1e-15 * (1.0 + std::fabs(a))) return whole.value;
  if (depth >= max_depth) throw QuadratureError("quadrature did not converge");
  const double m = 0.5 * (a + b);
  return adaptive(fn, a, m, 0.5 * tol, depth + 1, max_depth) +
         adaptive(fn, m, b, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace detail

// Adaptive quadrature of a positive integrand on (lower, upper). The lower
// endpoint may carry an integrable singularity (removed by z = lower + t^2) and
// upper may be +inf (mapped onto a finite interval).
template <class F>
double integrate(F&& fn, double lower, double upper, double tol, int max_depth = 40) {
  if (!(tol > 0.0)) throw std::invalid_argument("integrate: tol must be positive");
  if (!(upper > lower)) {
    if (upper == lower) return 0.0;
    throw std::invalid_argument("integrate: upper < lower");
  }
  if (std::isinf(upper)) {
    // Split at lower + 1 so that the singular end and the tail are handled separately.
    const double mid = lower + 1.0;
    auto tail = [&](double t) {
      const double s = 1.0 - t;
      return fn(mid + t / s) / (s * s);
    };
    return integrate(fn, lower, mid, 0.5 * tol, max_depth) +
           detail::adaptive(tail, 0.0, 1.0, 0.5 * tol, 0, max_depth);
  }
  const double span = upper - lower;
  auto sub = [&](double t) { return 2.0 * t * fn(lower + t * t); };
  return detail::adaptive(sub, 0.0, std::sqrt(span), tol, 0, max_depth);
}

}  // namespace bpdp
