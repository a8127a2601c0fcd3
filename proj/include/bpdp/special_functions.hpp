#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "bpdp/quadrature.hpp"

namespace bpdp {

struct ModelParams {
  double p;
  double q;

  static ModelParams from_p(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0,1)");
    return {p, -std::log1p(-p)};
  }
};

namespace detail {

inline void require_positive(double z, const char* name) {
  if (!(z > 0.0)) throw std::domain_error(std::string(name) + ": argument must be positive");
}

inline void require_unit_open(double u, const char* name) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error(std::string(name) + ": argument must lie in (0,1)");
}

inline void require_unit_half_open(double u, const char* name) {
  if (!(u > 0.0 && u <= 1.0)) throw std::domain_error(std::string(name) + ": argument must lie in (0,1]");
}

// 1 - e^{-z}, accurate for small z.
inline double one_minus_exp_neg(double z) { return -std::expm1(-z); }

inline double beta_unchecked(double u) { return 0.5 * (u + std::sqrt(u * (4.0 - 3.0 * u))); }

}  // namespace detail

inline constexpr double sqrt_two_plus_sqrt_two = 1.8477590650225735;  // sqrt(2 + sqrt 2)

// f(z) = -log(1 - e^{-z})
inline double f(double z) {
  detail::require_positive(z, "f");
  return -std::log(detail::one_minus_exp_neg(z));
}

inline double beta(double u) {
  if (!(u > 0.0 && u <= 1.0)) throw std::domain_error("beta: argument must lie in (0,1]");
  return detail::beta_unchecked(u);
}

inline double beta_bar(double u) {
  detail::require_unit_open(u, "beta_bar");
  return 0.5 * (u - std::sqrt(u * (4.0 - 3.0 * u)));
}

// g(z) = -log beta(1 - e^{-z})
inline double g(double z) {
  detail::require_positive(z, "g");
  const double u = detail::one_minus_exp_neg(z);
  const double b = detail::beta_unchecked(u);
  if (b > 0.5) {
    // 1 - beta(u) = 2(1-u)^2 / (2 - u + sqrt(u(4-3u))), with 1 - u taken from z directly.
    const double e = std::exp(-z);
    const double one_minus_b = 2.0 * e * e / (2.0 - u + std::sqrt(u * (4.0 - 3.0 * u)));
    return -std::log1p(-one_minus_b);
  }
  return -std::log(b);
}

// alpha(z) = 2 beta(e^{-f}) / sqrt(e^{-f} (4 - 3 e^{-f})), with e^{-f(z)} = 1 - e^{-z}.
inline double alpha(double z) {
  detail::require_positive(z, "alpha");
  const double u = detail::one_minus_exp_neg(z);
  return 2.0 * detail::beta_unchecked(u) / std::sqrt(u * (4.0 - 3.0 * u));
}

// h(z) = sqrt((2 + sqrt 2) / (e^z - 1))
inline double h(double z) {
  detail::require_positive(z, "h");
  return sqrt_two_plus_sqrt_two / std::sqrt(std::expm1(z));
}

// Two-neighbour entropy function; the factor p in every kernel cancels.
inline double h2(double z) {
  detail::require_positive(z, "h2");
  const double u = detail::one_minus_exp_neg(z);
  const double b = detail::beta_unchecked(u);
  const double e = std::exp(-z);
  const double b3 = b * b * b;
  const double b4 = b3 * b;
  const double b5 = b4 * b;
  const double kernels = u / b3 + u / b4 + 2.0 * u * e / b4 + u * u * e / b5;
  const double a = 2.0 * b / std::sqrt(u * (4.0 - 3.0 * u));
  return a * sqrt_two_plus_sqrt_two * e * std::sqrt(kernels);
}

// Modified-model entropy function sqrt(2 + sqrt 2) / (2 sinh(z/2)).
inline double h_mod(double z) {
  detail::require_positive(z, "h_mod");
  return sqrt_two_plus_sqrt_two / (2.0 * std::sinh(0.5 * z));
}

// The same function in its defining form sqrt((2+sqrt 2) e^{-z} e^{2 f(z)}).
inline double h_mod_from_f(double z) {
  detail::require_positive(z, "h_mod");
  return std::sqrt((2.0 + std::numbers::sqrt2) * std::exp(-z + 2.0 * f(z)));
}

inline double xi_f(double x) {
  if (!(x > 1.0 && x <= 2.0)) throw std::domain_error("xi_f: argument must lie in (1,2]");
  return x * std::pow(x - 1.0, (1.0 - x) / x);
}

// Positive root T >= 1 of (2x-1) T^2 - (1-x) T - 1 = 0.
inline double xi_root(double x) {
  if (!(x > 0.5 && x <= 1.0)) throw std::domain_error("xi: argument must lie in (1/2,1]");
  return (std::sqrt(x * x + 6.0 * x - 3.0) + 1.0 - x) / (2.0 * (2.0 * x - 1.0));
}

inline double xi(double x) {
  const double t = xi_root(x);
  return (1.0 + t + t * t) / std::pow(t, 1.0 / x);
}

// Probability that R(n, b) is East-traversable when each column is occupied
// with probability u: (beta^{n+1} - beta_bar^{n+1}) / (beta - beta_bar).
// u = 1 is allowed since 1 - e^{-bq} rounds to 1 for large bq.
inline double traversal_probability(int n, double u) {
  if (n < 0) throw std::invalid_argument("n must be non-negative");
  detail::require_unit_half_open(u, "traversal_probability");
  if (n == 0) return 1.0;
  if (n == 1) return u;
  const double b = detail::beta_unchecked(u), bb = 0.5 * (u - std::sqrt(u * (4.0 - 3.0 * u)));
  const double r = bb / b;
  return std::pow(b, n + 1) * (1.0 - std::pow(r, n + 1)) / (b - bb);
}

// The same probability from x_{n+2} = u x_{n+1} + u (1-u) x_n.
inline double traversal_probability_recurrence(int n, double u) {
  if (n < 0) throw std::invalid_argument("n must be non-negative");
  detail::require_unit_half_open(u, "traversal_probability");
  double prev = 1.0, cur = u;
  if (n == 0) return prev;
  for (int k = 2; k <= n; ++k) {
    const double next = cur * u + prev * (1.0 - u) * u;
    prev = cur;
    cur = next;
  }
  return cur;
}

struct TraversalBracket {
  double upper;  // exp(-a g(bq))
  double middle;  // exp(-(a-1) g(bq) - f(bq))
  double lower;   // p exp(-(a-1) g(bq))
};

inline TraversalBracket traversal_bracket(int a, int b, const ModelParams& mp) {
  if (a < 1 || b < 1) throw std::invalid_argument("rectangle dimensions must be positive");
  const double z = b * mp.q;
  return {std::exp(-a * g(z)), std::exp(-(a - 1) * g(z) - f(z)), mp.p * std::exp(-(a - 1) * g(z))};
}

// |x_a / (alpha(bq)/2 exp(-a g(bq))) - 1| equals (|beta_bar(u)| / beta(u))^{a+1}. The leading
// coefficient is beta / (beta - beta_bar) = alpha/2, not alpha: x_a tends to alpha/2 e^{-ag}.
inline double refined_traversal_error_bound(int a, int b, const ModelParams& mp) {
  const double u = detail::one_minus_exp_neg(b * mp.q);
  if (u == 1.0) return 0.0;
  return std::pow(std::abs(beta_bar(u)) / beta(u), a + 1);
}

struct Constants {
  double lambda1_f;
  double lambda1;
  double lambda2_f;
  double lambda2_2n;
};

// Beyond this point the integrands are replaced by their exponential envelopes.
inline constexpr double tail_cut = 60.0;

inline double integral_f(double tol = 1e-12) {
  const double tail = std::exp(-tail_cut);  // sum_k e^{-k z}/k^2 at z = 60
  return integrate([](double z) { return f(z); }, 0.0, tail_cut, tol) + tail;
}

inline double integral_g(double tol = 1e-12) {
  const double tail = 0.5 * std::exp(-2.0 * tail_cut);
  return integrate([](double z) { return g(z); }, 0.0, tail_cut, tol) + tail;
}

inline double integral_h(double tol = 1e-12) {
  const double tail = 2.0 * sqrt_two_plus_sqrt_two * std::exp(-0.5 * tail_cut);
  return integrate([](double z) { return h(z); }, 0.0, tail_cut, tol) + tail;
}

inline double integral_h2(double tol = 1e-12) {
  const double tail = 2.0 * std::sqrt(2.0 * (2.0 + std::numbers::sqrt2)) * std::exp(-tail_cut);
  return integrate([](double z) { return h2(z); }, 0.0, tail_cut, tol) + tail;
}

inline Constants constants() {
  constexpr double pi = std::numbers::pi;
  return {pi * pi / 6.0, pi * pi / 18.0, pi * sqrt_two_plus_sqrt_two, integral_h2()};
}

}  // namespace bpdp
