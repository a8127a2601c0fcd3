#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "bpdp/special_functions.hpp"

using namespace bpdp;

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
  return out;
}

template <class Fn>
void expect_strictly_decreasing(Fn fn, const std::vector<double>& grid) {
  for (std::size_t i = 1; i < grid.size(); ++i) EXPECT_LT(fn(grid[i]), fn(grid[i - 1])) << "z=" << grid[i];
}

}  // namespace

TEST(ModelParams, QDominatesP) {
  for (double p : {1e-6, 0.01, 0.3, 0.9}) {
    const auto mp = ModelParams::from_p(p);
    EXPECT_GT(mp.q, p);
    EXPECT_NEAR(mp.q, -std::log(1.0 - p), 1e-15);
  }
  EXPECT_THROW(ModelParams::from_p(0.0), std::invalid_argument);
  EXPECT_THROW(ModelParams::from_p(1.0), std::invalid_argument);
}

TEST(F, Values) {
  EXPECT_NEAR(f(std::log(2.0)), std::log(2.0), 1e-15);
  const double z = 1e-6;
  EXPECT_NEAR(f(z), -std::log(z) + z / 2, 1e-12);
  EXPECT_NEAR(f(10.0) / std::exp(-10.0), 1.0, 1e-4);
  EXPECT_NEAR(f(10.0), -std::log(1.0 - std::exp(-10.0)), 1e-8 * f(10.0));
  EXPECT_THROW(f(0.0), std::domain_error);
  EXPECT_THROW(f(-1.0), std::domain_error);
}

TEST(F, ExpNegFIsOneMinusExpNeg) {
  for (double z : log_grid(1e-3, 30.0, 50)) EXPECT_NEAR(std::exp(-f(z)), 1.0 - std::exp(-z), 1e-14);
}

TEST(Beta, ConjugateRootIdentities) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> un(1e-6, 1.0 - 1e-6);
  for (int i = 0; i < 200; ++i) {
    const double u = un(rng);
    EXPECT_NEAR(beta(u) + beta_bar(u), u, 1e-15);
    EXPECT_NEAR(beta(u) * beta_bar(u), -u * (1.0 - u), 1e-15);
    EXPECT_GT(beta(u), 0.0);
    EXPECT_LT(beta(u), 1.0);
    EXPECT_GE(beta_bar(u), -1.0 / 3.0 - 1e-15);
    EXPECT_LT(beta_bar(u), 0.0);
  }
  EXPECT_NEAR(beta(1.0), 1.0, 1e-15);
  EXPECT_THROW(beta(0.0), std::domain_error);
  EXPECT_THROW(beta(1.5), std::domain_error);
}

TEST(G, Asymptotics) {
  const double z = 1e-8;
  const double approx = -0.5 * (std::log(z) + std::sqrt(z));
  EXPECT_NEAR(g(z) / approx, 1.0, 1e-3);
  EXPECT_NEAR(g(20.0) / std::exp(-40.0), 1.0, 0.01);
  EXPECT_THROW(g(0.0), std::domain_error);
}

TEST(G, BelowF) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> e(-6.0, 1.5);
  for (int i = 0; i < 500; ++i) {
    const double z = std::pow(10.0, e(rng));
    EXPECT_LE(g(z), f(z));
  }
}

TEST(G, BelowHalfLogInverseForSmallArguments) {
  for (double z : log_grid(1e-12, 0.01, 60)) EXPECT_LT(g(z), -0.5 * std::log(z));
}

TEST(Alpha, RangeAndAsymptotics) {
  EXPECT_NEAR(alpha(1e-8), 1.0 + 5e-5, 1e-6);
  EXPECT_NEAR(alpha(30.0), 2.0, 1e-12);
  for (double z : log_grid(1e-6, 40.0, 80)) {
    EXPECT_GT(alpha(z), 1.0);
    EXPECT_LE(alpha(z), 2.0);
  }
}

TEST(H, AlgebraicForm) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> e(-4.0, 1.3);
  for (int i = 0; i < 200; ++i) {
    const double z = std::pow(10.0, e(rng));
    EXPECT_NEAR(h(z) * h(z) * std::expm1(z) / (2.0 + std::numbers::sqrt2), 1.0, 1e-13);
  }
}

TEST(H, ModifiedFormsAgree) {
  for (double z : log_grid(1e-4, 30.0, 60)) EXPECT_NEAR(h_mod_from_f(z) / h_mod(z), 1.0, 1e-12);
}

TEST(H2, SmallArgumentAsymptotics) {
  const double z = 1e-10;
  EXPECT_NEAR(h2(z) * std::sqrt(z) / std::sqrt(3.0 * (2.0 + std::numbers::sqrt2)), 1.0, 1e-4);
}

TEST(H2, RatioToHBoundedAtBothEnds) {
  // h2/h tends to sqrt 3 at 0 and to 2 sqrt 2 as z grows.
  EXPECT_NEAR(h2(1e-10) / h(1e-10), std::sqrt(3.0), 1e-3);
  EXPECT_NEAR(h2(40.0) / h(40.0) / std::exp(-20.0), 2.0 * std::numbers::sqrt2, 1e-6);
}

TEST(Kernels, StrictlyDecreasing) {
  const auto grid = log_grid(1e-5, 25.0, 200);
  expect_strictly_decreasing([](double z) { return f(z); }, grid);
  expect_strictly_decreasing([](double z) { return g(z); }, grid);
  expect_strictly_decreasing([](double z) { return h(z); }, grid);
  expect_strictly_decreasing([](double z) { return h2(z); }, grid);
  expect_strictly_decreasing([](double z) { return h_mod(z); }, grid);
}

TEST(Xi, Values) {
  EXPECT_DOUBLE_EQ(xi_f(2.0), 2.0);
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> un(0.5 + 1e-9, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double x = un(rng);
    const double t = xi_root(x);
    EXPECT_GE(t, 1.0);
    EXPECT_NEAR((2 * x - 1) * t * t - t * (1 - x) - 1, 0.0, 1e-12 * std::max(1.0, t * t));
    EXPECT_GT(xi(x), 1.0);
    EXPECT_LE(xi(x), 3.0 + 1e-12);
  }
  EXPECT_NEAR(xi(0.5 + 1e-6), 1.0, 1e-3);
  std::uniform_real_distribution<double> un2(1.0 + 1e-9, 2.0);
  for (int i = 0; i < 200; ++i) {
    const double v = xi_f(un2(rng));
    EXPECT_GE(v, 1.0);
    EXPECT_LE(v, 2.0);
  }
  EXPECT_THROW(xi_f(1.0), std::domain_error);
  EXPECT_THROW(xi(0.5), std::domain_error);
}

TEST(Quadrature, Constants) {
  constexpr double pi = std::numbers::pi;
  EXPECT_NEAR(integral_f(), pi * pi / 6.0, 1e-8);
  EXPECT_NEAR(integral_g(), pi * pi / 18.0, 1e-8);
  EXPECT_NEAR(integral_h(), pi * std::sqrt(2.0 + std::numbers::sqrt2), 1e-8);
  EXPECT_NEAR(integral_h2(), 7.054547, 5e-6);
}

TEST(Quadrature, PolynomialAndInfiniteRange) {
  EXPECT_NEAR(integrate([](double x) { return x * x; }, 0.0, 3.0, 1e-12), 9.0, 1e-11);
  EXPECT_NEAR(integrate([](double x) { return std::exp(-x); }, 0.0, INFINITY, 1e-12), 1.0, 1e-10);
  EXPECT_NEAR(integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 4.0, 1e-12), 4.0, 1e-10);
}

TEST(Constants, Values) {
  const Constants c = constants();
  EXPECT_NEAR(c.lambda2_f, 5.8049, 1e-4);
  EXPECT_NEAR(c.lambda2_f, 5.80490630427886, 1e-10);
  EXPECT_NEAR(c.lambda2_2n, 7.054547, 5e-6);
  EXPECT_NEAR(c.lambda1, 0.54831, 1e-5);
  EXPECT_NEAR(c.lambda1_f, std::numbers::pi * std::numbers::pi / 6.0, 1e-15);
}

TEST(Traversal, BaseCasesExact) {
  for (double u : {1e-6, 0.3, 0.999}) {
    EXPECT_EQ(traversal_probability(0, u), 1.0);
    EXPECT_EQ(traversal_probability(1, u), u);
    EXPECT_EQ(traversal_probability_recurrence(1, u), u);
  }
}

TEST(Traversal, ClosedFormMatchesRecurrence) {
  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> un(1e-3, 1.0 - 1e-9);
  for (int i = 0; i < 100; ++i) {
    const double u = un(rng);
    for (int n = 0; n <= 200; ++n) {
      const double c = traversal_probability(n, u), r = traversal_probability_recurrence(n, u);
      EXPECT_NEAR(c / r, 1.0, 1e-12) << "u=" << u << " n=" << n;
    }
  }
}

TEST(Traversal, WithinBrackets) {
  for (double p : {0.01, 0.1, 0.3, 0.7})
    for (int b : {1, 2, 5, 20})
      for (int a : {1, 2, 3, 10, 50}) {
        const auto mp = ModelParams::from_p(p);
        const double x = traversal_probability(a, detail::one_minus_exp_neg(b * mp.q));
        const auto br = traversal_bracket(a, b, mp);
        EXPECT_LE(x, br.upper * (1 + 1e-12));
        EXPECT_GE(x, br.middle * (1 - 1e-12));
        EXPECT_GE(br.middle, br.lower * (1 - 1e-12));
        const double z = b * mp.q;
        EXPECT_NEAR(std::abs(x / (0.5 * alpha(z) * std::exp(-a * g(z))) - 1.0),
                    refined_traversal_error_bound(a, b, mp), 1e-12);
      }
}

TEST(Traversal, FullyOccupiedColumns) {
  for (int n : {0, 1, 2, 7, 100}) {
    EXPECT_EQ(traversal_probability(n, 1.0), 1.0);
    EXPECT_EQ(traversal_probability_recurrence(n, 1.0), 1.0);
  }
  EXPECT_THROW(traversal_probability(3, 0.0), std::domain_error);
  EXPECT_THROW(traversal_probability(3, 1.5), std::domain_error);
  const auto mp = ModelParams::from_p(0.7);
  const double x = traversal_probability(50, detail::one_minus_exp_neg(100 * mp.q));
  EXPECT_EQ(x, 1.0);
  EXPECT_LE(x, traversal_bracket(50, 100, mp).upper * (1 + 1e-12));
  EXPECT_EQ(refined_traversal_error_bound(50, 100, mp), 0.0);
}
