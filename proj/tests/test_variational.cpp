#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bpdp/lattice.hpp"
#include "bpdp/variational.hpp"

using namespace bpdp;

namespace {

MonotonePath random_path(Point from, Point to, int inner, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> un(0.0, 1.0);
  std::vector<double> xs, ys;
  for (int i = 0; i < inner; ++i) {
    xs.push_back(from.x + un(rng) * (to.x - from.x));
    ys.push_back(from.y + un(rng) * (to.y - from.y));
  }
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  std::vector<Point> v{from};
  for (int i = 0; i < inner; ++i) v.push_back({xs[i], ys[i]});
  v.push_back(to);
  return MonotonePath::through(v);
}

}  // namespace

TEST(MonotonePath, Validation) {
  EXPECT_THROW(MonotonePath(std::vector<Point>{}), std::invalid_argument);
  EXPECT_THROW(MonotonePath({{1, 1}, {0.5, 2}}), std::invalid_argument);
  EXPECT_THROW(MonotonePath({{1, 1}, {1, 1}}), std::invalid_argument);
  EXPECT_THROW(MonotonePath({{-1, 1}, {1, 1}}), std::invalid_argument);
  EXPECT_NO_THROW(MonotonePath::through({{1, 1}, {1, 1}, {2, 3}}));
}

TEST(Functional, HorizontalSegment) {
  const MonotonePath path({{1.5, 2.0}, {4.0, 2.0}});
  EXPECT_NEAR(W_f(path), 2.5 * f(2.0), 1e-13);
  EXPECT_NEAR(W(path), 2.5 * g(2.0), 1e-13);
}

TEST(Functional, DiagonalGivesTwiceTheIntegral) {
  const MonotonePath diag({{0.0, 0.0}, {40.0, 40.0}});
  EXPECT_NEAR(W_f(diag), 2 * std::numbers::pi * std::numbers::pi / 6, 1e-6);
  EXPECT_NEAR(W(diag), 2 * std::numbers::pi * std::numbers::pi / 18, 1e-6);
}

TEST(Functional, AxisSegmentRejected) {
  EXPECT_THROW(W(MonotonePath({{0.0, 0.0}, {0.0, 3.0}})), std::domain_error);
}

TEST(Functional, ConcatenationAdditive) {
  std::mt19937_64 rng(71);
  for (int i = 0; i < 50; ++i) {
    const auto p1 = random_path({0.5, 0.2}, {2.0, 3.0}, 3, rng);
    const auto p2 = random_path({2.0, 3.0}, {5.0, 4.5}, 3, rng);
    EXPECT_NEAR(W(p1.then(p2)), W(p1) + W(p2), 1e-12);
    EXPECT_NEAR(W_f(p1.then(p2)), W_f(p1) + W_f(p2), 1e-12);
  }
}

TEST(Functional, ReparameterizationAndReflection) {
  std::mt19937_64 rng(72);
  for (int i = 0; i < 50; ++i) {
    const auto path = random_path({0.3, 0.1}, {4.0, 6.0}, 4, rng);
    std::vector<Point> v = path.vertices();
    std::vector<Point> refined{v[0]};
    for (std::size_t k = 1; k < v.size(); ++k) {
      refined.push_back({0.5 * (v[k - 1].x + v[k].x), 0.5 * (v[k - 1].y + v[k].y)});
      refined.push_back(v[k]);
    }
    EXPECT_NEAR(W(MonotonePath::through(refined)), W(path), 1e-12);
    EXPECT_NEAR(W(path.reflected()), W(path), 1e-12);
    EXPECT_NEAR(W_f(path.reflected()), W_f(path), 1e-12);
  }
}

TEST(Functional, DiagonalDeviationFormIsExact) {
  std::mt19937_64 rng(73);
  auto field = [](double x, double y) { return std::pair{-(x - y), x - y}; };
  for (int i = 0; i < 100; ++i) {
    const auto path = random_path({0.7, 0.7}, {5.2, 5.2}, 5, rng);
    EXPECT_NEAR(line_integral(field, path), 0.0, 1e-10);
  }
}

TEST(Functional, ScaledVersions) {
  const auto mp = ModelParams::from_p(0.1);
  const MonotonePath path({{1, 1}, {3, 3}, {3, 7}});
  EXPECT_NEAR(W_p(path, mp), W(path.scaled(mp.q)) / mp.q, 1e-15);
  EXPECT_NEAR(W_f_p(path, mp), 2 * integrate([&](double x) { return f(mp.q * x); }, 1, 3, 1e-13) + 4 * f(3 * mp.q),
              1e-10);
}

TEST(Functional, NarrowingCorridorApproachesDiagonal) {
  const auto mp = ModelParams::from_p(0.05);
  const double target = 2.0 / mp.q * integrate([](double z) { return f(z); }, 1 * mp.q, 17 * mp.q, 1e-13);
  double previous = INFINITY;
  for (double width : {4.0, 2.0, 1.0, 0.5, 0.25}) {
    std::vector<Point> v{{1, 1}};
    double x = 1;
    while (x + width <= 17 + 1e-9) {
      v.push_back({x + width, x});
      v.push_back({x + width, x + width});
      x += width;
    }
    const double gap = W_f_p(MonotonePath::through(v), mp) - target;
    EXPECT_GT(gap, 0.0);
    EXPECT_LT(gap, previous);
    previous = gap;
  }
}

TEST(OptimalPath, Cases) {
  EXPECT_EQ(optimal_path(2, 5, 3, 7).vertices(), (std::vector<Point>{{2, 5}, {3, 5}, {3, 7}}));
  EXPECT_EQ(optimal_path(1, 1, 4, 4).vertices(), (std::vector<Point>{{1, 1}, {4, 4}}));
  EXPECT_EQ(optimal_path(5, 2, 7, 3).vertices(), (std::vector<Point>{{5, 2}, {5, 3}, {7, 3}}));
  EXPECT_EQ(gamma_R(3, 5).vertices(), (std::vector<Point>{{0, 0}, {3, 3}, {3, 5}}));
  EXPECT_THROW(optimal_path(3, 3, 2, 5), std::invalid_argument);
}

TEST(OptimalPath, BeatsRandomPaths) {
  std::mt19937_64 rng(74);
  std::uniform_real_distribution<double> un(0.2, 6.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = un(rng), b = un(rng);
    const double c = a + un(rng), d = b + un(rng);
    const double best = W(optimal_path(a, b, c, d));
    const auto other = random_path({a, b}, {c, d}, 1 + int(rng() % 4), rng);
    EXPECT_LE(best, W(other) + 1e-12);
    EXPECT_LE(W_f(optimal_path(a, b, c, d)), W_f(other) + 1e-12);
  }
}

TEST(HolroydBounds, FroboseUnitSquareBelowLogP) {
  // gamma_R of a 1x1 rectangle is the diagonal to (1,1), whose cost is positive.
  for (double p : {0.1, 0.5}) {
    const auto mp = ModelParams::from_p(p);
    EXPECT_LT(holroyd_lower(Model::frobose, 1, 1, mp), std::log(p));
    EXPECT_NEAR(holroyd_lower(Model::frobose, 1, 1, mp), std::log(p) - W_f_p(gamma_R(1, 1), mp), 1e-15);
  }
}

TEST(HolroydBounds, LowerBoundBelowExactLocalFilling) {
  for (double p : {0.2, 0.5}) {
    const auto mp = ModelParams::from_p(p);
    for (int a = 1; a <= 3; ++a)
      for (int b = 1; b <= 3; ++b) {
        const double exact = exact_event_prob({EventKind::local_internally_filled_f, Rectangle::of_dims(a, b)}, p);
        EXPECT_LE(holroyd_lower(Model::frobose, a, b, mp), std::log(exact)) << a << "x" << b;
        const double exact2n = exact_event_prob({EventKind::local_internally_filled, Rectangle::of_dims(a, b)}, p);
        EXPECT_LE(holroyd_lower(Model::two_neighbour, a, b, mp), std::log(exact2n)) << a << "x" << b;
      }
  }
}

TEST(HolroydBounds, LowerBoundBelowMonteCarloFilling) {
  const double p = 0.15;
  const auto mp = ModelParams::from_p(p);
  const auto est = mc_estimate({EventKind::internally_filled_f, Rectangle::of_dims(5, 5)}, p, 100000, 75);
  EXPECT_LE(std::exp(holroyd_lower(Model::frobose, 5, 5, mp)), est.p_hat + 3 * est.std_err);
}

TEST(HolroydBounds, UpperBoundShape) {
  const auto mp = ModelParams::from_p(0.1);
  EXPECT_NEAR(holroyd_upper(Model::frobose, 4, 6, mp, 2.0), 1.0 / (2.0 * 0.1) - W_f_p(gamma_R(4, 6), mp), 1e-12);
  EXPECT_GT(holroyd_upper(Model::two_neighbour, 4, 6, mp, 2.0), holroyd_upper(Model::two_neighbour, 4, 6, mp, 4.0));
  EXPECT_THROW(holroyd_upper(Model::frobose, 4, 6, mp, 0.0), std::invalid_argument);
}
