#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "bpdp/chain.hpp"
#include "bpdp/lattice.hpp"
#include "bpdp/matrix.hpp"
#include "bpdp/special_functions.hpp"
#include "bpdp/variational.hpp"

namespace bpdp {

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

using Report = std::vector<CheckResult>;

inline bool all_passed(const Report& r) {
  return std::all_of(r.begin(), r.end(), [](const CheckResult& c) { return c.passed; });
}

namespace detail {

template <class... Args>
std::string describe(const Args&... args) {
  std::ostringstream os;
  os.precision(17);
  (os << ... << args);
  return os.str();
}

}  // namespace detail

inline Report check_stochasticity(std::uint64_t seed = 1, int samples = 100) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dim(1, 500);
  std::uniform_real_distribution<double> pr(1e-4, 1.0 - 1e-4);
  double worst = 0.0;
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < samples; ++i) {
    const int w = dim(rng), h = dim(rng);
    const auto mp = ModelParams::from_p(pr(rng));
    for (FrameState s : frobose_frame_states)
      worst = std::max(worst, std::abs(outgoing_mass(Model::frobose, s, w, h, mp) - 1.0));
    for (FrameState s : all_frame_states) {
      if (two_neighbour_transitions(s).empty()) continue;
      const double m = outgoing_mass(Model::two_neighbour, s, w, h, mp);
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
  }
  return {
      {"frobose rows sum to one", worst <= 1e-12, detail::describe("max |sum - 1| = ", worst)},
      {"two-neighbour rows sub-stochastic", lo > 0.0 && hi <= 1.0 + 1e-12,
       detail::describe("outgoing sums in [", lo, ", ", hi, "]")},
  };
}

inline Report check_oracle() {
  double worst = 0.0;
  for (Convention c : {Convention::hit_exactly, Convention::hit_at_least})
    for (double p : {0.1, 0.3, 0.5, 0.7})
      for (long L = 2; L <= 8; ++L) {
        const ChainParams params{ModelParams::from_p(p), L, c, Model::frobose};
        worst = std::max(worst, std::abs(compute_pi(params).log_hit_prob - brute_force_hit_prob(params)));
      }
  return {{"dynamic program equals trajectory enumeration", worst <= 1e-12,
           detail::describe("max log-domain difference = ", worst)}};
}

inline Report check_traversal(std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> un(1e-3, 1.0 - 1e-9);
  double worst = 0.0;
  bool base = true;
  for (int i = 0; i < 100; ++i) {
    const double u = un(rng);
    base = base && traversal_probability(0, u) == 1.0 && traversal_probability(1, u) == u;
    for (int n = 0; n <= 200; ++n)
      worst = std::max(worst, std::abs(traversal_probability(n, u) / traversal_probability_recurrence(n, u) - 1.0));
  }
  bool bracket = true;
  int tested = 0;
  for (double p : {0.001, 0.01, 0.1, 0.3, 0.7})
    for (int b : {1, 2, 5, 20, 100})
      for (int a : {1, 2, 3, 10, 50, 200}) {
        const auto mp = ModelParams::from_p(p);
        const double x = traversal_probability(a, detail::one_minus_exp_neg(b * mp.q));
        const auto br = traversal_bracket(a, b, mp);
        bracket = bracket && x <= br.upper * (1 + 1e-12) && x >= br.middle * (1 - 1e-12) &&
                  br.middle >= br.lower * (1 - 1e-12);
        ++tested;
      }
  return {
      {"closed form equals recurrence", worst <= 1e-12, detail::describe("max relative difference = ", worst)},
      {"x0 = 1 and x1 = u exactly", base, ""},
      {"traversal probability within bracket", bracket, detail::describe(tested, " (a, b, p) triples")},
  };
}

inline Report check_matrix(std::uint64_t seed = 1) {
  Report out;
  bool powers = true;
  for (int K = 0; K <= 25; ++K) {
    const double exact = double(matrix_power_entry(K));
    powers = powers && std::abs(closed_form_entry(K) / exact - 1.0) <= 1e-6;
  }
  out.push_back({"cycle matrix powers match closed form", powers, "K = 0..25"});

  double coeff_err = 0.0;
  for (double P : {1e-2, 1e-4}) {
    const double s = std::sqrt(P);
    const std::vector<double> quartic = {1, 0, -4, -4 * s, 2 - P};
    std::vector<double> expected(7, 0.0);
    for (int i = 0; i < 5; ++i) {
      expected[i] += quartic[i];
      expected[i + 2] -= quartic[i];
    }
    const auto c = characteristic_polynomial(perturbed_matrix(P).scaled(1.0 / s));
    for (std::size_t i = 0; i < c.size(); ++i) coeff_err = std::max(coeff_err, std::abs(c[i] - expected[i]));
  }
  out.push_back({"characteristic polynomial factorisation", coeff_err <= 1e-10,
                 detail::describe("max coefficient error = ", coeff_err)});

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  int tested = 0;
  double tightest = INFINITY;
  bool dominated = true;
  while (tested < 100) {
    SmallMatrix m(6);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) m(i, j) = nd(rng);
    if (min_eigenvalue_gap(m) < 1e-3) continue;
    ++tested;
    for (unsigned n : {1u, 5u, 20u}) {
      const double ratio = lagrange_norm_bound(m, n) / operator_norm(power(m, n));
      tightest = std::min(tightest, ratio);
      dominated = dominated && ratio >= 1.0 - 1e-9;
    }
  }
  out.push_back({"interpolation bound dominates matrix powers", dominated,
                 detail::describe("min bound/norm ratio = ", tightest, " over ", tested, " matrices")});

  double worst_ratio = 0.0;
  const double a = std::sqrt(2.0 - std::numbers::sqrt2), b = sqrt_two_plus_sqrt_two;
  const std::array<double, 6> limit = {-b, -1.0, -a, a, 1.0, b};
  for (double P : {1e-2, 1e-3, 1e-4, 1e-6}) {
    const auto e = perturbed_scaled_eigenvalues(P);
    for (int i = 0; i < 6; ++i) worst_ratio = std::max(worst_ratio, std::abs(e[i] - limit[i]) / std::sqrt(P));
  }
  out.push_back({"eigenvalue perturbation within 10 sqrt(P)", worst_ratio <= 10.0,
                 detail::describe("max |shift|/sqrt(P) = ", worst_ratio)});
  return out;
}

inline Report check_constants() {
  constexpr double pi = std::numbers::pi;
  const double ef = std::abs(integral_f() - pi * pi / 6.0);
  const double eg = std::abs(integral_g() - pi * pi / 18.0);
  const double eh = std::abs(integral_h() - pi * sqrt_two_plus_sqrt_two);
  const double h2 = integral_h2();
  return {
      {"integral of f", ef <= 1e-8, detail::describe("error = ", ef)},
      {"integral of g", eg <= 1e-8, detail::describe("error = ", eg)},
      {"integral of h", eh <= 1e-8, detail::describe("error = ", eh)},
      {"integral of h2", std::abs(h2 - 7.054547) <= 5e-6, detail::describe("value = ", h2)},
  };
}

inline Report check_variational(std::uint64_t seed = 1) {
  Report out;
  const double diag = W_f(MonotonePath({{0.0, 0.0}, {40.0, 40.0}}));
  out.push_back({"diagonal functional equals twice the integral",
                 std::abs(diag - std::numbers::pi * std::numbers::pi / 3.0) <= 1e-6, detail::describe("W_f = ", diag)});

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> un(0.2, 6.0);
  bool optimal = true;
  for (int i = 0; i < 200; ++i) {
    const double a = un(rng), b = un(rng), c = a + un(rng), d = b + un(rng);
    const double mx = a + (c - a) * std::uniform_real_distribution<double>(0, 1)(rng);
    const double my = b + (d - b) * std::uniform_real_distribution<double>(0, 1)(rng);
    const auto other = MonotonePath::through({{a, b}, {mx, my}, {c, d}});
    optimal = optimal && W(optimal_path(a, b, c, d)) <= W(other) + 1e-12;
  }
  out.push_back({"optimal path beats random paths", optimal, "200 samples"});

  bool lower = true;
  for (double p : {0.2, 0.5})
    for (int a = 1; a <= 3; ++a)
      for (int b = 1; b <= 3; ++b) {
        const double exact = exact_event_prob({EventKind::local_internally_filled_f, Rectangle::of_dims(a, b)}, p);
        lower = lower && holroyd_lower(Model::frobose, a, b, ModelParams::from_p(p)) <= std::log(exact);
      }
  out.push_back({"a priori lower bound below exact local filling", lower, "R up to 3x3"});
  return out;
}

struct LatticeCheckOptions {
  std::uint64_t seed = 1;
  int closure_samples = 1000;
  int chain_samples = 100000;
};

inline Report check_lattice(const LatticeCheckOptions& opt = {}) {
  Report out;
  std::mt19937_64 rng(opt.seed);

  int mismatches = 0;
  for (Model m : {Model::two_neighbour, Model::frobose})
    for (int i = 0; i < opt.closure_samples; ++i) {
      const double p = std::uniform_real_distribution<double>(0.02, 0.35)(rng);
      const auto a = Configuration::random({0, 0, 14, 14}, p, rng);
      if (!(closure(m, a) == closure_by_rectangles(m, a))) ++mismatches;
    }
  out.push_back({"rectangles process equals fixpoint closure", mismatches == 0,
                 detail::describe(mismatches, " mismatches over ", 2 * opt.closure_samples, " configurations")});

  int positives = 0, violations = 0;
  for (int i = 0; i < 20 * opt.closure_samples; ++i) {
    const int w = 1 + int(rng() % 5), h = 1 + int(rng() % 5);
    const Rectangle r = Rectangle::of_dims(w, h);
    const auto a = Configuration::random(r, 0.45, rng);
    if (internally_filled(Model::two_neighbour, r, a)) {
      ++positives;
      if (a.count() < (w + h + 1) / 2) ++violations;
    }
    if (internally_filled(Model::frobose, r, a)) {
      ++positives;
      if (a.count() < w + h - 1) ++violations;
    }
  }
  out.push_back({"extremal bound", violations == 0 && positives > 0,
                 detail::describe(violations, " violations over ", positives, " positive samples")});

  positives = violations = 0;
  for (int i = 0; i < 5 * opt.closure_samples; ++i) {
    const Rectangle r = Rectangle::of_dims(2 + int(rng() % 5), 2 + int(rng() % 5));
    const int sa = int(rng() % r.c), sb = int(rng() % r.d);
    const int sc = sa + 1 + int(rng() % (r.c - sa)), sd = sb + 1 + int(rng() % (r.d - sb));
    const Rectangle s{sa, sb, sc, sd};
    for (Model m : {Model::two_neighbour, Model::frobose}) {
      const auto a = Configuration::random(r, 0.4, rng);
      if (internally_filled(m, s, a) && crossing(m, s, r, a)) {
        ++positives;
        if (!internally_filled(m, r, a)) ++violations;
      }
    }
  }
  out.push_back({"stacking crossings", violations == 0 && positives > 0,
                 detail::describe(violations, " violations over ", positives, " positive samples")});

  double worst = 0.0;
  const Rectangle seed{0, 0, 1, 1};
  for (double p : {0.2, 0.5})
    for (const Rectangle& r : {Rectangle{0, 0, 2, 2}, Rectangle{0, 0, 3, 2}}) {
      const auto mp = ModelParams::from_p(p);
      const double chain = chain_absorption_prob({seed, FrameState::s0}, r, mp);
      const double crossing_prob = exact_event_prob({EventKind::crossing_f, r, seed}, p);
      worst = std::max(worst, std::abs(chain - crossing_prob * std::exp(-2.0 * r.phi() * mp.q)));
    }
  out.push_back({"absorption probability equals crossing times empty frame", worst <= 1e-12,
                 detail::describe("max difference = ", worst)});

  const double p = 0.3;
  const int stop_phi = 6;
  const ChainParams cp{ModelParams::from_p(p), stop_phi, Convention::hit_exactly, Model::frobose};
  std::map<std::tuple<int, int, int>, long> lattice_visits, chain_visits;
  for (int i = 0; i < opt.chain_samples; ++i) {
    auto a = Configuration::random({-8, -8, 9, 9}, p, rng);
    a.set({0, 0});
    for (const auto& fr : explore(a, seed, stop_phi)) ++lattice_visits[{fr.rect.width(), fr.rect.height(), index(fr.s)}];
    for (const auto& st : sample_trajectory(cp, rng)) ++chain_visits[{st.w, st.h, index(st.s)}];
  }
  auto keys = lattice_visits;
  for (const auto& kv : chain_visits) keys[kv.first] += 0;
  double max_z = 0.0;
  for (const auto& kv : keys) {
    const double x = double(lattice_visits[kv.first]), y = double(chain_visits[kv.first]);
    max_z = std::max(max_z, std::abs(x - y) / std::sqrt(x + y + 1.0));
  }
  out.push_back({"exploration and chain visit frequencies agree", max_z <= 4.0,
                 detail::describe("max z-score = ", max_z, " over ", keys.size(), " states")});
  return out;
}

}  // namespace bpdp
