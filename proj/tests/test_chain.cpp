#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "bpdp/chain.hpp"

using namespace bpdp;

namespace {

ChainParams params(double p, long L, Convention c = Convention::hit_exactly) {
  return {ModelParams::from_p(p), L, c, Model::frobose};
}

}  // namespace

TEST(Threshold, DefaultUsesNaturalLog) {
  EXPECT_EQ(default_threshold(0.25), 12);
  EXPECT_EQ(default_threshold(1.0 / 32), 222);
  EXPECT_EQ(ChainParams::for_p(0.25).threshold, 12);
}

TEST(Convention, ParseRoundTrip) {
  EXPECT_EQ(parse_convention("exact"), Convention::hit_exactly);
  EXPECT_EQ(parse_convention(name(Convention::hit_at_least)), Convention::hit_at_least);
  EXPECT_THROW(parse_convention("nearest"), std::invalid_argument);
}

TEST(ComputePi, ThresholdTwoIsCertain) {
  for (double p : {0.1, 0.9}) {
    const auto r = compute_pi(params(p, 2));
    EXPECT_EQ(r.log_hit_prob, 0.0);
    EXPECT_EQ(r.log_pi, 0.0);
    EXPECT_EQ(brute_force_hit_prob(params(p, 2)), 0.0);
  }
  EXPECT_THROW(compute_pi(params(0.5, 1)), std::invalid_argument);
}

TEST(ComputePi, MatchesBruteForce) {
  for (Convention c : {Convention::hit_exactly, Convention::hit_at_least})
    for (double p : {0.1, 0.3, 0.5, 0.7})
      for (long L = 2; L <= 8; ++L) {
        const auto pr = params(p, L, c);
        EXPECT_NEAR(compute_pi(pr).log_hit_prob, brute_force_hit_prob(pr), 1e-12)
            << "p=" << p << " L=" << L << " " << name(c);
      }
}

TEST(ComputePi, MatchesBruteForceAtDefaultThresholdForQuarter) {
  // p = 1/4 has L = 12, the largest threshold the enumeration accepts.
  for (Convention c : {Convention::hit_exactly, Convention::hit_at_least}) {
    const auto pr = ChainParams::for_p(0.25, c);
    const double oracle = brute_force_hit_prob(pr);
    EXPECT_NEAR(compute_pi(pr).log_hit_prob, oracle, 1e-12);
  }
  EXPECT_NEAR(compute_pi(ChainParams::for_p(0.25)).log_pi, 0.85114548, 1e-8);
  EXPECT_NEAR(compute_pi(ChainParams::for_p(0.25, Convention::hit_at_least)).log_pi, 0.73214917, 1e-8);
}

TEST(ComputePi, AtLeastDominatesExact) {
  for (double p : {0.05, 0.2, 0.5})
    for (long L : {5L, 17L, 40L}) {
      const double exact = compute_pi(params(p, L)).log_hit_prob;
      const double atleast = compute_pi(params(p, L, Convention::hit_at_least)).log_hit_prob;
      EXPECT_GE(atleast, exact);
    }
}

TEST(ComputePi, BitIdenticalAcrossThreadCounts) {
  for (double p : {1.0 / 16, 1.0 / 32})
    for (Convention c : {Convention::hit_exactly, Convention::hit_at_least}) {
      const auto pr = ChainParams::for_p(p, c);
      const auto one = compute_pi(pr, {.threads = 1, .prune_below = {}});
      for (unsigned t : {2u, 3u, 8u}) {
        const auto many = compute_pi(pr, {.threads = t, .prune_below = {}});
        EXPECT_EQ(one.log_pi, many.log_pi) << "threads=" << t;
        EXPECT_EQ(one.log_hit_prob, many.log_hit_prob);
      }
    }
}

TEST(ComputePi, PruningOnlyRemovesMass) {
  const auto pr = ChainParams::for_p(1.0 / 16);
  const auto full = compute_pi(pr);
  const auto pruned = compute_pi(pr, {.prune_below = full.log_hit_prob - 30.0});
  EXPECT_LE(pruned.log_hit_prob, full.log_hit_prob);
  EXPECT_NEAR(pruned.log_hit_prob, full.log_hit_prob, 1e-6);
}

TEST(ComputePi, MemoryCapReportedBeforeStarting) {
  PiOptions opt;
  opt.memory_cap_bytes = 1024;
  EXPECT_THROW(compute_pi(ChainParams::for_p(1.0 / 64), opt), ResourceCapError);
  EXPECT_GT(estimate_pi_memory(1000), estimate_pi_memory(100));
}

TEST(ComputePi, TwoNeighbourRowsGiveLowerBoundOnly) {
  ChainParams pr = params(0.3, 8);
  pr.rules = Model::two_neighbour;
  const double dp = compute_pi(pr).log_hit_prob;
  EXPECT_NEAR(dp, brute_force_hit_prob(pr), 1e-12);
  EXPECT_LE(dp, 0.0);
  pr.convention = Convention::hit_at_least;
  EXPECT_NEAR(compute_pi(pr).log_hit_prob, brute_force_hit_prob(pr), 1e-12);
}

TEST(BruteForce, RejectsLargeThreshold) {
  EXPECT_THROW(brute_force_hit_prob(params(0.3, brute_force_max_threshold + 1)), std::invalid_argument);
}

TEST(SampleTrajectory, StartsAtUnitSquareAndGrows) {
  const auto pr = ChainParams::for_p(0.1);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto path = sample_trajectory(pr, seed);
    ASSERT_FALSE(path.empty());
    EXPECT_EQ(path.front(), (ProjectedChainState{1, 1, FrameState::s0}));
    for (std::size_t i = 1; i < path.size(); ++i) {
      EXPECT_GE(path[i].phi(), path[i - 1].phi());
      if (path[i].phi() == path[i - 1].phi()) { EXPECT_GT(rank(path[i].s), rank(path[i - 1].s)); }
    }
    EXPECT_TRUE(path.back().s == FrameState::s4 || path.back().phi() >= pr.threshold);
  }
  EXPECT_EQ(sample_trajectory(pr, 7), sample_trajectory(pr, 7));
}

TEST(SampleTrajectory, FirstStepFrequency) {
  const auto pr = ChainParams::for_p(0.3);
  std::mt19937_64 rng(41);
  const int n = 100000;
  int creations = 0;
  for (int i = 0; i < n; ++i) {
    const auto path = sample_trajectory(pr, rng);
    if (path.size() > 1 && path[1] == ProjectedChainState{1, 1, FrameState::s1}) ++creations;
  }
  const double expected = std::exp(-pr.model.q);
  const double sigma = std::sqrt(expected * (1 - expected) / n);
  EXPECT_NEAR(double(creations) / n, expected, 3 * sigma);
}

TEST(SampleTrajectory, HitFrequencyMatchesDynamicProgram) {
  const auto pr = params(0.5, 8);
  const double exact = std::exp(compute_pi(pr).log_hit_prob);
  std::mt19937_64 rng(42);
  const int n = 100000;
  int hits = 0;
  for (int i = 0; i < n; ++i)
    if (sample_trajectory(pr, rng).back().phi() == pr.threshold) ++hits;
  const double sigma = std::sqrt(exact * (1 - exact) / n);
  EXPECT_NEAR(double(hits) / n, exact, 4 * sigma);
}
