#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <utility>

#include "bpdp/frame.hpp"
#include "bpdp/transitions.hpp"

using namespace bpdp;
using S = FrameState;

TEST(FrameState, RanksAndNames) {
  EXPECT_EQ(rank(S::s0), 0);
  EXPECT_EQ(rank(S::s1pp), 1);
  EXPECT_EQ(rank(S::s2pp), 2);
  EXPECT_EQ(rank(S::s3), 3);
  EXPECT_EQ(rank(S::s4), 4);
  for (S s : all_frame_states) EXPECT_EQ(parse_frame_state(name(s)), s);
  EXPECT_THROW(parse_frame_state("5"), std::invalid_argument);
}

TEST(FroboseTable, RowsOutOfSelectedStates) {
  const auto zero = frobose_transitions(S::s0);
  ASSERT_EQ(zero.size(), 2u);
  EXPECT_EQ(zero[0].dst, S::s1);
  EXPECT_EQ(zero[0].cost.lin_b, 1);
  EXPECT_EQ(zero[1].dst, S::s0);
  EXPECT_EQ(zero[1].gamma, 1);

  const auto three = frobose_transitions(S::s3);
  ASSERT_EQ(three.size(), 8u);
  std::multiset<S> dsts;
  for (const auto& r : three) dsts.insert(r.dst);
  EXPECT_EQ(dsts, (std::multiset<S>{S::s4, S::s3, S::s2, S::s2p, S::s1, S::s1p, S::s1pp, S::s0}));

  const auto four = frobose_transitions(S::s4);
  ASSERT_EQ(four.size(), 1u);
  EXPECT_TRUE(four[0].absorbing());
  EXPECT_EQ(transition_log_prob(four[0], 5, 7, ModelParams::from_p(0.3)), 0.0);
}

TEST(FroboseTable, StructuralInvariants) {
  std::set<std::pair<S, S>> pairs;
  for (const auto& r : frobose_table()) {
    EXPECT_TRUE(pairs.insert({r.src, r.dst}).second) << name(r.src) << "->" << name(r.dst);
    EXPECT_LE(r.dphi(), 4);
    if (r.dphi() == 0 && !r.absorbing()) { EXPECT_GT(rank(r.dst), rank(r.src)); }
    if (rank(r.dst) > rank(r.src)) { EXPECT_EQ(r.dphi(), 0); }
  }
  EXPECT_EQ(frobose_table().size(), 28u);
}

TEST(FroboseTable, SpecificLogProbabilities) {
  const auto mp = ModelParams::from_p(0.2);
  const auto zero = frobose_transitions(S::s0);
  EXPECT_NEAR(transition_log_prob(zero[0], 3, 5, mp), -mp.q * 5, 1e-15);
  for (const auto& r : frobose_transitions(S::s1))
    if (r.dst == S::s0) { EXPECT_NEAR(transition_log_prob(r, 3, 5, mp), std::log(0.2) - f(mp.q * 3), 1e-13); }
  for (const auto& r : frobose_transitions(S::s3))
    if (r.dst == S::s0) {
      EXPECT_NEAR(transition_log_prob(r, 3, 5, mp), 3 * std::log(0.2) - f(mp.q * 3) + std::log(4 - 3 * 0.2), 1e-13);
    }
}

TEST(FroboseTable, StateOneMassClosedForm) {
  const auto mp = ModelParams::from_p(0.2);
  const double a = 3;
  EXPECT_NEAR(std::exp(-mp.q * a) + (1 - std::exp(-mp.q * a)) * (std::exp(-mp.q) + 0.2), 1.0, 1e-15);
  EXPECT_NEAR(outgoing_mass(Model::frobose, S::s1, 3, 5, mp), 1.0, 1e-12);
}

TEST(FroboseTable, StochasticAtRandomParameters) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> dim(1, 200);
  std::uniform_real_distribution<double> pr(0.001, 0.999);
  for (S s : frobose_frame_states)
    for (int i = 0; i < 100; ++i) {
      const int w = dim(rng), h = dim(rng);
      const auto mp = ModelParams::from_p(pr(rng));
      EXPECT_NEAR(outgoing_mass(Model::frobose, s, w, h, mp), 1.0, 1e-12) << name(s) << " w=" << w << " h=" << h;
    }
}

TEST(FroboseTable, CostsNonNegative) {
  std::mt19937_64 rng(32);
  std::uniform_int_distribution<int> dim(1, 100);
  std::uniform_real_distribution<double> pr(0.001, 0.999);
  for (int i = 0; i < 200; ++i) {
    const int w = dim(rng), h = dim(rng);
    const auto mp = ModelParams::from_p(pr(rng));
    for (const auto& r : frobose_table()) EXPECT_GE(evaluate_cost(r.cost, w, h, mp), 0.0);
    for (const auto& r : two_neighbour_table()) EXPECT_GE(evaluate_cost(r.cost, w, h, mp), 0.0);
  }
}

TEST(TwoNeighbourTable, RowsOutOfSelectedStates) {
  const auto zero = two_neighbour_transitions(S::s0);
  ASSERT_EQ(zero.size(), 3u);
  EXPECT_EQ(zero[0].dst, S::s1);
  EXPECT_EQ(zero[0].cost.lin_b, 2);
  const auto four = two_neighbour_transitions(S::s4);
  ASSERT_EQ(four.size(), 1u);
  EXPECT_TRUE(four[0].absorbing());
}

TEST(TwoNeighbourTable, SubStochastic) {
  EXPECT_EQ(two_neighbour_table().size(), 43u);
  const auto mp = ModelParams::from_p(0.1);
  for (S s : all_frame_states) {
    if (two_neighbour_transitions(s).empty()) continue;
    const double m = outgoing_mass(Model::two_neighbour, s, 4, 4, mp);
    EXPECT_GT(m, 0.0) << name(s);
    EXPECT_LE(m, 1.0) << name(s);
  }
  std::mt19937_64 rng(33);
  std::uniform_int_distribution<int> dim(1, 200);
  std::uniform_real_distribution<double> pr(0.001, 0.999);
  for (int i = 0; i < 100; ++i) {
    const int w = dim(rng), h = dim(rng);
    const auto mp2 = ModelParams::from_p(pr(rng));
    for (S s : all_frame_states) {
      if (two_neighbour_transitions(s).empty()) continue;
      const double m = outgoing_mass(Model::two_neighbour, s, w, h, mp2);
      EXPECT_GT(m, 0.0);
      EXPECT_LE(m, 1.0 + 1e-12);
    }
  }
}
