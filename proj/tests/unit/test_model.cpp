#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <map>
#include <random>

#include "aoisec/model.hpp"
#include "support/brute_force.hpp"

namespace aoisec {
namespace {

std::map<std::pair<Age, Age>, double> as_map(const std::vector<Transition>& ts) {
  std::map<std::pair<Age, Age>, double> out;
  for (const auto& t : ts) out[{t.next.delta_d(), t.next.delta_e()}] = t.probability;
  return out;
}

TEST(Types, RejectOutOfRange) {
  EXPECT_THROW(ChannelParams(-0.1, 0.5), std::invalid_argument);
  EXPECT_THROW(ChannelParams(0.5, 1.01), std::invalid_argument);
  EXPECT_THROW(ChannelParams(std::nan(""), 0.5), std::invalid_argument);
  EXPECT_NO_THROW(ChannelParams(0.0, 1.0));

  EXPECT_THROW(Policy(0.0), std::invalid_argument);
  EXPECT_THROW(Policy(1.5), std::invalid_argument);
  EXPECT_NO_THROW(Policy(1.0));

  EXPECT_THROW(AgeState(0, 3), std::invalid_argument);
  EXPECT_THROW(AgeState(3, 0), std::invalid_argument);
  EXPECT_THROW(SecrecyThreshold(0), std::invalid_argument);
}

TEST(TransitionDistribution, DeterministicDoubleSuccess) {
  const auto ts = transition_distribution({3, 5}, ChannelParams(1, 1), Policy(1));
  ASSERT_EQ(ts.size(), 1u);
  EXPECT_EQ(ts[0].next, AgeState(1, 1));
  EXPECT_EQ(ts[0].probability, 1.0);
}

TEST(TransitionDistribution, FourOutcomesByHand) {
  // 0.5*0.8*0.2, 0.5*0.2*0.2, 0.5*0.8*0.8, 0.5*0.2*0.8 + 0.5
  const auto m = as_map(transition_distribution({3, 5}, ChannelParams(0.8, 0.2), Policy(0.5)));
  ASSERT_EQ(m.size(), 4u);
  EXPECT_NEAR((m.at({1, 1})), 0.08, 1e-15);
  EXPECT_NEAR((m.at({4, 1})), 0.02, 1e-15);
  EXPECT_NEAR((m.at({1, 6})), 0.32, 1e-15);
  EXPECT_NEAR((m.at({4, 6})), 0.58, 1e-15);
  double total = 0.0;
  for (const auto& [k, v] : m) total += v;
  EXPECT_NEAR(total, 1.0, 1e-15);
}

TEST(TransitionDistribution, SilentBranchDominatesForSmallPtx) {
  const auto m = as_map(transition_distribution({1, 1}, ChannelParams(0.7, 0.4), Policy(1e-9)));
  EXPECT_GT((m.at({2, 2})), 1.0 - 1e-8);
}

TEST(TransitionDistribution, PropertyMassAndResetProbability) {
  testing::ParamGen gen(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const ChannelParams params(gen.uniform(0, 1), gen.uniform(0, 1));
    const Policy policy(gen.uniform(1e-6, 1));
    const AgeState s(1 + gen.rng() % 500, 1 + gen.rng() % 500);
    const auto ts = transition_distribution(s, params, policy);
    double total = 0.0;
    double to_origin = 0.0;
    for (const auto& t : ts) {
      EXPECT_GT(t.probability, 0.0);
      total += t.probability;
      if (t.next == AgeState(1, 1)) to_origin += t.probability;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_NEAR(to_origin, policy.p_tx() * params.p() * params.q(), 1e-15);
  }
}

TEST(SampleSlot, BoundaryCases) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 100; ++k) {
    EXPECT_EQ(sample_slot({9, 4}, ChannelParams(1, 1), Policy(1), rng), AgeState(1, 1));
    EXPECT_EQ(sample_slot({4, 7}, ChannelParams(1, 0), Policy(1), rng), AgeState(1, 8));
  }
}

TEST(SampleSlot, FrequenciesMatchTransitionLaw) {
  const ChannelParams params(0.8, 0.2);
  const Policy policy(0.5);
  const AgeState start(3, 5);
  std::map<std::pair<Age, Age>, double> counts;
  std::mt19937_64 rng(2024);
  constexpr int kDraws = 1'000'000;
  for (int k = 0; k < kDraws; ++k) {
    const auto s = sample_slot(start, params, policy, rng);
    counts[{s.delta_d(), s.delta_e()}] += 1.0;
  }
  const auto expected = as_map(transition_distribution(start, params, policy));
  ASSERT_EQ(counts.size(), expected.size());
  for (const auto& [key, prob] : expected) {
    const double freq = counts[key] / kDraws;
    const double se = std::sqrt(prob * (1 - prob) / kDraws);
    EXPECT_LT(std::abs(freq - prob), 4 * se) << key.first << "," << key.second;
  }
}

TEST(SampleSlot, SeededStreamsReproduce) {
  const ChannelParams params(0.6, 0.3);
  const Policy policy(0.7);
  std::mt19937_64 a(99), b(99);
  AgeState sa(1, 1), sb(1, 1);
  for (int t = 0; t < 10'000; ++t) {
    sa = sample_slot(sa, params, policy, a);
    sb = sample_slot(sb, params, policy, b);
    ASSERT_EQ(sa, sb);
  }
}

TEST(SampleSlot, TrajectoryAgesIncrementOrReset) {
  const ChannelParams params(0.35, 0.55);
  const Policy policy(0.6);
  std::mt19937_64 rng(5);
  AgeState s(1, 1);
  int d_resets = 0;
  for (int t = 0; t < 200'000; ++t) {
    const auto probs = outcome_probabilities(params, policy);
    const auto outcome = sample_outcome(probs, rng);
    const auto n = apply_outcome(s, outcome);
    EXPECT_TRUE(n.delta_d() == 1 || n.delta_d() == s.delta_d() + 1);
    EXPECT_TRUE(n.delta_e() == 1 || n.delta_e() == s.delta_e() + 1);
    const bool d_success = outcome == SlotOutcome::kBoth || outcome == SlotOutcome::kOnlyD;
    EXPECT_EQ(n.delta_d() == 1, d_success);
    d_resets += d_success;
    s = n;
  }
  EXPECT_NEAR(d_resets / 200'000.0, 0.6 * 0.35, 0.005);
}

TEST(SecrecyAge, Definition) {
  EXPECT_EQ(secrecy_age({1, 1}), 0u);
  EXPECT_EQ(secrecy_age({2, 9}), 7u);
  EXPECT_EQ(secrecy_age({9, 2}), 0u);
}

TEST(ApplyOutcome, OverflowDetected) {
  EXPECT_THROW(apply_outcome({kMaxAge, 3}, SlotOutcome::kNeither), std::overflow_error);
  EXPECT_THROW(apply_outcome({1, kMaxAge}, SlotOutcome::kOnlyD), std::overflow_error);
  EXPECT_EQ(apply_outcome({kMaxAge, 3}, SlotOutcome::kBoth), AgeState(1, 1));
}

}  // namespace
}  // namespace aoisec
