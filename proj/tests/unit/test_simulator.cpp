#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "aoisec/analytics.hpp"
#include "aoisec/simulator.hpp"

namespace aoisec {
namespace {

const ChannelParams kParams(0.8, 0.2);

SimConfig config(std::uint64_t horizon, std::uint64_t burn_in, std::uint32_t reps,
                 std::uint64_t seed = 1, std::uint64_t eta = 1) {
  SimConfig c;
  c.horizon = horizon;
  c.burn_in = burn_in;
  c.replications = reps;
  c.base_seed = seed;
  c.threshold = SecrecyThreshold(eta);
  return c;
}

TEST(Seeds, DistinctAndStable) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  EXPECT_EQ(derive_seed(42, 7), derive_seed(42, 7));
}

TEST(Simulator, DeterministicEdgeCases) {
  const auto both = estimate(ChannelParams(1, 1), Policy(1), config(1000, 0, 2));
  EXPECT_EQ(both.mean_secrecy_age.mean, 0.0);
  EXPECT_EQ(both.outage.mean, 1.0);
  EXPECT_EQ(both.fresh_both_frequency(), 1.0);

  // D always refreshed, E never: secrecy age at slot t is t (recorded before
  // the transition), so the mean over H slots is (H - 1) / 2.
  const auto blind = estimate(ChannelParams(1, 0), Policy(1), config(1000, 0, 1));
  EXPECT_DOUBLE_EQ(blind.mean_secrecy_age.mean, 999.0 / 2.0);
}

TEST(Simulator, MeanMatchesClosedForm) {
  const Policy policy(1);
  const auto est = estimate(kParams, policy, config(1'000'000, 10'000, 16, 5));
  const double exact = average_secrecy_age(kParams, policy);
  ASSERT_TRUE(est.mean_secrecy_age.half_width);
  // half_width is about 2.13 standard errors at 16 replications.
  EXPECT_LT(std::abs(est.mean_secrecy_age.mean - exact), 1.5 * *est.mean_secrecy_age.half_width);
  EXPECT_NEAR(est.fresh_both_frequency(), 0.8 * 0.2, 2e-3);
}

TEST(Simulator, IndependentOfWorkerCount) {
  auto c = config(50'000, 1'000, 8, 77, 4);
  const auto serial = estimate(kParams, Policy(0.5), c);
  c.workers = 4;
  const auto parallel = estimate(kParams, Policy(0.5), c);
  EXPECT_EQ(serial.mean_secrecy_age.mean, parallel.mean_secrecy_age.mean);
  EXPECT_EQ(serial.mean_secrecy_age.half_width, parallel.mean_secrecy_age.half_width);
  EXPECT_EQ(serial.outage.mean, parallel.outage.mean);
  EXPECT_EQ(serial.empirical_gap_pmf, parallel.empirical_gap_pmf);
  for (std::size_t r = 0; r < serial.replications.size(); ++r) {
    EXPECT_EQ(serial.replications[r].seed, parallel.replications[r].seed);
    EXPECT_EQ(serial.replications[r].gap_counts, parallel.replications[r].gap_counts);
  }
}

TEST(Simulator, SingleReplicationHasNoInterval) {
  const auto est = estimate(kParams, Policy(0.5), config(10'000, 100, 1));
  EXPECT_FALSE(est.mean_secrecy_age.half_width);
  EXPECT_FALSE(est.outage.half_width);
  EXPECT_FALSE(est.mean_secrecy_age.covers(est.mean_secrecy_age.mean));
}

TEST(Simulator, IntervalShrinksWithReplications) {
  const auto small = estimate(kParams, Policy(0.5), config(200'000, 1'000, 16, 3));
  const auto large = estimate(kParams, Policy(0.5), config(200'000, 1'000, 32, 3));
  const double ratio = *large.mean_secrecy_age.half_width / *small.mean_secrecy_age.half_width;
  EXPECT_NEAR(ratio, 1.0 / std::sqrt(2.0), 0.2 / std::sqrt(2.0));
}

TEST(Simulator, EmpiricalGapLawConverges) {
  const Policy policy(0.5);
  const auto est = estimate(kParams, policy, config(1'000'000, 10'000, 8, 11));
  const double n = static_cast<double>(est.slots_observed);
  for (std::uint64_t d = 1; d <= 20; ++d) {
    const double expected = secrecy_gap_pmf(d, kParams, policy);
    const double got = est.empirical_gap_pmf.count(d) ? est.empirical_gap_pmf.at(d) : 0.0;
    // Correlated samples: allow a generous multiple of the iid standard error.
    EXPECT_LT(std::abs(got - expected), 10 * std::sqrt(expected / n) + 1e-5) << d;
  }
}

TEST(Simulator, OutageIntervalSeparatesConventions) {
  const Policy policy(0.5);
  const SecrecyThreshold five(5);
  const auto est = estimate(kParams, policy, config(1'000'000, 10'000, 32, 20200101, 5));
  const double strict = outage_probability(kParams, policy, five, OutageConvention::kStrictDefinition);
  const double paper = outage_probability(kParams, policy, five, OutageConvention::kPaperPrinted);
  EXPECT_NEAR(strict, 0.550102857142857, 1e-12);
  EXPECT_TRUE(est.outage.covers(strict)) << est.outage.mean << " +- " << *est.outage.half_width;
  EXPECT_FALSE(est.outage.covers(paper));
  // The stored replications re-evaluate the paper event Pr(age <= eta - 1).
  EXPECT_TRUE(est.outage_at(4).covers(paper));
}

TEST(SimConfig, RejectsBadSettings) {
  EXPECT_THROW(config(100, 100, 1).validate(), std::invalid_argument);
  EXPECT_THROW(config(0, 0, 1).validate(), std::invalid_argument);
  EXPECT_THROW(config(100, 0, 0).validate(), std::invalid_argument);
  auto c = config(100, 0, 1);
  c.confidence = 1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  EXPECT_THROW(config(std::uint64_t{1} << 40, 0, 1).validate(), std::invalid_argument);
  EXPECT_NO_THROW(config(100, 99, 1).validate());
}

TEST(Trace, CsvRowsPerRecordedSlot) {
  std::ostringstream out;
  const auto stats = run_replication(ChannelParams(1, 0), Policy(1), config(4, 2, 1), 0, &out);
  EXPECT_EQ(stats.slots, 4u);
  EXPECT_EQ(out.str(),
            "slot,delta_d,delta_e,secrecy_age\n"
            "2,1,3,2\n3,1,4,3\n4,1,5,4\n5,1,6,5\n");
}

TEST(AcrossReplications, StudentInterval) {
  const auto iv = across_replications({1.0, 2.0, 3.0}, 0.95);
  EXPECT_DOUBLE_EQ(iv.mean, 2.0);
  // t_{0.975, 2} = 4.302652729749464; sd = 1.
  EXPECT_NEAR(*iv.half_width, 4.302652729749464 / std::sqrt(3.0), 1e-12);
}

}  // namespace
}  // namespace aoisec
