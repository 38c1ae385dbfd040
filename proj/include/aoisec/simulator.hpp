#pragma once

// Seeded Monte Carlo estimation of the secrecy metrics.
//
// Each replication starts at (1, 1), discards `burn_in` slots and then records
// the state at the start of each of `horizon` slots before applying that
// slot's transition. Replications draw from independent mt19937_64 streams
// whose seeds are a pure function of (base_seed, replication index), so the
// estimate does not depend on how replications are scheduled across workers.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "aoisec/model.hpp"

namespace aoisec {

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;
/// Seed for sub-stream `stream` of `base`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept;

struct SimConfig {
  std::uint64_t horizon = 1'000'000;
  std::uint64_t burn_in = 10'000;
  std::uint32_t replications = 32;
  std::uint64_t base_seed = 20200101;
  SecrecyThreshold threshold{1};
  unsigned workers = 1;
  double confidence = 0.95;

  /// Throws std::invalid_argument on inconsistent settings, including horizons
  /// whose age or running-sum counters could overflow 64 bits.
  void validate() const;
};

struct ReplicationStats {
  std::uint64_t seed = 0;
  std::uint64_t slots = 0;
  std::uint64_t secrecy_age_sum = 0;
  std::uint64_t within_threshold = 0;  // slots with secrecy age <= eta_th
  std::uint64_t fresh_both = 0;        // slots spent in state (1, 1)
  std::vector<std::uint64_t> gap_counts;  // index = secrecy age (0 = no gap)

  double mean_secrecy_age() const;
  double frequency_at_most(std::uint64_t lag) const;
};

/// Optional trace sink: CSV "slot,delta_d,delta_e,secrecy_age", one row per
/// recorded slot. Intended for short horizons.
ReplicationStats run_replication(const ChannelParams& params, const Policy& policy,
                                 const SimConfig& config, std::uint32_t replication_index,
                                 std::ostream* trace = nullptr);

/// Point estimate with a two-sided interval across replication means.
/// half_width is empty when there is a single replication.
struct Interval {
  double mean = 0.0;
  std::optional<double> half_width;

  bool covers(double value) const {
    return half_width && value >= mean - *half_width && value <= mean + *half_width;
  }
};

struct SimEstimate {
  Interval mean_secrecy_age;
  Interval outage;  // Pr(secrecy age <= eta_th)
  std::map<std::uint64_t, double> empirical_gap_pmf;  // d >= 1, pooled over replications
  std::uint64_t slots_observed = 0;
  double confidence = 0.95;
  std::vector<ReplicationStats> replications;

  /// Pr(secrecy age <= lag) with its interval, from the stored replications.
  Interval outage_at(std::uint64_t lag) const;
  /// Pooled fraction of recorded slots spent in (1, 1).
  double fresh_both_frequency() const;
};

/// Two-sided interval of replication means using the Student-t critical value.
Interval across_replications(const std::vector<double>& per_replication, double confidence);

SimEstimate estimate(const ChannelParams& params, const Policy& policy, const SimConfig& config);

}  // namespace aoisec
