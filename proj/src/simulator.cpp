#include "aoisec/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

namespace aoisec {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
  return mix64(mix64(base) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

void SimConfig::validate() const {
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1 slot");
  if (burn_in >= horizon) throw std::invalid_argument("burn-in must be shorter than the horizon");
  if (replications < 1) throw std::invalid_argument("at least one replication is required");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("confidence level must lie in (0, 1)");
  }
  // Ages never exceed burn_in + horizon + 1; the secrecy-age sum is bounded by
  // horizon * (burn_in + horizon).
  const std::uint64_t span = burn_in + horizon;
  if (span < horizon || span >= kMaxAge ||
      span > std::numeric_limits<std::uint64_t>::max() / horizon) {
    throw std::invalid_argument("horizon too long for 64-bit age accounting");
  }
}

double ReplicationStats::mean_secrecy_age() const {
  return slots ? static_cast<double>(secrecy_age_sum) / static_cast<double>(slots) : 0.0;
}

double ReplicationStats::frequency_at_most(std::uint64_t lag) const {
  std::uint64_t hits = 0;
  for (std::uint64_t d = 0; d <= lag && d < gap_counts.size(); ++d) hits += gap_counts[d];
  return slots ? static_cast<double>(hits) / static_cast<double>(slots) : 0.0;
}

ReplicationStats run_replication(const ChannelParams& params, const Policy& policy,
                                 const SimConfig& config, std::uint32_t replication_index,
                                 std::ostream* trace) {
  config.validate();
  ReplicationStats stats;
  stats.seed = derive_seed(config.base_seed, replication_index);
  std::mt19937_64 rng(stats.seed);

  const auto probs = outcome_probabilities(params, policy);
  const std::uint64_t eta = config.threshold.eta_th();
  const std::uint64_t total = config.burn_in + config.horizon;
  if (trace) *trace << "slot,delta_d,delta_e,secrecy_age\n";

  Age d = 1;
  Age e = 1;
  stats.gap_counts.assign(64, 0);
  for (std::uint64_t t = 0; t < total; ++t) {
    if (t >= config.burn_in) {
      const Age gap = e > d ? e - d : 0;
      stats.secrecy_age_sum += gap;
      stats.within_threshold += gap <= eta;
      stats.fresh_both += (d == 1 && e == 1);
      if (gap >= stats.gap_counts.size()) stats.gap_counts.resize(2 * gap + 1, 0);
      ++stats.gap_counts[gap];
      if (trace) *trace << t << ',' << d << ',' << e << ',' << gap << '\n';
    }
    switch (sample_outcome(probs, rng)) {
      case SlotOutcome::kBoth:
        d = 1;
        e = 1;
        break;
      case SlotOutcome::kOnlyE:
        ++d;
        e = 1;
        break;
      case SlotOutcome::kOnlyD:
        d = 1;
        ++e;
        break;
      case SlotOutcome::kNeither:
        ++d;
        ++e;
        break;
    }
  }
  stats.slots = config.horizon;
  while (stats.gap_counts.size() > 1 && stats.gap_counts.back() == 0) stats.gap_counts.pop_back();
  return stats;
}

Interval across_replications(const std::vector<double>& per_replication, double confidence) {
  Interval out;
  const std::size_t n = per_replication.size();
  if (n == 0) return out;
  double sum = 0.0;
  for (double x : per_replication) sum += x;
  out.mean = sum / static_cast<double>(n);
  if (n < 2) return out;
  double ss = 0.0;
  for (double x : per_replication) ss += (x - out.mean) * (x - out.mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  const boost::math::students_t dist(static_cast<double>(n - 1));
  const double crit = boost::math::quantile(dist, 0.5 + confidence / 2.0);
  out.half_width = crit * sd / std::sqrt(static_cast<double>(n));
  return out;
}

Interval SimEstimate::outage_at(std::uint64_t lag) const {
  std::vector<double> freq;
  freq.reserve(replications.size());
  for (const auto& r : replications) freq.push_back(r.frequency_at_most(lag));
  return across_replications(freq, confidence);
}

double SimEstimate::fresh_both_frequency() const {
  std::uint64_t hits = 0;
  for (const auto& r : replications) hits += r.fresh_both;
  return slots_observed ? static_cast<double>(hits) / static_cast<double>(slots_observed) : 0.0;
}

SimEstimate estimate(const ChannelParams& params, const Policy& policy, const SimConfig& config) {
  config.validate();
  const std::uint32_t reps = config.replications;
  std::vector<ReplicationStats> results(reps);

  const unsigned workers = std::max(1u, std::min<unsigned>(config.workers, reps));
  if (workers == 1) {
    for (std::uint32_t r = 0; r < reps; ++r) results[r] = run_replication(params, policy, config, r);
  } else {
    std::atomic<std::uint32_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::uint32_t r = next++; r < reps; r = next++) {
          results[r] = run_replication(params, policy, config, r);
        }
      });
    }
  }

  SimEstimate est;
  est.confidence = config.confidence;
  std::vector<double> means;
  std::vector<double> outages;
  std::vector<std::uint64_t> pooled;
  for (const auto& r : results) {
    means.push_back(r.mean_secrecy_age());
    outages.push_back(static_cast<double>(r.within_threshold) / static_cast<double>(r.slots));
    est.slots_observed += r.slots;
    if (pooled.size() < r.gap_counts.size()) pooled.resize(r.gap_counts.size(), 0);
    for (std::size_t g = 0; g < r.gap_counts.size(); ++g) pooled[g] += r.gap_counts[g];
  }
  est.mean_secrecy_age = across_replications(means, config.confidence);
  est.outage = across_replications(outages, config.confidence);
  for (std::size_t g = 1; g < pooled.size(); ++g) {
    if (pooled[g]) {
      est.empirical_gap_pmf[g] =
          static_cast<double>(pooled[g]) / static_cast<double>(est.slots_observed);
    }
  }
  est.replications = std::move(results);
  return est;
}

}  // namespace aoisec
