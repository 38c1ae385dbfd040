#include "aoisec/chain_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

namespace aoisec {

ConvergenceError::ConvergenceError(double residual, std::size_t iterations)
    : std::runtime_error("power iteration did not converge after " +
                         std::to_string(iterations) + " iterations (residual " +
                         std::to_string(residual) + ")"),
      residual_(residual),
      iterations_(iterations) {}

std::size_t TruncatedChain::index(Age i, Age j) const {
  if (i < 1 || j < 1 || i > truncation_ || j > truncation_) {
    throw std::out_of_range("state outside truncated support");
  }
  return static_cast<std::size_t>(i - 1) * truncation_ + static_cast<std::size_t>(j - 1);
}

AgeState TruncatedChain::state(std::size_t index) const {
  return {index / truncation_ + 1, index % truncation_ + 1};
}

double TruncatedChain::max_row_defect() const {
  // Every row carries the same four outcome weights; check they land inside
  // the support and sum to one.
  const std::size_t n = state_count();
  for (const auto& succ : successors_) {
    if (std::any_of(succ.begin(), succ.end(), [n](std::uint32_t s) { return s >= n; })) {
      return std::numeric_limits<double>::infinity();
    }
  }
  double row = 0.0;
  for (double w : probs_) row += w;
  return std::abs(row - 1.0);
}

void TruncatedChain::apply(std::span<const double> pi, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  const std::size_t n = state_count();
  for (std::size_t k = 0; k < probs_.size(); ++k) {
    const double w = probs_[k];
    if (w == 0.0) continue;
    // Successor lists are dominated by long runs of one target (the reset
    // states), so accumulate each run before touching memory.
    const std::uint32_t* succ = successors_[k].data();
    std::uint32_t target = succ[0];
    double run = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      if (succ[s] != target) {
        out[target] += w * run;
        target = succ[s];
        run = 0.0;
      }
      run += pi[s];
    }
    out[target] += w * run;
  }
}

double boundary_mass_bound(const ChannelParams& params, const Policy& policy,
                           std::uint32_t truncation) {
  const double n = static_cast<double>(truncation) - 1.0;
  return std::pow(1.0 - policy.p_tx() * params.p(), n) +
         std::pow(1.0 - policy.p_tx() * params.q(), n);
}

std::uint32_t truncation_for_tail(const ChannelParams& params, const Policy& policy,
                                  double max_tail_mass, std::uint32_t min_truncation,
                                  std::uint32_t max_truncation) {
  for (std::uint32_t n = std::max<std::uint32_t>(min_truncation, 2); n <= max_truncation; ++n) {
    if (boundary_mass_bound(params, policy, n) <= max_tail_mass) return n;
  }
  throw TruncationError("no truncation up to " + std::to_string(max_truncation) +
                        " keeps the boundary mass below " + std::to_string(max_tail_mass));
}

std::uint32_t truncation_for_mean_error(const ChannelParams& params, const Policy& policy,
                                        double max_error, std::uint32_t min_truncation,
                                        std::uint32_t max_truncation) {
  const double r = policy.p_tx() * params.q();
  if (r > 0.0) {
    for (std::uint32_t n = std::max<std::uint32_t>(min_truncation, 2); n <= max_truncation; ++n) {
      if (std::pow(1.0 - r, static_cast<double>(n)) / r <= max_error) return n;
    }
  }
  throw TruncationError("no truncation up to " + std::to_string(max_truncation) +
                        " bounds the mean secrecy age error by " + std::to_string(max_error));
}

TruncatedChain build_truncated_chain(const ChannelParams& params, const Policy& policy,
                                     std::uint32_t truncation,
                                     std::optional<double> max_tail_mass) {
  if (truncation < 2) throw std::invalid_argument("truncation must be at least 2");
  if (static_cast<std::uint64_t>(truncation) * truncation >
      std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("truncation too large for 32-bit state indices");
  }
  if (max_tail_mass) {
    const double bound = boundary_mass_bound(params, policy, truncation);
    if (bound > *max_tail_mass) {
      throw TruncationError("truncation " + std::to_string(truncation) +
                            " leaves boundary mass bound " + std::to_string(bound) +
                            " above requested " + std::to_string(*max_tail_mass));
    }
  }

  TruncatedChain chain;
  chain.truncation_ = truncation;
  chain.probs_ = outcome_probabilities(params, policy);
  chain.reset_d_ = policy.p_tx() * params.p();
  chain.reset_e_ = policy.p_tx() * params.q();

  const std::uint32_t n = truncation;
  const std::size_t states = static_cast<std::size_t>(n) * n;
  for (auto& succ : chain.successors_) succ.resize(states);

  auto idx = [n](std::uint32_t i, std::uint32_t j) { return (i - 1) * n + (j - 1); };
  std::uint64_t clamped = 0;
  for (std::uint32_t i = 1; i <= n; ++i) {
    const std::uint32_t i_next = std::min(i + 1, n);
    for (std::uint32_t j = 1; j <= n; ++j) {
      const std::uint32_t j_next = std::min(j + 1, n);
      const std::uint32_t s = idx(i, j);
      chain.successors_[0][s] = idx(1, 1);
      chain.successors_[1][s] = idx(i_next, 1);
      chain.successors_[2][s] = idx(1, j_next);
      chain.successors_[3][s] = idx(i_next, j_next);
      clamped += (i == n) + (j == n) + (i == n || j == n);
    }
  }
  chain.clamped_ = clamped;
  return chain;
}

double SteadyState::boundary_mass_d() const {
  double total = 0.0;
  for (std::uint32_t j = 1; j <= truncation; ++j) total += at(truncation, j);
  return total;
}

double SteadyState::boundary_mass_e() const {
  double total = 0.0;
  for (std::uint32_t i = 1; i <= truncation; ++i) total += at(i, truncation);
  return total;
}

SteadyState steady_state(const TruncatedChain& chain, double tol, std::size_t max_iters,
                         std::optional<std::vector<double>> initial) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const std::size_t n = chain.state_count();

  std::vector<double> cur;
  if (initial) {
    if (initial->size() != n) throw std::invalid_argument("initial distribution has wrong size");
    cur = std::move(*initial);
  } else {
    cur.assign(n, 0.0);
    cur[chain.index(1, 1)] = 1.0;
  }
  std::vector<double> next(n);

  double residual = std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it <= max_iters; ++it) {
    chain.apply(cur, next);
    residual = 0.0;
    for (std::size_t s = 0; s < n; ++s) residual += std::abs(next[s] - cur[s]);
    if (residual <= tol) {
      return {chain.truncation(), std::move(cur), it, residual};
    }
    cur.swap(next);
  }
  throw ConvergenceError(residual, max_iters);
}

SecrecyReport oracle_metrics(const TruncatedChain& chain, const SteadyState& steady,
                             const SecrecyThreshold& threshold) {
  const std::uint32_t n = steady.truncation;
  SecrecyReport report;
  report.provenance = Provenance::kOracle;
  report.convention = OutageConvention::kStrictDefinition;
  report.eta_th = threshold.eta_th();
  report.gap_pmf.assign(n - 1, 0.0);

  double mean = 0.0;
  double nonpositive = 0.0;
  for (std::uint32_t i = 1; i <= n; ++i) {
    const double* row = steady.pi.data() + static_cast<std::size_t>(i - 1) * n;
    for (std::uint32_t j = 1; j <= i; ++j) nonpositive += row[j - 1];
    for (std::uint32_t j = i + 1; j <= n; ++j) {
      const double m = row[j - 1];
      report.gap_pmf[j - i - 1] += m;
      mean += static_cast<double>(j - i) * m;
    }
  }
  report.average_secrecy_age = mean;
  report.nonpositive_gap_mass = nonpositive;
  report.outage = report.secrecy_age_cdf(threshold.eta_th());

  // Truncation: mass pinned on the boundary. Convergence: the distance to the
  // fixed point is about residual / (slowest per-slot reset rate).
  const double edge_d = steady.boundary_mass_d();
  const double edge_e = steady.boundary_mass_e();
  const double inf = std::numeric_limits<double>::infinity();
  const double r = chain.reset_rate_e();
  const double slowest = std::min(chain.reset_rate_d(), r);
  const double unconverged = steady.residual == 0.0 ? 0.0
                             : slowest > 0.0        ? steady.residual / slowest
                                                    : inf;
  report.probability_error_bound = edge_d + edge_e + unconverged;
  const double clamp_mean = r > 0.0 ? edge_e * (1.0 - r) / r : (edge_e > 0.0 ? inf : 0.0);
  report.mean_error_bound = clamp_mean + static_cast<double>(n) * unconverged;
  return report;
}

void write_steady_state_csv(std::ostream& out, const SteadyState& steady) {
  out << "i,j,probability\n";
  const auto old_precision = out.precision(17);
  for (std::uint32_t i = 1; i <= steady.truncation; ++i) {
    for (std::uint32_t j = 1; j <= steady.truncation; ++j) {
      const double m = steady.at(i, j);
      if (m != 0.0) out << i << ',' << j << ',' << m << '\n';
    }
  }
  out.precision(old_precision);
}

}  // namespace aoisec
