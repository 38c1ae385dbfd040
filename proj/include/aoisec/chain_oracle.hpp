#pragma once

// Numerical ground truth: the age chain truncated at N per coordinate, solved
// by power iteration.
//
// Ages that would step past N are pinned at N (saturating clamp). The clamp
// keeps the operator row-stochastic, and because each coordinate on its own
// is a reset-or-increment chain, every entry with i < N and j < N is the exact
// stationary probability of the infinite chain. The probability mass sitting
// on the boundary row/column is therefore exactly the truncation error, and
// it is reported with every oracle figure.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "aoisec/model.hpp"
#include "aoisec/report.hpp"

namespace aoisec {

class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(double residual, std::size_t iterations);
  double residual() const noexcept { return residual_; }
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  std::size_t iterations_;
};

/// Sparse transition operator over (i, j), 1 <= i, j <= N. Each state has one
/// successor per SlotOutcome; the outcome probabilities are shared by all
/// states.
class TruncatedChain {
 public:
  std::uint32_t truncation() const noexcept { return truncation_; }
  std::size_t state_count() const noexcept { return successors_[0].size(); }

  std::size_t index(Age i, Age j) const;
  AgeState state(std::size_t index) const;

  const std::array<double, 4>& outcome_probabilities() const noexcept { return probs_; }
  std::span<const std::uint32_t> successors(SlotOutcome outcome) const {
    return successors_[static_cast<std::size_t>(outcome)];
  }

  /// Number of (state, outcome) pairs whose successor was clamped at N.
  std::uint64_t clamped_transitions() const noexcept { return clamped_; }

  /// Per-slot reset probabilities of D and E (p_tx p and p_tx q).
  double reset_rate_d() const noexcept { return reset_d_; }
  double reset_rate_e() const noexcept { return reset_e_; }

  /// max over states of |row sum - 1|.
  double max_row_defect() const;

  /// pi * T
  void apply(std::span<const double> pi, std::span<double> out) const;

 private:
  friend TruncatedChain build_truncated_chain(const ChannelParams&, const Policy&,
                                              std::uint32_t, std::optional<double>);

  std::uint32_t truncation_ = 0;
  std::array<double, 4> probs_{};
  std::array<std::vector<std::uint32_t>, 4> successors_;
  std::uint64_t clamped_ = 0;
  double reset_d_ = 0.0;
  double reset_e_ = 0.0;
};

/// Geometric bound on the stationary mass at or beyond age N in either
/// coordinate: (1 - p_tx p)^(N-1) + (1 - p_tx q)^(N-1).
double boundary_mass_bound(const ChannelParams& params, const Policy& policy,
                           std::uint32_t truncation);

/// Smallest N >= min_truncation with boundary_mass_bound(N) <= max_tail_mass.
/// Throws TruncationError if no N up to max_truncation qualifies.
std::uint32_t truncation_for_tail(const ChannelParams& params, const Policy& policy,
                                  double max_tail_mass, std::uint32_t min_truncation = 2,
                                  std::uint32_t max_truncation = 4096);

/// Smallest N >= min_truncation with (1 - p_tx q)^N / (p_tx q) <= max_error,
/// which bounds E[(delta_E - N)^+], the mean secrecy age lost to the clamp.
/// Throws TruncationError if no N up to max_truncation qualifies.
std::uint32_t truncation_for_mean_error(const ChannelParams& params, const Policy& policy,
                                        double max_error, std::uint32_t min_truncation = 2,
                                        std::uint32_t max_truncation = 4096);

/// Builds the clamped chain. With `max_tail_mass` set, throws TruncationError
/// when N is too small for the geometric boundary bound to meet it.
TruncatedChain build_truncated_chain(const ChannelParams& params, const Policy& policy,
                                     std::uint32_t truncation,
                                     std::optional<double> max_tail_mass = std::nullopt);

struct SteadyState {
  std::uint32_t truncation = 0;
  std::vector<double> pi;  // indexed by TruncatedChain::index
  std::size_t iterations = 0;
  double residual = 0.0;   // || pi T - pi ||_1

  double at(Age i, Age j) const { return pi[(i - 1) * truncation + (j - 1)]; }
  /// Mass on the clamped row i = N and column j = N.
  double boundary_mass_d() const;
  double boundary_mass_e() const;
};

/// Power iteration from `initial` (default: point mass at (1, 1)) until the
/// L1 residual drops to `tol`. Throws ConvergenceError after max_iters.
SteadyState steady_state(const TruncatedChain& chain, double tol, std::size_t max_iters,
                         std::optional<std::vector<double>> initial = std::nullopt);

/// Secrecy metrics by exhaustive summation over the truncated support.
/// Outage is Pr(secrecy age <= eta_th). The gap pmf covers d = 1..N-1.
SecrecyReport oracle_metrics(const TruncatedChain& chain, const SteadyState& steady,
                             const SecrecyThreshold& threshold);

/// CSV dump with header "i,j,probability"; zero entries are skipped.
void write_steady_state_csv(std::ostream& out, const SteadyState& steady);

}  // namespace aoisec
