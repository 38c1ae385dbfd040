#pragma once

// Domain types and the one-slot transition law of the source / destination /
// eavesdropper status-update system.

#include <array>
#include <cstdint>
#include <random>
#include <vector>

namespace aoisec {

/// Age counters are 64-bit. Configured horizons are validated against
/// kMaxAge so an increment can never wrap.
using Age = std::uint64_t;
inline constexpr Age kMaxAge = Age{1} << 62;

/// Per-slot success probabilities of the S->D link (p) and the S->E link (q).
class ChannelParams {
 public:
  ChannelParams(double p, double q);

  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }

  friend bool operator==(const ChannelParams&, const ChannelParams&) = default;

 private:
  double p_;
  double q_;
};

/// Randomized stationary policy: transmit a fresh update with probability p_tx.
class Policy {
 public:
  explicit Policy(double p_tx);

  double p_tx() const noexcept { return p_tx_; }

  friend bool operator==(const Policy&, const Policy&) = default;

 private:
  double p_tx_;
};

/// Instantaneous ages (delta_D, delta_E) at the destination and eavesdropper.
class AgeState {
 public:
  AgeState(Age delta_d, Age delta_e);

  Age delta_d() const noexcept { return delta_d_; }
  Age delta_e() const noexcept { return delta_e_; }

  friend bool operator==(const AgeState&, const AgeState&) = default;
  friend auto operator<=>(const AgeState&, const AgeState&) = default;

 private:
  Age delta_d_;
  Age delta_e_;
};

/// Target information lag eta_th between E and D, in slots (>= 1).
class SecrecyThreshold {
 public:
  explicit SecrecyThreshold(std::uint64_t eta_th);

  std::uint64_t eta_th() const noexcept { return eta_th_; }

  friend bool operator==(const SecrecyThreshold&, const SecrecyThreshold&) = default;

 private:
  std::uint64_t eta_th_;
};

/// The four joint outcomes of a slot. Reception indicators at D and E are
/// independent given a transmission; a silent slot folds into kNeither.
enum class SlotOutcome : std::uint8_t {
  kBoth = 0,       // transmit, D and E succeed
  kOnlyE = 1,      // transmit, D fails, E succeeds
  kOnlyD = 2,      // transmit, D succeeds, E fails
  kNeither = 3,    // no reset at either receiver
};

/// Outcome probabilities indexed by SlotOutcome. Sums to 1.
std::array<double, 4> outcome_probabilities(const ChannelParams& params,
                                            const Policy& policy);

/// Successor of `state` under a given outcome. Throws std::overflow_error if
/// an age would exceed kMaxAge.
AgeState apply_outcome(const AgeState& state, SlotOutcome outcome);

struct Transition {
  AgeState next;
  double probability;
};

/// Successor distribution of `state`. Zero-probability outcomes are dropped,
/// so every listed successor is distinct and has positive mass.
std::vector<Transition> transition_distribution(const AgeState& state,
                                                const ChannelParams& params,
                                                const Policy& policy);

/// Draws one outcome from a single 53-bit uniform.
SlotOutcome sample_outcome(const std::array<double, 4>& probabilities,
                           std::mt19937_64& rng);

AgeState sample_slot(const AgeState& state, const ChannelParams& params,
                     const Policy& policy, std::mt19937_64& rng);

/// max(delta_E - delta_D, 0)
inline Age secrecy_age(const AgeState& state) noexcept {
  return state.delta_e() > state.delta_d() ? state.delta_e() - state.delta_d()
                                           : Age{0};
}

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace aoisec
