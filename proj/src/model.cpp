#include "aoisec/model.hpp"

#include <stdexcept>
#include <string>

namespace aoisec {
namespace {

bool is_probability(double x) { return x >= 0.0 && x <= 1.0; }

Age next_age(Age age) {
  if (age >= kMaxAge) {
    throw std::overflow_error("age counter exceeds supported range");
  }
  return age + 1;
}

}  // namespace

ChannelParams::ChannelParams(double p, double q) : p_(p), q_(q) {
  if (!is_probability(p) || !is_probability(q)) {
    throw std::invalid_argument("channel success probabilities must lie in [0, 1], got p=" +
                                std::to_string(p) + " q=" + std::to_string(q));
  }
}

Policy::Policy(double p_tx) : p_tx_(p_tx) {
  if (!(p_tx > 0.0 && p_tx <= 1.0)) {
    throw std::invalid_argument("transmission probability must lie in (0, 1], got " +
                                std::to_string(p_tx));
  }
}

AgeState::AgeState(Age delta_d, Age delta_e) : delta_d_(delta_d), delta_e_(delta_e) {
  if (delta_d < 1 || delta_e < 1) {
    throw std::invalid_argument("ages are at least 1 slot");
  }
}

SecrecyThreshold::SecrecyThreshold(std::uint64_t eta_th) : eta_th_(eta_th) {
  if (eta_th < 1) {
    throw std::invalid_argument("secrecy threshold must be at least 1 slot");
  }
}

std::array<double, 4> outcome_probabilities(const ChannelParams& params,
                                            const Policy& policy) {
  const double tx = policy.p_tx();
  const double p = params.p();
  const double q = params.q();
  return {
      tx * p * q,
      tx * (1.0 - p) * q,
      tx * p * (1.0 - q),
      tx * (1.0 - p) * (1.0 - q) + (1.0 - tx),
  };
}

AgeState apply_outcome(const AgeState& state, SlotOutcome outcome) {
  switch (outcome) {
    case SlotOutcome::kBoth:
      return {1, 1};
    case SlotOutcome::kOnlyE:
      return {next_age(state.delta_d()), 1};
    case SlotOutcome::kOnlyD:
      return {1, next_age(state.delta_e())};
    case SlotOutcome::kNeither:
      break;
  }
  return {next_age(state.delta_d()), next_age(state.delta_e())};
}

std::vector<Transition> transition_distribution(const AgeState& state,
                                                const ChannelParams& params,
                                                const Policy& policy) {
  const auto probs = outcome_probabilities(params, policy);
  std::vector<Transition> out;
  out.reserve(4);
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] > 0.0) {
      out.push_back({apply_outcome(state, static_cast<SlotOutcome>(k)), probs[k]});
    }
  }
  return out;
}

SlotOutcome sample_outcome(const std::array<double, 4>& probabilities,
                           std::mt19937_64& rng) {
  const double u = uniform01(rng);
  double acc = probabilities[0];
  if (u < acc) return SlotOutcome::kBoth;
  acc += probabilities[1];
  if (u < acc) return SlotOutcome::kOnlyE;
  acc += probabilities[2];
  if (u < acc) return SlotOutcome::kOnlyD;
  return SlotOutcome::kNeither;
}

AgeState sample_slot(const AgeState& state, const ChannelParams& params,
                     const Policy& policy, std::mt19937_64& rng) {
  return apply_outcome(state, sample_outcome(outcome_probabilities(params, policy), rng));
}

}  // namespace aoisec
