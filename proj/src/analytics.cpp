#include "aoisec/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace aoisec {
namespace {

constexpr std::uint64_t kLogDomainExponent = 1'000'000;

// p + q - pq: per-slot probability, given a transmission, that at least one
// receiver resets.
double any_success(const ChannelParams& params) {
  return params.p() + params.q() - params.p() * params.q();
}

void require_some_link(const ChannelParams& params) {
  if (params.p() == 0.0 && params.q() == 0.0) {
    throw std::domain_error("p = q = 0: neither receiver ever resets");
  }
}

// Factor applied on every diagonal step (i, j) -> (i+1, j+1).
double diagonal_rate(const ChannelParams& params, const Policy& policy) {
  return policy.p_tx() * any_success(params);
}

std::uint64_t tail_exponent(const SecrecyThreshold& threshold, OutageConvention convention) {
  return convention == OutageConvention::kStrictDefinition ? threshold.eta_th()
                                                           : threshold.eta_th() - 1;
}

}  // namespace

std::string_view to_string(OutageConvention convention) {
  return convention == OutageConvention::kPaperPrinted ? "paper" : "strict";
}

OutageConvention parse_convention(std::string_view text) {
  if (text == "paper" || text == "PAPER_PRINTED") return OutageConvention::kPaperPrinted;
  if (text == "strict" || text == "STRICT_DEFINITION") return OutageConvention::kStrictDefinition;
  throw std::invalid_argument("unknown outage convention '" + std::string(text) +
                              "' (expected paper or strict)");
}

StationaryQuery::StationaryQuery(std::uint64_t i_, std::uint64_t j_) : i(i_), j(j_) {
  if (i < 1 || j < 1) throw std::invalid_argument("stationary indices start at 1");
}

double complement_power(double x, std::uint64_t n) {
  if (n == 0) return 1.0;
  if (n > kLogDomainExponent) {
    return std::exp(static_cast<double>(n) * std::log1p(-x));
  }
  return std::pow(1.0 - x, static_cast<double>(n));
}

double stationary_pi(const StationaryQuery& query, const ChannelParams& params,
                     const Policy& policy) {
  const double tx = policy.p_tx();
  const double p = params.p();
  const double q = params.q();
  const double diag = diagonal_rate(params, policy);
  const auto [i, j] = std::pair{query.i, query.j};

  if (i == j) {
    return tx * p * q * complement_power(diag, i - 1);
  }
  if (i > j) {
    // pi_{k,1} = p_tx p * p_tx (1-p) q * (1 - p_tx p)^(k-2), k = i - j + 1
    const double first_col = tx * p * tx * (1.0 - p) * q * complement_power(tx * p, i - j - 1);
    return first_col * complement_power(diag, j - 1);
  }
  const double first_row = tx * q * tx * (1.0 - q) * p * complement_power(tx * q, j - i - 1);
  return first_row * complement_power(diag, i - 1);
}

double row_sum(std::uint64_t i, const ChannelParams& params, const Policy& policy) {
  if (i < 1) throw std::invalid_argument("row index starts at 1");
  const double rate = policy.p_tx() * params.p();
  return rate * complement_power(rate, i - 1);
}

double col_sum(std::uint64_t j, const ChannelParams& params, const Policy& policy) {
  if (j < 1) throw std::invalid_argument("column index starts at 1");
  const double rate = policy.p_tx() * params.q();
  return rate * complement_power(rate, j - 1);
}

double secrecy_gap_pmf(std::uint64_t d, const ChannelParams& params, const Policy& policy) {
  if (d < 1) throw std::invalid_argument("gap must be at least 1");
  require_some_link(params);
  const double rate = policy.p_tx() * params.q();
  return rate * params.p() * (1.0 - params.q()) * complement_power(rate, d - 1) /
         any_success(params);
}

double positive_gap_probability(const ChannelParams& params) {
  require_some_link(params);
  return params.p() * (1.0 - params.q()) / any_success(params);
}

double average_secrecy_age(const ChannelParams& params, const Policy& policy) {
  require_some_link(params);
  if (params.q() == 0.0) return std::numeric_limits<double>::infinity();
  return params.p() * (1.0 - params.q()) /
         (policy.p_tx() * params.q() * any_success(params));
}

double outage_probability(const ChannelParams& params, const Policy& policy,
                          const SecrecyThreshold& threshold, OutageConvention convention) {
  const double tail = positive_gap_probability(params) *
                      complement_power(policy.p_tx() * params.q(),
                                       tail_exponent(threshold, convention));
  return 1.0 - tail;
}

double objective(const ChannelParams& params, const Policy& policy,
                 const SecrecyThreshold& threshold, OutageConvention convention) {
  return policy.p_tx() * (1.0 - outage_probability(params, policy, threshold, convention));
}

double optimal_ptx(double q, const SecrecyThreshold& threshold, OutageConvention convention) {
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("q must lie in [0, 1]");
  if (q == 0.0) return 1.0;
  const double lag = convention == OutageConvention::kStrictDefinition
                         ? static_cast<double>(threshold.eta_th()) + 1.0
                         : static_cast<double>(threshold.eta_th());
  return std::min(1.0 / (q * lag), 1.0);
}

}  // namespace aoisec
