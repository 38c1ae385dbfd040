#pragma once

// Closed-form stationary analysis of the randomized stationary policy.
//
// The 2-D age chain has an explicit product-form steady state. Everything in
// this header is a direct evaluation of that form or of sums over it:
//   * pi(i, j), with separate expressions for the (1, 1) corner, the first
//     row and column, and the three regions i > j, j > i, i == j;
//   * row / column marginals, which are geometric in the per-slot reset rate
//     of each receiver;
//   * the law of the gap delta_E - delta_D above the diagonal, also geometric;
//   * the mean secrecy age, the outage probability and the throughput-style
//     objective p_tx * (1 - P_out), and its maximizer.
//
// Outage comes in two conventions (see OutageConvention). Every function that
// touches outage takes the convention explicitly.

#include <cstdint>
#include <string_view>

#include "aoisec/model.hpp"

namespace aoisec {

/// Which event the outage formula describes.
///
/// kStrictDefinition: Pr(secrecy age <= eta_th); the tail exponent is eta_th.
/// kPaperPrinted:     the same closed form with exponent eta_th - 1.
///                    It equals Pr(secrecy age <= eta_th - 1).
enum class OutageConvention { kPaperPrinted, kStrictDefinition };

inline constexpr OutageConvention kDefaultConvention = OutageConvention::kStrictDefinition;

/// "paper" / "strict"
std::string_view to_string(OutageConvention convention);
/// Accepts "paper", "strict" and the enumerator spellings PAPER_PRINTED and
/// STRICT_DEFINITION. Throws std::invalid_argument otherwise.
OutageConvention parse_convention(std::string_view text);

/// Index pair (i, j) of a stationary probability pi_{i,j}.
struct StationaryQuery {
  StationaryQuery(std::uint64_t i, std::uint64_t j);
  std::uint64_t i;
  std::uint64_t j;
};

/// (1 - x)^n in double precision. For n above 10^6 the power goes through
/// exp(n * log1p(-x)).
double complement_power(double x, std::uint64_t n);

double stationary_pi(const StationaryQuery& query, const ChannelParams& params,
                     const Policy& policy);

/// Sum over j of pi_{i,j} = p_tx p (1 - p_tx p)^(i-1).
double row_sum(std::uint64_t i, const ChannelParams& params, const Policy& policy);
/// Sum over i of pi_{i,j} = p_tx q (1 - p_tx q)^(j-1).
double col_sum(std::uint64_t j, const ChannelParams& params, const Policy& policy);

/// Pr(delta_E - delta_D = d) for d >= 1. Throws std::domain_error when
/// p = q = 0.
double secrecy_gap_pmf(std::uint64_t d, const ChannelParams& params, const Policy& policy);

/// Pr(delta_E - delta_D >= 1) = p(1-q) / (p + q - pq).
double positive_gap_probability(const ChannelParams& params);

/// p(1-q) / (p_tx q (p + q - pq)). Returns +infinity when q = 0 and p > 0
/// (E's age grows without bound). Throws std::domain_error when p = q = 0.
double average_secrecy_age(const ChannelParams& params, const Policy& policy);

double outage_probability(const ChannelParams& params, const Policy& policy,
                          const SecrecyThreshold& threshold, OutageConvention convention);

/// p_tx * (1 - P_out(p_tx)).
double objective(const ChannelParams& params, const Policy& policy,
                 const SecrecyThreshold& threshold, OutageConvention convention);

/// Maximizer of objective() over p_tx in (0, 1]. Independent of p.
///   kPaperPrinted:     min(1 / (q eta_th), 1)
///   kStrictDefinition: min(1 / (q (eta_th + 1)), 1)
/// q = 0 gives 1 (objective is increasing in p_tx). Throws for q outside [0, 1].
double optimal_ptx(double q, const SecrecyThreshold& threshold, OutageConvention convention);

}  // namespace aoisec
