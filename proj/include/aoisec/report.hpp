#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "aoisec/analytics.hpp"
#include "aoisec/model.hpp"

namespace aoisec {

enum class Provenance { kClosedForm, kOracle, kMonteCarlo };

std::string_view to_string(Provenance provenance);

/// Secrecy metrics for one (params, policy, threshold) point.
///
/// gap_pmf[d - 1] holds Pr(delta_E - delta_D = d). The outage figure is
/// labelled with the convention that produced it; oracle reports always use
/// kStrictDefinition because they evaluate the event directly.
struct SecrecyReport {
  Provenance provenance = Provenance::kClosedForm;
  OutageConvention convention = kDefaultConvention;
  std::uint64_t eta_th = 1;

  double average_secrecy_age = 0.0;
  double outage = 0.0;
  double nonpositive_gap_mass = 0.0;  // Pr(delta_E <= delta_D)
  std::vector<double> gap_pmf;

  // Truncation error bounds; zero for closed-form reports.
  double probability_error_bound = 0.0;
  double mean_error_bound = 0.0;

  /// Pr(secrecy age <= lag) from the stored gap law.
  double secrecy_age_cdf(std::uint64_t lag) const;
};

/// Closed-form report with the gap pmf tabulated for d = 1..max_gap.
SecrecyReport closed_form_report(const ChannelParams& params, const Policy& policy,
                                 const SecrecyThreshold& threshold,
                                 OutageConvention convention, std::uint64_t max_gap);

}  // namespace aoisec
