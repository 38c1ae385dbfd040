#include "aoisec/report.hpp"

#include <algorithm>

namespace aoisec {

std::string_view to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::kClosedForm:
      return "closed_form";
    case Provenance::kOracle:
      return "oracle";
    case Provenance::kMonteCarlo:
      return "monte_carlo";
  }
  return "unknown";
}

double SecrecyReport::secrecy_age_cdf(std::uint64_t lag) const {
  double total = nonpositive_gap_mass;
  const auto upto = std::min<std::uint64_t>(lag, gap_pmf.size());
  for (std::uint64_t d = 0; d < upto; ++d) total += gap_pmf[d];
  return total;
}

SecrecyReport closed_form_report(const ChannelParams& params, const Policy& policy,
                                 const SecrecyThreshold& threshold,
                                 OutageConvention convention, std::uint64_t max_gap) {
  SecrecyReport report;
  report.provenance = Provenance::kClosedForm;
  report.convention = convention;
  report.eta_th = threshold.eta_th();
  report.average_secrecy_age = average_secrecy_age(params, policy);
  report.outage = outage_probability(params, policy, threshold, convention);
  report.nonpositive_gap_mass = 1.0 - positive_gap_probability(params);
  report.gap_pmf.reserve(max_gap);
  for (std::uint64_t d = 1; d <= max_gap; ++d) {
    report.gap_pmf.push_back(secrecy_gap_pmf(d, params, policy));
  }
  return report;
}

}  // namespace aoisec
