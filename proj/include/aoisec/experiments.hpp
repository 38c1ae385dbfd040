#pragma once

// Figure-reproduction sweeps, the three-way comparison harness and the
// transmission-probability optimizer. Every runner returns its CSV as text so
// callers can write it, diff it or parse it back.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "aoisec/analytics.hpp"
#include "aoisec/report.hpp"
#include "aoisec/simulator.hpp"

namespace aoisec {

enum class Experiment { kFig1, kFig2, kCompare, kOptimize };
using Method = Provenance;

std::string_view to_string(Experiment experiment);
Experiment parse_experiment(std::string_view text);
Method parse_method(std::string_view text);

struct OracleSettings {
  std::uint32_t min_truncation = 400;
  std::uint32_t max_truncation = 1500;
  double max_tail_mass = 1e-10;   // boundary mass bound for probabilities
  double max_mean_error = 1e-7;   // truncation bound for the mean secrecy age
  double tol = 1e-12;             // L1 residual of power iteration
  std::size_t max_iters = 200'000;
};

struct Tolerances {
  double probability = 1e-9;
  double mean = 1e-6;
  double grid_step = 1e-3;
};

struct SweepSpec {
  Experiment experiment = Experiment::kCompare;
  std::vector<double> p;
  std::vector<double> q;
  std::vector<double> p_tx;
  std::vector<double> ratio;             // fig1 only: p / q
  std::vector<std::uint64_t> eta_th;
  std::vector<Method> methods;
  OutageConvention convention = kDefaultConvention;
  std::string output_path;
  std::uint64_t seed = 20200101;
  unsigned workers = 1;
  SimConfig sim;
  OracleSettings oracle;
  Tolerances tolerances;

  /// Default grids per experiment.
  static SweepSpec defaults(Experiment experiment);
  void validate() const;
};

struct SweepResult {
  std::string csv;
  std::string summary;
  std::vector<std::string> skipped;  // human-readable reasons for dropped rows
  bool passed = true;
};

/// Oracle report with N chosen so the geometric truncation bounds meet the
/// settings (never below min_truncation, capped at max_truncation).
SecrecyReport oracle_report(const ChannelParams& params, const Policy& policy,
                            const SecrecyThreshold& threshold, const OracleSettings& settings);

/// Truncation the oracle would use for these parameters.
std::uint32_t oracle_truncation(const ChannelParams& params, const Policy& policy,
                                const OracleSettings& settings);

/// First p_tx on {step, 2 step, ..., 1} maximizing objective().
double grid_argmax_ptx(const ChannelParams& params, const SecrecyThreshold& threshold,
                       OutageConvention convention, double step);

/// Columns: q,p_tx,ratio,p,closed_form,oracle,oracle_error_bound,monte_carlo,monte_carlo_half_width
SweepResult run_fig1_sweep(const SweepSpec& spec);
/// Columns: p,q,eta_th,p_tx,convention,closed_form,oracle,monte_carlo,monte_carlo_half_width,star
SweepResult run_fig2_sweep(const SweepSpec& spec);
/// Columns: p,q,p_tx,eta_th,metric,method,convention,value,half_width,error_bound,
///          reference,reference_value,abs_diff,tolerance,gap_pmf_at_threshold,status
SweepResult run_compare(const SweepSpec& spec);
/// Columns: q,eta_th,convention,p,closed_form_ptx,grid_argmax_ptx,gap,within_step
SweepResult run_optimize(const SweepSpec& spec);

SweepResult run_experiment(const SweepSpec& spec);

}  // namespace aoisec
