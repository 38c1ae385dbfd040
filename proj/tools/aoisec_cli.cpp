// aoisec: figure sweeps, three-way comparison and p_tx optimization for the
// secrecy-age model.
//
//   aoisec fig1 [--config PATH] [--out PATH] ...
//   aoisec fig2 ...
//   aoisec compare --methods closed_form,oracle,monte_carlo --seed 7
//   aoisec optimize --q 0.25 --eta 8
//
// CSV goes to --out (or stdout), the plain-text summary to stdout (or stderr
// when the CSV occupies stdout). Exit status: 0 all checks pass, 1 a check
// failed, 2 bad invocation or configuration.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "aoisec/chain_oracle.hpp"
#include "aoisec/config.hpp"
#include "aoisec/experiments.hpp"
#include "aoisec/simulator.hpp"

namespace {

using namespace aoisec;

struct Overrides {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string convention;
  std::string methods;
  std::string p, q, p_tx, eta_th, ratio;
  std::optional<unsigned> workers;
  std::optional<std::uint64_t> horizon, burn_in;
  std::optional<std::uint32_t> replications, truncation;
  std::optional<double> tol_probability, tol_mean, grid_step;
  std::string trace;
  std::string dump_pi;
};

void add_common_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "INI or JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "CSV output path (default stdout)");
  cmd->add_option("--seed", o.seed, "base seed for Monte Carlo streams");
  cmd->add_option("--convention", o.convention, "outage convention")
      ->check(CLI::IsMember({"paper", "strict"}));
  cmd->add_option("--methods", o.methods, "comma list of closed_form, oracle, monte_carlo");
  cmd->add_option("--p", o.p, "S->D success probabilities (list or start:stop:step)");
  cmd->add_option("--q", o.q, "S->E success probabilities");
  cmd->add_option("--ptx", o.p_tx, "transmission probabilities");
  cmd->add_option("--eta", o.eta_th, "secrecy outage thresholds (slots)");
  cmd->add_option("--ratio", o.ratio, "p/q ratios (fig1)");
  cmd->add_option("--workers", o.workers, "parameter points evaluated in parallel");
  cmd->add_option("--horizon", o.horizon, "recorded slots per replication");
  cmd->add_option("--burn-in", o.burn_in, "discarded slots per replication");
  cmd->add_option("--replications", o.replications, "Monte Carlo replications per point");
  cmd->add_option("--truncation", o.truncation, "minimum oracle truncation N");
  cmd->add_option("--tol-prob", o.tol_probability, "closed-form vs oracle tolerance on probabilities");
  cmd->add_option("--tol-mean", o.tol_mean, "closed-form vs oracle tolerance on means");
  cmd->add_option("--grid-step", o.grid_step, "p_tx grid step for argmax searches");
}

SweepSpec build_spec(Experiment experiment, const Overrides& o) {
  SweepSpec spec = SweepSpec::defaults(experiment);
  if (!o.config.empty()) {
    apply_config(load_config(o.config), spec);
    if (spec.experiment != experiment) {
      throw std::invalid_argument("config file selects experiment '" +
                                  std::string(to_string(spec.experiment)) + "'");
    }
  }
  if (!o.out.empty()) spec.output_path = o.out;
  if (o.seed) spec.seed = *o.seed;
  if (!o.convention.empty()) spec.convention = parse_convention(o.convention);
  if (!o.methods.empty()) spec.methods = parse_method_list(o.methods);
  if (!o.p.empty()) spec.p = parse_real_list(o.p);
  if (!o.q.empty()) spec.q = parse_real_list(o.q);
  if (!o.p_tx.empty()) spec.p_tx = parse_real_list(o.p_tx);
  if (!o.eta_th.empty()) spec.eta_th = parse_count_list(o.eta_th);
  if (!o.ratio.empty()) spec.ratio = parse_real_list(o.ratio);
  if (o.workers) spec.workers = *o.workers;
  if (o.horizon) spec.sim.horizon = *o.horizon;
  if (o.burn_in) spec.sim.burn_in = *o.burn_in;
  if (o.replications) spec.sim.replications = *o.replications;
  if (o.truncation) spec.oracle.min_truncation = *o.truncation;
  if (o.tol_probability) spec.tolerances.probability = *o.tol_probability;
  if (o.tol_mean) spec.tolerances.mean = *o.tol_mean;
  if (o.grid_step) spec.tolerances.grid_step = *o.grid_step;
  spec.validate();
  return spec;
}

void write_debug_exports(const SweepSpec& spec, const Overrides& o) {
  if (o.trace.empty() && o.dump_pi.empty()) return;
  const ChannelParams params(spec.p.front(), spec.q.front());
  const Policy policy(spec.p_tx.front());
  const SecrecyThreshold threshold(spec.eta_th.front());
  if (!o.trace.empty()) {
    if (spec.sim.horizon + spec.sim.burn_in > 100'000) {
      throw std::invalid_argument("--trace is limited to burn-in + horizon <= 100000 slots");
    }
    SimConfig sim = spec.sim;
    sim.base_seed = derive_seed(spec.seed, 0);
    sim.threshold = threshold;
    std::ofstream out(o.trace);
    run_replication(params, policy, sim, 0, &out);
  }
  if (!o.dump_pi.empty()) {
    const auto chain =
        build_truncated_chain(params, policy, oracle_truncation(params, policy, spec.oracle));
    const auto steady = steady_state(chain, spec.oracle.tol, spec.oracle.max_iters);
    std::ofstream out(o.dump_pi);
    write_steady_state_csv(out, steady);
  }
}

int run(Experiment experiment, const Overrides& o) {
  const SweepSpec spec = build_spec(experiment, o);
  const SweepResult result = run_experiment(spec);
  for (const auto& reason : result.skipped) std::cerr << reason << '\n';

  if (spec.output_path.empty()) {
    std::cout << result.csv;
    std::cerr << result.summary;
  } else {
    std::ofstream out(spec.output_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + spec.output_path);
    out << result.csv;
    std::cout << result.summary;
  }
  if (experiment == Experiment::kCompare) write_debug_exports(spec, o);
  return result.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secrecy age of information: sweeps, cross-validation and optimization"};
  app.require_subcommand(1);

  Overrides o;
  std::optional<Experiment> chosen;
  const std::pair<const char*, Experiment> commands[] = {
      {"fig1", Experiment::kFig1},
      {"fig2", Experiment::kFig2},
      {"compare", Experiment::kCompare},
      {"optimize", Experiment::kOptimize},
  };
  const char* descriptions[] = {
      "average secrecy age versus p/q for several (q, p_tx)",
      "objective p_tx (1 - P_out) versus p_tx with starred optima",
      "closed form vs truncated-chain oracle vs Monte Carlo",
      "optimal transmission probability per convention and grid argmax",
  };
  for (std::size_t k = 0; k < std::size(commands); ++k) {
    auto* cmd = app.add_subcommand(commands[k].first, descriptions[k]);
    add_common_options(cmd, o);
    if (commands[k].second == Experiment::kCompare) {
      cmd->add_option("--trace", o.trace, "CSV trace of replication 0 at the first grid point");
      cmd->add_option("--dump-pi", o.dump_pi, "CSV of the oracle steady state at the first grid point");
    }
    const Experiment e = commands[k].second;
    cmd->callback([&chosen, e] { chosen = e; });
  }

  CLI11_PARSE(app, argc, argv);
  try {
    return run(*chosen, o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
