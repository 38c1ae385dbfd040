#include "aoisec/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "aoisec/chain_oracle.hpp"

namespace aoisec {
namespace {

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

std::string opt_num(const std::optional<double>& x) { return x ? num(*x) : std::string(); }

bool has_method(const SweepSpec& spec, Method m) {
  return std::find(spec.methods.begin(), spec.methods.end(), m) != spec.methods.end();
}

// Runs fn(0..n-1) on up to `workers` threads; results come back in index
// order whatever the completion order. The first exception (by index) is
// rethrown.
template <typename Fn>
auto parallel_map(std::size_t n, unsigned workers, Fn fn) {
  using T = decltype(fn(std::size_t{0}));
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  auto work = [&](std::size_t i) {
    try {
      slots[i].emplace(fn(i));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const unsigned pool_size = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  if (pool_size == 1) {
    for (std::size_t i = 0; i < n; ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < pool_size; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) work(i);
      });
    }
  }
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

SimConfig point_sim_config(const SweepSpec& spec, std::size_t point, std::uint64_t lag) {
  SimConfig sim = spec.sim;
  sim.base_seed = derive_seed(spec.seed, point);
  sim.threshold = SecrecyThreshold(std::max<std::uint64_t>(lag, 1));
  sim.workers = 1;
  return sim;
}

// Event evaluated by oracle / Monte Carlo columns when they stand in for a
// closed form under `convention`: Pr(secrecy age <= lag).
std::uint64_t convention_lag(std::uint64_t eta_th, OutageConvention convention) {
  return convention == OutageConvention::kStrictDefinition ? eta_th : eta_th - 1;
}

std::vector<double> default_ptx_grid() {
  std::vector<double> out;
  for (int k = 1; k <= 20; ++k) out.push_back(k / 20.0);
  return out;
}

void require_probabilities(const std::vector<double>& values, const char* name, bool open_zero) {
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0) || (open_zero && v == 0.0)) {
      throw std::invalid_argument(std::string(name) + " value out of range: " + num(v));
    }
  }
}

}  // namespace

std::string_view to_string(Experiment experiment) {
  switch (experiment) {
    case Experiment::kFig1:
      return "fig1";
    case Experiment::kFig2:
      return "fig2";
    case Experiment::kCompare:
      return "compare";
    case Experiment::kOptimize:
      return "optimize";
  }
  return "unknown";
}

Experiment parse_experiment(std::string_view text) {
  if (text == "fig1" || text == "FIG1") return Experiment::kFig1;
  if (text == "fig2" || text == "FIG2") return Experiment::kFig2;
  if (text == "compare" || text == "COMPARE") return Experiment::kCompare;
  if (text == "optimize" || text == "OPTIMIZE") return Experiment::kOptimize;
  throw std::invalid_argument("unknown experiment '" + std::string(text) + "'");
}

Method parse_method(std::string_view text) {
  if (text == "closed_form") return Method::kClosedForm;
  if (text == "oracle") return Method::kOracle;
  if (text == "monte_carlo") return Method::kMonteCarlo;
  throw std::invalid_argument("unknown method '" + std::string(text) +
                              "' (expected closed_form, oracle or monte_carlo)");
}

SweepSpec SweepSpec::defaults(Experiment experiment) {
  SweepSpec spec;
  spec.experiment = experiment;
  switch (experiment) {
    case Experiment::kFig1:
      spec.q = {0.1, 0.2};
      spec.p_tx = {0.5, 1.0};
      spec.ratio = {1, 2, 3, 4, 5, 6, 7, 8};
      spec.methods = {Method::kClosedForm};
      break;
    case Experiment::kFig2:
      spec.p = {0.8};
      spec.q = {0.2, 0.3};
      spec.eta_th = {5, 10};
      spec.p_tx = default_ptx_grid();
      spec.methods = {Method::kClosedForm};
      break;
    case Experiment::kCompare:
      spec.p = {0.8};
      spec.q = {0.2, 0.5};
      spec.p_tx = {0.5, 1.0};
      spec.eta_th = {5};
      spec.methods = {Method::kClosedForm, Method::kOracle, Method::kMonteCarlo};
      break;
    case Experiment::kOptimize:
      spec.p = {0.3, 0.9};
      spec.q = {0.1, 0.2, 0.3, 0.5};
      spec.eta_th = {2, 4, 5, 8};
      spec.methods = {Method::kClosedForm};
      break;
  }
  return spec;
}

void SweepSpec::validate() const {
  if (methods.empty()) throw std::invalid_argument("no evaluation method selected");
  require_probabilities(p, "p", false);
  require_probabilities(q, "q", false);
  require_probabilities(p_tx, "p_tx", true);
  for (double r : ratio) {
    if (!(r > 0.0)) throw std::invalid_argument("p/q ratios must be positive");
  }
  for (auto eta : eta_th) {
    if (eta < 1) throw std::invalid_argument("eta_th must be at least 1");
  }
  if (!(tolerances.grid_step > 0.0 && tolerances.grid_step <= 1.0)) {
    throw std::invalid_argument("grid step must lie in (0, 1]");
  }
  if (oracle.min_truncation < 2 || oracle.max_truncation < oracle.min_truncation) {
    throw std::invalid_argument("invalid oracle truncation limits");
  }
  if (has_method(*this, Method::kMonteCarlo)) sim.validate();

  auto need = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
  };
  switch (experiment) {
    case Experiment::kFig1:
      need(!q.empty() && !p_tx.empty() && !ratio.empty(), "fig1 needs q, p_tx and ratio grids");
      break;
    case Experiment::kFig2:
      need(!p.empty() && !q.empty() && !p_tx.empty() && !eta_th.empty(),
           "fig2 needs p, q, p_tx and eta_th grids");
      break;
    case Experiment::kCompare:
      need(!p.empty() && !q.empty() && !p_tx.empty() && !eta_th.empty(),
           "compare needs p, q, p_tx and eta_th grids");
      need(methods.size() >= 2, "compare needs at least two methods");
      break;
    case Experiment::kOptimize:
      need(!p.empty() && !q.empty() && !eta_th.empty(), "optimize needs p, q and eta_th grids");
      break;
  }
}

std::uint32_t oracle_truncation(const ChannelParams& params, const Policy& policy,
                                const OracleSettings& settings) {
  std::uint32_t n = settings.min_truncation;
  try {
    n = std::max(n, truncation_for_tail(params, policy, settings.max_tail_mass,
                                        settings.min_truncation, settings.max_truncation));
    n = std::max(n, truncation_for_mean_error(params, policy, settings.max_mean_error,
                                              settings.min_truncation, settings.max_truncation));
  } catch (const TruncationError&) {
    n = settings.max_truncation;
  }
  return n;
}

SecrecyReport oracle_report(const ChannelParams& params, const Policy& policy,
                            const SecrecyThreshold& threshold, const OracleSettings& settings) {
  const auto chain = build_truncated_chain(params, policy, oracle_truncation(params, policy, settings));
  const auto steady = steady_state(chain, settings.tol, settings.max_iters);
  return oracle_metrics(chain, steady, threshold);
}

double grid_argmax_ptx(const ChannelParams& params, const SecrecyThreshold& threshold,
                       OutageConvention convention, double step) {
  const auto count = static_cast<long long>(std::llround(1.0 / step));
  double best_ptx = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (long long k = 1; k <= count; ++k) {
    const double ptx = k == count ? 1.0 : static_cast<double>(k) * step;
    const double value = objective(params, Policy(ptx), threshold, convention);
    if (value > best) {
      best = value;
      best_ptx = ptx;
    }
  }
  return best_ptx;
}

// ---------------------------------------------------------------------------
// fig1

SweepResult run_fig1_sweep(const SweepSpec& spec) {
  spec.validate();
  struct Point {
    double q, p_tx, ratio, p;
  };
  SweepResult result;
  std::vector<Point> points;
  for (double q : spec.q) {
    for (double ptx : spec.p_tx) {
      for (double ratio : spec.ratio) {
        const double p = ratio * q;
        if (p > 1.0 + 1e-12) {
          result.skipped.push_back("fig1: skipped q=" + num(q) + " p_tx=" + num(ptx) +
                                   " ratio=" + num(ratio) + ": p=" + num(p) + " exceeds 1");
          continue;
        }
        points.push_back({q, ptx, ratio, std::min(p, 1.0)});
      }
    }
  }

  struct Row {
    double closed;
    std::optional<double> oracle, oracle_bound, mc, mc_hw;
  };
  const auto rows = parallel_map(points.size(), spec.workers, [&](std::size_t k) {
    const auto& pt = points[k];
    const ChannelParams params(pt.p, pt.q);
    const Policy policy(pt.p_tx);
    Row row{average_secrecy_age(params, policy), {}, {}, {}, {}};
    if (has_method(spec, Method::kOracle)) {
      const auto rep = oracle_report(params, policy, SecrecyThreshold(1), spec.oracle);
      row.oracle = rep.average_secrecy_age;
      row.oracle_bound = rep.mean_error_bound;
    }
    if (has_method(spec, Method::kMonteCarlo)) {
      const auto est = estimate(params, policy, point_sim_config(spec, k, 1));
      row.mc = est.mean_secrecy_age.mean;
      row.mc_hw = est.mean_secrecy_age.half_width;
    }
    return row;
  });

  std::ostringstream csv;
  csv << "q,p_tx,ratio,p,closed_form,oracle,oracle_error_bound,monte_carlo,monte_carlo_half_width\n";
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& pt = points[k];
    const auto& row = rows[k];
    csv << num(pt.q) << ',' << num(pt.p_tx) << ',' << num(pt.ratio) << ',' << num(pt.p) << ','
        << (has_method(spec, Method::kClosedForm) ? num(row.closed) : "") << ','
        << opt_num(row.oracle) << ',' << opt_num(row.oracle_bound) << ',' << opt_num(row.mc)
        << ',' << opt_num(row.mc_hw) << '\n';
  }
  result.csv = csv.str();

  std::ostringstream summary;
  summary << "fig1: " << points.size() << " rows, " << result.skipped.size()
          << " infeasible combinations skipped\n";
  result.summary = summary.str();
  return result;
}

// ---------------------------------------------------------------------------
// fig2

SweepResult run_fig2_sweep(const SweepSpec& spec) {
  spec.validate();
  struct Point {
    double p, q;
    std::uint64_t eta;
    double p_tx;
    bool star;
  };
  std::vector<Point> points;
  for (double p : spec.p) {
    for (double q : spec.q) {
      for (auto eta : spec.eta_th) {
        const double opt = optimal_ptx(q, SecrecyThreshold(eta), spec.convention);
        std::vector<double> grid = spec.p_tx;
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
        bool starred = false;
        for (double ptx : grid) {
          if (!starred && std::abs(ptx - opt) <= 1e-12) {
            points.push_back({p, q, eta, ptx, true});
            starred = true;
            continue;
          }
          if (!starred && ptx > opt) {
            points.push_back({p, q, eta, opt, true});
            starred = true;
          }
          points.push_back({p, q, eta, ptx, false});
        }
        if (!starred) points.push_back({p, q, eta, opt, true});
      }
    }
  }

  struct Row {
    double closed;
    std::optional<double> oracle, mc, mc_hw;
  };
  const auto rows = parallel_map(points.size(), spec.workers, [&](std::size_t k) {
    const auto& pt = points[k];
    const ChannelParams params(pt.p, pt.q);
    const Policy policy(pt.p_tx);
    const SecrecyThreshold threshold(pt.eta);
    const auto lag = convention_lag(pt.eta, spec.convention);
    Row row{objective(params, policy, threshold, spec.convention), {}, {}, {}};
    if (has_method(spec, Method::kOracle)) {
      const auto rep = oracle_report(params, policy, threshold, spec.oracle);
      row.oracle = pt.p_tx * (1.0 - rep.secrecy_age_cdf(lag));
    }
    if (has_method(spec, Method::kMonteCarlo)) {
      const auto est = estimate(params, policy, point_sim_config(spec, k, lag));
      const auto out = est.outage_at(lag);
      row.mc = pt.p_tx * (1.0 - out.mean);
      if (out.half_width) row.mc_hw = pt.p_tx * *out.half_width;
    }
    return row;
  });

  SweepResult result;
  std::ostringstream csv;
  csv << "p,q,eta_th,p_tx,convention,closed_form,oracle,monte_carlo,monte_carlo_half_width,star\n";
  std::ostringstream summary;
  summary << "fig2: " << points.size() << " rows, convention " << to_string(spec.convention) << '\n';
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& pt = points[k];
    const auto& row = rows[k];
    csv << num(pt.p) << ',' << num(pt.q) << ',' << pt.eta << ',' << num(pt.p_tx) << ','
        << to_string(spec.convention) << ','
        << (has_method(spec, Method::kClosedForm) ? num(row.closed) : "") << ','
        << opt_num(row.oracle) << ',' << opt_num(row.mc) << ',' << opt_num(row.mc_hw) << ','
        << (pt.star ? "*" : "") << '\n';
    if (pt.star) {
      summary << "  p=" << num(pt.p) << " q=" << num(pt.q) << " eta_th=" << pt.eta
              << "  p*_tx=" << num(pt.p_tx) << "  objective=" << num(row.closed) << '\n';
    }
  }
  result.csv = csv.str();
  result.summary = summary.str();
  return result;
}

// ---------------------------------------------------------------------------
// compare

namespace {

struct MethodValue {
  Method method;
  double value = 0.0;
  std::optional<double> half_width;
  double error_bound = 0.0;
  std::string convention;
};

std::string compare_status(const MethodValue& x, const MethodValue& ref, double tol) {
  if (x.method == Method::kMonteCarlo || ref.method == Method::kMonteCarlo) {
    const auto& mc = x.method == Method::kMonteCarlo ? x : ref;
    const auto& other = x.method == Method::kMonteCarlo ? ref : x;
    if (!mc.half_width) return "NO_CI";
    const Interval ci{mc.value, mc.half_width};
    return ci.covers(other.value) ? "PASS" : "MISMATCH";
  }
  if (x.value == ref.value) return "PASS";  // also covers matching infinities
  return std::abs(x.value - ref.value) <= tol ? "PASS" : "MISMATCH";
}

}  // namespace

SweepResult run_compare(const SweepSpec& spec) {
  spec.validate();
  struct Point {
    double p, q, p_tx;
    std::uint64_t eta;
  };
  std::vector<Point> points;
  for (double p : spec.p)
    for (double q : spec.q)
      for (double ptx : spec.p_tx)
        for (auto eta : spec.eta_th) points.push_back({p, q, ptx, eta});

  struct Evaluated {
    std::vector<MethodValue> mean;
    std::vector<MethodValue> outage;
    double gap_pmf = 0.0;
  };
  const auto evaluated = parallel_map(points.size(), spec.workers, [&](std::size_t k) {
    const auto& pt = points[k];
    const ChannelParams params(pt.p, pt.q);
    const Policy policy(pt.p_tx);
    const SecrecyThreshold threshold(pt.eta);

    std::optional<SecrecyReport> oracle;
    std::optional<SimEstimate> mc;
    if (has_method(spec, Method::kOracle)) oracle = oracle_report(params, policy, threshold, spec.oracle);
    if (has_method(spec, Method::kMonteCarlo)) {
      mc = estimate(params, policy, point_sim_config(spec, k, pt.eta));
    }

    Evaluated ev;
    ev.gap_pmf = secrecy_gap_pmf(pt.eta, params, policy);
    const std::string conv(to_string(spec.convention));
    for (Method m : spec.methods) {
      switch (m) {
        case Method::kClosedForm:
          ev.mean.push_back({m, average_secrecy_age(params, policy), {}, 0.0, "none"});
          ev.outage.push_back(
              {m, outage_probability(params, policy, threshold, spec.convention), {}, 0.0, conv});
          break;
        case Method::kOracle:
          ev.mean.push_back({m, oracle->average_secrecy_age, {}, oracle->mean_error_bound, "none"});
          ev.outage.push_back({m, oracle->outage, {}, oracle->probability_error_bound, "strict"});
          break;
        case Method::kMonteCarlo:
          ev.mean.push_back({m, mc->mean_secrecy_age.mean, mc->mean_secrecy_age.half_width, 0.0, "none"});
          ev.outage.push_back({m, mc->outage.mean, mc->outage.half_width, 0.0, "strict"});
          break;
      }
    }
    return ev;
  });

  SweepResult result;
  std::ostringstream csv;
  csv << "p,q,p_tx,eta_th,metric,method,convention,value,half_width,error_bound,reference,"
         "reference_value,abs_diff,tolerance,gap_pmf_at_threshold,status\n";
  std::ostringstream failures;
  std::size_t comparisons = 0;
  std::size_t mismatches = 0;

  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& pt = points[k];
    const auto& ev = evaluated[k];
    const auto emit = [&](const char* metric, const std::vector<MethodValue>& values, double tol) {
      const auto& ref = values.front();
      for (std::size_t m = 0; m < values.size(); ++m) {
        const auto& x = values[m];
        const bool is_ref = m == 0;
        const double diff = x.value == ref.value ? 0.0 : std::abs(x.value - ref.value);
        const bool mc_pair = x.method == Method::kMonteCarlo || ref.method == Method::kMonteCarlo;
        const auto status = is_ref ? std::string("REF") : compare_status(x, ref, tol);
        std::optional<double> shown_tol;
        if (!is_ref) {
          const auto& mc = x.method == Method::kMonteCarlo ? x : ref;
          shown_tol = mc_pair ? mc.half_width : std::optional<double>(tol);
        }
        csv << num(pt.p) << ',' << num(pt.q) << ',' << num(pt.p_tx) << ',' << pt.eta << ','
            << metric << ',' << to_string(x.method) << ',' << x.convention << ',' << num(x.value)
            << ',' << opt_num(x.half_width) << ',' << num(x.error_bound) << ','
            << to_string(ref.method) << ',' << num(ref.value) << ',' << num(diff) << ','
            << opt_num(shown_tol) << ',' << num(ev.gap_pmf) << ',' << status << '\n';
        if (is_ref) continue;
        ++comparisons;
        if (status != "PASS") {
          ++mismatches;
          failures << "  " << status << " p=" << num(pt.p) << " q=" << num(pt.q)
                   << " p_tx=" << num(pt.p_tx) << " eta_th=" << pt.eta << ' ' << metric << ' '
                   << to_string(x.method) << " vs " << to_string(ref.method)
                   << ": |diff|=" << num(diff) << " allowed=" << opt_num(shown_tol)
                   << " gap_pmf(eta_th)=" << num(ev.gap_pmf) << '\n';
        }
      }
    };
    emit("avg_secrecy_age", ev.mean, spec.tolerances.mean);
    emit("outage", ev.outage, spec.tolerances.probability);
  }

  result.passed = mismatches == 0;
  result.csv = csv.str();
  std::ostringstream summary;
  summary << "compare: " << points.size() << " points, " << comparisons
          << " comparisons, closed-form convention " << to_string(spec.convention) << '\n'
          << failures.str() << "verdict: " << (result.passed ? "PASS" : "FAIL") << " ("
          << mismatches << " mismatches)\n";
  result.summary = summary.str();
  return result;
}

// ---------------------------------------------------------------------------
// optimize

SweepResult run_optimize(const SweepSpec& spec) {
  spec.validate();
  const double step = spec.tolerances.grid_step;
  SweepResult result;
  std::ostringstream csv;
  csv << "q,eta_th,convention,p,closed_form_ptx,grid_argmax_ptx,gap,within_step\n";
  std::ostringstream summary;
  summary << "optimize: grid step " << num(step) << '\n';

  for (double q : spec.q) {
    for (auto eta : spec.eta_th) {
      const SecrecyThreshold threshold(eta);
      for (auto convention : {OutageConvention::kPaperPrinted, OutageConvention::kStrictDefinition}) {
        const double closed = optimal_ptx(q, threshold, convention);
        std::optional<double> first_argmax;
        bool independent = true;
        double worst_gap = 0.0;
        for (double p : spec.p) {
          const double argmax = grid_argmax_ptx(ChannelParams(p, q), threshold, convention, step);
          const double gap = std::abs(argmax - closed);
          const bool within = gap <= step + 1e-12;
          worst_gap = std::max(worst_gap, gap);
          if (!within) result.passed = false;
          if (first_argmax && *first_argmax != argmax) independent = false;
          if (!first_argmax) first_argmax = argmax;
          csv << num(q) << ',' << eta << ',' << to_string(convention) << ',' << num(p) << ','
              << num(closed) << ',' << num(argmax) << ',' << num(gap) << ','
              << (within ? "yes" : "no") << '\n';
        }
        if (!independent) result.passed = false;
        summary << "  q=" << num(q) << " eta_th=" << eta << " [" << to_string(convention)
                << "] p*_tx=" << num(closed) << " grid argmax=" << num(*first_argmax)
                << " max gap=" << num(worst_gap)
                << (independent ? "  (same argmax for every p)" : "  (argmax depends on p!)")
                << '\n';
      }
    }
  }
  summary << "verdict: " << (result.passed ? "PASS" : "FAIL") << '\n';
  result.csv = csv.str();
  result.summary = summary.str();
  return result;
}

SweepResult run_experiment(const SweepSpec& spec) {
  switch (spec.experiment) {
    case Experiment::kFig1:
      return run_fig1_sweep(spec);
    case Experiment::kFig2:
      return run_fig2_sweep(spec);
    case Experiment::kCompare:
      return run_compare(spec);
    case Experiment::kOptimize:
      return run_optimize(spec);
  }
  throw std::logic_error("unhandled experiment");
}

}  // namespace aoisec
