#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "aoisec/analytics.hpp"
#include "aoisec/chain_oracle.hpp"
#include "aoisec/config.hpp"
#include "aoisec/experiments.hpp"
#include "aoisec/report.hpp"
#include "aoisec/simulator.hpp"

namespace py = pybind11;
using namespace aoisec;

namespace {

// Oracle solve returned to Python: the N x N steady state plus its report.
struct OracleSolution {
  SteadyState steady;
  SecrecyReport report;
};

OracleSolution solve_oracle(const ChannelParams& params, const Policy& policy,
                            const SecrecyThreshold& threshold, std::optional<std::uint32_t> truncation,
                            const OracleSettings& settings) {
  const std::uint32_t n = truncation ? *truncation : oracle_truncation(params, policy, settings);
  const auto chain = build_truncated_chain(params, policy, n);
  auto steady = steady_state(chain, settings.tol, settings.max_iters);
  auto report = oracle_metrics(chain, steady, threshold);
  return {std::move(steady), std::move(report)};
}

template <typename T>
std::string repr_of(const char* name, const T& fields) {
  std::ostringstream out;
  out << name << '(' << fields << ')';
  return out.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Secrecy age of information: closed forms, truncated-chain oracle, Monte Carlo";

  py::register_exception<TruncationError>(m, "TruncationError", PyExc_RuntimeError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  // -- model -----------------------------------------------------------------
  py::class_<ChannelParams>(m, "ChannelParams")
      .def(py::init<double, double>(), py::arg("p"), py::arg("q"))
      .def_property_readonly("p", &ChannelParams::p)
      .def_property_readonly("q", &ChannelParams::q)
      .def("__repr__", [](const ChannelParams& c) {
        std::ostringstream s;
        s << "ChannelParams(p=" << c.p() << ", q=" << c.q() << ')';
        return s.str();
      });

  py::class_<Policy>(m, "Policy")
      .def(py::init<double>(), py::arg("p_tx"))
      .def_property_readonly("p_tx", &Policy::p_tx)
      .def("__repr__", [](const Policy& p) { return repr_of("Policy", p.p_tx()); });
  py::implicitly_convertible<double, Policy>();

  py::class_<SecrecyThreshold>(m, "SecrecyThreshold")
      .def(py::init<std::uint64_t>(), py::arg("eta_th"))
      .def_property_readonly("eta_th", &SecrecyThreshold::eta_th)
      .def("__repr__", [](const SecrecyThreshold& t) { return repr_of("SecrecyThreshold", t.eta_th()); });
  py::implicitly_convertible<std::uint64_t, SecrecyThreshold>();

  py::class_<AgeState>(m, "AgeState")
      .def(py::init<Age, Age>(), py::arg("delta_d"), py::arg("delta_e"))
      .def_property_readonly("delta_d", &AgeState::delta_d)
      .def_property_readonly("delta_e", &AgeState::delta_e)
      .def("__eq__", [](const AgeState& a, const AgeState& b) { return a == b; })
      .def("__hash__", [](const AgeState& a) { return py::hash(py::make_tuple(a.delta_d(), a.delta_e())); })
      .def("__repr__", [](const AgeState& a) {
        std::ostringstream s;
        s << "AgeState(" << a.delta_d() << ", " << a.delta_e() << ')';
        return s.str();
      });

  py::enum_<SlotOutcome>(m, "SlotOutcome")
      .value("BOTH", SlotOutcome::kBoth)
      .value("ONLY_E", SlotOutcome::kOnlyE)
      .value("ONLY_D", SlotOutcome::kOnlyD)
      .value("NEITHER", SlotOutcome::kNeither);

  py::enum_<OutageConvention>(m, "OutageConvention")
      .value("PAPER_PRINTED", OutageConvention::kPaperPrinted)
      .value("STRICT_DEFINITION", OutageConvention::kStrictDefinition);

  m.def("outcome_probabilities", &outcome_probabilities, py::arg("params"), py::arg("policy"),
        "Per-slot probabilities ordered as SlotOutcome.");
  m.def("apply_outcome", &apply_outcome, py::arg("state"), py::arg("outcome"));
  m.def(
      "transition_distribution",
      [](const AgeState& s, const ChannelParams& c, const Policy& p) {
        std::vector<std::pair<AgeState, double>> out;
        for (const auto& t : transition_distribution(s, c, p)) out.emplace_back(t.next, t.probability);
        return out;
      },
      py::arg("state"), py::arg("params"), py::arg("policy"),
      "List of (next_state, probability) with zero-probability outcomes dropped.");
  m.def("secrecy_age", &secrecy_age, py::arg("state"));

  // -- closed forms ------------------------------------------------------------
  m.def(
      "stationary_pi",
      [](Age i, Age j, const ChannelParams& c, const Policy& p) {
        return stationary_pi(StationaryQuery(i, j), c, p);
      },
      py::arg("i"), py::arg("j"), py::arg("params"), py::arg("policy"));
  m.def("row_sum", &row_sum, py::arg("i"), py::arg("params"), py::arg("policy"));
  m.def("col_sum", &col_sum, py::arg("j"), py::arg("params"), py::arg("policy"));
  m.def("secrecy_gap_pmf", &secrecy_gap_pmf, py::arg("d"), py::arg("params"), py::arg("policy"));
  m.def("positive_gap_probability", &positive_gap_probability, py::arg("params"));
  m.def("average_secrecy_age", &average_secrecy_age, py::arg("params"), py::arg("policy"));
  m.def("outage_probability", &outage_probability, py::arg("params"), py::arg("policy"),
        py::arg("threshold"), py::arg("convention") = kDefaultConvention);
  m.def("objective", &objective, py::arg("params"), py::arg("policy"), py::arg("threshold"),
        py::arg("convention") = kDefaultConvention);
  m.def("optimal_ptx", &optimal_ptx, py::arg("q"), py::arg("threshold"),
        py::arg("convention") = kDefaultConvention);

  py::enum_<Provenance>(m, "Provenance")
      .value("CLOSED_FORM", Provenance::kClosedForm)
      .value("ORACLE", Provenance::kOracle)
      .value("MONTE_CARLO", Provenance::kMonteCarlo);

  py::class_<SecrecyReport>(m, "SecrecyReport")
      .def_readonly("provenance", &SecrecyReport::provenance)
      .def_readonly("convention", &SecrecyReport::convention)
      .def_readonly("eta_th", &SecrecyReport::eta_th)
      .def_readonly("average_secrecy_age", &SecrecyReport::average_secrecy_age)
      .def_readonly("outage", &SecrecyReport::outage)
      .def_readonly("nonpositive_gap_mass", &SecrecyReport::nonpositive_gap_mass)
      .def_readonly("gap_pmf", &SecrecyReport::gap_pmf)
      .def_readonly("probability_error_bound", &SecrecyReport::probability_error_bound)
      .def_readonly("mean_error_bound", &SecrecyReport::mean_error_bound)
      .def("secrecy_age_cdf", &SecrecyReport::secrecy_age_cdf, py::arg("lag"));

  m.def("closed_form_report", &closed_form_report, py::arg("params"), py::arg("policy"),
        py::arg("threshold"), py::arg("convention") = kDefaultConvention, py::arg("max_gap") = 64);

  // -- oracle ------------------------------------------------------------------
  py::class_<OracleSettings>(m, "OracleSettings")
      .def(py::init<>())
      .def_readwrite("min_truncation", &OracleSettings::min_truncation)
      .def_readwrite("max_truncation", &OracleSettings::max_truncation)
      .def_readwrite("max_tail_mass", &OracleSettings::max_tail_mass)
      .def_readwrite("max_mean_error", &OracleSettings::max_mean_error)
      .def_readwrite("tol", &OracleSettings::tol)
      .def_readwrite("max_iters", &OracleSettings::max_iters);

  py::class_<OracleSolution>(m, "OracleSolution")
      .def_property_readonly("truncation", [](const OracleSolution& s) { return s.steady.truncation; })
      .def_property_readonly("iterations", [](const OracleSolution& s) { return s.steady.iterations; })
      .def_property_readonly("residual", [](const OracleSolution& s) { return s.steady.residual; })
      .def_readonly("report", &OracleSolution::report)
      .def("at", [](const OracleSolution& s, Age i, Age j) {
        if (i < 1 || j < 1 || i > s.steady.truncation || j > s.steady.truncation) {
          throw py::index_error("state outside truncated support");
        }
        return s.steady.at(i, j);
      }, py::arg("i"), py::arg("j"))
      .def_property_readonly("pi", [](const OracleSolution& s) {
        // Row i-1, column j-1 holds pi(i, j).
        const py::ssize_t n = s.steady.truncation;
        py::array_t<double> out({n, n});
        std::copy(s.steady.pi.begin(), s.steady.pi.end(), out.mutable_data());
        return out;
      });

  m.def("oracle_truncation", &oracle_truncation, py::arg("params"), py::arg("policy"),
        py::arg("settings") = OracleSettings{});
  m.def("solve_oracle", &solve_oracle, py::arg("params"), py::arg("policy"),
        py::arg("threshold") = SecrecyThreshold(1), py::arg("truncation") = py::none(),
        py::arg("settings") = OracleSettings{}, py::call_guard<py::gil_scoped_release>(),
        "Power iteration on the clamped chain; N from the settings unless given.");
  m.def("boundary_mass_bound", &boundary_mass_bound, py::arg("params"), py::arg("policy"),
        py::arg("truncation"));

  // -- Monte Carlo -------------------------------------------------------------
  m.def("derive_seed", &derive_seed, py::arg("base"), py::arg("stream"));

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("horizon", &SimConfig::horizon)
      .def_readwrite("burn_in", &SimConfig::burn_in)
      .def_readwrite("replications", &SimConfig::replications)
      .def_readwrite("base_seed", &SimConfig::base_seed)
      .def_readwrite("threshold", &SimConfig::threshold)
      .def_readwrite("workers", &SimConfig::workers)
      .def_readwrite("confidence", &SimConfig::confidence)
      .def("validate", &SimConfig::validate);

  py::class_<Interval>(m, "Interval")
      .def_readonly("mean", &Interval::mean)
      .def_readonly("half_width", &Interval::half_width)
      .def("covers", &Interval::covers, py::arg("value"))
      .def("__repr__", [](const Interval& iv) {
        std::ostringstream s;
        s << "Interval(mean=" << iv.mean;
        if (iv.half_width) s << ", half_width=" << *iv.half_width;
        s << ')';
        return s.str();
      });

  py::class_<SimEstimate>(m, "SimEstimate")
      .def_readonly("mean_secrecy_age", &SimEstimate::mean_secrecy_age)
      .def_readonly("outage", &SimEstimate::outage)
      .def_readonly("empirical_gap_pmf", &SimEstimate::empirical_gap_pmf)
      .def_readonly("slots_observed", &SimEstimate::slots_observed)
      .def_readonly("confidence", &SimEstimate::confidence)
      .def("outage_at", &SimEstimate::outage_at, py::arg("lag"))
      .def("fresh_both_frequency", &SimEstimate::fresh_both_frequency);

  m.def("estimate", &estimate, py::arg("params"), py::arg("policy"), py::arg("config") = SimConfig{},
        py::call_guard<py::gil_scoped_release>());

  // -- experiments -------------------------------------------------------------
  py::enum_<Experiment>(m, "Experiment")
      .value("FIG1", Experiment::kFig1)
      .value("FIG2", Experiment::kFig2)
      .value("COMPARE", Experiment::kCompare)
      .value("OPTIMIZE", Experiment::kOptimize);

  py::class_<Tolerances>(m, "Tolerances")
      .def(py::init<>())
      .def_readwrite("probability", &Tolerances::probability)
      .def_readwrite("mean", &Tolerances::mean)
      .def_readwrite("grid_step", &Tolerances::grid_step);

  py::class_<SweepSpec>(m, "SweepSpec")
      .def(py::init<>())
      .def_static("defaults", &SweepSpec::defaults, py::arg("experiment"))
      .def_readwrite("experiment", &SweepSpec::experiment)
      .def_readwrite("p", &SweepSpec::p)
      .def_readwrite("q", &SweepSpec::q)
      .def_readwrite("p_tx", &SweepSpec::p_tx)
      .def_readwrite("ratio", &SweepSpec::ratio)
      .def_readwrite("eta_th", &SweepSpec::eta_th)
      .def_readwrite("methods", &SweepSpec::methods)
      .def_readwrite("convention", &SweepSpec::convention)
      .def_readwrite("seed", &SweepSpec::seed)
      .def_readwrite("workers", &SweepSpec::workers)
      .def_readwrite("sim", &SweepSpec::sim)
      .def_readwrite("oracle", &SweepSpec::oracle)
      .def_readwrite("tolerances", &SweepSpec::tolerances)
      .def("validate", &SweepSpec::validate)
      .def("apply_config_file", [](SweepSpec& s, const std::string& path) {
        apply_config(load_config(path), s);
      }, py::arg("path"));

  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("csv", &SweepResult::csv)
      .def_readonly("summary", &SweepResult::summary)
      .def_readonly("skipped", &SweepResult::skipped)
      .def_readonly("passed", &SweepResult::passed);

  m.def("run_experiment", &run_experiment, py::arg("spec"), py::call_guard<py::gil_scoped_release>());
  m.def("grid_argmax_ptx", &grid_argmax_ptx, py::arg("params"), py::arg("threshold"),
        py::arg("convention") = kDefaultConvention, py::arg("step") = 1e-3);
}
