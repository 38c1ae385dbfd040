#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "aoisec/analytics.hpp"
#include "aoisec/config.hpp"
#include "aoisec/experiments.hpp"

namespace aoisec {
namespace {

using Row = std::map<std::string, std::string>;

std::vector<Row> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> header;
  {
    std::istringstream h(line);
    for (std::string cell; std::getline(h, cell, ',');) header.push_back(cell);
  }
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    Row row;
    std::size_t col = 0, start = 0;
    while (true) {
      const auto pos = line.find(',', start);
      row[header.at(col++)] = line.substr(start, pos - start);
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    EXPECT_EQ(col, header.size()) << line;
    rows.push_back(std::move(row));
  }
  return rows;
}

double num(const Row& r, const std::string& key) { return std::stod(r.at(key)); }

SweepSpec quick_sim(SweepSpec spec) {
  spec.sim.horizon = 100'000;
  spec.sim.burn_in = 1'000;
  spec.sim.replications = 8;
  return spec;
}

TEST(Config, ListsAndRanges) {
  EXPECT_EQ(parse_real_list("0.1, 0.2"), (std::vector<double>{0.1, 0.2}));
  EXPECT_EQ(parse_real_list("0.05:0.2:0.05"), (std::vector<double>{0.05, 0.1, 0.15, 0.2}));
  EXPECT_EQ(parse_count_list("1:9:4,12"), (std::vector<std::uint64_t>{1, 5, 9, 12}));
  EXPECT_EQ(parse_real_list("0:1:0.001").size(), 1001u);
  EXPECT_THROW(parse_real_list("0.1,abc"), std::invalid_argument);
  EXPECT_THROW(parse_real_list("1:0:0.1"), std::invalid_argument);
  EXPECT_THROW(parse_real_list(""), std::invalid_argument);
  EXPECT_EQ(parse_method_list("oracle,monte_carlo"),
            (std::vector<Method>{Method::kOracle, Method::kMonteCarlo}));
  EXPECT_THROW(parse_method_list("exact"), std::invalid_argument);
}

TEST(Config, IniAndJsonAgree) {
  const auto ini = parse_ini_config(
      "# compare a single point\n"
      "[experiment]\nkind = compare\nconvention = paper\nmethods = closed_form, oracle\nseed = 9\n"
      "[grid]\np = 0.8\nq = 0.2, 0.5\np_tx = 0.5\neta_th = 3:5:1\n"
      "[simulation]\nhorizon = 5000\nburn_in = 10\n");
  const auto json = parse_json_config(R"({
      "experiment": {"kind": "compare", "convention": "paper",
                     "methods": ["closed_form", "oracle"], "seed": 9},
      "grid": {"p": [0.8], "q": [0.2, 0.5], "p_tx": 0.5, "eta_th": "3:5:1"},
      "simulation": {"horizon": 5000, "burn_in": 10}})");
  SweepSpec a = SweepSpec::defaults(Experiment::kFig1);
  SweepSpec b = SweepSpec::defaults(Experiment::kFig1);
  apply_config(ini, a);
  apply_config(json, b);
  for (const auto* s : {&a, &b}) {
    EXPECT_EQ(s->experiment, Experiment::kCompare);
    EXPECT_EQ(s->convention, OutageConvention::kPaperPrinted);
    EXPECT_EQ(s->seed, 9u);
    EXPECT_EQ(s->q, (std::vector<double>{0.2, 0.5}));
    EXPECT_EQ(s->eta_th, (std::vector<std::uint64_t>{3, 4, 5}));
    EXPECT_EQ(s->sim.horizon, 5000u);
    EXPECT_EQ(s->methods.size(), 2u);
  }
  SweepSpec c;
  EXPECT_THROW(apply_config(parse_ini_config("[grid]\nalpha = 1\n"), c), std::invalid_argument);
}

TEST(SweepSpec, Validation) {
  auto spec = SweepSpec::defaults(Experiment::kCompare);
  EXPECT_NO_THROW(spec.validate());
  spec.p_tx = {0.0};
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec = SweepSpec::defaults(Experiment::kCompare);
  spec.methods = {Method::kClosedForm};
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec = SweepSpec::defaults(Experiment::kFig2);
  spec.q = {1.2};
  EXPECT_THROW(spec.validate(), std::invalid_argument);
}

TEST(Fig1, ValuesAndShape) {
  auto spec = SweepSpec::defaults(Experiment::kFig1);
  spec.q = {0.1, 0.2, 0.3};
  spec.p_tx = {0.5, 1.0};
  spec.ratio = {1, 2, 4, 5};
  const auto result = run_fig1_sweep(spec);
  const auto rows = parse_csv(result.csv);
  std::map<std::tuple<double, double, double>, double> value;
  for (const auto& r : rows) value[{num(r, "q"), num(r, "p_tx"), num(r, "ratio")}] = num(r, "closed_form");

  EXPECT_NEAR((value.at({0.2, 1.0, 4})), 3.80952381, 1e-8);
  for (auto [q, next_q] : {std::pair{0.1, 0.2}, std::pair{0.2, 0.3}}) {
    for (double ratio : {1.0, 2.0}) {
      EXPECT_NEAR((value.at({q, 0.5, ratio})), 2 * value.at({q, 1.0, ratio}), 1e-6);
      EXPECT_GT((value.at({q, 1.0, ratio})), (value.at({next_q, 1.0, ratio})));
    }
  }
  for (double q : {0.1, 0.2}) {
    EXPECT_LT((value.at({q, 1.0, 1})), (value.at({q, 1.0, 2})));
  }
  // ratio 4 and 5 at q = 0.3 push p past 1.
  EXPECT_EQ(result.skipped.size(), 4u);
  EXPECT_EQ(rows.size(), 3u * 2u * 4u - 4u);
}

TEST(Fig1, OracleColumnWithinItsBound) {
  auto spec = SweepSpec::defaults(Experiment::kFig1);
  spec.q = {0.3};
  spec.p_tx = {1.0};
  spec.ratio = {1, 2};
  spec.methods = {Method::kClosedForm, Method::kOracle};
  for (const auto& r : parse_csv(run_fig1_sweep(spec).csv)) {
    EXPECT_LE(std::abs(num(r, "oracle") - num(r, "closed_form")), 1e-6);
    EXPECT_LE(num(r, "oracle_error_bound"), 1e-6);
  }
}

TEST(Fig2, StarSitsAtTheArgmax) {
  auto spec = SweepSpec::defaults(Experiment::kFig2);
  spec.p_tx = parse_real_list("0.001:1:0.001");
  for (auto convention : {OutageConvention::kPaperPrinted, OutageConvention::kStrictDefinition}) {
    spec.convention = convention;
    const auto rows = parse_csv(run_fig2_sweep(spec).csv);
    std::map<std::tuple<double, std::uint64_t>, std::pair<double, double>> best;  // value, p_tx
    std::map<std::tuple<double, std::uint64_t>, double> star;
    for (const auto& r : rows) {
      const auto key = std::make_tuple(num(r, "q"), std::stoull(r.at("eta_th")));
      if (r.at("star") == "*") {
        EXPECT_FALSE(star.count(key));
        star[key] = num(r, "p_tx");
        continue;
      }
      auto& b = best[key];
      if (num(r, "closed_form") > b.first) b = {num(r, "closed_form"), num(r, "p_tx")};
    }
    ASSERT_EQ(star.size(), 4u);
    for (const auto& [key, s] : star) {
      EXPECT_NEAR(best.at(key).second, s, 1e-3 + 1e-9) << to_string(convention);
      EXPECT_NEAR(s, optimal_ptx(std::get<0>(key), SecrecyThreshold(std::get<1>(key)), convention), 1e-8);
    }
  }
}

TEST(Compare, ClosedFormAgainstOracle) {
  auto spec = SweepSpec::defaults(Experiment::kCompare);
  spec.methods = {Method::kClosedForm, Method::kOracle};
  const auto result = run_compare(spec);
  EXPECT_TRUE(result.passed) << result.summary;
  const auto rows = parse_csv(result.csv);
  EXPECT_EQ(rows.size(), 4u * 2u * 2u);
  for (const auto& r : rows) {
    if (r.at("method") == "closed_form") {
      EXPECT_EQ(r.at("status"), "REF");
    } else {
      EXPECT_EQ(r.at("status"), "PASS");
      EXPECT_EQ(r.at("convention"), r.at("metric") == "outage" ? "strict" : "none");
    }
  }
}

TEST(Compare, DuplicateMethodHasZeroDiff) {
  auto spec = SweepSpec::defaults(Experiment::kCompare);
  spec.methods = {Method::kClosedForm, Method::kClosedForm};
  const auto result = run_compare(spec);
  EXPECT_TRUE(result.passed);
  for (const auto& r : parse_csv(result.csv)) EXPECT_EQ(num(r, "abs_diff"), 0.0);
}

TEST(Compare, PaperConventionFlagsGapPmfDiscrepancy) {
  auto spec = SweepSpec::defaults(Experiment::kCompare);
  spec.convention = OutageConvention::kPaperPrinted;
  spec.methods = {Method::kClosedForm, Method::kOracle};
  const auto result = run_compare(spec);
  EXPECT_FALSE(result.passed);
  EXPECT_NE(result.summary.find("MISMATCH"), std::string::npos);
  for (const auto& r : parse_csv(result.csv)) {
    if (r.at("metric") != "outage" || r.at("method") != "oracle") continue;
    EXPECT_EQ(r.at("status"), "MISMATCH");
    EXPECT_NEAR(num(r, "abs_diff"), num(r, "gap_pmf_at_threshold"), 1e-8);
  }
}

TEST(Compare, MonteCarloDeterministicAcrossWorkers) {
  auto spec = quick_sim(SweepSpec::defaults(Experiment::kCompare));
  spec.methods = {Method::kClosedForm, Method::kMonteCarlo};
  spec.workers = 1;
  const auto serial = run_compare(spec);
  spec.workers = 3;
  spec.sim.workers = 3;
  const auto parallel = run_compare(spec);
  EXPECT_EQ(serial.csv, parallel.csv);
  spec.seed += 1;
  EXPECT_NE(run_compare(spec).csv, serial.csv);
}

TEST(Compare, SingleReplicationReportsNoInterval) {
  auto spec = quick_sim(SweepSpec::defaults(Experiment::kCompare));
  spec.methods = {Method::kClosedForm, Method::kMonteCarlo};
  spec.sim.replications = 1;
  const auto result = run_compare(spec);
  EXPECT_FALSE(result.passed);
  for (const auto& r : parse_csv(result.csv)) {
    if (r.at("method") == "monte_carlo") EXPECT_EQ(r.at("status"), "NO_CI");
  }
}

TEST(Optimize, ExamplesAndPIndependence) {
  auto spec = SweepSpec::defaults(Experiment::kOptimize);
  spec.q = {0.25};
  spec.eta_th = {8};
  spec.p = {0.2, 0.5, 0.9};
  const auto result = run_optimize(spec);
  EXPECT_TRUE(result.passed) << result.summary;
  for (const auto& r : parse_csv(result.csv)) {
    const double expected = r.at("convention") == "paper" ? 0.5 : 1.0 / 2.25;
    EXPECT_NEAR(num(r, "closed_form_ptx"), expected, 1e-8);
    EXPECT_EQ(r.at("within_step"), "yes");
  }
  EXPECT_TRUE(run_optimize(SweepSpec::defaults(Experiment::kOptimize)).passed);
}

TEST(GridArgmax, SaturatedOptimum) {
  EXPECT_EQ(grid_argmax_ptx(ChannelParams(0.8, 0.2), SecrecyThreshold(4),
                            OutageConvention::kPaperPrinted, 1e-3),
            1.0);
}

}  // namespace
}  // namespace aoisec
