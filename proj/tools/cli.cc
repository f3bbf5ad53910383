// Copyright 2026 The Endograph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "endograph/design.h"
#include "endograph/errors.h"
#include "endograph/estimators.h"
#include "endograph/examples.h"
#include "endograph/graph.h"
#include "endograph/hypothesis_tests.h"
#include "endograph/io.h"
#include "endograph/montecarlo.h"
#include "endograph/stats.h"

namespace endograph::cli {
namespace {

using Clock = std::chrono::steady_clock;

struct Common {
  std::string format = "json";
  std::string out_path;
  bool no_timing = false;
  std::string seed_text;
};

// What a command hands back for printing.
struct Output {
  RunReport report;
  CsvTable csv;
  // Nonzero when the command ran but its check failed.
  int exit_code = kOk;
  std::string status_line;
};

class PhaseTimer {
 public:
  explicit PhaseTimer(RunReport& report) : report_(report) {}
  void mark(const std::string& phase) {
    const auto now = Clock::now();
    report_.timing.emplace_back(
        phase, std::chrono::duration<double>(now - start_).count());
    start_ = now;
  }

 private:
  RunReport& report_;
  Clock::time_point start_ = Clock::now();
};

std::uint64_t parse_seed(const std::string& text, const std::string& source) {
  std::uint64_t value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw SchemaError(source, "seed must be a nonnegative integer, got '" +
                                  text + "'");
  }
  return value;
}

std::uint64_t resolve_seed(const Common& common) {
  if (!common.seed_text.empty()) return parse_seed(common.seed_text, "--seed");
  if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env) {
    return parse_seed(env, kSeedEnv);
  }
  return 0;
}

// Reads a JSON input and records its content hash.
Json load_input(RunReport& report, const std::string& name,
                const std::string& path) {
  const std::string text = read_text_file(path);
  report.inputs[name] = content_hash(text);
  return parse_json(text);
}

void check_observations(const Observations& obs, const EndogenousGraph& g) {
  if (static_cast<int>(obs.t.size()) != g.n_r()) {
    throw ValidationError("treatment vector has " +
                          std::to_string(obs.t.size()) +
                          " entries, graph has n_r = " +
                          std::to_string(g.n_r()));
  }
  if (static_cast<int>(obs.y.size()) != g.n_a()) {
    throw ValidationError("outcome vector has " + std::to_string(obs.y.size()) +
                          " entries, graph has n_a = " +
                          std::to_string(g.n_a()));
  }
}

std::string num(double v) { return format_number(v); }

CsvTable test_csv(const TestResult& r, const std::string& kind) {
  return {{"test", "statistic", "p_value", "critical_value", "n_resamples",
           "reject", "alpha", "tail", "df"},
          {{kind, num(r.statistic), num(r.p_value),
            r.critical_value ? num(*r.critical_value) : "",
            std::to_string(r.n_resamples), r.reject ? "true" : "false",
            num(r.alpha), std::string(to_string(r.tail)),
            r.df ? num(*r.df) : ""}}};
}

CsvTable rate_csv(const RejectionRate& r, const std::string& kind) {
  return {{"test", "n_reps", "rejections", "rate", "null_se"},
          {{kind, std::to_string(r.n_reps), std::to_string(r.rejections),
            num(r.rate), num(r.null_se)}}};
}

// ---------------------------------------------------------------------------
// estimate

struct EstimateArgs {
  std::string graph;
  std::string outcomes;
  std::string config;
  std::string estimator = "mu_hat";
  bool full_treatment_anchor = false;
};

Output run_estimate(const EstimateArgs& args) {
  Output o;
  o.report.command = "estimate";
  o.report.args = {{"graph", args.graph},
                   {"outcomes", args.outcomes},
                   {"config", args.config},
                   {"estimator", args.estimator},
                   {"full_treatment_anchor", args.full_treatment_anchor}};
  PhaseTimer timer(o.report);
  const GraphFile file =
      graph_file_from_json(load_input(o.report, "graph", args.graph));
  const EndogenousGraph& graph = file.graph;
  const Observations obs =
      observations_from_json(load_input(o.report, "outcomes", args.outcomes));
  const EstimatorConfig config = config_from_json(
      load_input(o.report, "config", args.config), graph,
      {std::nullopt, file.anchor});
  check_observations(obs, graph);
  timer.mark("load");

  const auto choice = parse_estimator_choice(args.estimator);
  const RealizedGraph realized = realize_graph(graph, obs.t);
  Json results;
  if (*choice == EstimatorChoice::kHorvitzThompson) {
    // Deliberately unvalidated: HT is here to show the bias.
    const double mean_scale =
        horvitz_thompson(realized, obs.t, obs.y, config.p, HtScale::kMean);
    const double total_scale =
        horvitz_thompson(realized, obs.t, obs.y, config.p, HtScale::kTotal);
    results = {{"estimator", "horvitz_thompson"},
               {"estimate", mean_scale},
               {"total_scale", total_scale}};
    o.csv = {{"estimator", "estimate", "total_scale"},
             {{"horvitz_thompson", num(mean_scale), num(total_scale)}}};
  } else {
    ValidationOptions options;
    options.full_treatment_anchor_only = args.full_treatment_anchor;
    const AnchorEstimator estimator(graph, config, options);
    if (*choice == EstimatorChoice::kMuTilde) {
      const double value = estimator.mu_tilde(obs.y, obs.t);
      results = {{"estimator", "mu_tilde"}, {"estimate", value}};
      o.csv = {{"estimator", "estimate"}, {{"mu_tilde", num(value)}}};
    } else {
      const EstimateResult result = estimator.estimate(realized, obs.y, obs.t);
      results = to_json(result);
      results["estimator"] = graph.unipartite() ? "mu_hat_uni" : "mu_hat";
      o.csv.header = {"unit", "beta_hat", "w_hat", "gamma_hat",
                      "instrument_cov"};
      for (std::size_t a = 0; a < result.per_unit.size(); ++a) {
        const auto& u = result.per_unit[a];
        o.csv.rows.push_back({std::to_string(a), num(u.beta_hat),
                              num(u.w_hat),
                              u.gamma_hat ? num(*u.gamma_hat) : "",
                              num(result.instrument_cov[a])});
      }
    }
  }
  timer.mark("compute");
  o.report.results = std::move(results);
  return o;
}

// ---------------------------------------------------------------------------
// test

struct TestArgs {
  std::string kind;
  std::string graph;
  std::string outcomes;
  std::string config;
  std::optional<double> p;
  double alpha = 0.05;
  int resamples = 2000;
  std::string tail = "two_sided";
};

Output run_test(const TestArgs& args, std::uint64_t seed) {
  Output o;
  o.report.command = "test";
  o.report.args = {{"kind", args.kind},       {"graph", args.graph},
                   {"outcomes", args.outcomes}, {"config", args.config},
                   {"alpha", args.alpha},     {"resamples", args.resamples},
                   {"tail", args.tail},       {"seed", seed}};
  if (args.p) o.report.args["p"] = *args.p;
  PhaseTimer timer(o.report);
  const GraphFile file =
      graph_file_from_json(load_input(o.report, "graph", args.graph));
  const EndogenousGraph& graph = file.graph;
  const Observations obs =
      observations_from_json(load_input(o.report, "outcomes", args.outcomes));
  check_observations(obs, graph);
  std::optional<EstimatorConfig> config;
  if (!args.config.empty()) {
    config = config_from_json(load_input(o.report, "config", args.config),
                              graph, {std::nullopt, file.anchor});
  }
  timer.mark("load");

  const Tail tail = *parse_tail(args.tail);
  const RealizedGraph realized = realize_graph(graph, obs.t);
  TestResult result;
  if (args.kind == "exogeneity") {
    const std::optional<double> p =
        args.p ? args.p : (config ? std::optional<double>(config->p)
                                  : std::nullopt);
    if (!p) throw ValidationError("exogeneity test needs --p or --config");
    result = exogeneity_test(realized, obs.t, *p,
                             {args.resamples, args.alpha, seed, tail});
  } else if (args.kind == "ttest") {
    result = r_driven_ttest(realized, graph.pre_edges(), obs.t,
                            {args.alpha, tail});
  } else {
    if (!config) throw ValidationError("sharp-null test needs --config");
    if (tail != Tail::kTwoSided) {
      throw ValidationError("sharp-null test is defined on |mu_tilde| only");
    }
    const AnchorEstimator estimator(graph, *config);
    result = sharp_null_test(obs.y, obs.t, estimator,
                             {args.resamples, args.alpha, seed, tail});
  }
  timer.mark("compute");
  o.report.results = to_json(result);
  o.report.results["test"] = args.kind;
  o.csv = test_csv(result, args.kind);
  return o;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::string scenario;
  std::optional<int> n_a;
  std::optional<int> n_r;
  int reps = 1000;
  std::string estimator = "mu_hat";
  std::string test = "none";
  double alpha = 0.05;
  int resamples = 500;
  std::string tail = "two_sided";
};

Output run_simulate(const SimulateArgs& args, std::uint64_t seed) {
  Output o;
  o.report.command = "simulate";
  o.report.args = {{"scenario", args.scenario}, {"reps", args.reps},
                   {"estimator", args.estimator}, {"test", args.test},
                   {"alpha", args.alpha},       {"resamples", args.resamples},
                   {"tail", args.tail},         {"seed", seed}};
  if (args.n_a) o.report.args["n_a"] = *args.n_a;
  if (args.n_r) o.report.args["n_r"] = *args.n_r;
  PhaseTimer timer(o.report);
  const ScenarioFile scenario =
      scenario_from_json(load_input(o.report, "scenario", args.scenario));
  timer.mark("load");

  const Tail tail = *parse_tail(args.tail);
  if (scenario.edge_dgp) {
    EdgeDgpSpec spec = *scenario.edge_dgp;
    if (args.n_a) spec.n_a = *args.n_a;
    if (args.n_r) spec.n_r = *args.n_r;
    RejectionRate rate;
    if (args.test == "exogeneity") {
      rate = exogeneity_rejection_rate(
          spec, args.reps, {args.resamples, args.alpha, 0, tail}, seed);
    } else if (args.test == "ttest") {
      rate = ttest_rejection_rate(spec, args.reps, {args.alpha, tail}, seed);
    } else {
      throw ValidationError(
          "edge-formation scenarios need --test exogeneity or --test ttest");
    }
    timer.mark("compute");
    o.report.results = to_json(rate);
    o.report.results["test"] = args.test;
    o.csv = rate_csv(rate, args.test);
    return o;
  }

  const ScenarioInstance instance = instantiate(scenario, args.n_a, args.n_r);
  timer.mark("generate");
  if (args.test == "sharp-null") {
    const RejectionRate rate = sharp_null_rejection_rate(
        instance, args.reps, {args.resamples, args.alpha, 0, Tail::kTwoSided},
        seed);
    timer.mark("compute");
    o.report.results = to_json(rate);
    o.report.results["test"] = args.test;
    o.csv = rate_csv(rate, args.test);
    return o;
  }
  if (args.test != "none") {
    throw ValidationError("--test " + args.test +
                          " needs an edge-formation scenario");
  }
  const ReplicationSummary summary = replicate(
      instance, args.reps, *parse_estimator_choice(args.estimator), seed);
  timer.mark("compute");
  o.report.results = to_json(summary);
  o.report.results["estimator"] = args.estimator;
  o.report.results["n_a"] = instance.graph.n_a();
  o.report.results["n_r"] = instance.graph.n_r();
  o.csv.header = {"replication", "estimate", "standardized"};
  for (std::size_t i = 0; i < summary.estimates.size(); ++i) {
    o.csv.rows.push_back(
        {std::to_string(i), num(summary.estimates[i]),
         summary.standardized.empty() ? "" : num(summary.standardized[i])});
  }
  return o;
}

// ---------------------------------------------------------------------------
// scaling

struct ScalingArgs {
  std::string scenario;
  std::vector<int> sizes{200, 800, 3200};
  int reps = 2000;
};

Output run_scaling(const ScalingArgs& args, std::uint64_t seed) {
  Output o;
  o.report.command = "scaling";
  o.report.args = {{"scenario", args.scenario},
                   {"sizes", args.sizes},
                   {"reps", args.reps},
                   {"seed", seed}};
  PhaseTimer timer(o.report);
  const ScenarioFile scenario =
      scenario_from_json(load_input(o.report, "scenario", args.scenario));
  if (!scenario.generator) {
    throw ValidationError("scaling needs a generator scenario");
  }
  timer.mark("load");
  const ScalingReport report =
      variance_scaling_study(*scenario.generator, args.sizes, args.reps, seed);
  timer.mark("compute");
  o.report.results = to_json(report);
  o.csv.header = {"n_a", "n_r", "variance", "mean", "truth",
                  "d_a", "d_r", "envelope"};
  for (const auto& p : report.points) {
    o.csv.rows.push_back({std::to_string(p.n_a), std::to_string(p.n_r),
                          num(p.variance), num(p.mean), num(p.truth),
                          std::to_string(p.d_a), std::to_string(p.d_r),
                          num(p.envelope)});
  }
  return o;
}

// ---------------------------------------------------------------------------
// bias-table

struct BiasArgs {
  std::vector<int> examples;
  double p = 0.5;
  ExampleOutcomes ys;
};

Output run_bias_table(const BiasArgs& args) {
  Output o;
  o.report.command = "bias-table";
  std::vector<int> examples = args.examples;
  if (examples.empty()) examples = {1, 2, 3};
  o.report.args = {{"examples", examples},
                   {"p", args.p},
                   {"y", args.ys.y},
                   {"y1", args.ys.y1},
                   {"y2", args.ys.y2}};
  PhaseTimer timer(o.report);
  const BiasReport report = bias_table(examples, args.p, args.ys);
  timer.mark("compute");
  o.report.results = to_json(report);
  o.csv.header = {"example", "t", "probability", "ht_total", "ht_mean"};
  for (const auto& e : report.examples) {
    for (const auto& c : e.cases) {
      o.csv.rows.push_back({std::to_string(e.example), c.t.to_string(),
                            num(c.probability), num(c.ht_total),
                            num(c.ht_mean)});
    }
    o.csv.rows.push_back({std::to_string(e.example), "expectation", "1",
                          num(e.ht_expectation_total),
                          num(e.ht_expectation_mean)});
  }
  return o;
}

// ---------------------------------------------------------------------------
// verify-anchor

struct VerifyArgs {
  std::string graph;
  std::string config;
  std::string mode = "exhaustive";
  int samples = 1000;
  bool full_treatment_only = false;
};

Output run_verify_anchor(const VerifyArgs& args, std::uint64_t seed) {
  Output o;
  o.report.command = "verify-anchor";
  o.report.args = {{"graph", args.graph},
                   {"config", args.config},
                   {"mode", args.mode},
                   {"samples", args.samples},
                   {"full_treatment_only", args.full_treatment_only},
                   {"seed", seed}};
  PhaseTimer timer(o.report);
  const GraphFile file =
      graph_file_from_json(load_input(o.report, "graph", args.graph));
  const EndogenousGraph& graph = file.graph;
  AnchorSubgraph anchor;
  if (!args.config.empty()) {
    anchor = config_from_json(load_input(o.report, "config", args.config),
                              graph, {std::nullopt, file.anchor})
                 .anchor;
  } else if (file.anchor) {
    anchor = AnchorSubgraph(graph.n_a(), *file.anchor);
  } else {
    throw SchemaError(args.graph, "no anchor: give --config or an \"anchor\" list");
  }
  timer.mark("load");
  AnchorCheckOptions options;
  options.mode = args.mode == "sampled" ? AnchorCheckOptions::Mode::kSampled
                                        : AnchorCheckOptions::Mode::kExhaustive;
  options.n_samples = args.samples;
  options.seed = seed;
  options.full_treatment_only = args.full_treatment_only;
  const VerificationReport report = verify_anchor(graph, anchor, options);
  const DependencyReport deps = classify_dependency(graph);
  timer.mark("compute");
  o.report.results = {{"anchor", to_json(report)},
                      {"dependency", to_json(deps)}};
  o.csv.header = {"a", "r", "witness"};
  for (const auto& v : report.violations) {
    o.csv.rows.push_back({std::to_string(v.pair.a), std::to_string(v.pair.r),
                          v.witness.to_string()});
  }
  o.status_line = std::string(report.pass ? "PASS" : "FAIL") +
                  " verify-anchor: " + std::to_string(report.violations.size()) +
                  " violating pair(s), edge rule " +
                  std::string(to_string(deps.kind));
  if (!report.pass) o.exit_code = kValidationFailure;
  return o;
}

// ---------------------------------------------------------------------------
// enumerate-check

struct EnumerateArgs {
  std::string scenario;
  std::optional<int> n_a;
  std::optional<int> n_r;
  double tolerance = 1e-10;
};

Output run_enumerate_check(const EnumerateArgs& args) {
  Output o;
  o.report.command = "enumerate-check";
  o.report.args = {{"scenario", args.scenario}, {"tolerance", args.tolerance}};
  if (args.n_a) o.report.args["n_a"] = *args.n_a;
  if (args.n_r) o.report.args["n_r"] = *args.n_r;
  PhaseTimer timer(o.report);
  const ScenarioFile scenario =
      scenario_from_json(load_input(o.report, "scenario", args.scenario));
  const ScenarioInstance instance = instantiate(scenario, args.n_a, args.n_r);
  if (!instance.config) {
    throw ValidationError("scenario has no estimator configuration");
  }
  timer.mark("load");

  const EndogenousGraph& graph = instance.graph;
  const int n_r = graph.n_r();
  // Refuse before doing any work.
  AssignmentEnumeration(n_r, instance.p);
  const AnchorEstimator estimator(graph, *instance.config);
  const std::vector<double> expected_units = exact_expectation_vector(
      [&](const TreatmentVector& t) {
        const RealizedGraph realized = realize_graph(graph, t);
        const UnitValues y =
            outcome(instance.model, realized, t, graph.unipartite());
        const EstimateResult r = estimator.estimate(realized, y, t);
        std::vector<double> v;
        v.reserve(r.per_unit.size() + 1);
        v.push_back(r.mu_hat);
        for (const auto& u : r.per_unit) {
          v.push_back(u.beta_hat * u.w_hat + u.gamma_hat.value_or(0.0));
        }
        return v;
      },
      n_r, instance.p);
  const UnitValues w1 =
      full_treatment_weight(graph, instance.config->w);
  double max_unit_error = 0.0;
  for (int a = 0; a < graph.n_a(); ++a) {
    const double truth =
        w1[a] * instance.model.beta[a] + instance.model.gamma_at(a);
    max_unit_error =
        std::max(max_unit_error, std::abs(expected_units[a + 1] - truth));
  }
  const double abs_error = std::abs(expected_units[0] - instance.tte);
  const double max_error = std::max(abs_error, max_unit_error);
  const bool pass = max_error <= args.tolerance;
  timer.mark("compute");

  o.report.results = {{"n_a", graph.n_a()},
                      {"n_r", n_r},
                      {"assignments", std::uint64_t{1} << n_r},
                      {"expectation", expected_units[0]},
                      {"tte", instance.tte},
                      {"abs_error", abs_error},
                      {"max_unit_abs_error", max_unit_error},
                      {"max_abs_error", max_error},
                      {"tolerance", args.tolerance},
                      {"pass", pass}};
  o.csv = {{"n_a", "n_r", "expectation", "tte", "max_abs_error", "pass"},
           {{std::to_string(graph.n_a()), std::to_string(n_r),
             num(expected_units[0]), num(instance.tte), num(max_error),
             pass ? "true" : "false"}}};
  char line[160];
  std::snprintf(line, sizeof(line),
                "%s enumerate-check: n_r=%d, max |E[mu_hat] - mu| = %.3g "
                "(tolerance %.3g)",
                pass ? "PASS" : "FAIL", n_r, max_error, args.tolerance);
  o.status_line = line;
  if (!pass) o.exit_code = kValidationFailure;
  return o;
}

// ---------------------------------------------------------------------------

void emit(const Output& o, const Common& common, std::ostream& out) {
  const std::string text =
      common.format == "csv"
          ? to_csv(o.csv)
          : to_json(o.report, !common.no_timing).dump(2) + "\n";
  if (common.out_path.empty()) {
    out << text;
  } else {
    write_text_file(common.out_path, text);
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Estimation and testing on endogenous interference graphs"};
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", common.out_path, "Write the report to this file");
  app.add_flag("--no-timing", common.no_timing,
               "Omit wall-clock timings from JSON reports");
  app.add_option("--seed", common.seed_text,
                 std::string("Resampling / replication seed (default $") +
                     kSeedEnv + " or 0)");

  std::function<Output(std::uint64_t)> command;

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate the TTE");
  estimate->add_option("--graph", est.graph)->required();
  estimate->add_option("--outcomes", est.outcomes)->required();
  estimate->add_option("--config", est.config)->required();
  estimate->add_option("--estimator", est.estimator)
      ->check(CLI::IsMember({"mu_hat", "horvitz_thompson", "ht", "mu_tilde"}));
  estimate->add_flag("--full-treatment-anchor", est.full_treatment_anchor,
                     "Only require anchor edges under full treatment");
  estimate->callback([&] { command = [&](std::uint64_t) { return run_estimate(est); }; });

  TestArgs ta;
  auto* test = app.add_subcommand("test", "Run a hypothesis test");
  test->add_option("--kind", ta.kind)
      ->required()
      ->check(CLI::IsMember({"exogeneity", "ttest", "sharp-null"}));
  test->add_option("--graph", ta.graph)->required();
  test->add_option("--outcomes", ta.outcomes)->required();
  test->add_option("--config", ta.config);
  test->add_option("--p", ta.p, "Design probability (exogeneity test)");
  test->add_option("--alpha", ta.alpha);
  test->add_option("--resamples", ta.resamples);
  test->add_option("--tail", ta.tail)
      ->check(CLI::IsMember({"two_sided", "upper", "lower"}));
  test->callback([&] { command = [&](std::uint64_t s) { return run_test(ta, s); }; });

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo replications");
  simulate->add_option("--scenario", sa.scenario)->required();
  simulate->add_option("--na", sa.n_a);
  simulate->add_option("--nr", sa.n_r);
  simulate->add_option("--reps", sa.reps);
  simulate->add_option("--estimator", sa.estimator)
      ->check(CLI::IsMember({"mu_hat", "horvitz_thompson", "ht", "mu_tilde"}));
  simulate->add_option("--test", sa.test, "Report a rejection rate instead")
      ->check(CLI::IsMember({"none", "exogeneity", "ttest", "sharp-null"}));
  simulate->add_option("--alpha", sa.alpha);
  simulate->add_option("--resamples", sa.resamples);
  simulate->add_option("--tail", sa.tail)
      ->check(CLI::IsMember({"two_sided", "upper", "lower"}));
  simulate->callback([&] { command = [&](std::uint64_t s) { return run_simulate(sa, s); }; });

  ScalingArgs sc;
  auto* scaling = app.add_subcommand("scaling", "Variance scaling study");
  scaling->add_option("--scenario", sc.scenario)->required();
  scaling->add_option("--sizes", sc.sizes)->delimiter(',');
  scaling->add_option("--reps", sc.reps);
  scaling->callback([&] { command = [&](std::uint64_t s) { return run_scaling(sc, s); }; });

  BiasArgs ba;
  auto* bias = app.add_subcommand("bias-table", "Exact HT bias on the canonical examples");
  bias->add_option("--example", ba.examples)->check(CLI::Range(1, 3));
  bias->add_option("--p", ba.p);
  bias->add_option("--y", ba.ys.y);
  bias->add_option("--y1", ba.ys.y1);
  bias->add_option("--y2", ba.ys.y2);
  bias->callback([&] { command = [&](std::uint64_t) { return run_bias_table(ba); }; });

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify-anchor", "Check the anchor subgraph");
  verify->add_option("--graph", va.graph)->required();
  verify->add_option("--config", va.config,
                     "Anchor source; defaults to the graph file's anchor");
  verify->add_option("--mode", va.mode)
      ->check(CLI::IsMember({"exhaustive", "sampled"}));
  verify->add_option("--samples", va.samples);
  verify->add_flag("--full-treatment-only", va.full_treatment_only);
  verify->callback([&] { command = [&](std::uint64_t s) { return run_verify_anchor(va, s); }; });

  EnumerateArgs ea;
  auto* enumerate = app.add_subcommand(
      "enumerate-check", "Exact unbiasedness check by enumeration");
  enumerate->add_option("--scenario", ea.scenario)->required();
  enumerate->add_option("--na", ea.n_a);
  enumerate->add_option("--nr", ea.n_r);
  enumerate->add_option("--tolerance", ea.tolerance);
  enumerate->callback([&] { command = [&](std::uint64_t) { return run_enumerate_check(ea); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputFailure;
  }

  try {
    const Output o = command(resolve_seed(common));
    emit(o, common, out);
    if (!o.status_line.empty()) err << o.status_line << "\n";
    return o.exit_code;
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << "\n";
    return kInputFailure;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kInputFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  }
}

}  // namespace endograph::cli
