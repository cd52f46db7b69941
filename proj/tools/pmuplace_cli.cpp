// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: sweeps, single solves, bound reports, state
// estimation, brute-force oracle, curve export and synthetic feeders.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pmuplace/estimation.hpp"
#include "pmuplace/io.hpp"
#include "pmuplace/placement.hpp"
#include "pmuplace/synthetic.hpp"

namespace {

using namespace pmu;

struct Args {
  ExperimentConfig config;
  std::string metric = "D";
  std::vector<double> cardinality;
  std::vector<double> budget;
  std::string out;
  std::string curves;
};

void add_problem_flags(CLI::App* app, Args& a) {
  app->add_option("--grid", a.config.grid_path, "grid description file (JSON)")->required()->check(CLI::ExistingFile);
  app->add_option("--metric", a.metric, "A or D")->check(CLI::IsMember({"A", "D", "a", "d"}));
  app->add_option("--costs", a.config.cost_path, "cost map file")->check(CLI::ExistingFile);
  app->add_flag("--normalize-costs", a.config.problem.normalize_costs, "rescale candidate costs to unit mean");
  app->add_option("--sigma-psd", a.config.problem.sigma_psd, "relative pseudo-measurement noise");
  app->add_option("--sigma-mag", a.config.problem.noise.sigma_mag, "PMU magnitude noise (relative)");
  app->add_option("--sigma-ang", a.config.problem.noise.sigma_ang, "PMU angle noise (rad)");
}

void add_solve_flags(CLI::App* app, Args& a) {
  auto* k = app->add_option("--cardinality", a.cardinality, "sensor counts, e.g. 1,2,3")->delimiter(',');
  auto* b = app->add_option("--budget", a.budget, "budgets, e.g. 0.5,1,2")->delimiter(',');
  k->excludes(b);
  app->add_option("--samples", a.config.solve.samples, "random baseline samples per level");
  app->add_option("--seed", a.config.solve.seed, "base seed; level i uses seed + i");
  app->add_option("--pgd-alpha", a.config.solve.pgd.alpha, "projected gradient step scale");
  app->add_option("--pgd-max-iters", a.config.solve.pgd.max_iterations, "projected gradient iteration cap");
  app->add_option("--pgd-tol", a.config.solve.pgd.tolerance, "projected gradient stopping tolerance");
  app->add_flag("--online-from-greedy", a.config.solve.online_from_greedy, "start the online bound from the greedy set");
  app->add_option("--out", a.out, "results file (stdout if omitted)");
}

void finish_config(Args& a) {
  a.config.metric = parse_metric(a.metric);
  if (!a.budget.empty()) {
    a.config.kind = Constraint::Kind::Budget;
    a.config.sweep = a.budget;
  } else {
    a.config.kind = Constraint::Kind::Cardinality;
    a.config.sweep = a.cardinality;
  }
  if (a.config.sweep.empty()) throw Error("one of --cardinality or --budget is required");
}

PlacementProblem load_problem(const Args& a) {
  ProblemOptions opts = a.config.problem;
  if (!a.config.cost_path.empty()) opts.costs = load_cost_map(a.config.cost_path);
  return build_problem(load_grid(a.config.grid_path), opts);
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

int run_sweep_cmd(Args& a, bool report_only) {
  finish_config(a);
  const SweepResult r = run_sweep(a.config, load_problem(a));
  Json results = r.results;
  if (report_only)
    for (auto& rec : results["records"]) rec.erase("placements");
  emit(a.out, dump(results));
  if (!a.curves.empty()) write_file(a.curves, emit_curves(results));
  for (const auto& rec : results["records"])
    if (rec["status"] != "ok")
      std::cerr << "level " << rec["level"].dump() << ": " << rec.value("error", std::string("failed")) << "\n";
  return r.all_ok ? 0 : 1;
}

int run_place(Args& a) {
  finish_config(a);
  if (a.config.sweep.size() != 1) throw Error("place takes a single --cardinality or --budget value");
  const SweepResult r = run_sweep(a.config, load_problem(a));
  const Json& rec = r.results["records"][0];
  if (rec["status"] == "ok") {
    // Best upper-bound placement: the one achieving the reported upper value.
    std::string best;
    double value = 0.0;
    for (const auto& [name, s] : rec["series"].items())
      if (s["role"] == "upper" && rec["placements"].contains(name) && (best.empty() || s["value"].get<double>() < value)) {
        best = name;
        value = s["value"].get<double>();
      }
    Json out = rec;
    out["selected"] = {{"series", best}, {"value", value}, {"candidates", rec["placements"][best]["candidates"]}};
    emit(a.out, dump(out));
  } else {
    emit(a.out, dump(rec));
  }
  return r.all_ok ? 0 : 1;
}

int run_oracle(Args& a, Index max_candidates) {
  finish_config(a);
  const PlacementProblem problem = load_problem(a);
  Json records = Json::array();
  bool ok = true;
  for (double level : a.config.sweep) {
    const Constraint c = a.config.kind == Constraint::Kind::Budget ? Constraint::budget(level)
                                                                   : Constraint::cardinality(static_cast<Index>(level));
    try {
      const auto inst = problem.instance(c, a.config.metric);
      const OptimumResult opt = brute_force_opt(inst, max_candidates);
      Json labels = Json::array();
      for (Index i : inst.to_original(opt.set)) labels.push_back(problem.candidates.descriptors[i].label());
      records.push_back({{"level", level}, {"status", "ok"}, {"value", opt.value},
                         {"candidates", labels}, {"evaluated", opt.evaluated}});
    } catch (const std::exception& e) {
      records.push_back({{"level", level}, {"status", "error"}, {"error", e.what()}});
      ok = false;
    }
  }
  emit(a.out, dump({{"format", "pmuplace-oracle"}, {"metric", to_string(a.config.metric)},
                    {"constraint", to_string(a.config.kind)}, {"records", records}}));
  return ok ? 0 : 1;
}

int run_estimate(Args& a, const std::string& meas_path) {
  const PlacementProblem problem = load_problem(a);
  const auto measured = load_measurements(meas_path);
  const Index n = problem.candidates.size();
  std::vector<Complex> value(n);
  std::vector<bool> seen(n, false);
  for (const auto& m : measured) {
    const Index i = problem.candidates.find(m.candidate);
    if (i < 0) throw Error("unknown candidate '" + m.candidate + "'");
    if (seen[i]) throw Error("candidate '" + m.candidate + "' measured twice");
    seen[i] = true;
    value[i] = m.value;
  }
  SelectionSet set;
  for (Index i = 0; i < n; ++i)
    if (seen[i]) set.push_back(i);
  CVector z(static_cast<Index>(set.size()));
  for (std::size_t k = 0; k < set.size(); ++k) z(k) = value[set[k]];

  const StateEstimate est = se_update(problem.candidates, problem.subspace, problem.prior.covariance,
                                      problem.prior.v_prior, SelectionVector::from_set(n, set), z);
  Json states = Json::array();
  const auto& nodes = problem.admittance.nodes;
  for (Index r = 0; r < est.voltage.size(); ++r) {
    const auto& node = nodes[r];
    states.push_back({{"bus", problem.model.buses[node.bus].id}, {"phase", std::string(1, node.phase)},
                      {"prior", {problem.prior.v_prior(r).real(), problem.prior.v_prior(r).imag()}},
                      {"posterior", {est.voltage(r).real(), est.voltage(r).imag()}},
                      {"std", std::sqrt(std::max(0.0, est.covariance(r, r).real()))}});
  }
  const double prior_trace = problem.prior.covariance.trace().real();
  emit(a.out, dump({{"format", "pmuplace-estimate"},
                    {"measurements", set.size()},
                    {"trace_prior", prior_trace},
                    {"trace_posterior", est.posterior.trace()},
                    {"logdet_posterior", est.posterior.log_det()},
                    {"states", states}}));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal PMU placement with certified bounds"};
  app.require_subcommand(1);
  Args a;

  auto* sweep = app.add_subcommand("sweep", "bound and solution curves over a sweep of levels");
  add_problem_flags(sweep, a);
  add_solve_flags(sweep, a);
  sweep->add_option("--curves", a.curves, "also write a CSV curve file");

  auto* bounds = app.add_subcommand("bounds", "bound report without placements");
  add_problem_flags(bounds, a);
  add_solve_flags(bounds, a);
  bounds->add_option("--curves", a.curves, "also write a CSV curve file");

  auto* place = app.add_subcommand("place", "single solve with the selected placement");
  add_problem_flags(place, a);
  add_solve_flags(place, a);

  Index max_candidates = 22;
  auto* oracle = app.add_subcommand("oracle", "exhaustive optimum (small instances only)");
  add_problem_flags(oracle, a);
  add_solve_flags(oracle, a);
  oracle->add_option("--max-candidates", max_candidates, "refuse instances larger than this");

  std::string meas_path;
  auto* estimate = app.add_subcommand("estimate", "posterior state estimate from a measurement file");
  add_problem_flags(estimate, a);
  estimate->add_option("--measurements", meas_path, "measurement file")->required()->check(CLI::ExistingFile);
  estimate->add_option("--out", a.out, "output file (stdout if omitted)");

  std::string results_path;
  auto* curves = app.add_subcommand("curves", "CSV curves from a results file");
  curves->add_option("results", results_path, "results file")->required()->check(CLI::ExistingFile);
  curves->add_option("--out", a.out, "CSV file (stdout if omitted)");

  FeederSpec spec;
  auto* synth = app.add_subcommand("synth", "write a random radial feeder");
  synth->add_option("--buses", spec.buses, "bus count including the source")->check(CLI::Range(2, 100000));
  synth->add_flag("--three-phase", spec.three_phase, "three-phase trunk with single-phase laterals");
  synth->add_option("--zero-injection", spec.zero_injection_fraction, "fraction of interior buses with no load");
  synth->add_option("--seed", spec.seed, "generator seed");
  synth->add_option("--out", a.out, "grid file (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep) return run_sweep_cmd(a, false);
    if (*bounds) return run_sweep_cmd(a, true);
    if (*place) return run_place(a);
    if (*oracle) return run_oracle(a, max_candidates);
    if (*estimate) return run_estimate(a, meas_path);
    if (*curves) {
      emit(a.out, emit_curves(Json::parse(read_file(results_path))));
      return 0;
    }
    if (*synth) {
      emit(a.out, dump(grid_to_json(synthetic_feeder(spec))));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
