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

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "pmuplace/grid.hpp"
#include "pmuplace/measurement.hpp"
#include "pmuplace/problem.hpp"
#include "pmuplace/report.hpp"

namespace pmu {

using Json = nlohmann::json;

// Grid files are JSON. Complex numbers are [re, im] pairs; per-phase values
// are objects keyed by phase label:
//
//   {"source":   {"bus": "src", "voltage": {"a": [1, 0], ...}},
//    "buses":    [{"id": "b1", "phases": "abc", "load": {"a": [0.02, 0.01]},
//                  "zero_injection": false | true | "ab", "shunt": {...}}],
//    "branches": [{"from": "src", "to": "b1", "phases": "abc",
//                  "admittance": [[[re, im], ...], ...]}],
//    "prior_covariance": [[[re, im], ...], ...]}      // optional
//
// "load" is consumed power (injection = -load). Rows of the state follow the
// bus order of the file, phases a < b < c within a bus.
GridModel parse_grid(const Json& doc);
GridModel load_grid(const std::string& path);
Json grid_to_json(const GridModel& model);

// {"costs": [{"kind": "branch", "bus": "b1", "to": "b2", "phase": "a", "cost": 2}]}
std::vector<CostRule> parse_cost_map(const Json& doc);
std::vector<CostRule> load_cost_map(const std::string& path);

struct MeasuredValue {
  std::string candidate;  // descriptor label
  Complex value;
};

// {"measurements": [{"candidate": "voltage/b3/a", "value": [re, im]}]}
std::vector<MeasuredValue> load_measurements(const std::string& path);

struct ExperimentConfig {
  std::string grid_path;
  Metric metric = Metric::D;
  Constraint::Kind kind = Constraint::Kind::Cardinality;
  std::vector<double> sweep;
  std::string cost_path;
  ProblemOptions problem;
  SolveOptions solve;

  void validate() const;
};

Json config_to_json(const ExperimentConfig& config);

struct SweepResult {
  Json results;
  bool all_ok = true;
};

// One record per sweep value; a failing level is recorded and the sweep goes on.
SweepResult run_sweep(const ExperimentConfig& config, const PlacementProblem& problem);
SweepResult run_sweep(const ExperimentConfig& config);

Json report_to_json(const BoundReport& report, const PlacementInstance<Complex>& inst,
                    const CandidateSet& candidates);

// CSV with one row per successful record and one column per series present
// in all of them, plus the random-baseline envelope.
std::string emit_curves(const Json& results);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace pmu
