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

#include <optional>
#include <vector>

#include "pmuplace/grid.hpp"
#include "pmuplace/instance.hpp"
#include "pmuplace/measurement.hpp"

namespace pmu {

struct ProblemOptions {
  double sigma_psd = 0.5;
  NoiseModel noise;
  std::vector<CostRule> costs;
  bool normalize_costs = false;
  PowerFlowOptions power_flow;
  double prior_floor = 1e-12;
};

// Everything derived from a grid: admittance, feasible subspace, prior and
// the candidate measurements.
struct PlacementProblem {
  GridModel model;
  AdmittanceMatrix admittance;
  FeasibleSubspace subspace;
  PriorModel prior;
  CandidateSet candidates;

  PlacementInstance<Complex> instance(Constraint constraint, Metric metric) const {
    return PlacementInstance<Complex>(prior.covariance, candidates.rows, candidates.precision,
                                      candidates.cost, constraint, metric);
  }
};

PlacementProblem build_problem(const GridModel& model, const ProblemOptions& options = {});

}  // namespace pmu
