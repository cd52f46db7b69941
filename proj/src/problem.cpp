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

#include "pmuplace/problem.hpp"

namespace pmu {

PlacementProblem build_problem(const GridModel& model, const ProblemOptions& options) {
  PlacementProblem p;
  p.model = model;
  p.admittance = build_admittance(model);
  p.subspace = feasible_subspace(p.admittance, zero_injection_indices(model, p.admittance));
  const CVector s = pseudo_injections(model, p.admittance);
  const CVector v = solve_power_flow(p.admittance, s, options.power_flow);
  if (model.prior_covariance) {
    const Index n = p.subspace.basis.cols();
    const CMatrix& cov = *model.prior_covariance;
    if (cov.rows() != n || cov.cols() != n)
      throw Error("prior_covariance must be " + std::to_string(n) + "x" + std::to_string(n));
    p.prior.v_prior = v;
    p.prior.covariance = 0.5 * (cov + cov.adjoint());
    p.prior.sigma_psd = options.sigma_psd;
  } else {
    p.prior = prior_covariance(p.admittance, s, v, p.subspace.basis, options.sigma_psd, options.prior_floor);
  }
  p.candidates = enumerate_candidates(model, p.admittance, p.subspace.basis, v, options.noise, options.costs);
  if (options.normalize_costs) normalize_costs(p.candidates);
  return p;
}

}  // namespace pmu
