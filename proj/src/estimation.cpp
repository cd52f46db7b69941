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

#include "pmuplace/estimation.hpp"

namespace pmu {

StateEstimate se_update(const CandidateSet& candidates, const FeasibleSubspace& subspace,
                        const CMatrix& prior_covariance, const CVector& v_prior,
                        const SelectionVector& x, const CVector& z_meas) {
  if (x.mode() != SelectionVector::Mode::Binary) throw Error("state estimation needs a binary selection");
  if (x.size() != candidates.size()) throw Error("selection length does not match candidate count");
  const SelectionSet selected = x.to_set();
  if (z_meas.size() != static_cast<Index>(selected.size()))
    throw Error("expected " + std::to_string(selected.size()) + " measurements, got " +
                std::to_string(z_meas.size()));

  const PlacementInstance<Complex> inst(prior_covariance, candidates.rows, candidates.precision,
                                        candidates.cost, Constraint::cardinality(0), Metric::A);
  auto posterior = posterior_covariance(inst, x);
  CMatrix full_cov = subspace.basis * posterior.covariance() * subspace.basis.adjoint();
  if (selected.empty()) return {v_prior, std::move(posterior), std::move(full_cov)};

  const auto m = static_cast<Index>(selected.size());
  CMatrix rows(m, inst.dim());
  CVector weighted_innovation(m);
  for (Index k = 0; k < m; ++k) {
    const Index i = selected[k];
    rows.row(k) = candidates.rows.row(i);
    const Complex predicted = (candidates.full_rows.row(i) * v_prior).value() + candidates.source_offset(i);
    weighted_innovation(k) = candidates.precision(i) * (z_meas(k) - predicted);
  }
  // K_F = Sigma_F,post (C F)^* Sigma_meas^{-1}
  const CVector dx = posterior.covariance() * (rows.adjoint() * weighted_innovation);
  return {v_prior + subspace.basis * dx, std::move(posterior), std::move(full_cov)};
}

}  // namespace pmu
