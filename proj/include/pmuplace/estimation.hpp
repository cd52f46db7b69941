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

#include "pmuplace/grid.hpp"
#include "pmuplace/measurement.hpp"
#include "pmuplace/posterior.hpp"

namespace pmu {

struct StateEstimate {
  CVector voltage;                   // V_post
  PosteriorState<Complex> posterior; // reduced covariance
  CMatrix covariance;                // F Sigma_F,post F^*, rank N - |eps|
};

// Linear-filter update V_post = V_prior + K (z - C V_prior) with the gain
// formed in the reduced space and mapped back through F. z_meas holds one
// value per selected candidate, in ascending candidate order.
StateEstimate se_update(const CandidateSet& candidates, const FeasibleSubspace& subspace,
                        const CMatrix& prior_covariance, const CVector& v_prior,
                        const SelectionVector& x, const CVector& z_meas);

}  // namespace pmu
