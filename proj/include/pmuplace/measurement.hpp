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

#include "pmuplace/grid.hpp"

namespace pmu {

enum class MeasurementKind { BusVoltage, BusCurrent, BranchCurrent };

const char* to_string(MeasurementKind kind);

struct CandidateDescriptor {
  MeasurementKind kind = MeasurementKind::BusVoltage;
  std::string bus;      // measured bus, or from-bus of a branch
  std::string to_bus;   // branch candidates only
  char phase = 'a';

  // "voltage/<bus>/<phase>", "current/<bus>/<phase>", "branch/<from>/<to>/<phase>"
  std::string label() const;
};

// Every admissible PMU measurement of a grid, as linear functionals of the
// reduced state x (V = F x + V0).
struct CandidateSet {
  CMatrix rows;           // reduced rows (C F), N_cand x (N - |eps|)
  CMatrix full_rows;      // C over non-source voltages, N_cand x N
  CVector source_offset;  // contribution of the fixed source voltages
  CVector predicted;      // measured value at the prior voltage
  RVector precision;      // inverse noise variance
  RVector cost;
  std::vector<CandidateDescriptor> descriptors;

  Index size() const { return rows.rows(); }
  Index find(const std::string& label) const;  // -1 if absent
  CandidateSet subset(const std::vector<Index>& keep) const;
};

struct NoiseModel {
  double sigma_mag = 0.01;
  double sigma_ang = 0.01;       // rad
  double magnitude_floor = 1e-4; // pu, applied to |z_pred| before squaring
};

// A rule matches a candidate when every non-"*" field is equal. The last
// matching rule wins; candidates with no match keep cost 1.
struct CostRule {
  std::string kind = "*";  // voltage | current | branch | *
  std::string bus = "*";
  std::string to = "*";
  std::string phase = "*";
  double cost = 1.0;

  bool matches(const CandidateDescriptor& d) const;
};

CandidateSet enumerate_candidates(const GridModel& model, const AdmittanceMatrix& y,
                                  const CMatrix& basis, const CVector& v_prior,
                                  const NoiseModel& noise = {},
                                  const std::vector<CostRule>& costs = {});

// Rescales costs to unit mean.
void normalize_costs(CandidateSet& candidates);

}  // namespace pmu
