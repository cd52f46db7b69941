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

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "pmuplace/types.hpp"

namespace pmu {

// Phases are written as a sorted subset of "abc".
struct Bus {
  std::string id;
  std::string phases;
  std::vector<Complex> load;          // consumed power per phase, pu
  std::vector<bool> zero_injection;   // per phase
  std::vector<Complex> shunt;         // shunt admittance per phase, pu

  Index phase_position(char phase) const;
};

struct Branch {
  std::string from;
  std::string to;
  std::string phases;  // subset of both endpoint phase sets
  CMatrix admittance;  // series admittance, |phases| x |phases|, pu
};

struct Source {
  std::string bus;
  std::vector<Complex> voltage;  // one entry per phase of the source bus
};

struct GridModel {
  std::vector<Bus> buses;
  std::vector<Branch> branches;
  Source source;
  std::optional<CMatrix> prior_covariance;  // overrides the propagated prior

  // Throws pmu::Error naming the offending record.
  void validate() const;

  Index bus_index(const std::string& id) const;  // -1 if absent
  Index source_index() const;
  Index state_dim() const;
};

struct PhaseNode {
  Index bus = 0;
  char phase = 'a';
};

// Rows: source phases first, then every other bus in file order with phases
// in a < b < c order. State index = row - source_size().
struct AdmittanceMatrix {
  CMatrix y;
  std::vector<PhaseNode> nodes;
  std::vector<std::array<Index, 3>> row_of;  // per bus, -1 where absent
  CVector source_voltage;

  Index source_size() const { return source_voltage.size(); }
  Index state_dim() const { return y.rows() - source_size(); }
  Index row(Index bus, char phase) const { return row_of[bus][phase - 'a']; }

  auto nonsource() const {
    const Index s = source_size();
    return y.bottomRightCorner(y.rows() - s, y.cols() - s);
  }
  auto coupling() const {
    const Index s = source_size();
    return y.bottomLeftCorner(y.rows() - s, s);
  }
};

struct FeasibleSubspace {
  CMatrix basis;                     // N x (N - |eps|), orthonormal columns
  std::vector<Index> zero_injection; // state indices
  CVector v0;                        // voltage under zero load
};

struct PriorModel {
  CVector v_prior;
  CMatrix covariance;  // reduced prior covariance
  double sigma_psd = 0.5;
};

struct PowerFlowOptions {
  double tolerance = 1e-10;
  int max_iterations = 100;
};

AdmittanceMatrix build_admittance(const GridModel& model);

// State indices of phases flagged zero-injection.
std::vector<Index> zero_injection_indices(const GridModel& model,
                                          const AdmittanceMatrix& y);

// Injected power per state index (negated load), the S of I = Y V, S = conj(I) V.
CVector pseudo_injections(const GridModel& model, const AdmittanceMatrix& y);

// Orthonormal basis of ker(constraints). Throws on rank-deficient rows.
CMatrix null_space_basis(const CMatrix& constraints);

FeasibleSubspace feasible_subspace(const AdmittanceMatrix& y,
                                   const std::vector<Index>& zero_injection);

CVector zero_load_voltage(const AdmittanceMatrix& y);

// Non-source current injections I = Y_ns V_src + Y_nn V.
CVector current_injections(const AdmittanceMatrix& y, const CVector& v);

// Fixed-point current-injection iteration V <- V0 + Y_nn^{-1} conj(S ./ V).
CVector solve_power_flow(const AdmittanceMatrix& y, const CVector& s,
                         const PowerFlowOptions& options = {});

// First-order propagation of relative pseudo-load noise
// S_i (1 + sigma_psd w_i), w_i ~ N(0, 1), through V = Y_nn^{-1} I.
PriorModel prior_covariance(const AdmittanceMatrix& y, const CVector& s_psd,
                            const CVector& v_prior, const CMatrix& basis,
                            double sigma_psd, double floor = 1e-12);

}  // namespace pmu
