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

#include "pmuplace/measurement.hpp"

#include <algorithm>
#include <cmath>

namespace pmu {

const char* to_string(MeasurementKind kind) {
  switch (kind) {
    case MeasurementKind::BusVoltage: return "voltage";
    case MeasurementKind::BusCurrent: return "current";
    case MeasurementKind::BranchCurrent: return "branch";
  }
  return "?";
}

std::string CandidateDescriptor::label() const {
  std::string out = std::string(to_string(kind)) + "/" + bus;
  if (kind == MeasurementKind::BranchCurrent) out += "/" + to_bus;
  out += "/";
  out += phase;
  return out;
}

Index CandidateSet::find(const std::string& label) const {
  for (std::size_t i = 0; i < descriptors.size(); ++i)
    if (descriptors[i].label() == label) return static_cast<Index>(i);
  return -1;
}

CandidateSet CandidateSet::subset(const std::vector<Index>& keep) const {
  CandidateSet out;
  const auto m = static_cast<Index>(keep.size());
  out.rows.resize(m, rows.cols());
  out.full_rows.resize(m, full_rows.cols());
  out.source_offset.resize(m);
  out.predicted.resize(m);
  out.precision.resize(m);
  out.cost.resize(m);
  for (Index k = 0; k < m; ++k) {
    const Index i = keep[k];
    if (i < 0 || i >= size()) throw Error("candidate index out of range");
    out.rows.row(k) = rows.row(i);
    out.full_rows.row(k) = full_rows.row(i);
    out.source_offset(k) = source_offset(i);
    out.predicted(k) = predicted(i);
    out.precision(k) = precision(i);
    out.cost(k) = cost(i);
    out.descriptors.push_back(descriptors[i]);
  }
  return out;
}

bool CostRule::matches(const CandidateDescriptor& d) const {
  auto eq = [](const std::string& pattern, const std::string& value) {
    return pattern == "*" || pattern == value;
  };
  return eq(kind, to_string(d.kind)) && eq(bus, d.bus) &&
         (to == "*" || (d.kind == MeasurementKind::BranchCurrent && to == d.to_bus)) &&
         eq(phase, std::string(1, d.phase));
}

CandidateSet enumerate_candidates(const GridModel& model, const AdmittanceMatrix& y,
                                  const CMatrix& basis, const CVector& v_prior,
                                  const NoiseModel& noise, const std::vector<CostRule>& costs) {
  if (!(noise.sigma_mag > 0.0) || !(noise.sigma_ang > 0.0))
    throw Error("sigma_mag and sigma_ang must be positive");
  const Index ns = y.source_size();
  const Index n = y.state_dim();
  if (basis.rows() != n || v_prior.size() != n) throw Error("basis/prior dimension mismatch");

  std::vector<CandidateDescriptor> desc;
  std::vector<RowVector<Complex>> full;  // over all N + ns rows of Y

  auto unit = [&](Index row) {
    RowVector<Complex> r = RowVector<Complex>::Zero(ns + n);
    r(row) = 1.0;
    return r;
  };

  std::vector<bool> zero_inj(static_cast<std::size_t>(n), false);
  for (Index k : zero_injection_indices(model, y)) zero_inj[k] = true;

  for (Index k = 0; k < n; ++k) {
    const auto& node = y.nodes[ns + k];
    desc.push_back({MeasurementKind::BusVoltage, model.buses[node.bus].id, "", node.phase});
    full.push_back(unit(ns + k));
  }
  for (Index k = 0; k < n; ++k) {
    if (zero_inj[k]) continue;
    const auto& node = y.nodes[ns + k];
    desc.push_back({MeasurementKind::BusCurrent, model.buses[node.bus].id, "", node.phase});
    full.push_back(y.y.row(ns + k));
  }
  for (const auto& br : model.branches) {
    const Index i = model.bus_index(br.from);
    const Index m = model.bus_index(br.to);
    for (char p : br.phases) {
      const Index ri = y.row(i, p), rm = y.row(m, p);
      const Complex w = -y.y(ri, rm);  // series admittance of phase p
      if (w == Complex(0.0)) continue;
      desc.push_back({MeasurementKind::BranchCurrent, br.from, br.to, p});
      full.push_back(w * (unit(ri) - unit(rm)));
    }
  }

  const double var_scale = noise.sigma_mag * noise.sigma_mag + noise.sigma_ang * noise.sigma_ang;
  std::vector<Index> keep;
  CandidateSet all;
  const auto total = static_cast<Index>(full.size());
  all.full_rows.resize(total, n);
  all.source_offset.resize(total);
  all.descriptors = desc;
  for (Index i = 0; i < total; ++i) {
    all.full_rows.row(i) = full[i].tail(n);
    all.source_offset(i) = (full[i].head(ns) * y.source_voltage).value();
  }
  all.rows = all.full_rows * basis;
  all.predicted = all.full_rows * v_prior + all.source_offset;
  all.precision.resize(total);
  all.cost = RVector::Ones(total);
  for (Index i = 0; i < total; ++i) {
    const double mag = std::max(std::abs(all.predicted(i)), noise.magnitude_floor);
    all.precision(i) = 1.0 / (var_scale * mag * mag);
    // Rows that vanish on the feasible subspace carry no information.
    if (all.rows.row(i).norm() > 1e-12 * std::max(1.0, all.full_rows.row(i).norm())) keep.push_back(i);
  }

  for (std::size_t r = 0; r < costs.size(); ++r) {
    const auto& rule = costs[r];
    if (!(rule.cost > 0.0) || !std::isfinite(rule.cost))
      throw Error("cost rule " + std::to_string(r) + ": cost must be positive and finite");
    bool used = false;
    for (Index i = 0; i < total; ++i) {
      if (!rule.matches(all.descriptors[i])) continue;
      all.cost(i) = rule.cost;
      used = true;
    }
    if (!used)
      throw Error("cost rule " + std::to_string(r) + " (" + rule.kind + "/" + rule.bus + "/" +
                  rule.to + "/" + rule.phase + ") matches no candidate location");
  }
  return all.subset(keep);
}

void normalize_costs(CandidateSet& candidates) {
  if (candidates.size() == 0) return;
  candidates.cost /= candidates.cost.mean();
}

}  // namespace pmu
