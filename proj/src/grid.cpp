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

#include "pmuplace/grid.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

#include <Eigen/LU>
#include <Eigen/QR>

namespace pmu {

namespace {

bool finite(const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

bool valid_phases(const std::string& phases) {
  if (phases.empty() || phases.size() > 3) return false;
  for (std::size_t i = 0; i < phases.size(); ++i) {
    if (phases[i] < 'a' || phases[i] > 'c') return false;
    if (i > 0 && phases[i] <= phases[i - 1]) return false;
  }
  return true;
}

Eigen::PartialPivLU<CMatrix> factor_nonsource(const AdmittanceMatrix& y) {
  Eigen::PartialPivLU<CMatrix> lu(y.nonsource());
  if (!(lu.rcond() > 1e-14)) throw Error("singular non-source admittance block");
  return lu;
}

}  // namespace

Index Bus::phase_position(char phase) const {
  const auto pos = phases.find(phase);
  return pos == std::string::npos ? -1 : static_cast<Index>(pos);
}

Index GridModel::bus_index(const std::string& id) const {
  for (std::size_t i = 0; i < buses.size(); ++i)
    if (buses[i].id == id) return static_cast<Index>(i);
  return -1;
}

Index GridModel::source_index() const { return bus_index(source.bus); }

Index GridModel::state_dim() const {
  Index n = 0;
  const Index src = source_index();
  for (std::size_t i = 0; i < buses.size(); ++i)
    if (static_cast<Index>(i) != src) n += static_cast<Index>(buses[i].phases.size());
  return n;
}

void GridModel::validate() const {
  std::set<std::string> ids;
  for (const auto& bus : buses) {
    const std::string where = "bus '" + bus.id + "'";
    if (bus.id.empty()) throw Error("bus with empty id");
    if (!ids.insert(bus.id).second) throw Error("duplicate bus id '" + bus.id + "'");
    if (!valid_phases(bus.phases))
      throw Error(where + ": field 'phases' must be a sorted subset of \"abc\", got \"" +
                  bus.phases + "\"");
    const auto np = bus.phases.size();
    if (bus.load.size() != np || bus.zero_injection.size() != np || bus.shunt.size() != np)
      throw Error(where + ": per-phase fields do not match phase count");
    for (std::size_t p = 0; p < np; ++p) {
      if (!finite(bus.load[p])) throw Error(where + ": non-finite field 'load'");
      if (!finite(bus.shunt[p])) throw Error(where + ": non-finite field 'shunt'");
      if (bus.zero_injection[p] && bus.load[p] != Complex(0.0))
        throw Error(where + ": zero-injection phase '" + std::string(1, bus.phases[p]) +
                    "' has nonzero load");
    }
  }

  const Index src = source_index();
  if (source.bus.empty() || src < 0) throw Error("source bus '" + source.bus + "' not found");
  const auto& src_bus = buses[src];
  if (source.voltage.size() != src_bus.phases.size())
    throw Error("source voltage must list one value per phase of bus '" + src_bus.id + "'");
  for (const auto& v : source.voltage)
    if (!finite(v)) throw Error("source: non-finite field 'voltage'");
  if (state_dim() == 0) throw Error("grid has no non-source phases");

  for (std::size_t k = 0; k < branches.size(); ++k) {
    const auto& br = branches[k];
    const std::string where = "branch " + std::to_string(k) + " ('" + br.from + "' -> '" + br.to + "')";
    const Index i = bus_index(br.from);
    const Index j = bus_index(br.to);
    if (i < 0) throw Error(where + ": unknown bus '" + br.from + "'");
    if (j < 0) throw Error(where + ": unknown bus '" + br.to + "'");
    if (i == j) throw Error(where + ": self loop");
    if (!valid_phases(br.phases)) throw Error(where + ": invalid field 'phases'");
    for (char p : br.phases) {
      if (buses[i].phase_position(p) < 0 || buses[j].phase_position(p) < 0)
        throw Error(where + ": unknown phase '" + std::string(1, p) + "' at an endpoint");
    }
    const auto np = static_cast<Index>(br.phases.size());
    if (br.admittance.rows() != np || br.admittance.cols() != np)
      throw Error(where + ": admittance block must be " + std::to_string(np) + "x" +
                  std::to_string(np));
    if (!br.admittance.allFinite()) throw Error(where + ": non-finite admittance");
    const double scale = std::max(1.0, br.admittance.cwiseAbs().maxCoeff());
    if ((br.admittance - br.admittance.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw Error(where + ": admittance block is not symmetric");
  }

  // Connectivity at phase level: every (bus, phase) must reach a source phase.
  std::vector<std::array<bool, 3>> seen(buses.size(), {false, false, false});
  std::vector<std::vector<std::pair<Index, int>>> adj(buses.size() * 3);
  for (const auto& br : branches) {
    const Index i = bus_index(br.from);
    const Index j = bus_index(br.to);
    for (Index r = 0; r < br.admittance.rows(); ++r)
      for (Index c = 0; c < br.admittance.cols(); ++c) {
        if (br.admittance(r, c) == Complex(0.0)) continue;
        const int pr = br.phases[r] - 'a';
        const int pc = br.phases[c] - 'a';
        adj[i * 3 + pr].push_back({j, pc});
        adj[j * 3 + pc].push_back({i, pr});
      }
  }
  std::queue<std::pair<Index, int>> todo;
  for (char p : src_bus.phases) {
    seen[src][p - 'a'] = true;
    todo.push({src, p - 'a'});
  }
  while (!todo.empty()) {
    const auto [b, p] = todo.front();
    todo.pop();
    for (const auto& [nb, np] : adj[b * 3 + p]) {
      if (seen[nb][np]) continue;
      seen[nb][np] = true;
      todo.push({nb, np});
    }
  }
  for (const auto& bus : buses)
    for (char p : bus.phases)
      if (!seen[bus_index(bus.id)][p - 'a'])
        throw Error("disconnected graph: bus '" + bus.id + "' phase '" + std::string(1, p) +
                    "' is not connected to the source");
}

AdmittanceMatrix build_admittance(const GridModel& model) {
  model.validate();
  AdmittanceMatrix out;
  const Index src = model.source_index();
  out.row_of.assign(model.buses.size(), {-1, -1, -1});

  auto add_bus_rows = [&](Index b) {
    for (char p : model.buses[b].phases) {
      out.row_of[b][p - 'a'] = static_cast<Index>(out.nodes.size());
      out.nodes.push_back({b, p});
    }
  };
  add_bus_rows(src);
  for (Index b = 0; b < static_cast<Index>(model.buses.size()); ++b)
    if (b != src) add_bus_rows(b);

  out.source_voltage = Eigen::Map<const CVector>(model.source.voltage.data(),
                                                 static_cast<Index>(model.source.voltage.size()));
  const auto n = static_cast<Index>(out.nodes.size());
  out.y = CMatrix::Zero(n, n);

  for (const auto& br : model.branches) {
    const Index i = model.bus_index(br.from);
    const Index j = model.bus_index(br.to);
    for (Index r = 0; r < br.admittance.rows(); ++r)
      for (Index c = 0; c < br.admittance.cols(); ++c) {
        const Complex w = br.admittance(r, c);
        const Index ir = out.row(i, br.phases[r]), ic = out.row(i, br.phases[c]);
        const Index jr = out.row(j, br.phases[r]), jc = out.row(j, br.phases[c]);
        out.y(ir, ic) += w;
        out.y(jr, jc) += w;
        out.y(ir, jc) -= w;
        out.y(jr, ic) -= w;
      }
  }
  for (Index b = 0; b < static_cast<Index>(model.buses.size()); ++b) {
    const auto& bus = model.buses[b];
    for (std::size_t p = 0; p < bus.phases.size(); ++p) {
      const Index r = out.row(b, bus.phases[p]);
      out.y(r, r) += bus.shunt[p];
    }
  }
  return out;
}

std::vector<Index> zero_injection_indices(const GridModel& model, const AdmittanceMatrix& y) {
  std::vector<Index> eps;
  const Index src = model.source_index();
  for (Index b = 0; b < static_cast<Index>(model.buses.size()); ++b) {
    if (b == src) continue;
    const auto& bus = model.buses[b];
    for (std::size_t p = 0; p < bus.phases.size(); ++p)
      if (bus.zero_injection[p]) eps.push_back(y.row(b, bus.phases[p]) - y.source_size());
  }
  std::sort(eps.begin(), eps.end());
  return eps;
}

CVector pseudo_injections(const GridModel& model, const AdmittanceMatrix& y) {
  CVector s = CVector::Zero(y.state_dim());
  const Index src = model.source_index();
  for (Index b = 0; b < static_cast<Index>(model.buses.size()); ++b) {
    if (b == src) continue;
    const auto& bus = model.buses[b];
    for (std::size_t p = 0; p < bus.phases.size(); ++p)
      s(y.row(b, bus.phases[p]) - y.source_size()) = -bus.load[p];
  }
  return s;
}

CMatrix null_space_basis(const CMatrix& constraints) {
  const Index n = constraints.cols();
  const Index m = constraints.rows();
  if (m == 0) return CMatrix::Identity(n, n);
  if (m >= n) throw Error("too many zero-injection constraints for the state dimension");
  Eigen::ColPivHouseholderQR<CMatrix> qr(constraints.adjoint());
  if (qr.rank() < m)
    throw Error("rank-deficient zero-injection constraint rows (duplicated constraints?)");
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  return q.rightCols(n - m);
}

CVector zero_load_voltage(const AdmittanceMatrix& y) {
  const auto lu = factor_nonsource(y);
  return -lu.solve(y.coupling() * y.source_voltage);
}

FeasibleSubspace feasible_subspace(const AdmittanceMatrix& y, const std::vector<Index>& zero_injection) {
  const Index n = y.state_dim();
  CMatrix rows(static_cast<Index>(zero_injection.size()), n);
  for (std::size_t k = 0; k < zero_injection.size(); ++k) {
    const Index i = zero_injection[k];
    if (i < 0 || i >= n) throw Error("zero-injection index out of range");
    rows.row(static_cast<Index>(k)) = y.nonsource().row(i);
  }
  FeasibleSubspace out;
  out.basis = null_space_basis(rows);
  out.zero_injection = zero_injection;
  out.v0 = zero_load_voltage(y);
  return out;
}

CVector current_injections(const AdmittanceMatrix& y, const CVector& v) {
  return y.coupling() * y.source_voltage + y.nonsource() * v;
}

CVector solve_power_flow(const AdmittanceMatrix& y, const CVector& s, const PowerFlowOptions& options) {
  if (s.size() != y.state_dim()) throw Error("power injection vector has wrong dimension");
  const auto lu = factor_nonsource(y);
  const CVector v0 = -lu.solve(y.coupling() * y.source_voltage);
  CVector v = v0;
  for (int it = 0; it <= options.max_iterations; ++it) {
    const CVector current = current_injections(y, v);
    const double mismatch = (current.conjugate().cwiseProduct(v) - s).cwiseAbs().maxCoeff();
    if (mismatch < options.tolerance) return v;
    if (!std::isfinite(mismatch) || (v.array() == Complex(0.0)).any()) break;
    v = v0 + lu.solve(s.cwiseQuotient(v).conjugate());
  }
  throw Error("power flow did not converge within " + std::to_string(options.max_iterations) +
              " iterations (infeasible loading?)");
}

PriorModel prior_covariance(const AdmittanceMatrix& y, const CVector& s_psd, const CVector& v_prior,
                            const CMatrix& basis, double sigma_psd, double floor) {
  if (!(sigma_psd >= 0.0)) throw Error("sigma_psd must be non-negative");
  if ((v_prior.array() == Complex(0.0)).any() || !v_prior.allFinite())
    throw Error("singular power-flow Jacobian at the prior voltage");
  Eigen::PartialPivLU<CMatrix> lu(y.nonsource());
  if (!(lu.rcond() > 1e-14)) throw Error("singular power-flow Jacobian at the prior voltage");

  // dI_i = conj(dS_i / V_i) with dS_i = sigma S_i w_i.
  const CVector current_sens = sigma_psd * s_psd.cwiseQuotient(v_prior).conjugate();
  const CMatrix sens = lu.solve(CMatrix(current_sens.asDiagonal()));
  const CMatrix reduced = basis.adjoint() * sens;
  CMatrix cov = reduced * reduced.adjoint();
  cov = (0.5 * (cov + cov.adjoint())).eval();
  cov.diagonal().array() += floor;

  PriorModel out;
  out.v_prior = v_prior;
  out.covariance = std::move(cov);
  out.sigma_psd = sigma_psd;
  return out;
}

}  // namespace pmu
