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

#include <doctest.h>

#include <map>

#include "pmuplace/measurement.hpp"
#include "pmuplace/problem.hpp"
#include "pmuplace/synthetic.hpp"
#include "support.hpp"

using namespace pmu;

namespace {

GridModel chain(Complex y1, Complex y2, bool middle_zero) {
  GridModel g;
  g.buses.push_back({"s", "a", {0.0}, {false}, {0.0}});
  g.buses.push_back({"m", "a", {Complex(middle_zero ? 0.0 : 0.02, 0.01 * !middle_zero)}, {middle_zero}, {0.0}});
  g.buses.push_back({"e", "a", {Complex(0.03, 0.01)}, {false}, {0.0}});
  g.branches.push_back({"s", "m", "a", CMatrix::Constant(1, 1, y1)});
  g.branches.push_back({"m", "e", "a", CMatrix::Constant(1, 1, y2)});
  g.source = {"s", {Complex(1.0)}};
  return g;
}

// Independent row builder: assembles Y from the branch list and evaluates
// the measurement map over (source, state) coordinates.
struct Oracle {
  std::map<std::pair<std::string, char>, Index> node;
  CMatrix y;
  Index ns = 0;

  explicit Oracle(const GridModel& g) {
    const auto& src = g.buses[g.source_index()];
    Index next = 0;
    for (char p : src.phases) node[{src.id, p}] = next++;
    ns = next;
    for (const auto& b : g.buses)
      if (b.id != src.id)
        for (char p : b.phases) node[{b.id, p}] = next++;
    y = CMatrix::Zero(next, next);
    for (const auto& br : g.branches)
      for (std::size_t a = 0; a < br.phases.size(); ++a)
        for (std::size_t b = 0; b < br.phases.size(); ++b) {
          const Index fa = node[{br.from, br.phases[a]}], ta = node[{br.to, br.phases[a]}];
          const Index fb = node[{br.from, br.phases[b]}], tb = node[{br.to, br.phases[b]}];
          const Complex w = br.admittance(a, b);
          y(fa, fb) += w;
          y(ta, tb) += w;
          y(fa, tb) -= w;
          y(ta, fb) -= w;
        }
    for (const auto& b : g.buses)
      for (std::size_t p = 0; p < b.phases.size(); ++p) y(node[{b.id, b.phases[p]}], node[{b.id, b.phases[p]}]) += b.shunt[p];
  }

  RowVector<Complex> row(const CandidateDescriptor& d) {
    RowVector<Complex> r = RowVector<Complex>::Zero(y.cols());
    const Index i = node.at({d.bus, d.phase});
    switch (d.kind) {
      case MeasurementKind::BusVoltage: r(i) = 1.0; break;
      case MeasurementKind::BusCurrent: r = y.row(i); break;
      case MeasurementKind::BranchCurrent: {
        const Index m = node.at({d.to_bus, d.phase});
        r(i) = -y(i, m);
        r(m) = y(i, m);
        break;
      }
    }
    return r;
  }
};

}  // namespace

TEST_CASE("voltage candidates are unit rows when nothing is zero-injection") {
  const GridModel g = chain({2.0, -8.0}, {1.0, -5.0}, false);
  const PlacementProblem p = build_problem(g);
  CHECK(p.subspace.basis.cols() == 2);
  for (Index i = 0; i < p.candidates.size(); ++i) {
    const auto& d = p.candidates.descriptors[i];
    if (d.kind != MeasurementKind::BusVoltage) continue;
    const Index k = p.admittance.row(g.bus_index(d.bus), d.phase) - p.admittance.source_size();
    RowVector<Complex> e = RowVector<Complex>::Zero(2);
    e(k) = 1.0;
    CHECK((p.candidates.full_rows.row(i) - e).norm() == 0.0);
  }
}

TEST_CASE("two-bus branch current row is y (F_from - F_to)") {
  GridModel g;
  const Complex y(1.0, -10.0);
  g.buses.push_back({"s", "a", {0.0}, {false}, {0.0}});
  g.buses.push_back({"l", "a", {Complex(0.1, 0.05)}, {false}, {0.0}});
  g.branches.push_back({"s", "l", "a", CMatrix::Constant(1, 1, y)});
  g.source = {"s", {Complex(1.0)}};
  const PlacementProblem p = build_problem(g);
  const Index k = p.candidates.find("branch/s/l/a");
  REQUIRE(k >= 0);
  // F over (source, state) is (0; 1); the source part becomes the offset.
  CHECK(std::abs(p.candidates.rows(k, 0) - y * (0.0 - p.subspace.basis(0, 0))) == 0.0);
  CHECK(std::abs(p.candidates.source_offset(k) - y) == 0.0);
}

TEST_CASE("zero-injection bus currents are excluded and rows live on F") {
  const GridModel g = chain({2.0, -8.0}, {1.0, -5.0}, true);
  const PlacementProblem p = build_problem(g);
  CHECK(p.subspace.basis.cols() == 1);
  CHECK(p.candidates.find("current/m/a") == -1);
  CHECK(p.candidates.find("current/e/a") >= 0);
  CHECK(p.candidates.size() == 2 + 1 + 2);
}

TEST_CASE("8-bus feeders: counts, rows and variances against an independent builder") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    FeederSpec spec;
    spec.buses = 8;
    spec.seed = seed;
    spec.three_phase = seed % 2 == 0;
    const GridModel g = synthetic_feeder(spec);
    const PlacementProblem p = build_problem(g);
    Oracle oracle(g);

    Index n_v = 0, n_i = 0, n_br = 0;
    for (const auto& b : g.buses) {
      if (b.id == g.source.bus) continue;
      for (std::size_t q = 0; q < b.phases.size(); ++q) {
        ++n_v;
        if (!b.zero_injection[q]) ++n_i;
      }
    }
    for (const auto& br : g.branches) n_br += static_cast<Index>(br.phases.size());
    // One direction per branch phase.
    CHECK(p.candidates.size() == n_v + n_i + n_br);

    const Index ns = oracle.ns;
    CVector v_full(ns + p.prior.v_prior.size());
    v_full << p.admittance.source_voltage, p.prior.v_prior;
    for (Index i = 0; i < p.candidates.size(); ++i) {
      const auto& d = p.candidates.descriptors[i];
      const RowVector<Complex> r = oracle.row(d);
      const RowVector<Complex> reduced = r.tail(r.size() - ns) * p.subspace.basis;
      CHECK((reduced - p.candidates.rows.row(i)).norm() < 1e-12 * std::max(1.0, r.norm()));
      const Complex z = (r * v_full).value();
      const double var = (0.01 * 0.01 + 0.01 * 0.01) * std::pow(std::max(std::abs(z), 1e-4), 2);
      CHECK(test::relative_error(1.0 / p.candidates.precision(i), var) < 1e-12);
      CHECK(p.candidates.precision(i) > 0.0);
      CHECK(p.candidates.cost(i) == 1.0);
    }
  }
}

TEST_CASE("cost rules: last match wins, unmatched rule is an error, mean normalization") {
  const GridModel g = chain({2.0, -8.0}, {1.0, -5.0}, false);
  const AdmittanceMatrix a = build_admittance(g);
  const FeasibleSubspace f = feasible_subspace(a, zero_injection_indices(g, a));
  const CVector v = solve_power_flow(a, pseudo_injections(g, a));

  std::vector<CostRule> rules = {{"*", "*", "*", "*", 2.0}, {"branch", "*", "*", "*", 5.0},
                                 {"voltage", "e", "*", "*", 3.0}};
  CandidateSet c = enumerate_candidates(g, a, f.basis, v, {}, rules);
  CHECK(c.cost(c.find("voltage/m/a")) == 2.0);
  CHECK(c.cost(c.find("voltage/e/a")) == 3.0);
  CHECK(c.cost(c.find("branch/m/e/a")) == 5.0);
  normalize_costs(c);
  CHECK(std::abs(c.cost.mean() - 1.0) < 1e-14);

  std::vector<CostRule> bad = {{"voltage", "nowhere", "*", "*", 2.0}};
  CHECK_THROWS_WITH_AS(enumerate_candidates(g, a, f.basis, v, {}, bad), doctest::Contains("matches no candidate"),
                       Error);
}

TEST_CASE("candidate subset and lookup") {
  const PlacementProblem p = test::small_problem(3, 10, 7);
  CHECK(p.candidates.size() == 7);
  for (Index i = 0; i < p.candidates.size(); ++i) CHECK(p.candidates.find(p.candidates.descriptors[i].label()) == i);
  CHECK(p.candidates.find("voltage/none/a") == -1);
}
