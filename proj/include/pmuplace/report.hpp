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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pmuplace/convex.hpp"
#include "pmuplace/placement.hpp"

namespace pmu {

// Series names shared by reports, results files and curve files.
namespace series {
inline constexpr const char* kConvex = "convex";
inline constexpr const char* kConvexCertified = "convex_certified";
inline constexpr const char* kFeasible = "feasible";
inline constexpr const char* kGreedy = "greedy";
inline constexpr const char* kGreedy1 = "greedy1";
inline constexpr const char* kGreedy2 = "greedy2";
inline constexpr const char* kGreedy1a = "greedy1a";
inline constexpr const char* kGreedyCorrected = "greedy_corrected";
inline constexpr const char* kGreedy1Corrected = "greedy1_corrected";
inline constexpr const char* kGreedy1aCorrected = "greedy1a_corrected";
inline constexpr const char* kOnline = "online";
}  // namespace series

enum class Role { Lower, Upper, Info };

const char* to_string(Role role);

struct SeriesValue {
  double value = 0.0;
  Role role = Role::Info;
};

struct BoundReport {
  Constraint constraint;
  Metric metric = Metric::D;
  double empty_value = 0.0;
  std::map<std::string, SeriesValue> values;
  std::map<std::string, SelectionSet> placements;  // solver indices
  std::vector<double> random_values;

  double lower = 0.0;
  double upper = 0.0;
  double gap = 0.0;
  bool valid = true;

  int convex_iterations = 0;
  bool convex_converged = false;
  std::optional<double> beta, beta_a, gamma;

  bool has(const std::string& name) const { return values.count(name) > 0; }
  double at(const std::string& name) const { return values.at(name).value; }
  void set(const std::string& name, double value, Role role) { values[name] = {value, role}; }
};

// lower = max of Lower series, upper = min of Upper series; the report is
// flagged invalid when lower exceeds upper by more than 1e-8.
void aggregate_bounds(BoundReport& report);

struct SolveOptions {
  PgdConfig pgd;
  int samples = 100;
  std::uint64_t seed = 1;
  bool online_from_greedy = false;  // A = greedy set instead of the empty set
  bool fast_greedy = true;
};

template <typename Scalar>
BoundReport solve_bounds(const PlacementInstance<Scalar>& inst, const SolveOptions& options = {}) {
  BoundReport rep;
  rep.constraint = inst.constraint();
  rep.metric = inst.metric();
  rep.empty_value = inst.empty_value();
  const bool budget = inst.constraint().is_budget();
  const bool d_metric = inst.metric() == Metric::D;

  const RelaxedSolution relaxed = solve_relaxed(inst, options.pgd);
  rep.set(series::kConvex, relaxed.objective, Role::Lower);
  rep.set(series::kConvexCertified, relaxed.certified_lower, Role::Info);
  rep.convex_iterations = relaxed.iterations;
  rep.convex_converged = relaxed.converged;

  const SelectionSet feasible = budget ? round_budget(relaxed.x, inst.cost(), inst.capacity())
                                       : round_cardinality(relaxed.x, inst.constraint().count());
  rep.placements[series::kFeasible] = feasible;
  rep.set(series::kFeasible, evaluate(inst, feasible), Role::Upper);

  SelectionSet online_base;
  if (!budget) {
    const GreedyResult g = greedy_cardinality(inst, options.fast_greedy);
    rep.placements[series::kGreedy] = g.set;
    rep.set(series::kGreedy, g.value, Role::Upper);
    online_base = g.set;
    if (d_metric) {
      const auto sb = supermodular_lower_bounds(inst, g);
      rep.set(series::kGreedyCorrected, *sb.greedy, Role::Lower);
    }
  } else {
    const BudgetGreedyResult g = greedy_budget(inst, options.fast_greedy);
    rep.placements[series::kGreedy1] = g.x1;
    rep.placements[series::kGreedy2] = g.x2;
    rep.set(series::kGreedy1, g.f_greedy1, Role::Info);
    rep.set(series::kGreedy2, g.f_greedy2, Role::Upper);
    if (g.a && g.f_greedy1a) {
      SelectionSet x1a = g.x1;
      x1a.push_back(*g.a);
      rep.placements[series::kGreedy1a] = detail::sorted(x1a);
      rep.set(series::kGreedy1a, *g.f_greedy1a, Role::Info);
    }
    online_base = g.x2;
    if (d_metric) {
      const auto sb = supermodular_lower_bounds(inst, g);
      rep.beta = sb.factors.beta;
      rep.beta_a = sb.factors.beta_a;
      rep.gamma = sb.factors.gamma;
      if (sb.greedy1) rep.set(series::kGreedy1Corrected, *sb.greedy1, Role::Lower);
      if (sb.greedy1a) rep.set(series::kGreedy1aCorrected, *sb.greedy1a, Role::Lower);
    }
  }
  if (d_metric)
    rep.set(series::kOnline, online_bound(inst, options.online_from_greedy ? online_base : SelectionSet{}),
            Role::Lower);

  for (const auto& s : random_baseline(inst, options.samples, options.seed)) rep.random_values.push_back(s.value);
  aggregate_bounds(rep);
  return rep;
}

}  // namespace pmu
