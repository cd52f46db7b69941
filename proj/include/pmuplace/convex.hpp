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

#include <algorithm>
#include <cmath>
#include <deque>

#include "pmuplace/posterior.hpp"

namespace pmu {

// Euclidean projection onto {y : sum(y) = cap, 0 <= y <= upper}. The
// multiplier tau of the sum constraint is located among the sorted
// breakpoints of sum(clamp(v - tau, 0, upper)); y = clamp(v - tau, 0, upper).
RVector project_boxed_simplex(const RVector& v, double cap, const RVector& upper);

// Largest violation of the projection's optimality conditions at y.
double projection_kkt_residual(const RVector& v, const RVector& y, double cap, const RVector& upper);

// min over the boxed simplex of g^T y (fractional knapsack).
double boxed_simplex_linear_min(const RVector& g, double cap, const RVector& upper);

struct PgdConfig {
  double alpha = 10.0;
  int max_iterations = 2000;
  // Stop when the best objective improved by less than tolerance times the
  // total improvement since the start over the last `patience` iterations.
  double tolerance = 1e-9;
  int patience = 50;
};

struct RelaxedSolution {
  RVector x;
  double objective = 0.0;
  // max over iterates of f(y) + min_z grad^T (z - y); never above the relaxed optimum
  double certified_lower = 0.0;
  int iterations = 0;
  double step = 0.0;
  bool converged = false;
};

namespace detail {

// PGD in y = x .* upper over {sum(y) = cap, 0 <= y <= upper} with step
// alpha |y0| / (K |grad|), y0 the uniform starting point.
template <typename Scalar>
RelaxedSolution pgd_scaled(const PlacementInstance<Scalar>& inst, const RVector& upper, double cap,
                           const PgdConfig& config) {
  const Index n = inst.size();
  const Metric metric = inst.metric();
  RelaxedSolution out;
  const double total = upper.sum();
  if (n == 0 || cap >= total) {
    out.x = RVector::Ones(n);
    const auto state = posterior_covariance(inst, SelectionVector::relaxed(out.x));
    out.objective = state.value(metric);
    out.certified_lower = out.objective;
    out.converged = true;
    return out;
  }

  RVector y = (cap / total) * upper;
  RVector x = y.cwiseQuotient(upper);
  const double scale = y.norm();  // step lengths are relative to the starting point
  out.x = x;
  out.objective = std::numeric_limits<double>::infinity();
  out.certified_lower = -std::numeric_limits<double>::infinity();
  std::deque<double> history;
  double start = 0.0;

  for (int k = 1; k <= config.max_iterations + 1; ++k) {
    const auto state = posterior_covariance(inst, SelectionVector::relaxed(x));
    const double f = state.value(metric);
    const RVector g = gradient(inst, state, metric).cwiseQuotient(upper);
    if (f < out.objective) {
      out.objective = f;
      out.x = x;
    }
    out.certified_lower =
        std::max(out.certified_lower, f + boxed_simplex_linear_min(g, cap, upper) - g.dot(y));

    if (k == 1) start = f;
    history.push_back(out.objective);
    if (static_cast<int>(history.size()) > config.patience) {
      if (history.front() - out.objective <= config.tolerance * (start - out.objective)) {
        out.converged = true;
        break;
      }
      history.pop_front();
    }
    if (k > config.max_iterations) break;

    const double norm = g.norm();
    if (norm == 0.0) {
      out.converged = true;
      break;
    }
    out.iterations = k;
    out.step = config.alpha * scale / (k * norm);
    y = project_boxed_simplex(y - out.step * g, cap, upper);
    x = y.cwiseQuotient(upper);
  }
  out.certified_lower = std::min(out.certified_lower, out.objective);
  return out;
}

}  // namespace detail

template <typename Scalar>
RelaxedSolution pgd_cardinality(const PlacementInstance<Scalar>& inst, const PgdConfig& config = {}) {
  if (inst.constraint().is_budget()) throw Error("pgd_cardinality needs a cardinality constraint");
  return detail::pgd_scaled(inst, RVector::Ones(inst.size()), inst.capacity(), config);
}

// Change of variables y = x .* c turns the budget set into a scaled boxed simplex.
template <typename Scalar>
RelaxedSolution pgd_budget(const PlacementInstance<Scalar>& inst, const PgdConfig& config = {}) {
  if (!inst.constraint().is_budget()) throw Error("pgd_budget needs a budget constraint");
  return detail::pgd_scaled(inst, inst.cost(), inst.capacity(), config);
}

template <typename Scalar>
RelaxedSolution solve_relaxed(const PlacementInstance<Scalar>& inst, const PgdConfig& config = {}) {
  return inst.constraint().is_budget() ? pgd_budget(inst, config) : pgd_cardinality(inst, config);
}

}  // namespace pmu
