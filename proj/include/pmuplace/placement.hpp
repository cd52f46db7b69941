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
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "pmuplace/posterior.hpp"

namespace pmu {

namespace detail {

// Keys within this relative distance count as tied; ties go to the lowest index.
inline bool improves(double key, double best, double scale) {
  return key < best - 1e-12 * std::max(1.0, std::abs(scale));
}

// Budget test shared by every solver so feasibility is decided identically.
inline bool fits(double spent, double cost, double budget) { return spent + cost <= budget; }

inline SelectionSet sorted(SelectionSet s) {
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace detail

struct GreedyResult {
  SelectionSet set;          // ascending
  SelectionSet order;        // in the order picked
  double value = 0.0;        // recomputed from scratch
  std::vector<double> trajectory;
};

// Forward greedy: add argmin_i f(X + {i}) until N_meas sensors are placed.
// `fast` scores candidates with rank-one updates; otherwise every score is a
// full recomputation.
template <typename Scalar>
GreedyResult greedy_cardinality(const PlacementInstance<Scalar>& inst, bool fast = true) {
  if (inst.constraint().is_budget()) throw Error("greedy_cardinality needs a cardinality constraint");
  const Metric metric = inst.metric();
  GreedyResult out;
  std::vector<bool> taken(static_cast<std::size_t>(inst.size()), false);
  auto state = posterior_covariance(inst, SelectionSet{});
  for (Index step = 0; step < inst.constraint().count(); ++step) {
    Index best = -1;
    double best_value = 0.0;
    for (Index i = 0; i < inst.size(); ++i) {
      if (taken[i]) continue;
      double v;
      if (fast) {
        v = fast_metric_with(inst, state, i, metric);
      } else {
        SelectionSet trial = out.order;
        trial.push_back(i);
        v = evaluate(inst, detail::sorted(trial), metric);
      }
      if (best < 0 || detail::improves(v, best_value, state.value(metric))) {
        best = i;
        best_value = v;
      }
    }
    if (best < 0) break;
    taken[best] = true;
    out.order.push_back(best);
    state = fast ? with_candidate(inst, state, best) : posterior_covariance(inst, detail::sorted(out.order));
    out.trajectory.push_back(best_value);
  }
  out.set = detail::sorted(out.order);
  out.value = evaluate(inst, out.set, metric);
  return out;
}

struct BudgetGreedyResult {
  SelectionSet x1, x2;
  std::optional<Index> a;  // first minimizer that did not fit after X1
  double f_greedy1 = 0.0, f_greedy2 = 0.0;
  std::optional<double> f_greedy1a;
};

// Cost-effective forward greedy. Candidates are ranked by marginal change per
// unit cost, (f(X + {i}) - f(X)) / c_i; selected candidates are excluded.
template <typename Scalar>
BudgetGreedyResult greedy_budget(const PlacementInstance<Scalar>& inst, bool fast = true) {
  const Metric metric = inst.metric();
  const RVector c = inst.effective_cost();
  const double b = inst.capacity();
  const Index n = inst.size();

  auto argmin_ratio = [&](const PosteriorState<Scalar>& state, const std::vector<bool>& taken,
                          const SelectionSet& current, double spent, bool affordable_only) {
    Index best = -1;
    double best_key = 0.0;
    const double base = state.value(metric);
    for (Index i = 0; i < n; ++i) {
      if (taken[i]) continue;
      if (affordable_only && !detail::fits(spent, c(i), b)) continue;
      double v;
      if (fast) {
        v = fast_metric_with(inst, state, i, metric);
      } else {
        SelectionSet trial = current;
        trial.push_back(i);
        v = evaluate(inst, detail::sorted(trial), metric);
      }
      const double key = (v - base) / c(i);
      if (best < 0 || detail::improves(key, best_key, base)) {
        best = i;
        best_key = key;
      }
    }
    return best;
  };
  auto advance = [&](const PosteriorState<Scalar>& state, const SelectionSet& set, Index j) {
    return fast ? with_candidate(inst, state, j) : posterior_covariance(inst, detail::sorted(set));
  };

  BudgetGreedyResult out;
  std::vector<bool> taken(static_cast<std::size_t>(n), false);
  auto state = posterior_covariance(inst, SelectionSet{});
  double spent = 0.0;
  Index k = argmin_ratio(state, taken, out.x1, spent, false);
  while (k >= 0 && detail::fits(spent, c(k), b)) {
    out.x1.push_back(k);
    taken[k] = true;
    spent += c(k);
    state = advance(state, out.x1, k);
    k = argmin_ratio(state, taken, out.x1, spent, false);
  }
  if (k >= 0) out.a = k;

  out.x2 = out.x1;
  for (;;) {
    k = argmin_ratio(state, taken, out.x2, spent, true);
    if (k < 0) break;
    out.x2.push_back(k);
    taken[k] = true;
    spent += c(k);
    state = advance(state, out.x2, k);
  }

  out.x1 = detail::sorted(out.x1);
  out.x2 = detail::sorted(out.x2);
  out.f_greedy1 = evaluate(inst, out.x1, metric);
  out.f_greedy2 = evaluate(inst, out.x2, metric);
  if (out.a) {
    SelectionSet x1a = out.x1;
    x1a.push_back(*out.a);
    out.f_greedy1a = evaluate(inst, detail::sorted(x1a), metric);
  }
  return out;
}

// Indicator of the n_meas largest entries; ties go to the lowest index.
SelectionSet round_cardinality(const RVector& x, Index n_meas);

// Repeatedly take the unselected candidate with the largest entry among those
// that still fit the remaining budget.
SelectionSet round_budget(const RVector& x, const RVector& costs, double budget);

// 1 - (1 - 1/n)^n
double alpha(Index n_meas);

struct BetaFactors {
  std::optional<double> beta;    // absent when X1 is empty
  std::optional<double> beta_a;  // absent when there is no a
  double gamma = 0.0;            // fraction of the budget spent by X1
  bool bounds_hold = true;       // beta >= 1 - e^-gamma, beta_a >= 1 - gamma e^-gamma
};

BetaFactors beta_factors(const SelectionSet& x1, std::optional<Index> a, const RVector& costs, double budget);

// (f_greedy - f(empty)) / factor + f(empty)
inline double corrected_bound(double f_greedy, double f_empty, double factor) {
  return (f_greedy - f_empty) / factor + f_empty;
}

struct SupermodularBounds {
  std::optional<double> greedy;    // cardinality
  std::optional<double> greedy1;   // budget, beta
  std::optional<double> greedy1a;  // budget, beta_a
  BetaFactors factors;
};

template <typename Scalar>
SupermodularBounds supermodular_lower_bounds(const PlacementInstance<Scalar>& inst, const GreedyResult& greedy) {
  if (inst.metric() != Metric::D) throw Error("supermodularity bounds apply to the D metric only");
  SupermodularBounds out;
  if (inst.constraint().count() >= 1)
    out.greedy = corrected_bound(greedy.value, inst.empty_value(), alpha(inst.constraint().count()));
  else
    out.greedy = inst.empty_value();
  return out;
}

template <typename Scalar>
SupermodularBounds supermodular_lower_bounds(const PlacementInstance<Scalar>& inst,
                                             const BudgetGreedyResult& greedy) {
  if (inst.metric() != Metric::D) throw Error("supermodularity bounds apply to the D metric only");
  SupermodularBounds out;
  out.factors = beta_factors(greedy.x1, greedy.a, inst.effective_cost(), inst.capacity());
  const double f0 = inst.empty_value();
  if (out.factors.beta) out.greedy1 = corrected_bound(greedy.f_greedy1, f0, *out.factors.beta);
  if (out.factors.beta_a && greedy.f_greedy1a)
    out.greedy1a = corrected_bound(*greedy.f_greedy1a, f0, *out.factors.beta_a);
  return out;
}

// Online bound from the set `base`: f(A) plus the fractional-knapsack sum of
// the best marginal decrements per unit cost over candidates outside A.
// Under a cardinality constraint costs are unit and the budget is N_meas.
template <typename Scalar>
double online_bound(const PlacementInstance<Scalar>& inst, const SelectionSet& base = {}) {
  if (inst.metric() != Metric::D) throw Error("the online bound applies to the D metric only");
  const RVector c = inst.effective_cost();
  const double b = inst.capacity();
  const auto state = posterior_covariance(inst, detail::sorted(base));
  const double f_base = base.empty() ? inst.empty_value() : state.log_det();

  std::vector<bool> skip(static_cast<std::size_t>(inst.size()), false);
  for (Index i : base) skip[i] = true;
  RVector delta = RVector::Zero(inst.size());
  for (Index i = 0; i < inst.size(); ++i)
    if (!skip[i]) delta(i) = fast_metric_with(inst, state, i, Metric::D) - f_base;

  double bound = f_base;
  double spent = 0.0;
  Index k = -1;
  bool exhausted = false;
  while (spent < b) {
    k = -1;
    double best_key = 0.0;
    for (Index i = 0; i < inst.size(); ++i) {
      if (skip[i]) continue;
      const double key = delta(i) / c(i);
      if (k < 0 || detail::improves(key, best_key, f_base)) {
        k = i;
        best_key = key;
      }
    }
    if (k < 0) {
      exhausted = true;
      break;
    }
    skip[k] = true;
    spent += c(k);
    bound += delta(k);
  }
  if (!exhausted && k >= 0) bound += delta(k) * (b - spent) / c(k);
  return bound;
}

struct OptimumResult {
  SelectionSet set;
  double value = 0.0;
  std::uint64_t evaluated = 0;
};

// Exhaustive search over every feasible subset (depth-first, information
// matrix accumulated along the path).
template <typename Scalar>
OptimumResult brute_force_opt(const PlacementInstance<Scalar>& inst, Index max_candidates = 22) {
  if (inst.size() > max_candidates)
    throw Error("brute force refused: " + std::to_string(inst.size()) + " candidates exceeds " +
                std::to_string(max_candidates));
  const Metric metric = inst.metric();
  const RVector c = inst.effective_cost();
  const bool budget = inst.constraint().is_budget();
  const double b = inst.capacity();
  const Index max_count = budget ? inst.size() : inst.constraint().count();
  const Index n = inst.size();

  OptimumResult best;
  best.value = std::numeric_limits<double>::infinity();
  SelectionSet path;

  auto score = [&](const Matrix<Scalar>& info) {
    Eigen::LLT<Matrix<Scalar>> llt(info);
    if (llt.info() != Eigen::Success) throw Error("brute force: indefinite information matrix");
    if (metric == Metric::D) {
      double ld = 0.0;
      for (Index i = 0; i < info.rows(); ++i) ld -= 2.0 * std::log(Eigen::numext::real(llt.matrixLLT()(i, i)));
      return ld;
    }
    const Matrix<Scalar> cov = llt.solve(Matrix<Scalar>::Identity(info.rows(), info.cols()));
    return static_cast<double>(Eigen::numext::real(cov.trace()));
  };

  auto recurse = [&](auto&& self, Index start, const Matrix<Scalar>& info, double spent) -> void {
    const double v = score(info);
    ++best.evaluated;
    if (v < best.value) {
      best.value = v;
      best.set = path;
    }
    if (static_cast<Index>(path.size()) >= max_count) return;
    for (Index i = start; i < n; ++i) {
      const double cost = budget ? c(i) : 1.0;
      if (budget && !detail::fits(spent, cost, b)) continue;
      const Matrix<Scalar> next =
          info + inst.precision()(i) * (inst.rows().row(i).adjoint() * inst.rows().row(i));
      path.push_back(i);
      self(self, i + 1, next, spent + cost);
      path.pop_back();
    }
  };
  recurse(recurse, 0, inst.prior_information(), 0.0);
  best.value = evaluate(inst, best.set, metric);
  return best;
}

namespace detail {

// Unbiased draw in [0, n) from a 64-bit engine; fixed across platforms.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t r;
  do r = rng(); while (r >= limit);
  return r % n;
}

inline std::vector<Index> permutation(std::mt19937_64& rng, Index n) {
  std::vector<Index> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), Index{0});
  for (Index i = n - 1; i > 0; --i)
    std::swap(p[i], p[uniform_below(rng, static_cast<std::uint64_t>(i) + 1)]);
  return p;
}

}  // namespace detail

struct RandomSample {
  SelectionSet set;
  double value = 0.0;
};

// Uniform k-subsets (cardinality) or random permutations packed while the
// budget allows (budget). Deterministic for a given seed.
template <typename Scalar>
std::vector<RandomSample> random_baseline(const PlacementInstance<Scalar>& inst, int samples, std::uint64_t seed) {
  std::vector<RandomSample> out;
  if (samples <= 0) return out;
  std::mt19937_64 rng(seed);
  const RVector c = inst.effective_cost();
  for (int s = 0; s < samples; ++s) {
    const auto perm = detail::permutation(rng, inst.size());
    SelectionSet pick;
    if (inst.constraint().is_budget()) {
      double spent = 0.0;
      for (Index i : perm) {
        if (!detail::fits(spent, c(i), inst.capacity())) continue;
        pick.push_back(i);
        spent += c(i);
      }
    } else {
      pick.assign(perm.begin(), perm.begin() + inst.constraint().count());
    }
    pick = detail::sorted(pick);
    const double v = evaluate(inst, pick);
    out.push_back({std::move(pick), v});
  }
  return out;
}

}  // namespace pmu
