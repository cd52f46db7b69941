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

// Shared fixtures and independent oracles for the test suites.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "pmuplace/instance.hpp"
#include "pmuplace/problem.hpp"
#include "pmuplace/synthetic.hpp"

namespace pmu::test {

template <typename Scalar>
Scalar draw(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  if constexpr (std::is_same_v<Scalar, double>) {
    return n(rng);
  } else {
    const double re = n(rng);
    return {re, n(rng)};
  }
}

template <typename Scalar>
Matrix<Scalar> random_matrix(std::mt19937_64& rng, Index rows, Index cols) {
  Matrix<Scalar> m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = draw<Scalar>(rng);
  return m;
}

template <typename Scalar>
Matrix<Scalar> random_spd(std::mt19937_64& rng, Index n, double ridge = 0.1) {
  const Matrix<Scalar> a = random_matrix<Scalar>(rng, n, n);
  Matrix<Scalar> p = a * a.adjoint() / static_cast<double>(n);
  p.diagonal().array() += ridge;
  return 0.5 * (p + p.adjoint());
}

inline RVector uniform_vector(std::mt19937_64& rng, Index n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  RVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

template <typename Scalar>
PlacementInstance<Scalar> random_instance(std::mt19937_64& rng, Index dim, Index candidates, Constraint c,
                                          Metric metric, double cost_lo = 1.0, double cost_hi = 1.0) {
  return PlacementInstance<Scalar>(random_spd<Scalar>(rng, dim), random_matrix<Scalar>(rng, candidates, dim),
                                   uniform_vector(rng, candidates, 0.5, 5.0),
                                   uniform_vector(rng, candidates, cost_lo, cost_hi), c, metric);
}

// Direct dense posterior from the defining formula, evaluated through an
// eigen-decomposition rather than Cholesky.
template <typename Scalar>
Matrix<Scalar> dense_posterior(const Matrix<Scalar>& prior, const Matrix<Scalar>& rows, const RVector& precision,
                               const RVector& x) {
  Matrix<Scalar> info = prior.inverse();
  for (Index i = 0; i < rows.rows(); ++i)
    if (x(i) != 0.0) info += x(i) * precision(i) * rows.row(i).adjoint() * rows.row(i);
  info = (0.5 * (info + info.adjoint())).eval();
  Matrix<Scalar> cov = info.inverse();
  return 0.5 * (cov + cov.adjoint());
}

template <typename Scalar>
double dense_metric(const Matrix<Scalar>& cov, Metric m) {
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(cov);
  return m == Metric::A ? es.eigenvalues().sum() : es.eigenvalues().array().log().sum();
}

template <typename Scalar>
double dense_value(const PlacementInstance<Scalar>& inst, const RVector& x, Metric m) {
  return dense_metric<Scalar>(dense_posterior<Scalar>(inst.prior(), inst.rows(), inst.precision(), x), m);
}

template <typename Scalar>
double dense_value(const PlacementInstance<Scalar>& inst, const SelectionSet& set, Metric m) {
  RVector x = RVector::Zero(inst.size());
  for (Index i : set) x(i) = 1.0;
  return dense_value(inst, x, m);
}

struct Enumerated {
  double value = std::numeric_limits<double>::infinity();
  std::uint64_t mask = 0;
};

// Optimum by iterating bitmasks in Gray-code order with dense evaluation.
template <typename Scalar>
Enumerated enumerate_optimum(const PlacementInstance<Scalar>& inst) {
  const Index n = inst.size();
  const RVector c = inst.effective_cost();
  const double cap = inst.capacity();
  Enumerated best;
  for (std::uint64_t g = 0; g < (std::uint64_t{1} << n); ++g) {
    const std::uint64_t mask = g ^ (g >> 1);
    RVector x = RVector::Zero(n);
    double spent = 0.0;
    for (Index i = 0; i < n; ++i)
      if (mask >> i & 1) {
        x(i) = 1.0;
        spent += c(i);
      }
    if (spent > cap) continue;
    const double v = dense_value(inst, x, inst.metric());
    if (v < best.value) best = {v, mask};
  }
  return best;
}

// Small synthetic feeder reduced to at most `max_candidates` candidates.
inline PlacementProblem small_problem(std::uint64_t seed, int buses, Index max_candidates, bool three_phase = false) {
  FeederSpec spec;
  spec.buses = buses;
  spec.three_phase = three_phase;
  spec.seed = seed;
  PlacementProblem p = build_problem(synthetic_feeder(spec));
  if (p.candidates.size() > max_candidates) {
    std::mt19937_64 rng(seed * 7919 + 17);
    std::vector<Index> all(static_cast<std::size_t>(p.candidates.size()));
    for (Index i = 0; i < p.candidates.size(); ++i) all[i] = i;
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(static_cast<std::size_t>(max_candidates));
    std::sort(all.begin(), all.end());
    p.candidates = p.candidates.subset(all);
  }
  return p;
}

inline double relative_error(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace pmu::test
