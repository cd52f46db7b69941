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

#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>

#include "pmuplace/types.hpp"

namespace pmu {

// The complete input to every solver: reduced prior covariance, candidate
// rows with precisions and costs, one constraint and one metric.
//
// Under a budget constraint, candidates with cost above the budget are
// dropped; candidate_ids() maps solver indices back to the caller's rows.
template <typename Scalar>
class PlacementInstance {
 public:
  using MatrixT = Matrix<Scalar>;

  PlacementInstance(MatrixT prior, const MatrixT& rows, const RVector& precision,
                    const RVector& cost, Constraint constraint, Metric metric)
      : prior_(std::move(prior)), constraint_(constraint), metric_(metric) {
    const Index n = prior_.rows();
    if (prior_.cols() != n || n == 0) throw Error("prior covariance must be square and non-empty");
    if (rows.cols() != n) throw Error("candidate rows do not match the prior dimension");
    if (precision.size() != rows.rows() || cost.size() != rows.rows())
      throw Error("precision/cost length does not match candidate count");
    for (Index i = 0; i < rows.rows(); ++i) {
      if (!(precision(i) > 0.0) || !std::isfinite(precision(i)))
        throw Error("candidate " + std::to_string(i) + ": precision must be positive and finite");
      if (!(cost(i) > 0.0) || !std::isfinite(cost(i)))
        throw Error("candidate " + std::to_string(i) + ": cost must be positive and finite");
    }
    if (!(constraint.level >= 0.0) || !std::isfinite(constraint.level))
      throw Error("constraint level must be non-negative");

    for (Index i = 0; i < rows.rows(); ++i)
      if (!constraint.is_budget() || cost(i) <= constraint.level) ids_.push_back(i);
    if (!constraint.is_budget()) {
      if (constraint.level != std::floor(constraint.level))
        throw Error("cardinality constraint must be an integer");
      if (constraint.count() > static_cast<Index>(ids_.size()))
        throw Error("cardinality constraint exceeds the number of candidates");
    }
    const auto m = static_cast<Index>(ids_.size());
    rows_.resize(m, n);
    precision_.resize(m);
    cost_.resize(m);
    for (Index k = 0; k < m; ++k) {
      rows_.row(k) = rows.row(ids_[k]);
      precision_(k) = precision(ids_[k]);
      cost_(k) = cost(ids_[k]);
    }

    Eigen::LLT<MatrixT> llt(prior_);
    if (llt.info() != Eigen::Success) throw Error("prior covariance is not positive definite");
    prior_information_ = llt.solve(MatrixT::Identity(n, n));
    prior_information_ = (0.5 * (prior_information_ + prior_information_.adjoint())).eval();
    empty_[0] = 0.0;
    for (Index i = 0; i < n; ++i) empty_[0] += Eigen::numext::real(prior_(i, i));
    empty_[1] = 0.0;
    for (Index i = 0; i < n; ++i) empty_[1] += 2.0 * std::log(Eigen::numext::real(llt.matrixLLT()(i, i)));
  }

  const MatrixT& prior() const { return prior_; }
  const MatrixT& prior_information() const { return prior_information_; }
  const MatrixT& rows() const { return rows_; }
  const RVector& precision() const { return precision_; }
  const RVector& cost() const { return cost_; }
  const std::vector<Index>& candidate_ids() const { return ids_; }
  Constraint constraint() const { return constraint_; }
  Metric metric() const { return metric_; }

  Index size() const { return rows_.rows(); }
  Index dim() const { return prior_.rows(); }

  // f(empty set)
  double empty_value() const { return empty_value(metric_); }
  double empty_value(Metric m) const { return empty_[m == Metric::A ? 0 : 1]; }

  // N_meas or b.
  double capacity() const { return constraint_.level; }

  // Costs seen by the solvers: unit under a cardinality constraint.
  RVector effective_cost() const {
    return constraint_.is_budget() ? cost_ : RVector(RVector::Ones(size()));
  }

  SelectionSet to_original(const SelectionSet& set) const {
    SelectionSet out;
    for (Index i : set) out.push_back(ids_[i]);
    return out;
  }

 private:
  MatrixT prior_;
  MatrixT prior_information_;
  MatrixT rows_;
  RVector precision_;
  RVector cost_;
  std::vector<Index> ids_;
  Constraint constraint_;
  Metric metric_;
  double empty_[2] = {0.0, 0.0};
};

template <typename Scalar>
double set_cost(const PlacementInstance<Scalar>& inst, const SelectionSet& set) {
  const RVector c = inst.effective_cost();
  double total = 0.0;
  for (Index i : set) total += c(i);
  return total;
}

}  // namespace pmu
