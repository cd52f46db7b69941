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

#include <Eigen/Cholesky>

#include "pmuplace/instance.hpp"

namespace pmu {

// Indicator over candidates, binary or relaxed to [0, 1].
class SelectionVector {
 public:
  enum class Mode { Binary, Relaxed };

  static SelectionVector binary(RVector x) { return SelectionVector(std::move(x), Mode::Binary); }
  static SelectionVector relaxed(RVector x) { return SelectionVector(std::move(x), Mode::Relaxed); }
  static SelectionVector from_set(Index n, const SelectionSet& set) {
    RVector x = RVector::Zero(n);
    for (Index i : set) {
      if (i < 0 || i >= n) throw Error("selected candidate out of range");
      x(i) = 1.0;
    }
    return binary(std::move(x));
  }

  const RVector& values() const { return x_; }
  Mode mode() const { return mode_; }
  Index size() const { return x_.size(); }

  SelectionSet to_set() const {
    SelectionSet out;
    for (Index i = 0; i < x_.size(); ++i)
      if (x_(i) != 0.0) out.push_back(i);
    return out;
  }

 private:
  SelectionVector(RVector x, Mode mode) : x_(std::move(x)), mode_(mode) {
    for (Index i = 0; i < x_.size(); ++i) {
      const double v = x_(i);
      const bool ok = mode == Mode::Binary ? (v == 0.0 || v == 1.0) : (v >= 0.0 && v <= 1.0);
      if (!ok) throw Error("selection entry " + std::to_string(i) + " outside its mode bounds");
    }
  }

  RVector x_;
  Mode mode_;
};

// Reduced posterior covariance for one selection, with its trace and
// log-determinant cached.
template <typename Scalar>
class PosteriorState {
 public:
  using MatrixT = Matrix<Scalar>;

  PosteriorState(MatrixT covariance, RVector weights, double trace, double log_det)
      : cov_(std::move(covariance)), weights_(std::move(weights)), trace_(trace), log_det_(log_det) {}

  // Factorizes the Jacobi-scaled information matrix D J D and solves
  // against the identity; the scaling keeps the log-determinant accurate
  // when diagonal entries span many decades.
  static PosteriorState from_information(const MatrixT& information, RVector weights) {
    const Index n = information.rows();
    const RVector diag = information.diagonal().real();
    if ((diag.array() <= 0.0).any())
      throw Error("posterior information matrix is not positive definite (broken prior?)");
    const RVector d = diag.cwiseSqrt().cwiseInverse();
    const MatrixT scaled = d.asDiagonal() * information * d.asDiagonal();
    Eigen::LLT<MatrixT> llt(scaled);
    if (llt.info() != Eigen::Success)
      throw Error("posterior information matrix is not positive definite (broken prior?)");
    MatrixT cov = d.asDiagonal() * llt.solve(MatrixT::Identity(n, n)) * d.asDiagonal();
    Scalar tr = cov.trace();
    const double re = Eigen::numext::real(tr);
    if (std::abs(Eigen::numext::imag(tr)) > 1e-10 * std::max(1.0, std::abs(re)))
      throw Error("posterior covariance trace has an imaginary residual");
    cov = (0.5 * (cov + cov.adjoint())).eval();
    double log_det = 0.0;
    for (Index i = 0; i < n; ++i)
      log_det += 2.0 * (std::log(d(i)) - std::log(Eigen::numext::real(llt.matrixLLT()(i, i))));
    return PosteriorState(std::move(cov), std::move(weights), re, log_det);
  }

  const MatrixT& covariance() const { return cov_; }
  const RVector& weights() const { return weights_; }
  double trace() const { return trace_; }
  double log_det() const { return log_det_; }
  double value(Metric m) const { return m == Metric::A ? trace_ : log_det_; }

 private:
  MatrixT cov_;
  RVector weights_;
  double trace_;
  double log_det_;
};

// Sigma_prior^{-1} + sum_i w_i prec_i r_i^* r_i
template <typename Scalar>
Matrix<Scalar> information_matrix(const PlacementInstance<Scalar>& inst, const RVector& weights) {
  if (weights.size() != inst.size()) throw Error("selection length does not match candidate count");
  if ((weights.array() < 0.0).any()) throw Error("selection weights must be non-negative");
  const RVector w = weights.cwiseProduct(inst.precision()).cwiseSqrt();
  const Matrix<Scalar> scaled = w.asDiagonal() * inst.rows();
  Matrix<Scalar> info = inst.prior_information();
  info.noalias() += scaled.adjoint() * scaled;
  return info;
}

template <typename Scalar>
PosteriorState<Scalar> posterior_covariance(const PlacementInstance<Scalar>& inst,
                                            const SelectionVector& x) {
  return PosteriorState<Scalar>::from_information(information_matrix(inst, x.values()), x.values());
}

template <typename Scalar>
PosteriorState<Scalar> posterior_covariance(const PlacementInstance<Scalar>& inst,
                                            const SelectionSet& set) {
  return posterior_covariance(inst, SelectionVector::from_set(inst.size(), set));
}

template <typename Scalar>
double metric_a(const PosteriorState<Scalar>& state) { return state.trace(); }

template <typename Scalar>
double metric_d(const PosteriorState<Scalar>& state) { return state.log_det(); }

// f-hat(X) by direct recomputation; f-hat of the empty set is the cached prior value.
template <typename Scalar>
double evaluate(const PlacementInstance<Scalar>& inst, const SelectionSet& set, Metric metric) {
  if (set.empty()) return inst.empty_value(metric);
  return posterior_covariance(inst, set).value(metric);
}

template <typename Scalar>
double evaluate(const PlacementInstance<Scalar>& inst, const SelectionSet& set) {
  return evaluate(inst, set, inst.metric());
}

// Relaxed objective f(x).
template <typename Scalar>
double evaluate(const PlacementInstance<Scalar>& inst, const RVector& x, Metric metric) {
  return posterior_covariance(inst, SelectionVector::relaxed(x)).value(metric);
}

// df/dx_i = -prec_i |Sigma r_i^*|^2 (A) or -prec_i r_i Sigma r_i^* (D).
template <typename Scalar>
RVector gradient(const PlacementInstance<Scalar>& inst, const PosteriorState<Scalar>& state, Metric metric) {
  const Matrix<Scalar> rs = inst.rows() * state.covariance();
  RVector g(inst.size());
  if (metric == Metric::A) {
    g = rs.rowwise().squaredNorm();
  } else {
    g = rs.cwiseProduct(inst.rows().conjugate()).rowwise().sum().real();
  }
  return -g.cwiseProduct(inst.precision());
}

template <typename Scalar>
RVector gradient(const PlacementInstance<Scalar>& inst, const RVector& x, Metric metric) {
  return gradient(inst, posterior_covariance(inst, SelectionVector::relaxed(x)), metric);
}

namespace detail {

template <typename Scalar>
struct RankOneTerms {
  Vector<Scalar> u;  // Sigma r_j^*
  double quad;       // r_j Sigma r_j^*
  double noise;      // prec_j^{-1}
};

template <typename Scalar>
RankOneTerms<Scalar> rank_one_terms(const PlacementInstance<Scalar>& inst,
                                    const PosteriorState<Scalar>& state, Index j) {
  if (j < 0 || j >= inst.size()) throw Error("candidate index out of range");
  Vector<Scalar> u = state.covariance() * inst.rows().row(j).adjoint();
  const double quad = Eigen::numext::real((inst.rows().row(j) * u).value());
  return {std::move(u), std::max(quad, 0.0), 1.0 / inst.precision()(j)};
}

}  // namespace detail

// f-hat(X + {j}) from the cached posterior of X in O(n^2): Woodbury for the
// trace, Sylvester's determinant identity for the log-determinant.
template <typename Scalar>
double fast_metric_with(const PlacementInstance<Scalar>& inst, const PosteriorState<Scalar>& state,
                        Index j, Metric metric) {
  const auto t = detail::rank_one_terms(inst, state, j);
  if (metric == Metric::A) return state.trace() - t.u.squaredNorm() / (t.noise + t.quad);
  return state.log_det() - std::log1p(t.quad / t.noise);
}

// Posterior of X + {j} by a rank-one Woodbury downdate.
template <typename Scalar>
PosteriorState<Scalar> with_candidate(const PlacementInstance<Scalar>& inst,
                                      const PosteriorState<Scalar>& state, Index j) {
  const auto t = detail::rank_one_terms(inst, state, j);
  const double denom = t.noise + t.quad;
  Matrix<Scalar> cov = state.covariance() - (t.u * t.u.adjoint()) / denom;
  cov = (0.5 * (cov + cov.adjoint())).eval();
  RVector w = state.weights();
  w(j) = 1.0;
  return PosteriorState<Scalar>(std::move(cov), std::move(w), state.trace() - t.u.squaredNorm() / denom,
                                state.log_det() - std::log1p(t.quad / t.noise));
}

}  // namespace pmu
