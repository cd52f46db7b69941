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

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pmu {

using Complex = std::complex<double>;
using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

using CMatrix = Matrix<Complex>;
using CVector = Vector<Complex>;
using RMatrix = Matrix<double>;
using RVector = Vector<double>;

// Candidate indices in ascending order.
using SelectionSet = std::vector<Index>;

enum class Metric { A, D };

inline const char* to_string(Metric m) { return m == Metric::A ? "A" : "D"; }

inline Metric parse_metric(const std::string& s) {
  if (s == "A" || s == "a") return Metric::A;
  if (s == "D" || s == "d") return Metric::D;
  throw std::invalid_argument("unknown metric '" + s + "' (expected A or D)");
}

// Placement constraint: at most `level` sensors, or total cost at most `level`.
struct Constraint {
  enum class Kind { Cardinality, Budget };

  Kind kind = Kind::Cardinality;
  double level = 0.0;

  static Constraint cardinality(Index n_meas) {
    return {Kind::Cardinality, static_cast<double>(n_meas)};
  }
  static Constraint budget(double b) { return {Kind::Budget, b}; }

  bool is_budget() const { return kind == Kind::Budget; }
  Index count() const { return static_cast<Index>(level); }
};

inline const char* to_string(Constraint::Kind k) {
  return k == Constraint::Kind::Budget ? "budget" : "cardinality";
}

// Thrown for malformed models, inputs, and numerically broken states.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pmu
