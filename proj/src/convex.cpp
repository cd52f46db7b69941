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

#include "pmuplace/convex.hpp"

#include <numeric>
#include <vector>

namespace pmu {

namespace {

double clamped_sum(const RVector& v, const RVector& upper, double tau) {
  double s = 0.0;
  for (Index i = 0; i < v.size(); ++i) s += std::clamp(v(i) - tau, 0.0, upper(i));
  return s;
}

void check_box(const RVector& v, double cap, const RVector& upper) {
  if (v.size() != upper.size()) throw Error("projection: size mismatch");
  if ((upper.array() <= 0.0).any()) throw Error("projection: upper bounds must be positive");
  if (!(cap >= 0.0)) throw Error("projection: cap must be non-negative");
  if (cap > upper.sum() * (1.0 + 1e-12)) throw Error("projection: infeasible, cap exceeds sum of upper bounds");
}

}  // namespace

RVector project_boxed_simplex(const RVector& v, double cap, const RVector& upper) {
  check_box(v, cap, upper);
  const Index n = v.size();
  if (n == 0) return v;

  // g(tau) = clamped_sum is non-increasing and piecewise linear with kinks
  // at v_i - upper_i and v_i.
  std::vector<double> knots;
  knots.reserve(2 * n);
  for (Index i = 0; i < n; ++i) {
    knots.push_back(v(i) - upper(i));
    knots.push_back(v(i));
  }
  std::sort(knots.begin(), knots.end());

  // Largest knot with g >= cap.
  std::size_t lo = 0, hi = knots.size() - 1;
  if (clamped_sum(v, upper, knots[hi]) >= cap) {
    lo = hi;
  } else {
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (clamped_sum(v, upper, knots[mid]) >= cap) lo = mid; else hi = mid;
    }
  }
  const double t0 = knots[lo];
  const double g0 = clamped_sum(v, upper, t0);
  // Slope on (t0, next knot): number of free coordinates.
  double tau = t0;
  if (lo + 1 < knots.size()) {
    const double t1 = knots[lo + 1];
    const double mid = 0.5 * (t0 + t1);
    Index free = 0;
    for (Index i = 0; i < n; ++i)
      if (v(i) - mid > 0.0 && v(i) - mid < upper(i)) ++free;
    if (free > 0) tau = std::min(t1, t0 + (g0 - cap) / static_cast<double>(free));
  }

  RVector y(n);
  for (Index i = 0; i < n; ++i) y(i) = std::clamp(v(i) - tau, 0.0, upper(i));
  return y;
}

double projection_kkt_residual(const RVector& v, const RVector& y, double cap, const RVector& upper) {
  const Index n = v.size();
  double res = std::abs(y.sum() - cap);
  // Interval of multipliers consistent with the active bounds.
  double tau_lo = -std::numeric_limits<double>::infinity();
  double tau_hi = std::numeric_limits<double>::infinity();
  std::vector<double> free_tau;
  const double eps = 1e-12;
  for (Index i = 0; i < n; ++i) {
    res = std::max({res, -y(i), y(i) - upper(i)});
    if (y(i) <= eps) {
      tau_lo = std::max(tau_lo, v(i));           // v_i - tau <= 0
    } else if (y(i) >= upper(i) - eps) {
      tau_hi = std::min(tau_hi, v(i) - upper(i)); // v_i - tau >= upper_i
    } else {
      free_tau.push_back(v(i) - y(i));
    }
  }
  if (!free_tau.empty()) {
    const double tau = std::accumulate(free_tau.begin(), free_tau.end(), 0.0) / free_tau.size();
    for (double t : free_tau) res = std::max(res, std::abs(t - tau));
    res = std::max({res, tau_lo - tau, tau - tau_hi});
  } else {
    res = std::max(res, tau_lo - tau_hi);
  }
  return res;
}

double boxed_simplex_linear_min(const RVector& g, double cap, const RVector& upper) {
  std::vector<Index> order(static_cast<std::size_t>(g.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return g(a) < g(b); });
  double left = cap, value = 0.0;
  for (Index i : order) {
    if (left <= 0.0) break;
    const double take = std::min(left, upper(i));
    value += take * g(i);
    left -= take;
  }
  return value;
}

}  // namespace pmu
