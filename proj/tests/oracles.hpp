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

// Oracles for the relaxed problems: exhaustive active-set enumeration for
// the projection and a long Frank-Wolfe run for the relaxed optimum.

#pragma once

#include <optional>

#include "pmuplace/convex.hpp"

namespace pmu::test {

// Tries every (at lower, free, at upper) pattern and returns the point that
// satisfies the KKT conditions of the projection QP.
inline std::optional<RVector> projection_by_active_sets(const RVector& v, double cap, const RVector& upper) {
  const Index n = v.size();
  std::vector<int> state(static_cast<std::size_t>(n), 0);
  for (;;) {
    double fixed = 0.0, free_sum = 0.0;
    Index free = 0;
    for (Index i = 0; i < n; ++i) {
      if (state[i] == 2) fixed += upper(i);
      if (state[i] == 1) {
        free_sum += v(i);
        ++free;
      }
    }
    if (free > 0) {
      const double tau = (free_sum + fixed - cap) / static_cast<double>(free);
      bool ok = true;
      for (Index i = 0; i < n && ok; ++i) {
        const double t = v(i) - tau;
        if (state[i] == 0) ok = t <= 1e-12;
        if (state[i] == 1) ok = t >= -1e-12 && t <= upper(i) + 1e-12;
        if (state[i] == 2) ok = t >= upper(i) - 1e-12;
      }
      if (ok) {
        RVector y(n);
        for (Index i = 0; i < n; ++i) y(i) = state[i] == 0 ? 0.0 : state[i] == 2 ? upper(i) : v(i) - tau;
        return y;
      }
    }
    Index k = 0;
    while (k < n && state[k] == 2) state[k++] = 0;
    if (k == n) return std::nullopt;
    ++state[k];
  }
}

struct FrankWolfe {
  double objective = 0.0;
  double gap = 0.0;
};

// Frank-Wolfe over {sum(x .* upper) = cap, 0 <= x <= 1} with a golden-section
// line search.
template <typename Scalar>
FrankWolfe frank_wolfe(const PlacementInstance<Scalar>& inst, const RVector& upper, double cap, int iterations) {
  const Index n = inst.size();
  const Metric m = inst.metric();
  RVector x = RVector::Constant(n, cap / upper.sum());
  FrankWolfe out;
  for (int k = 0; k < iterations; ++k) {
    const RVector g = gradient(inst, x, m);
    // Vertex: fill the most negative g_i / upper_i first.
    std::vector<Index> order(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](Index a, Index b) { return g(a) / upper(a) < g(b) / upper(b); });
    RVector s = RVector::Zero(n);
    double left = cap;
    for (Index i : order) {
      const double take = std::min(upper(i), left);
      s(i) = take / upper(i);
      left -= take;
      if (left <= 0.0) break;
    }
    const RVector d = s - x;
    out.gap = -g.dot(d);
    double lo = 0.0, hi = 1.0;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 40; ++it) {
      const double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
      const double fa = evaluate(inst, RVector((x + a * d).cwiseMax(0.0).cwiseMin(1.0)), m);
      const double fb = evaluate(inst, RVector((x + b * d).cwiseMax(0.0).cwiseMin(1.0)), m);
      if (fa < fb) hi = b; else lo = a;
    }
    x = (x + 0.5 * (lo + hi) * d).cwiseMax(0.0).cwiseMin(1.0);
  }
  out.objective = evaluate(inst, x, m);
  return out;
}

}  // namespace pmu::test
