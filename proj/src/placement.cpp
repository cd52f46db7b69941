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

#include "pmuplace/placement.hpp"

namespace pmu {

SelectionSet round_cardinality(const RVector& x, Index n_meas) {
  if (n_meas < 0 || n_meas > x.size()) throw Error("rounding: N_meas out of range");
  std::vector<Index> order(static_cast<std::size_t>(x.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return x(a) > x(b); });
  order.resize(static_cast<std::size_t>(n_meas));
  return detail::sorted(order);
}

SelectionSet round_budget(const RVector& x, const RVector& costs, double budget) {
  if (costs.size() != x.size()) throw Error("rounding: cost length mismatch");
  std::vector<bool> taken(static_cast<std::size_t>(x.size()), false);
  SelectionSet out;
  double spent = 0.0;
  for (;;) {
    Index k = -1;
    for (Index i = 0; i < x.size(); ++i) {
      if (taken[i] || !detail::fits(spent, costs(i), budget)) continue;
      if (k < 0 || x(i) > x(k)) k = i;
    }
    if (k < 0) break;
    taken[k] = true;
    spent += costs(k);
    out.push_back(k);
  }
  return detail::sorted(out);
}

double alpha(Index n_meas) {
  if (n_meas < 1) throw Error("alpha needs N_meas >= 1");
  // Same product as beta_factors so unit costs reproduce alpha bit for bit.
  const double step = 1.0 - 1.0 / static_cast<double>(n_meas);
  double keep = 1.0;
  for (Index i = 0; i < n_meas; ++i) keep *= step;
  return 1.0 - keep;
}

BetaFactors beta_factors(const SelectionSet& x1, std::optional<Index> a, const RVector& costs, double budget) {
  if (!(budget > 0.0)) throw Error("beta factors need a positive budget");
  BetaFactors out;
  double keep = 1.0;
  double spent = 0.0;
  for (Index i : x1) {
    keep *= 1.0 - costs(i) / budget;
    spent += costs(i);
  }
  out.gamma = spent / budget;
  if (!x1.empty()) out.beta = 1.0 - keep;
  if (a) out.beta_a = 1.0 - keep * (1.0 - costs(*a) / budget);

  const double tol = 1e-12;
  if (out.beta && *out.beta < -std::expm1(-out.gamma) - tol) out.bounds_hold = false;
  if (out.beta_a && *out.beta_a < 1.0 - out.gamma * std::exp(-out.gamma) - tol) out.bounds_hold = false;
  return out;
}

}  // namespace pmu
