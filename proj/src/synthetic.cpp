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

#include "pmuplace/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace pmu {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  // 53-bit mantissa draw, platform independent.
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

std::size_t below(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(uniform(rng, 0.0, static_cast<double>(n)));
}

}  // namespace

GridModel synthetic_feeder(const FeederSpec& spec) {
  if (spec.buses < 2) throw Error("a feeder needs at least two buses");
  std::mt19937_64 rng(spec.seed);
  const auto n = static_cast<std::size_t>(spec.buses);

  std::vector<std::size_t> parent(n, 0);
  std::vector<std::string> phases(n, spec.three_phase ? "abc" : "a");
  for (std::size_t k = 1; k < n; ++k) {
    parent[k] = below(rng, k);
    if (spec.three_phase && phases[parent[k]] == "abc" && uniform(rng, 0.0, 1.0) < 0.35)
      phases[k] = std::string(1, static_cast<char>('a' + below(rng, 3)));
    else
      phases[k] = phases[parent[k]];
  }
  std::vector<bool> interior(n, false);
  for (std::size_t k = 1; k < n; ++k) interior[parent[k]] = true;

  GridModel g;
  const double q_ratio = std::tan(std::acos(spec.power_factor));
  for (std::size_t k = 0; k < n; ++k) {
    Bus bus;
    bus.id = k == 0 ? "src" : "b" + std::to_string(k);
    bus.phases = phases[k];
    const auto np = bus.phases.size();
    bus.shunt.assign(np, Complex(0.0));
    const bool zero = k > 0 && interior[k] && uniform(rng, 0.0, 1.0) < spec.zero_injection_fraction;
    bus.zero_injection.assign(np, zero);
    for (std::size_t p = 0; p < np; ++p) {
      const double pw = k == 0 || zero ? 0.0 : uniform(rng, spec.load_min, spec.load_max);
      bus.load.push_back({pw, pw * q_ratio});
    }
    g.buses.push_back(std::move(bus));
  }

  for (std::size_t k = 1; k < n; ++k) {
    const Complex z_self(uniform(rng, 0.005, 0.03), uniform(rng, 0.005, 0.03));
    CMatrix z = CMatrix::Constant(3, 3, 0.3 * z_self);
    z.diagonal().setConstant(z_self);
    Branch br;
    br.from = g.buses[parent[k]].id;
    br.to = g.buses[k].id;
    br.phases = phases[k];
    const auto np = static_cast<Index>(br.phases.size());
    CMatrix zsub(np, np);
    for (Index r = 0; r < np; ++r)
      for (Index c = 0; c < np; ++c) zsub(r, c) = z(br.phases[r] - 'a', br.phases[c] - 'a');
    br.admittance = zsub.inverse();
    br.admittance = (0.5 * (br.admittance + br.admittance.transpose())).eval();
    g.branches.push_back(std::move(br));
  }

  g.source.bus = "src";
  const double shift = 2.0 * std::numbers::pi / 3.0;
  for (char p : g.buses[0].phases) g.source.voltage.push_back(std::polar(1.0, -shift * (p - 'a')));
  return g;
}

}  // namespace pmu
