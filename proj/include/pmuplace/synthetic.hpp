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

#include <cstdint>

#include "pmuplace/grid.hpp"

namespace pmu {

// Random radial feeder rooted at bus "src". Bus k > 0 hangs off a uniformly
// chosen earlier bus.
struct FeederSpec {
  int buses = 8;  // including the source
  bool three_phase = false;
  double zero_injection_fraction = 0.2;  // of interior (non-leaf) buses
  double load_min = 0.01;                // active power per phase, pu
  double load_max = 0.05;
  double power_factor = 0.9;
  std::uint64_t seed = 1;
};

GridModel synthetic_feeder(const FeederSpec& spec);

}  // namespace pmu
