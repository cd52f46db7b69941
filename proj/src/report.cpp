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

#include "pmuplace/report.hpp"

#include <limits>

namespace pmu {

const char* to_string(Role role) {
  switch (role) {
    case Role::Lower: return "lower";
    case Role::Upper: return "upper";
    case Role::Info: return "info";
  }
  return "?";
}

void aggregate_bounds(BoundReport& report) {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  for (const auto& [name, s] : report.values) {
    if (s.role == Role::Lower) lower = std::max(lower, s.value);
    if (s.role == Role::Upper) upper = std::min(upper, s.value);
  }
  report.lower = lower;
  report.upper = upper;
  report.gap = upper - lower;
  report.valid = lower <= upper + 1e-8;
}

}  // namespace pmu
