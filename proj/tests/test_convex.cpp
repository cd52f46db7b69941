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

#include <doctest.h>

#include <random>

#include "pmuplace/convex.hpp"
#include "pmuplace/placement.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace pmu;

namespace {

using CInst = PlacementInstance<Complex>;

RVector random_vector(std::mt19937_64& rng, Index n, double scale) {
  std::normal_distribution<double> d(0.0, scale);
  RVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = d(rng);
  return v;
}

}  // namespace

TEST_CASE("projection: idempotent on feasible points and the two-dimensional example") {
  RVector v(4);
  v << 0.2, 0.5, 0.0, 0.3;
  CHECK((project_boxed_simplex(v, 1.0, RVector::Ones(4)) - v).norm() < 1e-15);
  RVector w(2);
  w << 2.0, 0.0;
  const RVector y = project_boxed_simplex(w, 1.0, RVector::Ones(2));
  CHECK(y(0) == doctest::Approx(1.0));
  CHECK(y(1) == doctest::Approx(0.0));
  CHECK_THROWS_AS(project_boxed_simplex(w, 3.0, RVector::Ones(2)), Error);
}

TEST_CASE("projection matches the active-set oracle and satisfies KKT") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    const bool scaled = t % 2 == 1;
    const RVector upper = scaled ? test::uniform_vector(rng, 12, 0.2, 2.0) : RVector::Ones(12);
    const double cap = std::uniform_real_distribution<double>(0.1, 0.9)(rng) * upper.sum();
    const RVector v = random_vector(rng, 12, 1.0);
    const RVector y = project_boxed_simplex(v, cap, upper);
    CHECK(projection_kkt_residual(v, y, cap, upper) < 1e-9);
    const auto oracle = test::projection_by_active_sets(v, cap, upper);
    REQUIRE(oracle);
    CHECK((y - *oracle).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("projection is non-expansive") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 200; ++t) {
    const RVector upper = test::uniform_vector(rng, 8, 0.3, 1.5);
    const double cap = 0.4 * upper.sum();
    const RVector u = random_vector(rng, 8, 2.0), v = random_vector(rng, 8, 2.0);
    const double lhs = (project_boxed_simplex(u, cap, upper) - project_boxed_simplex(v, cap, upper)).norm();
    CHECK(lhs <= (u - v).norm() + 1e-12);
  }
}

TEST_CASE("linear minimization over the boxed simplex") {
  RVector g(3), u(3);
  g << -1.0, -3.0, 2.0;
  u << 1.0, 0.5, 1.0;
  // Most negative entry first: index 1 up to its bound, then index 0.
  CHECK(boxed_simplex_linear_min(g, 1.0, u) == doctest::Approx(-3.0 * 0.5 - 1.0 * 0.5));
}

TEST_CASE("pgd trivial cases") {
  std::mt19937_64 rng(3);
  const CInst all = test::random_instance<Complex>(rng, 4, 5, Constraint::cardinality(5), Metric::D);
  const RelaxedSolution s = pgd_cardinality(all);
  CHECK(s.x == RVector::Ones(5));
  CHECK(test::relative_error(s.objective, evaluate(all, SelectionSet{0, 1, 2, 3, 4})) < 1e-12);

  const CInst one = test::random_instance<Complex>(rng, 3, 1, Constraint::cardinality(1), Metric::A);
  CHECK(pgd_cardinality(one).x == RVector::Ones(1));

  const CInst rich = test::random_instance<Complex>(rng, 4, 6, Constraint::budget(100.0), Metric::A, 0.5, 2.0);
  CHECK(pgd_budget(rich).x == RVector::Ones(6));
}

TEST_CASE("pgd budget with unit costs follows the cardinality trajectory") {
  std::mt19937_64 rng(4);
  const CMatrix prior = test::random_spd<Complex>(rng, 5);
  const CMatrix rows = test::random_matrix<Complex>(rng, 9, 5);
  const RVector prec = test::uniform_vector(rng, 9, 0.5, 5.0);
  for (int iters : {1, 7, 50}) {
    PgdConfig cfg;
    cfg.max_iterations = iters;
    const auto a = pgd_cardinality(CInst(prior, rows, prec, RVector::Ones(9), Constraint::cardinality(3), Metric::D), cfg);
    const auto b = pgd_budget(CInst(prior, rows, prec, RVector::Ones(9), Constraint::budget(3.0), Metric::D), cfg);
    CHECK(a.x == b.x);
    CHECK(a.objective == b.objective);
  }
}

TEST_CASE("pgd: feasible, below the optimum, close to Frank-Wolfe") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 6; ++t) {
    for (Metric m : {Metric::A, Metric::D}) {
      const bool budget = t % 2 == 1;
      const CInst inst = budget ? test::random_instance<Complex>(rng, 5, 10, Constraint::budget(2.5), m, 0.4, 1.6)
                                : test::random_instance<Complex>(rng, 5, 10, Constraint::cardinality(3), m);
      const RelaxedSolution s = solve_relaxed(inst);
      const RVector upper = budget ? inst.cost() : RVector::Ones(inst.size());
      CHECK(s.x.minCoeff() >= 0.0);
      CHECK(s.x.maxCoeff() <= 1.0);
      CHECK(s.x.dot(upper) <= inst.capacity() + 1e-9);
      CHECK(s.certified_lower <= s.objective);
      const double opt = test::enumerate_optimum(inst).value;
      CHECK(s.objective <= opt + 1e-6);
      const auto fw = test::frank_wolfe(inst, upper, inst.capacity(), 1000);
      CHECK(s.objective <= fw.objective + 1e-4);
      CHECK(s.certified_lower <= fw.objective + 1e-9);
      // Relaxation dominance over random feasible binaries.
      for (const auto& r : random_baseline(inst, 20, static_cast<std::uint64_t>(t))) CHECK(s.objective <= r.value + 1e-9);
    }
  }
}

TEST_CASE("metrics are convex along sampled segments") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    const CInst inst = test::random_instance<Complex>(rng, 4, 7, Constraint::cardinality(2), Metric::A);
    const RVector x = test::uniform_vector(rng, 7, 0.0, 1.0), y = test::uniform_vector(rng, 7, 0.0, 1.0);
    const double lam = u(rng);
    for (Metric m : {Metric::A, Metric::D}) {
      const double mid = evaluate(inst, RVector(lam * x + (1 - lam) * y), m);
      CHECK(mid <= lam * evaluate(inst, x, m) + (1 - lam) * evaluate(inst, y, m) + 1e-9);
    }
  }
}
