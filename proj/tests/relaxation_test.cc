#include <doctest.h>

#include <cmath>
#include <vector>

#include "submp/brute_force.h"
#include "submp/common.h"
#include "submp/relaxation.h"
#include "submp/rng.h"
#include "submp/zoo.h"

using namespace submp;

namespace {

FractionalAssignment random_feasible(const MultiwayInstance& inst, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = static_cast<std::size_t>(inst.oracle.ground.n);
  std::vector<std::vector<double>> raw(n, std::vector<double>(std::size_t(inst.k)));
  for (auto& row : raw)
    for (double& v : row) v = rng.uniform() * 3.0 - 1.0;  // negatives included
  return project_feasible(inst, raw);
}

MultiwayInstance path_instance() {
  // a - b - c with terminals at the ends; both relaxations sit at 1.
  std::vector<CutEdge> edges = {{{0, 1}, 0.5}, {{1, 2}, 0.5}};
  MultiwayInstance inst;
  inst.oracle = make_hypergraph_cut_oracle(3, edges);
  inst.k = 2;
  inst.terminals = {0, 2};
  return inst;
}

}  // namespace

TEST_CASE("assignment validation") {
  GapInstance g = gen_grid(3);
  FractionalAssignment a = random_feasible(g.inst, 1);
  CHECK_NOTHROW(validate_assignment(g.inst, a));

  FractionalAssignment off = a;
  off.x[1][0] += 0.01;  // row sum off the simplex
  CHECK_THROWS_AS(validate_assignment(g.inst, off), DomainError);

  FractionalAssignment wrong_pin = a;
  wrong_pin.x[0] = {0.0, 1.0, 0.0};  // terminal 0 must sit on part 0
  CHECK_THROWS_AS(validate_assignment(g.inst, wrong_pin), DomainError);

  FractionalAssignment negative = a;
  negative.x[2] = {1.5, -0.5, 0.0};
  CHECK_THROWS_AS(validate_assignment(g.inst, negative), DomainError);

  FractionalAssignment short_rows = a;
  short_rows.x.pop_back();
  CHECK_THROWS_AS(validate_assignment(g.inst, short_rows), DomainError);
}

TEST_CASE("projection lands on the simplex and pins terminals") {
  GapInstance g = gen_grid(3);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    FractionalAssignment a = random_feasible(g.inst, seed);
    CHECK_NOTHROW(validate_assignment(g.inst, a));
    for (int i = 0; i < g.inst.k; ++i) {
      const auto& row = a.x[std::size_t(g.inst.terminals[std::size_t(i)])];
      for (int l = 0; l < g.inst.k; ++l) CHECK(row[std::size_t(l)] == (l == i ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("projection is idempotent on feasible points") {
  GapInstance g = gen_grid(3);
  FractionalAssignment a = random_feasible(g.inst, 7);
  FractionalAssignment b = project_feasible(g.inst, a.x);
  for (std::size_t v = 0; v < a.x.size(); ++v)
    for (std::size_t l = 0; l < a.x[v].size(); ++l)
      CHECK(b.x[v][l] == doctest::Approx(a.x[v][l]).epsilon(1e-12));
}

TEST_CASE("relaxed objective extends the partition cost") {
  GapInstance g = gen_grid(3);
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    Partition p;
    p.label.assign(9, 0);
    for (int i = 0; i < 3; ++i) p.label[std::size_t(g.inst.terminals[std::size_t(i)])] = i;
    for (int v : {1, 2, 3, 5, 6, 7}) p.label[std::size_t(v)] = static_cast<int>(rng.below(3));
    FractionalAssignment a;
    a.x.assign(9, std::vector<double>(3, 0.0));
    for (int v = 0; v < 9; ++v) a.x[std::size_t(v)][std::size_t(p.label[std::size_t(v)])] = 1.0;
    CHECK(relaxation_value(g.inst, a) ==
          doctest::Approx(partition_cost(g.inst, p)).epsilon(1e-12));
  }
}

TEST_CASE("subgradient supports the extension from below") {
  GapInstance g = gen_grid(3);
  const SubmodularOracle& f = g.inst.oracle;
  Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    FractionalPoint y(9);
    for (double& v : y) v = rng.uniform();
    std::vector<double> grad = subgradient_at(f, y);
    double at_y = 0.0;
    for (int v = 0; v < 9; ++v) at_y += grad[std::size_t(v)] * y[std::size_t(v)];
    CHECK(at_y == doctest::Approx(lovasz_extension(f, y)).epsilon(1e-9));
    for (int probe = 0; probe < 5; ++probe) {
      FractionalPoint z(9);
      double dot = 0.0;
      for (int v = 0; v < 9; ++v) {
        z[std::size_t(v)] = rng.uniform();
        dot += grad[std::size_t(v)] * z[std::size_t(v)];
      }
      CHECK(lovasz_extension(f, z) >= dot - 1e-9);
    }
  }
}

TEST_CASE("two pinned vertices leave nothing to optimize") {
  std::vector<CutEdge> edges = {{{0, 1}, 1.0}};
  MultiwayInstance inst;
  inst.oracle = make_hypergraph_cut_oracle(2, edges);
  inst.k = 2;
  inst.terminals = {0, 1};
  SolveReport rep = solve_submp_rel(inst);
  CHECK(rep.value == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("path instance relaxation is integral") {
  MultiwayInstance inst = path_instance();
  SolveReport rep = solve_submp_rel(inst);
  CHECK(rep.value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rep.method == "set-distribution-lp");
  CHECK_NOTHROW(validate_assignment(inst, rep.assignment));
}

TEST_CASE("grid k=3 relaxation optimum equals the integral optimum") {
  GapInstance g = gen_grid(3);
  SolveReport rep = solve_submp_rel(g.inst);
  CHECK(rep.value == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(rep.method == "set-distribution-lp");
  CHECK(rep.gap_estimate <= 1e-9);
  CHECK(rep.iterations <= 20000);
  CHECK_NOTHROW(validate_assignment(g.inst, rep.assignment));
  CHECK(relaxation_value(g.inst, rep.assignment) == doctest::Approx(rep.value).epsilon(1e-12));
  for (std::size_t i = 1; i < rep.trace.size(); ++i) CHECK(rep.trace[i] <= rep.trace[i - 1]);
}

TEST_CASE("subgradient descent alone stays near the optimum") {
  GapInstance g = gen_grid(3);
  SolveConfig cfg;
  cfg.exact_refine = false;
  SolveReport rep = solve_submp_rel(g.inst, cfg);
  CHECK(rep.value >= 3.0 - 1e-6);
  CHECK(rep.value <= 3.05);
}

TEST_CASE("solver output is deterministic in the seed") {
  MultiwayInstance inst = gen_random_family("coverage", 7, 3, 9, 12);
  SolveConfig cfg;
  cfg.seed = 5;
  SolveReport a = solve_submp_rel(inst, cfg);
  SolveReport b = solve_submp_rel(inst, cfg);
  CHECK(a.value == b.value);
  CHECK(a.iterations == b.iterations);
  CHECK(a.assignment.x == b.assignment.x);

  cfg.seed = 6;
  SolveReport c = solve_submp_rel(inst, cfg);
  CHECK(c.value == doctest::Approx(a.value).epsilon(1e-6));  // same LP polish
}

TEST_CASE("iteration budget is respected") {
  GapInstance g = gen_grid(3);
  SolveConfig cfg;
  cfg.max_iters = 1;
  cfg.exact_refine = false;
  SolveReport rep = solve_submp_rel(g.inst, cfg);
  CHECK(rep.iterations <= 1);
  CHECK_NOTHROW(validate_assignment(g.inst, rep.assignment));
}

TEST_CASE("solution never exceeds the cheapest dictator") {
  // The dictator assignments are explicit candidates, so the report can only
  // improve on them.
  for (std::uint64_t seed = 30; seed < 40; ++seed) {
    MultiwayInstance inst =
        gen_random_family(seed % 2 ? "hypergraph-mc" : "graph-mc", 7, 3, 8, seed);
    SolveReport rep = solve_submp_rel(inst);
    double best_dictator = 1e300;
    for (int l = 0; l < inst.k; ++l) {
      Partition p;
      p.label.assign(7, l);
      for (int i = 0; i < inst.k; ++i)
        p.label[std::size_t(inst.terminals[std::size_t(i)])] = i;
      best_dictator = std::min(best_dictator, partition_cost(inst, p));
    }
    CHECK(rep.value <= best_dictator + 1e-9);
  }
}
