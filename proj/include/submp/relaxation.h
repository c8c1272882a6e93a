#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "submp/submodular.h"

namespace submp {

// Row-stochastic n x k matrix; x[v][l] is the fraction of v on part l.
// Feasible when every row lies on the simplex (within 1e-9) and terminal
// row t_i is the unit vector at i.
struct FractionalAssignment {
  std::vector<std::vector<double>> x;
};

void validate_assignment(const MultiwayInstance& inst, const FractionalAssignment& a,
                         double tol = 1e-9);

// Euclidean projection of each row onto the simplex; terminal rows are set
// to their unit vector exactly. Idempotent on feasible input.
FractionalAssignment project_feasible(const MultiwayInstance& inst,
                                      const std::vector<std::vector<double>>& raw);

// Relaxed objective: sum over parts of the extension value of that column.
double relaxation_value(const MultiwayInstance& inst, const FractionalAssignment& a);

// Greedy subgradient of the extension at y: g[order[j]] is the marginal of
// order[j] along the sorted-prefix chain, so extension(z) >= g.z for all z
// in [0,1]^n with equality at y.
std::vector<double> subgradient_at(const SubmodularOracle& f, const FractionalPoint& y);

struct SolveConfig {
  int max_iters = 20000;
  double step_scale = 0.0;  // 0 picks diameter / max gradient norm over early iters
  double tol = 1e-6;        // stop once best value stalls by less than this
  std::uint64_t seed = 0;
  bool exact_refine = true;  // polish with the exact distribution LP when small enough
};

struct SolveReport {
  FractionalAssignment assignment;
  double value = 0.0;  // recomputed from the assignment, not from solver state
  int iterations = 0;
  // value minus the exact LP optimum when that LP ran (a true bound),
  // otherwise the descent's improvement over the last stall window.
  double gap_estimate = 0.0;
  std::string method;
  std::vector<double> trace;  // best value after each iteration, nonincreasing
};

// Minimizes the relaxed objective over feasible assignments: projected
// subgradient descent, then the best of that iterate, the per-part dictator
// assignments, and (when k * 2^n is small enough) an exact LP over set
// distributions per part.
SolveReport solve_submp_rel(const MultiwayInstance& inst, const SolveConfig& cfg = {});

}  // namespace submp
