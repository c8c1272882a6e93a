#pragma once

#include <vector>

namespace submp {

// min c.x  subject to  A x = b, x >= 0. Dense row-major storage.
struct LpProblem {
  int rows = 0, cols = 0;
  std::vector<double> a;  // rows * cols
  std::vector<double> b;  // rows
  std::vector<double> c;  // cols

  void init(int r, int cc) {
    rows = r;
    cols = cc;
    a.assign(std::size_t(r) * std::size_t(cc), 0.0);
    b.assign(std::size_t(r), 0.0);
    c.assign(std::size_t(cc), 0.0);
  }
  double& at(int r, int col) { return a[std::size_t(r) * std::size_t(cols) + std::size_t(col)]; }
  double at(int r, int col) const {
    return a[std::size_t(r) * std::size_t(cols) + std::size_t(col)];
  }
};

struct LpResult {
  std::vector<double> x;
  double objective = 0.0;
  int phase1_pivots = 0, phase2_pivots = 0;
};

// Two-phase primal simplex on a dense tableau. Pivot tolerance 1e-9.
// Pricing is steepest-negative with an automatic switch to smallest-index
// once the objective stalls, which breaks cycling. Throws InfeasibleError
// (with the phase-1 witness value) when no feasible point exists, and
// NumericError if the pivot limit is exhausted or the problem is unbounded.
LpResult solve_lp_dense(const LpProblem& p, double pivot_tol = 1e-9);

}  // namespace submp
