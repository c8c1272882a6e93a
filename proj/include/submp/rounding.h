#pragma once

#include <string>
#include <vector>

#include "submp/brute_force.h"
#include "submp/relaxation.h"
#include "submp/submodular.h"

namespace submp {

// {v : x[v][l] > theta}. Disjoint across parts once theta >= 1/2.
Set upper_level_set(const FractionalAssignment& a, int l, double theta);

// {v : max_l x[v][l] <= theta}; the vertices no part claims at theta.
Set leftover_set(const FractionalAssignment& a, double theta);

// Thresholds where some level set changes: every coordinate, every
// 1 - (row max), plus 0, 1/2, 1. All set-valued integrands below are constant
// strictly between consecutive points.
struct ThetaProfile {
  std::vector<double> points;  // sorted, deduplicated, from 0 to 1
};

ThetaProfile theta_profile(const FractionalAssignment& a);

// Threshold rounding: v joins the unique part whose coordinate exceeds theta,
// and fallback_terminal takes the leftovers. Requires 1/2 < theta <= 1.
Partition round_at(const MultiwayInstance& inst, const FractionalAssignment& a,
                   double theta, int fallback_terminal);

// Relaxed objective written as sum over parts of the level-set integral
// int_0^1 f(A_l(theta)) dtheta; agrees with relaxation_value to 1e-12.
double lp_cost_exact(const MultiwayInstance& inst, const FractionalAssignment& a);

// Expected cost of the randomized scheme (theta uniform on (1/2,1], uniform
// fallback terminal), evaluated in closed form:
//   (2-2/k) sum_l int_{1/2}^1 f(A_l) + (2/k) sum_l int_0^{1/2} f(A_l u B)
// where B(theta) is the leftover set at 1-theta.
double expected_cost_exact(const MultiwayInstance& inst, const FractionalAssignment& a);

// Monte Carlo estimate of the same expectation, for cross-checking.
double expected_cost_sampled(const MultiwayInstance& inst, const FractionalAssignment& a,
                             long long samples, std::uint64_t seed);

struct BestRounding {
  Partition partition;
  double value = 0.0;
  double theta = 0.0;
  int fallback_terminal = 0;
};

// Cheapest outcome in the scheme's support: one theta per profile interval
// inside (1/2,1], crossed with every fallback terminal. Never exceeds
// expected_cost_exact.
BestRounding best_rounding(const MultiwayInstance& inst, const FractionalAssignment& a);

struct LemmaResidual {
  std::string name;
  double lhs = 0.0, rhs = 0.0;
  double residual = 0.0;  // lhs - rhs, nonnegative when the inequality holds
};

struct LemmaReport {
  double lp_cost = 0.0;
  double expected_cost = 0.0;
  std::vector<LemmaResidual> residuals;
  double min_residual = 0.0;
};

// The five inequalities behind the (2-2/k) guarantee, each reported as
// lhs - rhs >= 0:
//   prefix-intersection  sum_{i<k} int_0^{1/2} f((A_1u..uA_i) n A_{i+1})
//                          >= int_0^1 f(U)
//   parts-vs-union       sum_l int_0^{1/2} f(A_l)
//                          >= int_0^{1/2} f(u A_l) + int_0^1 f(U)
//   parts-vs-leftover    sum_l int_0^{1/2} f(A_l) >= int_0^{1/2} f(B)
//   parts-vs-augmented   sum_l int_0^{1/2} f(A_l)
//                          >= sum_l int_0^{1/2} f(A_l u B) - (k-2) int_0^{1/2} f(B)
//   approximation-factor (2-2/k) * lp_cost >= expected_cost
// A residual below -1e-9 triggers a submodularity audit of the oracle; a
// violation found there raises a domain error naming the violating sets.
LemmaReport check_analysis_lemmas(const MultiwayInstance& inst, const FractionalAssignment& a);

struct DeltaResiduals {
  double parts_vs_union = 0.0;
  double prefix_intersection = 0.0;
};

// The two delta-parametrized inequalities at an arbitrary delta in [1/2,1]
// (check_analysis_lemmas uses delta = 1/2, their binding case).
DeltaResiduals delta_residuals(const MultiwayInstance& inst, const FractionalAssignment& a,
                               double delta);

}  // namespace submp
