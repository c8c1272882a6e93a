#pragma once

#include <limits>
#include <string>
#include <vector>

#include "submp/simplex.h"
#include "submp/submodular.h"

namespace submp {

// Marker for hard-forbidden tuples in cost tables.
inline constexpr double kForbidden = std::numeric_limits<double>::infinity();

struct CspVertex {
  std::vector<int> candidates;  // allowed labels, ascending
  int pin = -1;                 // >= 0 forces this label
};

struct CspEdge {
  std::vector<int> verts;
  double weight = 1.0;
  // q^arity cost entries, leftmost position most significant:
  // index(alpha) = sum_p alpha[p] * q^(arity-1-p). Entries are finite
  // nonnegative or kForbidden.
  std::vector<double> table;
};

struct MinCspInstance {
  int q = 0;
  std::vector<CspVertex> verts;
  std::vector<CspEdge> edges;
};

void validate_csp(const MinCspInstance& inst);

// Candidates after applying the pin, ascending.
std::vector<int> live_labels(const MinCspInstance& inst, int v);

std::size_t edge_table_index(const MinCspInstance& inst, const CspEdge& e,
                             const std::vector<int>& alpha);

// The local-distribution relaxation, as an equality-form LP:
// a vertex variable per live (v, label), an edge variable per live tuple
// (all positions live, cost finite), one simplex row per vertex, and one
// marginal row per (edge, position, live label). A vertex or edge with no
// live support raises InfeasibleError at build time.
struct BasicLp {
  LpProblem lp;
  std::vector<std::vector<int>> vertex_var;            // [v][label] -> col or -1
  std::vector<std::vector<std::vector<int>>> edge_alphas;  // [e] -> live tuples
  std::vector<int> edge_var_base;                      // first col of edge e's block
};

BasicLp build_basic_lp(const MinCspInstance& inst);

struct EdgeDistribution {
  std::vector<std::vector<int>> alphas;
  std::vector<double> prob;
};

struct BasicLpSolution {
  std::vector<std::vector<double>> vertex_marginals;  // [v][label], zero off-support
  std::vector<EdgeDistribution> edge_dists;
  double objective = 0.0;     // recomputed from the variables
  double max_residual = 0.0;  // worst constraint violation
};

BasicLpSolution solve_basic_lp(const MinCspInstance& inst);

struct CertificateReport {
  double objective = 0.0;
  double max_residual = 0.0;
  bool feasible = false;  // max_residual <= 1e-7 and no mass outside candidates
  std::string detail;     // names the worst violated constraint when infeasible
};

// Audits a claimed fractional solution against the instance: simplex rows,
// marginal consistency, nonnegativity, candidate support, and pins.
CertificateReport check_certificate(const MinCspInstance& inst, const BasicLpSolution& cert);

struct CspBruteResult {
  std::vector<int> labels;
  double value = 0.0;
  std::uint64_t states = 0;
};

// Exhaustive minimum over live labelings, lexicographically smallest
// minimizer, 2^28 state budget. Throws InfeasibleError when every labeling
// hits a forbidden tuple.
CspBruteResult brute_force_csp(const MinCspInstance& inst);

// Bridge from a decomposed multiway instance: one CSP vertex per ground
// element (terminals pinned), one CSP edge per cost term with
// table(alpha) = sum_l f_e({positions p : alpha[p] = l}). Requires every
// edge term to be submodular on its own verts.
MinCspInstance submp_to_mincsp(const MultiwayInstance& inst);

struct CompareReport {
  double lovasz_value = 0.0;  // exact optimum of the extension relaxation
  double basic_value = 0.0;   // basic LP optimum of the bridged CSP
  double delta = 0.0;         // basic_value - lovasz_value
  bool separated = false;     // delta > separation_tol
};

// Solves both relaxations of the same instance. The extension side is the
// per-edge set-distribution LP, exact for decomposed costs.
CompareReport compare_relaxations(const MultiwayInstance& inst, double separation_tol = 1e-4);

}  // namespace submp
