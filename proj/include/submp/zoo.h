#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "submp/mincsp.h"
#include "submp/submodular.h"

namespace submp {

struct GapInstance {
  MultiwayInstance inst;
  SymmetrySpec sym;
};

// k x k grid with terminals on the diagonal and the transposition symmetry.
// Integral optimum k (rows off the last, columns close it), best symmetric
// labeling 2k-2.
GapInstance gen_grid(int k);

// Same layout with the steeper per-line profile; gamma < 0 picks the default.
GapInstance gen_symmetric_gamma(int k, int gamma = -1);

struct HkBundle {
  MinCspInstance csp;
  BasicLpSolution certificate;  // feasible point of the basic LP, value k/2
};

// Not-all-equal CSP on vertices {(i,j) : 1 <= i <= j <= k}, one arity-k edge
// per index i touching row/column i, diagonal vertices pinned. Integral
// optimum k-1; the bundled half/half certificate costs k/2.
HkBundle gen_hk(int k);

// Five terminals in a cycle, a private connector inside each consecutive
// triple, plus one cheap edge through all five connectors. Splitting the
// connector edge is what the basic LP exploits and the extension cannot.
MultiwayInstance gen_hmp_cycle(double connector_weight = 0.001);

struct SymmetrizeResult {
  MinCspInstance csp;
  // new vertex -> (original vertex, its coordinate word)
  std::vector<std::pair<int, std::vector<int>>> origin;
  SymmetrySpec sym;  // coordinate transpositions, acting on the new vertices
};

// Blows an instance up along a fractional certificate with M coordinates:
// each vertex becomes the arrangements of its certificate row, each edge the
// arrangements of its tuple distribution (copies split the weight equally).
// Coordinate sampling then reproduces the certificate's objective while
// symmetric labelings cost at least the original optimum. The certificate
// must be M-rational; M <= 8 and arity <= 4 are hard budgets.
SymmetrizeResult symmetrize_gap_instance(const MinCspInstance& inst,
                                         const BasicLpSolution& cert, int m_coords);

// Replaces every orbit by a cluster of n_cluster interchangeable copies and
// every edge by its injective placements into those clusters (weight split
// equally). Instance must be invariant under the generators; n_cluster must
// cover the largest within-edge orbit multiplicity.
MinCspInstance fold_symmetric_instance(const MinCspInstance& inst, const SymmetrySpec& sym,
                                       int n_cluster);

// Seed-reproducible instances: kind is "graph-mc" (arity-2 split costs,
// halved so a bichromatic edge pays its weight once), "hypergraph-mc"
// (proportional split cost t/arity, zero when monochromatic), or "coverage".
// Weights are small dyadics so costs are exact in binary floating point.
MultiwayInstance gen_random_family(const std::string& kind, int n, int k, int m,
                                   std::uint64_t seed);

}  // namespace submp
