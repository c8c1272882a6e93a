#pragma once

#include <cstdint>
#include <vector>

#include "submp/submodular.h"

namespace submp {

struct Partition {
  std::vector<int> label;  // vertex -> part in [0, k)
};

// Cost of a partition: sum over parts of the oracle on that part.
// Terminal t_i must carry label i.
double partition_cost(const MultiwayInstance& inst, const Partition& p);

struct BruteForceResult {
  Partition partition;
  double value = 0.0;
  std::uint64_t states = 0;  // labelings (or search nodes) examined
};

// Exhaustive minimum over all labelings with terminals pinned. Enumerates in
// lexicographic order of the free-vertex label vector and keeps the first
// minimizer, so ties resolve to the lexicographically smallest. Throws
// CapacityError when k^(free vertices) exceeds 2^28.
BruteForceResult brute_force_partition(const MultiwayInstance& inst, int threads = 1);

// Minimum over labelings constant on every orbit of the symmetry group.
// An orbit containing a terminal is pinned to that terminal's label; an orbit
// containing two terminals is a domain error. Falls back to branch and bound
// when plain enumeration would exceed the 2^28 budget (this path needs every
// edge term to carry a cardinality profile).
BruteForceResult brute_force_symmetric(const MultiwayInstance& inst, const SymmetrySpec& sym);

// Branch and bound entry point, exposed so tests can cross-validate it
// against plain enumeration on instances small enough for both.
BruteForceResult brute_force_symmetric_branch_bound(const MultiwayInstance& inst,
                                                    const SymmetrySpec& sym);

}  // namespace submp
