#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace submp {

// Subset of ground elements as a bitmask; element v <-> bit v. n <= 64.
using Set = std::uint64_t;

inline int set_size(Set s) { return std::popcount(s); }
inline bool set_has(Set s, int v) { return (s >> v) & 1ull; }

struct GroundSet {
  int n = 0;
  // Optional (row, col) coordinates for grid-structured ground sets.
  std::vector<std::pair<int, int>> coords;
};

// One additive term of a decomposable cost: weight * table[local mask].
// verts lists the ground elements the term reads; bit j of the local mask
// corresponds to verts[j].
struct EdgeCost {
  std::vector<int> verts;
  double weight = 1.0;
  std::vector<double> table;  // size 1 << verts.size(), table[0] == 0
  // Cardinality profile, present when the term is count-based. c counts the
  // non-flag verts inside; value = phi_in[c] when the flag vertex is inside,
  // phi_out[c] otherwise. flag_pos < 0 means no flag vertex and phi_out has
  // size |verts|+1.
  std::vector<double> phi_out, phi_in;
  int flag_pos = -1;
  bool has_profile() const { return !phi_out.empty(); }
  int arity() const { return static_cast<int>(verts.size()); }
};

enum class OracleKind {
  kExplicitTable,
  kGridPartition,
  kSymmetricGamma,
  kWeightedCoverage,
  kHypergraphCutCount,
};

struct SubmodularOracle {
  OracleKind kind = OracleKind::kExplicitTable;
  GroundSet ground;
  int k_param = 0;      // kGridPartition, kSymmetricGamma
  int gamma_param = 0;  // kSymmetricGamma
  std::vector<EdgeCost> edges;  // decomposed kinds
  std::vector<double> table;    // kExplicitTable, size 1 << n, table[0] == 0
  // vertex -> (edge index, local bit) incidence, built by the constructors
  std::vector<std::vector<std::pair<int, int>>> incidence;

  bool decomposed() const { return kind != OracleKind::kExplicitTable; }
  double evaluate(Set s) const;
};

// Raw values indexed by bitmask; the value of the empty set is subtracted
// from every entry so the oracle is normalized.
SubmodularOracle make_table_oracle(std::vector<double> raw_values);

// k x k grid, vertex (i,j) -> i*k+j. Cost = sum over rows and columns of
// phi(cells inside), phi(t) = t/k for t < k and phi(k) = 0.
SubmodularOracle make_grid_oracle(int k);

// k x k grid with per-line costs phi(t) = t for t <= k - gamma/2, else
// 2k - t - gamma, counted from the side of the line's diagonal cell: a line
// through diagonal cell d contributes phi(|S \ {d}| counted directly) when
// d is outside S and phi of the complement count when d is inside.
// gamma must be even with 0 <= gamma <= k; gamma < 0 selects the default
// 2*floor(2k - sqrt(3k^2 - 2k)).
SubmodularOracle make_symmetric_gamma_oracle(int k, int gamma = -1);
int symmetric_gamma_default(int k);

// Weighted coverage: f(S) = sum_j weights[j] * [S meets cover_sets[j]].
SubmodularOracle make_coverage_oracle(int n,
                                      const std::vector<std::vector<int>>& cover_sets,
                                      const std::vector<double>& weights);

struct CutEdge {
  std::vector<int> verts;
  double weight = 1.0;
};

// Crossing count: f(S) = sum_e weights[e] * [S splits e], where S splits e
// when the intersection is neither empty nor all of e.
SubmodularOracle make_hypergraph_cut_oracle(int n, const std::vector<CutEdge>& cut_edges);

// Generic decomposed oracle from explicit edge terms; validates tables.
SubmodularOracle make_decomposed_oracle(OracleKind kind, int n, std::vector<EdgeCost> edges);

// Edge term whose table is filled in from a cardinality profile.
EdgeCost make_profile_edge(std::vector<int> verts, double weight, std::vector<double> phi_out,
                           std::vector<double> phi_in = {}, int flag_pos = -1);

// Point in [0,1]^n.
using FractionalPoint = std::vector<double>;

// Sorted-prefix chain at x: order is a permutation of the ground set with
// coordinates descending (ties by smaller index first), marginals[j] is the
// cost increase when order[j] joins the prefix. The extension value equals
// sum_j x[order[j]] * marginals[j].
struct LovaszChain {
  std::vector<int> order;
  std::vector<double> marginals;
};

LovaszChain lovasz_chain(const SubmodularOracle& f, const FractionalPoint& x);
double lovasz_extension(const SubmodularOracle& f, const FractionalPoint& x);

struct MultilinearMode {
  bool exact = true;
  long long samples = 0;
  std::uint64_t seed = 0;
  static MultilinearMode Exact() { return {true, 0, 0}; }
  static MultilinearMode Sampled(long long m, std::uint64_t seed) {
    return {false, m, seed};
  }
};

// Expected cost when each element joins independently with its coordinate as
// probability. Exact mode enumerates all subsets and requires n <= 22.
double multilinear_extension(const SubmodularOracle& f, const FractionalPoint& x,
                             const MultilinearMode& mode);

struct SubmodularityViolation {
  Set a = 0, b = 0;
  double lhs = 0, rhs = 0;  // f(a)+f(b) vs f(a|b)+f(a&b)
};

// Exhaustive marginal check for n <= 12, otherwise random (a, b) pairs.
// Returns the first violation found (tolerance 1e-9), if any.
std::optional<SubmodularityViolation> check_submodularity(
    const SubmodularOracle& f, int random_pairs = 10000, std::uint64_t seed = 1);

// Ground-set symmetries as permutation generators; generators[g][v] is the
// image of vertex v.
struct SymmetrySpec {
  std::vector<std::vector<int>> generators;
};

void validate_symmetry(const SymmetrySpec& sym, int n);

struct Orbits {
  std::vector<int> orbit_of;           // vertex -> orbit id, ids are dense
  std::vector<std::vector<int>> members;  // orbit id -> sorted vertices
};

Orbits compute_orbits(int n, const SymmetrySpec& sym);

struct MultiwayInstance {
  SubmodularOracle oracle;
  int k = 0;
  std::vector<int> terminals;  // terminals[i] must end up with label i
};

void validate_instance(const MultiwayInstance& inst);

}  // namespace submp
