#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "submp/brute_force.h"
#include "submp/common.h"
#include "submp/mincsp.h"
#include "submp/rng.h"
#include "submp/zoo.h"

using namespace submp;

namespace {

double labeling_cost(const MinCspInstance& inst, const std::vector<int>& labels) {
  double total = 0.0;
  for (const CspEdge& e : inst.edges) {
    std::vector<int> alpha;
    for (int v : e.verts) alpha.push_back(labels[std::size_t(v)]);
    double entry = e.table[edge_table_index(inst, e, alpha)];
    if (entry == kForbidden) return kForbidden;
    total += e.weight * entry;
  }
  return total;
}

Set apply_perm(const std::vector<int>& perm, Set s) {
  Set out = 0;
  for (std::size_t v = 0; v < perm.size(); ++v)
    if (set_has(s, static_cast<int>(v))) out |= Set(1) << perm[v];
  return out;
}

// Minimum cost over labelings constant on each orbit (pins force their
// orbit's label).
double symmetric_enumeration_min(const MinCspInstance& inst, const SymmetrySpec& sym) {
  Orbits orbits = compute_orbits(static_cast<int>(inst.verts.size()), sym);
  std::vector<int> orbit_pin(orbits.members.size(), -1);
  for (std::size_t o = 0; o < orbits.members.size(); ++o)
    for (int v : orbits.members[o])
      if (inst.verts[std::size_t(v)].pin >= 0) orbit_pin[o] = inst.verts[std::size_t(v)].pin;
  std::vector<std::size_t> free_orbits;
  for (std::size_t o = 0; o < orbit_pin.size(); ++o)
    if (orbit_pin[o] < 0) free_orbits.push_back(o);

  double best = kForbidden;
  std::vector<int> word(free_orbits.size(), 0);
  std::vector<int> labels(inst.verts.size());
  for (;;) {
    for (std::size_t o = 0; o < orbits.members.size(); ++o)
      for (int v : orbits.members[o]) labels[std::size_t(v)] = orbit_pin[o];
    for (std::size_t j = 0; j < free_orbits.size(); ++j)
      for (int v : orbits.members[free_orbits[j]]) labels[std::size_t(v)] = word[j];
    double cost = labeling_cost(inst, labels);
    if (cost < best) best = cost;
    std::size_t pos = word.size();
    while (pos > 0 && word[pos - 1] == inst.q - 1) word[--pos] = 0;
    if (pos == 0) break;
    ++word[pos - 1];
  }
  return best;
}

}  // namespace

TEST_CASE("grid generator shape and symmetry") {
  GapInstance g = gen_grid(3);
  CHECK(g.inst.oracle.ground.n == 9);
  CHECK(g.inst.k == 3);
  CHECK(g.inst.terminals == std::vector<int>{0, 4, 8});
  REQUIRE(g.sym.generators.size() == 1);
  const std::vector<int>& t = g.sym.generators[0];
  for (int v = 0; v < 9; ++v) CHECK(t[std::size_t(t[std::size_t(v)])] == v);  // involution

  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    Set s = rng.next() & 0x1ff;
    CHECK(g.inst.oracle.evaluate(s) ==
          doctest::Approx(g.inst.oracle.evaluate(apply_perm(t, s))).epsilon(1e-12));
  }

  CHECK_THROWS_AS(gen_grid(1), DomainError);
  CHECK_THROWS_AS(gen_grid(9), DomainError);
}

TEST_CASE("steep profile generator: row assignments and complements") {
  GapInstance g = gen_symmetric_gamma(4);
  Partition rows;
  rows.label.assign(16, 0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) rows.label[std::size_t(i * 4 + j)] = i;
  CHECK(partition_cost(g.inst, rows) == 24.0);  // k(2k - gamma), gamma = 2

  GapInstance g5 = gen_symmetric_gamma(5);
  Partition rows5;
  rows5.label.assign(25, 0);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) rows5.label[std::size_t(i * 5 + j)] = i;
  CHECK(partition_cost(g5.inst, rows5) == 40.0);

  GapInstance g6 = gen_symmetric_gamma(6);  // default gamma switches to 4
  Partition rows6;
  rows6.label.assign(36, 0);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) rows6.label[std::size_t(i * 6 + j)] = i;
  CHECK(partition_cost(g6.inst, rows6) == 48.0);

  Rng rng(3);
  const Set full = (Set(1) << 16) - 1;
  for (int i = 0; i < 500; ++i) {
    Set s = rng.next() & full;
    CHECK(g.inst.oracle.evaluate(s) ==
          doctest::Approx(g.inst.oracle.evaluate(full ^ s)).epsilon(1e-12));
  }
}

TEST_CASE("not-all-equal bundle layout") {
  HkBundle hk = gen_hk(3);
  CHECK(hk.csp.q == 3);
  REQUIRE(hk.csp.verts.size() == 6);
  // Vertex order (1,1),(1,2),(1,3),(2,2),(2,3),(3,3); diagonal pinned.
  CHECK(hk.csp.verts[0].pin == 0);
  CHECK(hk.csp.verts[3].pin == 1);
  CHECK(hk.csp.verts[5].pin == 2);
  CHECK(hk.csp.verts[1].pin == -1);
  REQUIRE(hk.csp.edges.size() == 3);
  CHECK(hk.csp.edges[0].verts == std::vector<int>{0, 1, 2});
  CHECK(hk.csp.edges[1].verts == std::vector<int>{1, 3, 4});
  CHECK(hk.csp.edges[2].verts == std::vector<int>{2, 4, 5});
  for (const CspEdge& e : hk.csp.edges) {
    REQUIRE(e.table.size() == 27);
    for (std::size_t idx = 0; idx < 27; ++idx) {
      bool mono = idx == 0 || idx == 13 || idx == 26;
      CHECK(e.table[idx] == (mono ? 0.0 : 1.0));
    }
  }
  CHECK(check_certificate(hk.csp, hk.certificate).feasible);

  CHECK_THROWS_AS(gen_hk(1), DomainError);
  CHECK_THROWS_AS(gen_hk(7), DomainError);
}

TEST_CASE("five-terminal cycle layout and connector weight") {
  MultiwayInstance inst = gen_hmp_cycle();
  CHECK(inst.oracle.ground.n == 10);
  CHECK(inst.k == 5);
  CHECK(inst.terminals == std::vector<int>{0, 1, 2, 3, 4});
  REQUIRE(inst.oracle.edges.size() == 6);

  // All five connectors together: each triple is split, the connector edge
  // is whole.
  Set connectors = 0b1111100000;
  CHECK(inst.oracle.evaluate(connectors) == doctest::Approx(5.0).epsilon(1e-12));

  MultiwayInstance fat = gen_hmp_cycle(0.25);
  CHECK(fat.oracle.evaluate(Set(1) << 5) == doctest::Approx(1.25).epsilon(1e-12));

  CHECK_THROWS_AS(gen_hmp_cycle(0.0), DomainError);
  CHECK_THROWS_AS(gen_hmp_cycle(-1.0), DomainError);
}

TEST_CASE("string symmetrization of the k=3 certificate") {
  HkBundle hk = gen_hk(3);
  SymmetrizeResult res = symmetrize_gap_instance(hk.csp, hk.certificate, 2);
  CHECK(res.csp.q == 3);
  CHECK(res.csp.verts.size() == 9);  // 3 one-word diagonals + 3 x 2 arrangements
  CHECK(res.csp.edges.size() == 6);  // two arrangements per original edge
  for (const CspEdge& e : res.csp.edges) CHECK(e.weight == doctest::Approx(0.5));
  REQUIRE(res.sym.generators.size() >= 1);
  validate_symmetry(res.sym, 9);

  // Property (a): fixing either coordinate reproduces the certificate value.
  for (int c = 0; c < 2; ++c) {
    std::vector<int> labels;
    for (const auto& [orig, word] : res.origin) labels.push_back(word[std::size_t(c)]);
    CHECK(labeling_cost(res.csp, labels) == doctest::Approx(1.5).epsilon(1e-12));
  }

  // Property (b): labelings constant on the coordinate-swap orbits cannot
  // undercut the original integral optimum.
  CHECK(symmetric_enumeration_min(res.csp, res.sym) >= 2.0 - 1e-12);

  // M = 1 with an integral certificate is the identity transform.
  CspBruteResult brute = brute_force_csp(hk.csp);
  BasicLpSolution integral;
  integral.vertex_marginals.assign(6, std::vector<double>(3, 0.0));
  for (std::size_t v = 0; v < 6; ++v)
    integral.vertex_marginals[v][std::size_t(brute.labels[v])] = 1.0;
  for (const CspEdge& e : hk.csp.edges) {
    EdgeDistribution d;
    std::vector<int> alpha;
    for (int v : e.verts) alpha.push_back(brute.labels[std::size_t(v)]);
    d.alphas = {alpha};
    d.prob = {1.0};
    integral.edge_dists.push_back(d);
  }
  SymmetrizeResult one = symmetrize_gap_instance(hk.csp, integral, 1);
  CHECK(one.csp.verts.size() == 6);
  CHECK(one.csp.edges.size() == 3);
  CHECK(brute_force_csp(one.csp).value == brute.value);

  // The half/half certificate is not 3-rational.
  CHECK_THROWS_AS(symmetrize_gap_instance(hk.csp, hk.certificate, 3), DomainError);
  CHECK_THROWS_AS(symmetrize_gap_instance(hk.csp, hk.certificate, 9), CapacityError);
}

TEST_CASE("folding with a trivial group is the identity transform") {
  GapInstance g = gen_grid(3);
  MinCspInstance csp = submp_to_mincsp(g.inst);
  SymmetrySpec trivial;
  MinCspInstance folded = fold_symmetric_instance(csp, trivial, 1);
  CHECK(folded.verts.size() == csp.verts.size());
  CHECK(folded.edges.size() == csp.edges.size());
  CHECK(brute_force_csp(folded).value == 3.0);
}

TEST_CASE("folded grid keeps its gap and grows it no worse with larger clusters") {
  GapInstance g = gen_grid(3);
  MinCspInstance csp = submp_to_mincsp(g.inst);

  MinCspInstance fold3 = fold_symmetric_instance(csp, g.sym, 3);
  CHECK(fold3.verts.size() == 18);   // six orbits, three copies each
  CHECK(fold3.edges.size() == 162);  // six lines, 3^3 placements each
  BasicLpSolution lp3 = solve_basic_lp(fold3);
  CspBruteResult int3 = brute_force_csp(fold3);
  CHECK(lp3.objective == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(int3.value == doctest::Approx(4.0).epsilon(1e-9));  // 1/27 weight splits
  const double gap3 = int3.value / lp3.objective;
  CHECK(gap3 >= 1.30);

  MinCspInstance fold4 = fold_symmetric_instance(csp, g.sym, 4);
  BasicLpSolution lp4 = solve_basic_lp(fold4);
  CspBruteResult int4 = brute_force_csp(fold4);
  const double gap4 = int4.value / lp4.objective;
  CHECK(gap4 >= gap3 - 1e-6);
}

TEST_CASE("fold rejects clusters too small for repeated orbits") {
  MinCspInstance inst;
  inst.q = 2;
  inst.verts = {{{0, 1}, -1}, {{0, 1}, -1}};
  CspEdge e;
  e.verts = {0, 1};
  e.table = {0.0, 1.0, 1.0, 0.0};
  inst.edges = {e};
  SymmetrySpec swap_ab;
  swap_ab.generators = {{1, 0}};

  // Both edge positions land in the same orbit: one copy cannot host them.
  CHECK_THROWS_AS(fold_symmetric_instance(inst, swap_ab, 1), DomainError);

  MinCspInstance folded = fold_symmetric_instance(inst, swap_ab, 2);
  CHECK(folded.verts.size() == 2);
  CHECK(folded.edges.size() == 2);  // the two injective placements
  for (const CspEdge& fe : folded.edges) CHECK(fe.weight == doctest::Approx(0.5));
  CHECK(brute_force_csp(folded).value == 0.0);
}

TEST_CASE("fold audits cost invariance and structural symmetry") {
  MinCspInstance inst;
  inst.q = 2;
  inst.verts = {{{0, 1}, -1}, {{0, 1}, -1}};
  CspEdge e;
  e.verts = {0, 1};
  e.table = {0.0, 5.0, 1.0, 0.0};  // asymmetric under the swap
  inst.edges = {e};
  SymmetrySpec swap_ab;
  swap_ab.generators = {{1, 0}};
  CHECK_THROWS_AS(fold_symmetric_instance(inst, swap_ab, 2), DomainError);

  MinCspInstance pinned = inst;
  pinned.edges[0].table = {0.0, 1.0, 1.0, 0.0};
  pinned.verts[0].pin = 0;  // pin on one side of the orbit only
  CHECK_THROWS_AS(fold_symmetric_instance(pinned, swap_ab, 2), DomainError);

  MinCspInstance ok = inst;
  ok.edges[0].table = {0.0, 1.0, 1.0, 0.0};
  CHECK_THROWS_AS(fold_symmetric_instance(ok, swap_ab, 0), DomainError);
  CHECK_THROWS_AS(fold_symmetric_instance(ok, swap_ab, 9), CapacityError);
}

TEST_CASE("random families are seed-stable and well-formed") {
  MultiwayInstance a = gen_random_family("graph-mc", 9, 3, 10, 77);
  MultiwayInstance b = gen_random_family("graph-mc", 9, 3, 10, 77);
  CHECK(a.terminals == b.terminals);
  REQUIRE(a.oracle.edges.size() == b.oracle.edges.size());
  for (std::size_t i = 0; i < a.oracle.edges.size(); ++i) {
    CHECK(a.oracle.edges[i].verts == b.oracle.edges[i].verts);
    CHECK(a.oracle.edges[i].weight == b.oracle.edges[i].weight);
  }
  MultiwayInstance c = gen_random_family("graph-mc", 9, 3, 10, 78);
  bool differs = a.terminals != c.terminals;
  for (std::size_t i = 0; i < a.oracle.edges.size() && !differs; ++i)
    differs = a.oracle.edges[i].verts != c.oracle.edges[i].verts ||
              a.oracle.edges[i].weight != c.oracle.edges[i].weight;
  CHECK(differs);

  CHECK(a.oracle.edges.size() == 10);
  std::set<std::vector<int>> distinct;
  for (const EdgeCost& edge : a.oracle.edges) {
    CHECK(edge.verts.size() == 2);
    // Halved dyadic weights: multiples of 1/16 up to 1.
    CHECK(edge.weight * 16.0 == std::floor(edge.weight * 16.0));
    CHECK(edge.weight > 0.0);
    CHECK(edge.weight <= 1.0);
    distinct.insert(edge.verts);
  }
  CHECK(distinct.size() == 10);
}

TEST_CASE("random hypergraph terms carry the proportional profile") {
  MultiwayInstance inst = gen_random_family("hypergraph-mc", 10, 3, 12, 5);
  CHECK(inst.oracle.kind == OracleKind::kHypergraphCutCount);
  for (const EdgeCost& e : inst.oracle.edges) {
    const int a = e.arity();
    CHECK(a >= 2);
    CHECK(a <= 4);
    REQUIRE(e.has_profile());
    CHECK(e.flag_pos == -1);
    REQUIRE(e.phi_out.size() == std::size_t(a) + 1);
    CHECK(e.phi_out[0] == 0.0);
    CHECK(e.phi_out[std::size_t(a)] == 0.0);
    for (int t = 1; t < a; ++t)
      CHECK(e.phi_out[std::size_t(t)] == doctest::Approx(double(t) / a).epsilon(1e-12));
  }
  CHECK(!check_submodularity(inst.oracle).has_value());
}

TEST_CASE("random coverage instances are exhaustively submodular") {
  MultiwayInstance inst = gen_random_family("coverage", 10, 3, 12, 9);
  CHECK(inst.oracle.kind == OracleKind::kWeightedCoverage);
  CHECK(!check_submodularity(inst.oracle).has_value());
  MultiwayInstance graph = gen_random_family("graph-mc", 10, 3, 12, 9);
  CHECK(!check_submodularity(graph.oracle).has_value());
}

TEST_CASE("random family argument validation") {
  CHECK_THROWS_AS(gen_random_family("nosuch", 8, 3, 5, 1), DomainError);
  CHECK_THROWS_AS(gen_random_family("graph-mc", 1, 2, 5, 1), DomainError);
  CHECK_THROWS_AS(gen_random_family("graph-mc", 31, 3, 5, 1), DomainError);
  CHECK_THROWS_AS(gen_random_family("graph-mc", 8, 9, 5, 1), DomainError);
  CHECK_THROWS_AS(gen_random_family("graph-mc", 8, 3, 0, 1), DomainError);
  CHECK_THROWS_AS(gen_random_family("graph-mc", 8, 3, 201, 1), DomainError);
  // More distinct pairs than an 8-vertex graph owns.
  CHECK_THROWS_AS(gen_random_family("graph-mc", 8, 3, 100, 1), DomainError);

  MultiwayInstance inst = gen_random_family("coverage", 8, 4, 6, 3);
  CHECK(inst.terminals.size() == 4);
  std::set<int> uniq(inst.terminals.begin(), inst.terminals.end());
  CHECK(uniq.size() == 4);
  for (int t : inst.terminals) {
    CHECK(t >= 0);
    CHECK(t < 8);
  }
}
