#include "submp/submodular.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "submp/common.h"
#include "submp/rng.h"

namespace submp {

namespace {

constexpr int kMaxGround = 64;
constexpr int kMaxTableN = 20;
constexpr int kMaxArity = 20;

Set ground_mask(int n) {
  return n >= 64 ? ~0ull : ((1ull << n) - 1ull);
}

Set local_mask(const EdgeCost& e, Set s) {
  Set m = 0;
  for (int j = 0; j < e.arity(); ++j) m |= ((s >> e.verts[j]) & 1ull) << j;
  return m;
}

std::vector<double> table_from_profile(const EdgeCost& e) {
  const int a = e.arity();
  std::vector<double> tbl(std::size_t(1) << a);
  for (Set m = 0; m < tbl.size(); ++m) {
    if (e.flag_pos < 0) {
      tbl[m] = e.phi_out[std::size_t(set_size(m))];
    } else {
      const bool in = set_has(m, e.flag_pos);
      const int c = set_size(m) - (in ? 1 : 0);
      tbl[m] = in ? e.phi_in[std::size_t(c)] : e.phi_out[std::size_t(c)];
    }
  }
  return tbl;
}

void validate_edge(const EdgeCost& e, int n) {
  const int a = e.arity();
  if (a < 1 || a > kMaxArity) throw DomainError("edge arity out of range");
  std::vector<int> sorted = e.verts;
  std::sort(sorted.begin(), sorted.end());
  for (int j = 0; j < a; ++j) {
    if (sorted[std::size_t(j)] < 0 || sorted[std::size_t(j)] >= n)
      throw DomainError("edge vertex out of range");
    if (j > 0 && sorted[std::size_t(j)] == sorted[std::size_t(j - 1)])
      throw DomainError("edge lists a vertex twice");
  }
  if (!(e.weight > 0.0) || !std::isfinite(e.weight))
    throw DomainError("edge weight must be positive and finite");
  if (e.table.size() != (std::size_t(1) << a))
    throw DomainError("edge table size mismatch");
  for (double v : e.table)
    if (!std::isfinite(v)) throw DomainError("edge table entry not finite");
  if (std::abs(e.table[0]) > 1e-12)
    throw DomainError("edge table must vanish on the empty set");
  if (e.has_profile()) {
    if (e.flag_pos >= 0) {
      if (e.flag_pos >= a || e.phi_out.size() != std::size_t(a) ||
          e.phi_in.size() != std::size_t(a))
        throw DomainError("edge profile shape mismatch");
    } else if (e.phi_out.size() != std::size_t(a) + 1 || !e.phi_in.empty()) {
      throw DomainError("edge profile shape mismatch");
    }
    std::vector<double> expect = table_from_profile(e);
    for (std::size_t m = 0; m < expect.size(); ++m)
      if (std::abs(expect[m] - e.table[m]) > 1e-12)
        throw DomainError("edge profile disagrees with edge table");
  }
}

void build_incidence(SubmodularOracle& f) {
  f.incidence.assign(std::size_t(f.ground.n), {});
  for (int e = 0; e < static_cast<int>(f.edges.size()); ++e)
    for (int j = 0; j < f.edges[std::size_t(e)].arity(); ++j)
      f.incidence[std::size_t(f.edges[std::size_t(e)].verts[std::size_t(j)])]
          .push_back({e, j});
}

}  // namespace

EdgeCost make_profile_edge(std::vector<int> verts, double weight, std::vector<double> phi_out,
                           std::vector<double> phi_in, int flag_pos) {
  EdgeCost e;
  e.verts = std::move(verts);
  e.weight = weight;
  e.phi_out = std::move(phi_out);
  e.phi_in = std::move(phi_in);
  e.flag_pos = flag_pos;
  e.table = table_from_profile(e);
  return e;
}

double SubmodularOracle::evaluate(Set s) const {
  if (ground.n < 64 && (s & ~ground_mask(ground.n)) != 0)
    throw DomainError("set contains elements outside the ground set");
  if (!decomposed()) return table[std::size_t(s)];
  double total = 0.0;
  for (const EdgeCost& e : edges) total += e.weight * e.table[std::size_t(local_mask(e, s))];
  return total;
}

SubmodularOracle make_table_oracle(std::vector<double> raw_values) {
  if (raw_values.empty() || (raw_values.size() & (raw_values.size() - 1)) != 0)
    throw DomainError("table size must be a power of two");
  int n = 0;
  while ((std::size_t(1) << n) < raw_values.size()) ++n;
  if (n > kMaxTableN) throw DomainError("explicit table limited to 2^20 entries");
  for (double v : raw_values)
    if (!std::isfinite(v)) throw DomainError("table entry not finite");
  const double base = raw_values[0];
  for (double& v : raw_values) v -= base;
  SubmodularOracle f;
  f.kind = OracleKind::kExplicitTable;
  f.ground.n = n;
  f.table = std::move(raw_values);
  return f;
}

SubmodularOracle make_decomposed_oracle(OracleKind kind, int n, std::vector<EdgeCost> edges) {
  if (kind == OracleKind::kExplicitTable)
    throw DomainError("explicit-table kind cannot carry edge terms");
  if (n < 1 || n > kMaxGround) throw DomainError("ground set size out of range");
  for (const EdgeCost& e : edges) validate_edge(e, n);
  SubmodularOracle f;
  f.kind = kind;
  f.ground.n = n;
  f.edges = std::move(edges);
  build_incidence(f);
  return f;
}

SubmodularOracle make_grid_oracle(int k) {
  if (k < 2 || k * k > kMaxGround) throw DomainError("grid size must have 2 <= k <= 8");
  std::vector<double> phi(std::size_t(k) + 1);
  for (int t = 0; t < k; ++t) phi[std::size_t(t)] = double(t) / double(k);
  phi[std::size_t(k)] = 0.0;
  std::vector<EdgeCost> edges;
  for (int i = 0; i < k; ++i) {
    std::vector<int> row, col;
    for (int j = 0; j < k; ++j) {
      row.push_back(i * k + j);
      col.push_back(j * k + i);
    }
    edges.push_back(make_profile_edge(row, 1.0, phi, {}, -1));
    edges.push_back(make_profile_edge(col, 1.0, phi, {}, -1));
  }
  SubmodularOracle f = make_decomposed_oracle(OracleKind::kGridPartition, k * k, std::move(edges));
  f.k_param = k;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) f.ground.coords.push_back({i, j});
  return f;
}

int symmetric_gamma_default(int k) {
  const double root = std::sqrt(3.0 * k * k - 2.0 * k);
  return 2 * static_cast<int>(std::floor(2.0 * k - root));
}

SubmodularOracle make_symmetric_gamma_oracle(int k, int gamma) {
  if (k < 2 || k * k > kMaxGround) throw DomainError("grid size must have 2 <= k <= 8");
  if (gamma < 0) gamma = symmetric_gamma_default(k);
  if (gamma % 2 != 0 || gamma > k) throw DomainError("gamma must be even with 0 <= gamma <= k");
  // phi(t) climbs to k - gamma/2 and then descends with unit slope.
  std::vector<double> phi(std::size_t(k) + 1);
  for (int t = 0; t <= k; ++t)
    phi[std::size_t(t)] = (t <= k - gamma / 2) ? double(t) : double(2 * k - t - gamma);
  std::vector<double> phi_out(static_cast<std::size_t>(k));
  std::vector<double> phi_in(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) {
    phi_out[std::size_t(c)] = phi[std::size_t(c)];
    phi_in[std::size_t(c)] = phi[std::size_t(k - 1 - c)];
  }
  std::vector<EdgeCost> edges;
  for (int i = 0; i < k; ++i) {
    std::vector<int> row, col;
    for (int j = 0; j < k; ++j) {
      row.push_back(i * k + j);
      col.push_back(j * k + i);
    }
    edges.push_back(make_profile_edge(row, 1.0, phi_out, phi_in, i));
    edges.push_back(make_profile_edge(col, 1.0, phi_out, phi_in, i));
  }
  SubmodularOracle f =
      make_decomposed_oracle(OracleKind::kSymmetricGamma, k * k, std::move(edges));
  f.k_param = k;
  f.gamma_param = gamma;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) f.ground.coords.push_back({i, j});
  return f;
}

SubmodularOracle make_coverage_oracle(int n, const std::vector<std::vector<int>>& cover_sets,
                                      const std::vector<double>& weights) {
  if (cover_sets.size() != weights.size())
    throw DomainError("coverage sets and weights must align");
  std::vector<EdgeCost> edges;
  for (std::size_t j = 0; j < cover_sets.size(); ++j) {
    std::vector<double> hit(cover_sets[j].size() + 1, 1.0);
    hit[0] = 0.0;
    edges.push_back(make_profile_edge(cover_sets[j], weights[j], hit, {}, -1));
  }
  return make_decomposed_oracle(OracleKind::kWeightedCoverage, n, std::move(edges));
}

SubmodularOracle make_hypergraph_cut_oracle(int n, const std::vector<CutEdge>& cut_edges) {
  std::vector<EdgeCost> edges;
  for (const CutEdge& ce : cut_edges) {
    std::vector<double> split(ce.verts.size() + 1, 1.0);
    split[0] = 0.0;
    split[ce.verts.size()] = 0.0;
    edges.push_back(make_profile_edge(ce.verts, ce.weight, split, {}, -1));
  }
  return make_decomposed_oracle(OracleKind::kHypergraphCutCount, n, std::move(edges));
}

LovaszChain lovasz_chain(const SubmodularOracle& f, const FractionalPoint& x) {
  const int n = f.ground.n;
  if (static_cast<int>(x.size()) != n) throw DomainError("point dimension mismatch");
  FractionalPoint xc = x;
  for (double& v : xc) {
    if (!std::isfinite(v) || v < -1e-9 || v > 1.0 + 1e-9)
      throw DomainError("point coordinate outside [0,1]");
    v = std::clamp(v, 0.0, 1.0);
  }
  LovaszChain chain;
  chain.order.resize(std::size_t(n));
  std::iota(chain.order.begin(), chain.order.end(), 0);
  std::sort(chain.order.begin(), chain.order.end(), [&](int a, int b) {
    if (xc[std::size_t(a)] != xc[std::size_t(b)]) return xc[std::size_t(a)] > xc[std::size_t(b)];
    return a < b;
  });
  chain.marginals.resize(std::size_t(n));
  if (!f.decomposed()) {
    Set prefix = 0;
    for (int j = 0; j < n; ++j) {
      const Set next = prefix | (1ull << chain.order[std::size_t(j)]);
      chain.marginals[std::size_t(j)] = f.table[std::size_t(next)] - f.table[std::size_t(prefix)];
      prefix = next;
    }
  } else {
    std::vector<Set> masks(f.edges.size(), 0);
    for (int j = 0; j < n; ++j) {
      const int v = chain.order[std::size_t(j)];
      double delta = 0.0;
      for (const auto& [ei, bit] : f.incidence[std::size_t(v)]) {
        const EdgeCost& e = f.edges[std::size_t(ei)];
        Set& m = masks[std::size_t(ei)];
        const Set grown = m | (1ull << bit);
        delta += e.weight * (e.table[std::size_t(grown)] - e.table[std::size_t(m)]);
        m = grown;
      }
      chain.marginals[std::size_t(j)] = delta;
    }
  }
  return chain;
}

double lovasz_extension(const SubmodularOracle& f, const FractionalPoint& x) {
  const LovaszChain chain = lovasz_chain(f, x);
  double total = 0.0;
  for (std::size_t j = 0; j < chain.order.size(); ++j) {
    const double xv = std::clamp(x[std::size_t(chain.order[j])], 0.0, 1.0);
    total += xv * chain.marginals[j];
  }
  return total;
}

double multilinear_extension(const SubmodularOracle& f, const FractionalPoint& x,
                             const MultilinearMode& mode) {
  const int n = f.ground.n;
  if (static_cast<int>(x.size()) != n) throw DomainError("point dimension mismatch");
  for (double v : x)
    if (!std::isfinite(v) || v < -1e-9 || v > 1.0 + 1e-9)
      throw DomainError("point coordinate outside [0,1]");
  if (mode.exact) {
    if (n > 22) throw CapacityError("exact expectation limited to 22 ground elements");
    if (f.decomposed()) {
      // Linearity: marginalize each edge term over its own verts.
      double total = 0.0;
      for (const EdgeCost& e : f.edges) {
        const int a = e.arity();
        double term = 0.0;
        for (Set m = 0; m < (std::size_t(1) << a); ++m) {
          double p = 1.0;
          for (int j = 0; j < a; ++j) {
            const double xv = std::clamp(x[std::size_t(e.verts[std::size_t(j)])], 0.0, 1.0);
            p *= set_has(m, j) ? xv : 1.0 - xv;
          }
          term += p * e.table[std::size_t(m)];
        }
        total += e.weight * term;
      }
      return total;
    }
    double total = 0.0;
    for (Set s = 0; s < (std::size_t(1) << n); ++s) {
      double p = 1.0;
      for (int j = 0; j < n && p != 0.0; ++j) {
        const double xv = std::clamp(x[std::size_t(j)], 0.0, 1.0);
        p *= set_has(s, j) ? xv : 1.0 - xv;
      }
      if (p != 0.0) total += p * f.table[std::size_t(s)];
    }
    return total;
  }
  if (mode.samples < 1) throw DomainError("sample count must be positive");
  Rng rng(mode.seed);
  double total = 0.0;
  for (long long it = 0; it < mode.samples; ++it) {
    Set s = 0;
    for (int j = 0; j < n; ++j)
      if (rng.uniform() < x[std::size_t(j)]) s |= 1ull << j;
    total += f.evaluate(s);
  }
  return total / double(mode.samples);
}

std::optional<SubmodularityViolation> check_submodularity(const SubmodularOracle& f,
                                                          int random_pairs,
                                                          std::uint64_t seed) {
  const int n = f.ground.n;
  const double tol = 1e-9;
  if (n <= 12) {
    std::vector<double> val(std::size_t(1) << n);
    for (Set s = 0; s < val.size(); ++s) val[std::size_t(s)] = f.evaluate(s);
    for (Set s = 0; s < val.size(); ++s) {
      for (int i = 0; i < n; ++i) {
        if (set_has(s, i)) continue;
        for (int j = i + 1; j < n; ++j) {
          if (set_has(s, j)) continue;
          const Set a = s | (1ull << i), b = s | (1ull << j);
          const double lhs = val[std::size_t(a)] + val[std::size_t(b)];
          const double rhs = val[std::size_t(a | b)] + val[std::size_t(s)];
          if (lhs < rhs - tol) return SubmodularityViolation{a, b, lhs, rhs};
        }
      }
    }
    return std::nullopt;
  }
  Rng rng(seed);
  const Set full = ground_mask(n);
  for (int it = 0; it < random_pairs; ++it) {
    const Set a = rng.next() & full, b = rng.next() & full;
    const double lhs = f.evaluate(a) + f.evaluate(b);
    const double rhs = f.evaluate(a | b) + f.evaluate(a & b);
    if (lhs < rhs - tol) return SubmodularityViolation{a, b, lhs, rhs};
  }
  return std::nullopt;
}

void validate_symmetry(const SymmetrySpec& sym, int n) {
  for (const auto& g : sym.generators) {
    if (static_cast<int>(g.size()) != n) throw DomainError("generator size mismatch");
    std::vector<bool> seen(std::size_t(n), false);
    for (int v : g) {
      if (v < 0 || v >= n || seen[std::size_t(v)])
        throw DomainError("generator is not a permutation");
      seen[std::size_t(v)] = true;
    }
  }
}

Orbits compute_orbits(int n, const SymmetrySpec& sym) {
  validate_symmetry(sym, n);
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[std::size_t(v)] != v) {
      parent[std::size_t(v)] = parent[std::size_t(parent[std::size_t(v)])];
      v = parent[std::size_t(v)];
    }
    return v;
  };
  for (const auto& g : sym.generators)
    for (int v = 0; v < n; ++v) {
      const int a = find(v), b = find(g[std::size_t(v)]);
      if (a != b) parent[std::size_t(std::max(a, b))] = std::min(a, b);
    }
  Orbits orb;
  orb.orbit_of.assign(std::size_t(n), -1);
  for (int v = 0; v < n; ++v) {
    const int root = find(v);
    if (orb.orbit_of[std::size_t(root)] < 0) {
      orb.orbit_of[std::size_t(root)] = static_cast<int>(orb.members.size());
      orb.members.push_back({});
    }
    orb.orbit_of[std::size_t(v)] = orb.orbit_of[std::size_t(root)];
    orb.members[std::size_t(orb.orbit_of[std::size_t(v)])].push_back(v);
  }
  return orb;
}

void validate_instance(const MultiwayInstance& inst) {
  const int n = inst.oracle.ground.n;
  if (n < 1) throw DomainError("empty ground set");
  if (inst.k < 1) throw DomainError("need at least one part");
  if (static_cast<int>(inst.terminals.size()) != inst.k)
    throw DomainError("terminal count must equal the number of parts");
  std::vector<bool> seen(std::size_t(n), false);
  for (int t : inst.terminals) {
    if (t < 0 || t >= n) throw DomainError("terminal out of range");
    if (seen[std::size_t(t)]) throw DomainError("terminals must be distinct");
    seen[std::size_t(t)] = true;
  }
}

}  // namespace submp
