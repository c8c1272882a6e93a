#include "submp/zoo.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "submp/common.h"
#include "submp/rng.h"

namespace submp {

namespace {

constexpr std::uint64_t kInvarianceSamples = 1000;
constexpr std::uint64_t kInvarianceSeed = 0x5eedf01d;

std::vector<std::vector<int>> transpose_generator(int k) {
  std::vector<int> g(std::size_t(k) * std::size_t(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) g[std::size_t(i * k + j)] = j * k + i;
  return {g};
}

std::vector<int> diagonal_terminals(int k) {
  std::vector<int> t(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) t[std::size_t(i)] = i * k + i;
  return t;
}

// cost of a full labeling of a CSP, kForbidden when some tuple is forbidden
double csp_labeling_cost(const MinCspInstance& inst, const std::vector<int>& label) {
  double total = 0.0;
  for (const CspEdge& e : inst.edges) {
    std::size_t idx = 0;
    for (int v : e.verts) idx = idx * std::size_t(inst.q) + std::size_t(label[std::size_t(v)]);
    const double c = e.table[idx];
    if (std::isinf(c)) return kForbidden;
    total += e.weight * c;
  }
  return total;
}

int rounded_count(double value, int m, const char* what) {
  const double scaled = value * m;
  const double r = std::round(scaled);
  if (std::abs(scaled - r) > 1e-6)
    throw DomainError(std::string(what) + " is not a multiple of 1/m");
  return static_cast<int>(r);
}

}  // namespace

GapInstance gen_grid(int k) {
  GapInstance g;
  g.inst.oracle = make_grid_oracle(k);
  g.inst.k = k;
  g.inst.terminals = diagonal_terminals(k);
  g.sym.generators = transpose_generator(k);
  return g;
}

GapInstance gen_symmetric_gamma(int k, int gamma) {
  GapInstance g;
  g.inst.oracle = make_symmetric_gamma_oracle(k, gamma);
  g.inst.k = k;
  g.inst.terminals = diagonal_terminals(k);
  g.sym.generators = transpose_generator(k);
  return g;
}

HkBundle gen_hk(int k) {
  if (k < 2 || k > 6) throw DomainError("not-all-equal family supports 2 <= k <= 6");
  HkBundle out;
  MinCspInstance& csp = out.csp;
  csp.q = k;

  // vertex (i,j), 1 <= i <= j <= k
  std::vector<std::vector<int>> vid(std::size_t(k) + 1, std::vector<int>(std::size_t(k) + 1, -1));
  for (int i = 1; i <= k; ++i)
    for (int j = i; j <= k; ++j) {
      vid[std::size_t(i)][std::size_t(j)] = static_cast<int>(csp.verts.size());
      CspVertex v;
      for (int l = 0; l < k; ++l) v.candidates.push_back(l);
      if (i == j) v.pin = i - 1;
      csp.verts.push_back(std::move(v));
    }

  std::size_t table_size = 1;
  for (int p = 0; p < k; ++p) table_size *= std::size_t(k);
  for (int i = 1; i <= k; ++i) {
    CspEdge e;
    for (int pos = 1; pos <= k; ++pos)
      e.verts.push_back(vid[std::size_t(std::min(pos, i))][std::size_t(std::max(pos, i))]);
    e.weight = 1.0;
    e.table.assign(table_size, 1.0);
    for (int l = 0; l < k; ++l) {
      std::size_t idx = 0;
      for (int p = 0; p < k; ++p) idx = idx * std::size_t(k) + std::size_t(l);
      e.table[idx] = 0.0;  // monochromatic tuples are free
    }
    csp.edges.push_back(std::move(e));
  }

  BasicLpSolution& cert = out.certificate;
  cert.vertex_marginals.assign(csp.verts.size(), std::vector<double>(std::size_t(k), 0.0));
  for (int i = 1; i <= k; ++i)
    for (int j = i; j <= k; ++j) {
      auto& row = cert.vertex_marginals[std::size_t(vid[std::size_t(i)][std::size_t(j)])];
      if (i == j) {
        row[std::size_t(i - 1)] = 1.0;
      } else {
        row[std::size_t(i - 1)] = 0.5;
        row[std::size_t(j - 1)] = 0.5;
      }
    }
  cert.edge_dists.resize(csp.edges.size());
  for (int i = 1; i <= k; ++i) {
    EdgeDistribution& dist = cert.edge_dists[std::size_t(i - 1)];
    std::vector<int> mono(std::size_t(k), i - 1);
    std::vector<int> rainbow(static_cast<std::size_t>(k));
    std::iota(rainbow.begin(), rainbow.end(), 0);
    dist.alphas = {mono, rainbow};
    dist.prob = {0.5, 0.5};
  }
  const CertificateReport audit = check_certificate(csp, cert);
  cert.objective = audit.objective;
  cert.max_residual = audit.max_residual;
  return out;
}

MultiwayInstance gen_hmp_cycle(double connector_weight) {
  if (!(connector_weight > 0.0) || !std::isfinite(connector_weight))
    throw DomainError("connector weight must be positive");
  std::vector<CutEdge> edges;
  for (int i = 0; i < 5; ++i) edges.push_back({{i, (i + 1) % 5, 5 + i}, 1.0});
  edges.push_back({{5, 6, 7, 8, 9}, connector_weight});
  MultiwayInstance inst;
  inst.oracle = make_hypergraph_cut_oracle(10, edges);
  inst.k = 5;
  inst.terminals = {0, 1, 2, 3, 4};
  return inst;
}

SymmetrizeResult symmetrize_gap_instance(const MinCspInstance& inst,
                                         const BasicLpSolution& cert, int m_coords) {
  validate_csp(inst);
  if (m_coords < 1) throw DomainError("coordinate count must be positive");
  if (m_coords > 8) throw CapacityError("coordinate count is limited to 8");
  for (const CspEdge& e : inst.edges)
    if (e.verts.size() > 4) throw CapacityError("symmetrizing is limited to arity 4");
  const int nv = static_cast<int>(inst.verts.size());
  if (static_cast<int>(cert.vertex_marginals.size()) != nv ||
      cert.edge_dists.size() != inst.edges.size())
    throw DomainError("certificate shape does not match the instance");

  SymmetrizeResult out;
  out.csp.q = inst.q;

  // vertex words: every arrangement of the certificate row scaled by m
  std::map<std::pair<int, std::vector<int>>, int> word_id;
  std::vector<std::vector<int>> words_of(static_cast<std::size_t>(nv));
  for (int v = 0; v < nv; ++v) {
    std::vector<int> base;
    for (int l = 0; l < inst.q; ++l) {
      const int c = rounded_count(cert.vertex_marginals[std::size_t(v)][std::size_t(l)],
                                  m_coords, "vertex marginal");
      base.insert(base.end(), std::size_t(c), l);
    }
    if (static_cast<int>(base.size()) != m_coords)
      throw DomainError("vertex marginals do not sum to one");
    std::sort(base.begin(), base.end());
    do {
      const int id = static_cast<int>(out.csp.verts.size());
      word_id[{v, base}] = id;
      words_of[std::size_t(v)].push_back(id);
      out.csp.verts.push_back(inst.verts[std::size_t(v)]);
      out.origin.push_back({v, base});
      if (out.csp.verts.size() > 5000)
        throw CapacityError("symmetrized vertex set exceeds the budget");
    } while (std::next_permutation(base.begin(), base.end()));
  }

  for (std::size_t ei = 0; ei < inst.edges.size(); ++ei) {
    const CspEdge& e = inst.edges[ei];
    const EdgeDistribution& dist = cert.edge_dists[ei];
    if (dist.alphas.size() != dist.prob.size())
      throw DomainError("certificate edge distribution shape mismatch");
    std::vector<int> seq;  // arrangement skeleton: coordinate -> tuple index
    for (std::size_t ai = 0; ai < dist.alphas.size(); ++ai) {
      if (dist.alphas[ai].size() != e.verts.size())
        throw DomainError("certificate tuple arity mismatch");
      const int c = rounded_count(dist.prob[ai], m_coords, "tuple probability");
      seq.insert(seq.end(), std::size_t(c), static_cast<int>(ai));
    }
    if (static_cast<int>(seq.size()) != m_coords)
      throw DomainError("edge distribution does not sum to one");
    std::sort(seq.begin(), seq.end());

    std::vector<CspEdge> copies;
    do {
      CspEdge copy;
      for (std::size_t p = 0; p < e.verts.size(); ++p) {
        std::vector<int> word(static_cast<std::size_t>(m_coords));
        for (int c = 0; c < m_coords; ++c)
          word[std::size_t(c)] = dist.alphas[std::size_t(seq[std::size_t(c)])][p];
        const auto it = word_id.find({e.verts[p], word});
        if (it == word_id.end())
          throw DomainError("certificate marginals disagree with a tuple distribution");
        copy.verts.push_back(it->second);
      }
      copy.table = e.table;
      copies.push_back(std::move(copy));
      if (copies.size() > 100000)
        throw CapacityError("symmetrized edge set exceeds the budget");
    } while (std::next_permutation(seq.begin(), seq.end()));
    for (CspEdge& copy : copies) {
      copy.weight = e.weight / double(copies.size());
      out.csp.edges.push_back(std::move(copy));
    }
  }

  // coordinate transpositions (c, c+1) acting on the words
  for (int c = 0; c + 1 < m_coords; ++c) {
    std::vector<int> g(out.csp.verts.size());
    for (std::size_t id = 0; id < out.csp.verts.size(); ++id) {
      auto [v, word] = out.origin[id];
      std::swap(word[std::size_t(c)], word[std::size_t(c + 1)]);
      g[id] = word_id.at({v, word});
    }
    out.sym.generators.push_back(std::move(g));
  }
  return out;
}

MinCspInstance fold_symmetric_instance(const MinCspInstance& inst, const SymmetrySpec& sym,
                                       int n_cluster) {
  validate_csp(inst);
  const int nv = static_cast<int>(inst.verts.size());
  validate_symmetry(sym, nv);
  if (n_cluster < 1) throw DomainError("cluster size must be positive");
  if (n_cluster > 8) throw CapacityError("cluster size is limited to 8");

  // structural invariance: candidate lists and pins must transfer
  for (const auto& g : sym.generators)
    for (int v = 0; v < nv; ++v) {
      const CspVertex& a = inst.verts[std::size_t(v)];
      const CspVertex& b = inst.verts[std::size_t(g[std::size_t(v)])];
      if (a.candidates != b.candidates || a.pin != b.pin)
        throw DomainError("candidate lists are not symmetry-invariant");
    }
  // sampled cost invariance under each generator
  Rng rng(kInvarianceSeed);
  std::vector<int> label(static_cast<std::size_t>(nv));
  std::vector<int> moved(static_cast<std::size_t>(nv));
  for (std::uint64_t it = 0; it < kInvarianceSamples; ++it) {
    for (int v = 0; v < nv; ++v)
      label[std::size_t(v)] = static_cast<int>(rng.below(std::uint64_t(inst.q)));
    const double base = csp_labeling_cost(inst, label);
    for (const auto& g : sym.generators) {
      for (int v = 0; v < nv; ++v) moved[std::size_t(v)] = label[std::size_t(g[std::size_t(v)])];
      const double relabeled = csp_labeling_cost(inst, moved);
      const bool base_inf = std::isinf(base), rel_inf = std::isinf(relabeled);
      if (base_inf != rel_inf || (!base_inf && std::abs(base - relabeled) > 1e-9))
        throw DomainError("costs are not symmetry-invariant");
    }
  }

  const Orbits orb = compute_orbits(nv, sym);
  const int no = static_cast<int>(orb.members.size());
  MinCspInstance out;
  out.q = inst.q;
  std::vector<int> base_id(static_cast<std::size_t>(no));
  for (int w = 0; w < no; ++w) {
    base_id[std::size_t(w)] = static_cast<int>(out.verts.size());
    for (int c = 0; c < n_cluster; ++c)
      out.verts.push_back(inst.verts[std::size_t(orb.members[std::size_t(w)][0])]);
  }

  for (const CspEdge& e : inst.edges) {
    const int a = static_cast<int>(e.verts.size());
    std::vector<int> eorb(static_cast<std::size_t>(a));
    for (int p = 0; p < a; ++p)
      eorb[std::size_t(p)] = orb.orbit_of[std::size_t(e.verts[std::size_t(p)])];
    for (int p = 0; p < a; ++p) {
      int mult = 0;
      for (int s = 0; s < a; ++s)
        if (eorb[std::size_t(s)] == eorb[std::size_t(p)]) ++mult;
      if (mult > n_cluster)
        throw DomainError("cluster size below an edge's orbit multiplicity");
    }
    // all placements, injective within each orbit
    std::vector<CspEdge> copies;
    std::vector<int> rep(std::size_t(a), 0);
    auto place = [&](auto&& self, int p) -> void {
      if (p == a) {
        CspEdge copy;
        for (int s = 0; s < a; ++s)
          copy.verts.push_back(base_id[std::size_t(eorb[std::size_t(s)])] + rep[std::size_t(s)]);
        copy.table = e.table;
        copies.push_back(std::move(copy));
        return;
      }
      for (int r = 0; r < n_cluster; ++r) {
        bool clash = false;
        for (int s = 0; s < p; ++s)
          if (eorb[std::size_t(s)] == eorb[std::size_t(p)] && rep[std::size_t(s)] == r)
            clash = true;
        if (clash) continue;
        rep[std::size_t(p)] = r;
        self(self, p + 1);
      }
    };
    place(place, 0);
    for (CspEdge& copy : copies) {
      copy.weight = e.weight / double(copies.size());
      out.edges.push_back(std::move(copy));
    }
  }
  return out;
}

MultiwayInstance gen_random_family(const std::string& kind, int n, int k, int m,
                                   std::uint64_t seed) {
  if (n < 2 || n > 30) throw DomainError("vertex count must have 2 <= n <= 30");
  if (k < 2 || k > n) throw DomainError("part count must have 2 <= k <= n");
  if (m < 1 || m > 200) throw DomainError("edge count must have 1 <= m <= 200");
  Rng rng(seed);

  std::vector<int> ids(static_cast<std::size_t>(n));
  std::iota(ids.begin(), ids.end(), 0);
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(rng.below(std::uint64_t(n - i)));
    std::swap(ids[std::size_t(i)], ids[std::size_t(j)]);
  }
  std::vector<int> terminals(ids.begin(), ids.begin() + k);

  auto dyadic_weight = [&rng] { return double(1 + rng.below(16)) / 8.0; };
  auto draw_subset = [&](int arity) {
    std::vector<int> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < arity; ++i) {
      const int j = i + static_cast<int>(rng.below(std::uint64_t(n - i)));
      std::swap(pool[std::size_t(i)], pool[std::size_t(j)]);
    }
    std::vector<int> verts(pool.begin(), pool.begin() + arity);
    std::sort(verts.begin(), verts.end());
    return verts;
  };

  std::set<std::vector<int>> seen;
  MultiwayInstance inst;
  inst.k = k;
  inst.terminals = terminals;

  if (kind == "graph-mc") {
    std::vector<CutEdge> edges;
    int attempts = 0;
    while (static_cast<int>(edges.size()) < m) {
      if (++attempts > 50 * m + 100)
        throw DomainError("cannot place that many distinct edges");
      std::vector<int> verts = draw_subset(2);
      if (!seen.insert(verts).second) continue;
      // halved split cost: a bichromatic edge pays its weight once overall
      edges.push_back({verts, dyadic_weight() / 2.0});
    }
    inst.oracle = make_hypergraph_cut_oracle(n, edges);
    return inst;
  }
  if (kind == "hypergraph-mc") {
    std::vector<EdgeCost> edges;
    int attempts = 0;
    while (static_cast<int>(edges.size()) < m) {
      if (++attempts > 50 * m + 100)
        throw DomainError("cannot place that many distinct edges");
      const int arity = std::min(n, 2 + static_cast<int>(rng.below(3)));
      std::vector<int> verts = draw_subset(arity);
      if (!seen.insert(verts).second) continue;
      std::vector<double> phi(std::size_t(arity) + 1, 0.0);
      for (int t = 0; t < arity; ++t) phi[std::size_t(t)] = double(t) / double(arity);
      edges.push_back(make_profile_edge(verts, dyadic_weight(), phi));
    }
    inst.oracle = make_decomposed_oracle(OracleKind::kHypergraphCutCount, n, std::move(edges));
    return inst;
  }
  if (kind == "coverage") {
    std::vector<std::vector<int>> sets;
    std::vector<double> weights;
    int attempts = 0;
    while (static_cast<int>(sets.size()) < m) {
      if (++attempts > 50 * m + 100)
        throw DomainError("cannot place that many distinct cover sets");
      const int arity = std::min(n, 1 + static_cast<int>(rng.below(6)));
      std::vector<int> verts = draw_subset(arity);
      if (!seen.insert(verts).second) continue;
      sets.push_back(verts);
      weights.push_back(dyadic_weight());
    }
    inst.oracle = make_coverage_oracle(n, sets, weights);
    return inst;
  }
  throw DomainError("unknown random family kind: " + kind);
}

}  // namespace submp
