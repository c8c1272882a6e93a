#include "submp/mincsp.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "submp/common.h"

namespace submp {

namespace {

constexpr std::uint64_t kStateBudget = 1ull << 28;
constexpr std::uint64_t kResyncPeriod = 1ull << 20;
constexpr std::size_t kCompareColumnBudget = 200000;

bool is_forbidden(double v) { return std::isinf(v); }

std::size_t checked_table_size(int q, int arity) {
  std::size_t size = 1;
  for (int p = 0; p < arity; ++p) {
    size *= std::size_t(q);
    if (size > (std::size_t(1) << 26)) throw DomainError("edge table too large");
  }
  return size;
}

// Enumerates tuples alpha with alpha[p] drawn from choices[p], odometer order
// (leftmost position most significant), calling fn(alpha) for each.
template <class Fn>
void for_each_tuple(const std::vector<std::vector<int>>& choices, Fn&& fn) {
  const int a = static_cast<int>(choices.size());
  std::vector<int> pos(std::size_t(a), 0);
  std::vector<int> alpha(static_cast<std::size_t>(a));
  for (int p = 0; p < a; ++p) {
    if (choices[std::size_t(p)].empty()) return;
    alpha[std::size_t(p)] = choices[std::size_t(p)][0];
  }
  while (true) {
    fn(const_cast<const std::vector<int>&>(alpha));
    int p = a - 1;
    while (p >= 0 &&
           pos[std::size_t(p)] + 1 == static_cast<int>(choices[std::size_t(p)].size())) {
      pos[std::size_t(p)] = 0;
      alpha[std::size_t(p)] = choices[std::size_t(p)][0];
      --p;
    }
    if (p < 0) break;
    ++pos[std::size_t(p)];
    alpha[std::size_t(p)] = choices[std::size_t(p)][std::size_t(pos[std::size_t(p)])];
  }
}

}  // namespace

void validate_csp(const MinCspInstance& inst) {
  if (inst.q < 1) throw DomainError("label set must be nonempty");
  for (const CspVertex& v : inst.verts) {
    if (v.candidates.empty()) throw DomainError("vertex candidate list is empty");
    for (std::size_t i = 0; i < v.candidates.size(); ++i) {
      if (v.candidates[i] < 0 || v.candidates[i] >= inst.q)
        throw DomainError("candidate label out of range");
      if (i > 0 && v.candidates[i] <= v.candidates[i - 1])
        throw DomainError("candidate list must be strictly ascending");
    }
    if (v.pin >= inst.q) throw DomainError("pin label out of range");
  }
  const int nv = static_cast<int>(inst.verts.size());
  for (const CspEdge& e : inst.edges) {
    if (e.verts.empty()) throw DomainError("edge has no verts");
    std::vector<int> sorted = e.verts;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t j = 0; j < sorted.size(); ++j) {
      if (sorted[j] < 0 || sorted[j] >= nv) throw DomainError("edge vertex out of range");
      if (j > 0 && sorted[j] == sorted[j - 1]) throw DomainError("edge lists a vertex twice");
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight))
      throw DomainError("edge weight must be positive and finite");
    if (e.table.size() != checked_table_size(inst.q, static_cast<int>(e.verts.size())))
      throw DomainError("edge table size mismatch");
    for (double v : e.table)
      if (!(v >= 0.0))  // also rejects NaN
        throw DomainError("edge cost must be nonnegative or forbidden");
  }
}

std::vector<int> live_labels(const MinCspInstance& inst, int v) {
  const CspVertex& vert = inst.verts[std::size_t(v)];
  if (vert.pin < 0) return vert.candidates;
  if (std::find(vert.candidates.begin(), vert.candidates.end(), vert.pin) !=
      vert.candidates.end())
    return {vert.pin};
  return {};
}

std::size_t edge_table_index(const MinCspInstance& inst, const CspEdge& e,
                             const std::vector<int>& alpha) {
  std::size_t idx = 0;
  for (std::size_t p = 0; p < e.verts.size(); ++p)
    idx = idx * std::size_t(inst.q) + std::size_t(alpha[p]);
  return idx;
}

BasicLp build_basic_lp(const MinCspInstance& inst) {
  validate_csp(inst);
  const int nv = static_cast<int>(inst.verts.size());
  BasicLp out;
  out.vertex_var.assign(std::size_t(nv), std::vector<int>(std::size_t(inst.q), -1));
  int cols = 0;
  std::vector<std::vector<int>> live(static_cast<std::size_t>(nv));
  for (int v = 0; v < nv; ++v) {
    live[std::size_t(v)] = live_labels(inst, v);
    if (live[std::size_t(v)].empty())
      throw InfeasibleError("a vertex has no allowed label", 1.0);
    for (int l : live[std::size_t(v)]) out.vertex_var[std::size_t(v)][std::size_t(l)] = cols++;
  }
  out.edge_alphas.resize(inst.edges.size());
  out.edge_var_base.resize(inst.edges.size());
  int rows = nv;
  for (std::size_t e = 0; e < inst.edges.size(); ++e) {
    const CspEdge& edge = inst.edges[e];
    std::vector<std::vector<int>> choices;
    for (int v : edge.verts) {
      choices.push_back(live[std::size_t(v)]);
      rows += static_cast<int>(live[std::size_t(v)].size());
    }
    for_each_tuple(choices, [&](const std::vector<int>& alpha) {
      if (!is_forbidden(edge.table[edge_table_index(inst, edge, alpha)]))
        out.edge_alphas[e].push_back(alpha);
    });
    if (out.edge_alphas[e].empty())
      throw InfeasibleError("an edge forbids every allowed tuple", 1.0);
    out.edge_var_base[e] = cols;
    cols += static_cast<int>(out.edge_alphas[e].size());
  }

  out.lp.init(rows, cols);
  int r = 0;
  for (int v = 0; v < nv; ++v) {
    for (int l : live[std::size_t(v)])
      out.lp.at(r, out.vertex_var[std::size_t(v)][std::size_t(l)]) = 1.0;
    out.lp.b[std::size_t(r)] = 1.0;
    ++r;
  }
  for (std::size_t e = 0; e < inst.edges.size(); ++e) {
    const CspEdge& edge = inst.edges[e];
    for (std::size_t p = 0; p < edge.verts.size(); ++p) {
      for (int l : live[std::size_t(edge.verts[p])]) {
        out.lp.at(r, out.vertex_var[std::size_t(edge.verts[p])][std::size_t(l)]) = 1.0;
        for (std::size_t ai = 0; ai < out.edge_alphas[e].size(); ++ai)
          if (out.edge_alphas[e][ai][p] == l)
            out.lp.at(r, out.edge_var_base[e] + static_cast<int>(ai)) = -1.0;
        out.lp.b[std::size_t(r)] = 0.0;
        ++r;
      }
    }
    for (std::size_t ai = 0; ai < out.edge_alphas[e].size(); ++ai)
      out.lp.c[std::size_t(out.edge_var_base[e] + static_cast<int>(ai))] =
          edge.weight * edge.table[edge_table_index(inst, edge, out.edge_alphas[e][ai])];
  }
  return out;
}

BasicLpSolution solve_basic_lp(const MinCspInstance& inst) {
  const BasicLp built = build_basic_lp(inst);
  const LpResult sol = solve_lp_dense(built.lp);
  const int nv = static_cast<int>(inst.verts.size());
  BasicLpSolution out;
  out.vertex_marginals.assign(std::size_t(nv), std::vector<double>(std::size_t(inst.q), 0.0));
  for (int v = 0; v < nv; ++v)
    for (int l = 0; l < inst.q; ++l) {
      const int col = built.vertex_var[std::size_t(v)][std::size_t(l)];
      if (col >= 0) out.vertex_marginals[std::size_t(v)][std::size_t(l)] =
          std::max(0.0, sol.x[std::size_t(col)]);
    }
  out.edge_dists.resize(inst.edges.size());
  for (std::size_t e = 0; e < inst.edges.size(); ++e) {
    for (std::size_t ai = 0; ai < built.edge_alphas[e].size(); ++ai) {
      out.edge_dists[e].alphas.push_back(built.edge_alphas[e][ai]);
      out.edge_dists[e].prob.push_back(
          std::max(0.0, sol.x[std::size_t(built.edge_var_base[e] + static_cast<int>(ai))]));
    }
  }
  const CertificateReport audit = check_certificate(inst, out);
  out.objective = audit.objective;
  out.max_residual = audit.max_residual;
  return out;
}

CertificateReport check_certificate(const MinCspInstance& inst, const BasicLpSolution& cert) {
  validate_csp(inst);
  const int nv = static_cast<int>(inst.verts.size());
  if (static_cast<int>(cert.vertex_marginals.size()) != nv)
    throw DomainError("certificate vertex rows mismatch");
  if (cert.edge_dists.size() != inst.edges.size())
    throw DomainError("certificate edge distributions mismatch");

  CertificateReport rep;
  double worst = 0.0;
  std::ostringstream detail;
  auto record = [&](double residual, const std::string& what) {
    if (residual > worst) {
      worst = residual;
      detail.str(what);
    }
  };

  for (int v = 0; v < nv; ++v) {
    const auto& row = cert.vertex_marginals[std::size_t(v)];
    if (static_cast<int>(row.size()) != inst.q)
      throw DomainError("certificate vertex row has wrong width");
    const std::vector<int> live = live_labels(inst, v);
    double sum = 0.0;
    for (int l = 0; l < inst.q; ++l) {
      const double x = row[std::size_t(l)];
      if (!std::isfinite(x)) throw DomainError("certificate entry not finite");
      sum += x;
      if (x < 0.0) record(-x, "negative vertex mass at vertex " + std::to_string(v));
      if (x > 0.0 && std::find(live.begin(), live.end(), l) == live.end())
        record(x, "mass outside the candidate list at vertex " + std::to_string(v));
    }
    record(std::abs(sum - 1.0), "vertex " + std::to_string(v) + " row sum off");
  }

  double objective = 0.0;
  for (std::size_t e = 0; e < inst.edges.size(); ++e) {
    const CspEdge& edge = inst.edges[e];
    const EdgeDistribution& dist = cert.edge_dists[e];
    if (dist.alphas.size() != dist.prob.size())
      throw DomainError("certificate edge distribution shape mismatch");
    double mass = 0.0;
    std::vector<std::vector<double>> marg(edge.verts.size(),
                                          std::vector<double>(std::size_t(inst.q), 0.0));
    for (std::size_t ai = 0; ai < dist.alphas.size(); ++ai) {
      const std::vector<int>& alpha = dist.alphas[ai];
      if (alpha.size() != edge.verts.size())
        throw DomainError("certificate tuple arity mismatch");
      for (int l : alpha)
        if (l < 0 || l >= inst.q) throw DomainError("certificate tuple label out of range");
      const double p = dist.prob[ai];
      if (!std::isfinite(p)) throw DomainError("certificate probability not finite");
      if (p < 0.0) record(-p, "negative tuple mass at edge " + std::to_string(e));
      mass += p;
      const double cost = edge.table[edge_table_index(inst, edge, alpha)];
      if (is_forbidden(cost)) {
        if (p > 0.0) record(p, "mass on a forbidden tuple at edge " + std::to_string(e));
      } else {
        objective += edge.weight * p * cost;
      }
      for (std::size_t pidx = 0; pidx < alpha.size(); ++pidx)
        marg[pidx][std::size_t(alpha[pidx])] += p;
    }
    record(std::abs(mass - 1.0), "edge " + std::to_string(e) + " distribution mass off");
    for (std::size_t pidx = 0; pidx < edge.verts.size(); ++pidx)
      for (int l = 0; l < inst.q; ++l)
        record(std::abs(marg[pidx][std::size_t(l)] -
                        cert.vertex_marginals[std::size_t(edge.verts[pidx])][std::size_t(l)]),
               "marginal mismatch at edge " + std::to_string(e) + " position " +
                   std::to_string(pidx) + " label " + std::to_string(l));
  }

  rep.objective = objective;
  rep.max_residual = worst;
  rep.feasible = worst <= 1e-7;
  rep.detail = rep.feasible ? "" : detail.str();
  return rep;
}

CspBruteResult brute_force_csp(const MinCspInstance& inst) {
  validate_csp(inst);
  const int nv = static_cast<int>(inst.verts.size());
  std::vector<std::vector<int>> live(static_cast<std::size_t>(nv));
  std::uint64_t total = 1;
  for (int v = 0; v < nv; ++v) {
    live[std::size_t(v)] = live_labels(inst, v);
    if (live[std::size_t(v)].empty())
      throw InfeasibleError("a vertex has no allowed label", 1.0);
    total *= std::uint64_t(live[std::size_t(v)].size());
    if (total > kStateBudget)
      throw CapacityError("label enumeration exceeds the 2^28 state budget");
  }

  std::vector<int> digit(std::size_t(nv), 0);
  std::vector<int> label(static_cast<std::size_t>(nv));
  for (int v = 0; v < nv; ++v) label[std::size_t(v)] = live[std::size_t(v)][0];

  // per-edge rolling table index plus position weights
  const int ne = static_cast<int>(inst.edges.size());
  std::vector<std::vector<std::pair<int, std::size_t>>> touch(static_cast<std::size_t>(nv));
  std::vector<std::size_t> idx(std::size_t(ne), 0);
  for (int e = 0; e < ne; ++e) {
    const CspEdge& edge = inst.edges[std::size_t(e)];
    std::size_t w = 1;
    for (std::size_t p = edge.verts.size(); p-- > 0;) {
      touch[std::size_t(edge.verts[p])].push_back({e, w});
      w *= std::size_t(inst.q);
    }
  }
  auto contribution = [&](int e) {
    const CspEdge& edge = inst.edges[std::size_t(e)];
    return edge.table[idx[std::size_t(e)]];
  };
  double finite_total = 0.0;
  int forbidden = 0;
  std::vector<char> forb(std::size_t(ne), 0);
  auto resync = [&] {
    finite_total = 0.0;
    forbidden = 0;
    for (int e = 0; e < ne; ++e) {
      const CspEdge& edge = inst.edges[std::size_t(e)];
      idx[std::size_t(e)] = 0;
      for (std::size_t p = 0; p < edge.verts.size(); ++p)
        idx[std::size_t(e)] = idx[std::size_t(e)] * std::size_t(inst.q) +
                              std::size_t(label[std::size_t(edge.verts[p])]);
      const double c = contribution(e);
      forb[std::size_t(e)] = is_forbidden(c) ? 1 : 0;
      if (forb[std::size_t(e)])
        ++forbidden;
      else
        finite_total += inst.edges[std::size_t(e)].weight * c;
    }
  };
  resync();

  auto exact_value = [&]() {
    double t = 0.0;
    for (int e = 0; e < ne; ++e) {
      const CspEdge& edge = inst.edges[std::size_t(e)];
      std::size_t ix = 0;
      for (std::size_t p = 0; p < edge.verts.size(); ++p)
        ix = ix * std::size_t(inst.q) + std::size_t(label[std::size_t(edge.verts[p])]);
      t += edge.weight * edge.table[ix];
    }
    return t;
  };

  auto relabel = [&](int v, int to) {
    const int from = label[std::size_t(v)];
    label[std::size_t(v)] = to;
    for (const auto& [e, w] : touch[std::size_t(v)]) {
      const double before = contribution(e);
      idx[std::size_t(e)] += (std::size_t(to) - std::size_t(from)) * w;
      const double after = contribution(e);
      const double weight = inst.edges[std::size_t(e)].weight;
      if (forb[std::size_t(e)]) {
        --forbidden;
        forb[std::size_t(e)] = 0;
      } else {
        finite_total -= weight * before;
      }
      if (is_forbidden(after)) {
        ++forbidden;
        forb[std::size_t(e)] = 1;
      } else {
        finite_total += weight * after;
      }
    }
  };

  CspBruteResult best;
  best.value = kForbidden;
  bool found = false;
  std::uint64_t since = 0;
  for (std::uint64_t it = 0; it < total; ++it) {
    if (++since >= kResyncPeriod) {
      resync();
      since = 0;
    }
    if (forbidden == 0 && (!found || finite_total < best.value - 1e-9)) {
      const double ex = exact_value();
      if (!found || ex < best.value) {
        best.value = ex;
        best.labels = label;
        found = true;
      }
    }
    if (it + 1 == total) break;
    int v = nv - 1;
    while (digit[std::size_t(v)] + 1 == static_cast<int>(live[std::size_t(v)].size())) {
      digit[std::size_t(v)] = 0;
      relabel(v, live[std::size_t(v)][0]);
      --v;
    }
    ++digit[std::size_t(v)];
    relabel(v, live[std::size_t(v)][std::size_t(digit[std::size_t(v)])]);
  }
  if (!found) throw InfeasibleError("every labeling hits a forbidden tuple", 1.0);
  best.states = total;
  return best;
}

MinCspInstance submp_to_mincsp(const MultiwayInstance& inst) {
  validate_instance(inst);
  if (!inst.oracle.decomposed())
    throw DomainError("bridging needs a decomposed cost; explicit tables have no edge terms");
  MinCspInstance out;
  out.q = inst.k;
  const int n = inst.oracle.ground.n;
  out.verts.resize(std::size_t(n));
  for (int v = 0; v < n; ++v) {
    CspVertex& vert = out.verts[std::size_t(v)];
    vert.candidates.resize(std::size_t(inst.k));
    for (int l = 0; l < inst.k; ++l) vert.candidates[std::size_t(l)] = l;
  }
  for (int i = 0; i < inst.k; ++i) out.verts[std::size_t(inst.terminals[std::size_t(i)])].pin = i;

  for (std::size_t ei = 0; ei < inst.oracle.edges.size(); ++ei) {
    const EdgeCost& e = inst.oracle.edges[ei];
    const int a = e.arity();
    // the bridge is only faithful when each term is submodular on its verts
    for (Set s = 0; s < (std::size_t(1) << a); ++s)
      for (int i = 0; i < a; ++i) {
        if (set_has(s, i)) continue;
        for (int j = i + 1; j < a; ++j) {
          if (set_has(s, j)) continue;
          const double lhs = e.table[std::size_t(s | (1ull << i))] +
                             e.table[std::size_t(s | (1ull << j))];
          const double rhs =
              e.table[std::size_t(s | (1ull << i) | (1ull << j))] + e.table[std::size_t(s)];
          if (lhs < rhs - 1e-9)
            throw DomainError("cost term " + std::to_string(ei) +
                              " is not submodular on its verts");
        }
      }
    CspEdge edge;
    edge.verts = e.verts;
    edge.weight = e.weight;
    edge.table.assign(checked_table_size(inst.k, a), 0.0);
    std::vector<std::vector<int>> choices(static_cast<std::size_t>(a));
    for (int p = 0; p < a; ++p)
      for (int l = 0; l < inst.k; ++l) choices[std::size_t(p)].push_back(l);
    std::vector<Set> classes(static_cast<std::size_t>(inst.k));
    std::size_t next = 0;
    for_each_tuple(choices, [&](const std::vector<int>& alpha) {
      std::fill(classes.begin(), classes.end(), 0);
      for (int p = 0; p < a; ++p) classes[std::size_t(alpha[std::size_t(p)])] |= 1ull << p;
      double cost = 0.0;
      for (int l = 0; l < inst.k; ++l) cost += e.table[std::size_t(classes[std::size_t(l)])];
      edge.table[next++] = cost;
    });
    out.edges.push_back(std::move(edge));
  }
  return out;
}

CompareReport compare_relaxations(const MultiwayInstance& inst, double separation_tol) {
  validate_instance(inst);
  const MinCspInstance csp = submp_to_mincsp(inst);
  const BasicLpSolution basic = solve_basic_lp(csp);

  const int n = inst.oracle.ground.n;
  const int k = inst.k;
  // per-edge set-distribution LP for the extension side
  std::size_t zcols = 0;
  for (const EdgeCost& e : inst.oracle.edges) zcols += std::size_t(k) << e.arity();
  if (std::size_t(n) * std::size_t(k) + zcols > kCompareColumnBudget)
    throw CapacityError("extension-side distribution LP exceeds the column budget");

  int rows = n + k;
  for (const EdgeCost& e : inst.oracle.edges) rows += k + k * e.arity();
  const int ycols = n * k;
  LpProblem p;
  p.init(rows, ycols + static_cast<int>(zcols));
  auto ycol = [&](int v, int l) { return v * k + l; };
  int r = 0;
  for (int v = 0; v < n; ++v) {
    for (int l = 0; l < k; ++l) p.at(r, ycol(v, l)) = 1.0;
    p.b[std::size_t(r)] = 1.0;
    ++r;
  }
  for (int i = 0; i < k; ++i) {
    p.at(r, ycol(inst.terminals[std::size_t(i)], i)) = 1.0;
    p.b[std::size_t(r)] = 1.0;
    ++r;
  }
  int zbase = ycols;
  for (const EdgeCost& e : inst.oracle.edges) {
    const int a = e.arity();
    const int per_label = 1 << a;
    for (int l = 0; l < k; ++l) {
      const int block = zbase + l * per_label;
      for (Set s = 0; s < (std::size_t(1) << a); ++s) {
        p.at(r, block + static_cast<int>(s)) = 1.0;
        p.c[std::size_t(block + static_cast<int>(s))] = e.weight * e.table[std::size_t(s)];
      }
      p.b[std::size_t(r)] = 1.0;
      ++r;
      for (int pos = 0; pos < a; ++pos) {
        for (Set s = 0; s < (std::size_t(1) << a); ++s)
          if (set_has(s, pos)) p.at(r, block + static_cast<int>(s)) = 1.0;
        p.at(r, ycol(e.verts[std::size_t(pos)], l)) = -1.0;
        p.b[std::size_t(r)] = 0.0;
        ++r;
      }
    }
    zbase += k * per_label;
  }
  const LpResult sol = solve_lp_dense(p);

  CompareReport rep;
  rep.lovasz_value = sol.objective;
  rep.basic_value = basic.objective;
  rep.delta = rep.basic_value - rep.lovasz_value;
  rep.separated = rep.delta > separation_tol;
  return rep;
}

}  // namespace submp
