#include "submp/relaxation.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "submp/common.h"
#include "submp/rng.h"
#include "submp/simplex.h"

namespace submp {

namespace {

constexpr std::size_t kSetLpColumnBudget = 400000;

FractionalPoint column_of(const FractionalAssignment& a, int l) {
  FractionalPoint y(a.x.size());
  for (std::size_t v = 0; v < a.x.size(); ++v) y[v] = a.x[v][std::size_t(l)];
  return y;
}

std::vector<double> project_row_simplex(const std::vector<double>& row) {
  // Euclidean projection onto {x >= 0, sum x = 1}
  std::vector<double> u = row;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double csum = 0.0, tau = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    csum += u[j];
    const double t = (csum - 1.0) / double(j + 1);
    if (u[j] - t > 0.0) tau = t;
  }
  std::vector<double> out(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) out[j] = std::max(0.0, row[j] - tau);
  // kill the last-ulp drift so downstream 1e-9 checks never see it
  double s = 0.0;
  for (double v : out) s += v;
  if (s > 0.0)
    for (double& v : out) v /= s;
  return out;
}

// Exact minimum of the relaxation via one distribution over sets per part:
// variables z[l][S] >= 0 with rows
//   sum_S z[l][S] = 1                      (one distribution per part)
//   sum_l sum_{S : v in S} z[l][S] = 1     (each vertex covered once)
//   sum_{S : t_i in S} z[i][S] = 1         (part i keeps its terminal)
// and cost sum f(S) z[l][S]; the vertex marginals of an optimal z form an
// optimal assignment because the extension is the convex closure.
struct SetLpOutcome {
  bool solved = false;
  double objective = 0.0;
  FractionalAssignment assignment;
};

SetLpOutcome solve_set_distribution_lp(const MultiwayInstance& inst) {
  SetLpOutcome out;
  const int n = inst.oracle.ground.n;
  const int k = inst.k;
  if (n > 18) return out;
  const std::size_t nsets = std::size_t(1) << n;
  if (std::size_t(k) * nsets > kSetLpColumnBudget) return out;

  std::vector<double> fval(nsets);
  for (Set s = 0; s < nsets; ++s) fval[std::size_t(s)] = inst.oracle.evaluate(s);

  LpProblem p;
  p.init(2 * k + n, k * static_cast<int>(nsets));
  auto col = [&](int l, Set s) { return l * static_cast<int>(nsets) + static_cast<int>(s); };
  for (int l = 0; l < k; ++l)
    for (Set s = 0; s < nsets; ++s) {
      const int c = col(l, s);
      p.c[std::size_t(c)] = fval[std::size_t(s)];
      p.at(l, c) = 1.0;
      for (int v = 0; v < n; ++v)
        if (set_has(s, v)) p.at(k + v, c) = 1.0;
    }
  for (int i = 0; i < k; ++i)
    for (Set s = 0; s < nsets; ++s)
      if (set_has(s, inst.terminals[std::size_t(i)])) p.at(k + n + i, col(i, s)) = 1.0;
  for (int r = 0; r < 2 * k + n; ++r) p.b[std::size_t(r)] = 1.0;

  const LpResult sol = solve_lp_dense(p);
  std::vector<std::vector<double>> x(std::size_t(n), std::vector<double>(std::size_t(k), 0.0));
  for (int l = 0; l < k; ++l)
    for (Set s = 0; s < nsets; ++s) {
      const double z = sol.x[std::size_t(col(l, s))];
      if (z <= 1e-15) continue;
      for (int v = 0; v < n; ++v)
        if (set_has(s, v)) x[std::size_t(v)][std::size_t(l)] += z;
    }
  out.solved = true;
  out.objective = sol.objective;
  out.assignment = project_feasible(inst, x);
  return out;
}

}  // namespace

void validate_assignment(const MultiwayInstance& inst, const FractionalAssignment& a,
                         double tol) {
  validate_instance(inst);
  const int n = inst.oracle.ground.n;
  if (static_cast<int>(a.x.size()) != n) throw DomainError("assignment row count mismatch");
  for (int v = 0; v < n; ++v) {
    if (static_cast<int>(a.x[std::size_t(v)].size()) != inst.k)
      throw DomainError("assignment column count mismatch");
    double sum = 0.0;
    for (double val : a.x[std::size_t(v)]) {
      if (!std::isfinite(val) || val < -tol || val > 1.0 + tol)
        throw DomainError("assignment entry outside [0,1]");
      sum += val;
    }
    if (std::abs(sum - 1.0) > tol) throw DomainError("assignment row does not sum to one");
  }
  for (int i = 0; i < inst.k; ++i)
    if (std::abs(a.x[std::size_t(inst.terminals[std::size_t(i)])][std::size_t(i)] - 1.0) > tol)
      throw DomainError("terminal row is not pinned to its part");
}

FractionalAssignment project_feasible(const MultiwayInstance& inst,
                                      const std::vector<std::vector<double>>& raw) {
  validate_instance(inst);
  const int n = inst.oracle.ground.n;
  if (static_cast<int>(raw.size()) != n) throw DomainError("assignment row count mismatch");
  std::vector<int> terminal_part(std::size_t(n), -1);
  for (int i = 0; i < inst.k; ++i) terminal_part[std::size_t(inst.terminals[std::size_t(i)])] = i;
  FractionalAssignment a;
  a.x.resize(std::size_t(n));
  for (int v = 0; v < n; ++v) {
    if (static_cast<int>(raw[std::size_t(v)].size()) != inst.k)
      throw DomainError("assignment column count mismatch");
    for (double val : raw[std::size_t(v)])
      if (!std::isfinite(val)) throw DomainError("assignment entry not finite");
    if (terminal_part[std::size_t(v)] >= 0) {
      a.x[std::size_t(v)].assign(std::size_t(inst.k), 0.0);
      a.x[std::size_t(v)][std::size_t(terminal_part[std::size_t(v)])] = 1.0;
    } else {
      a.x[std::size_t(v)] = project_row_simplex(raw[std::size_t(v)]);
    }
  }
  return a;
}

double relaxation_value(const MultiwayInstance& inst, const FractionalAssignment& a) {
  validate_assignment(inst, a);
  double total = 0.0;
  for (int l = 0; l < inst.k; ++l)
    total += lovasz_extension(inst.oracle, column_of(a, l));
  return total;
}

std::vector<double> subgradient_at(const SubmodularOracle& f, const FractionalPoint& y) {
  const LovaszChain chain = lovasz_chain(f, y);
  std::vector<double> g(y.size(), 0.0);
  for (std::size_t j = 0; j < chain.order.size(); ++j)
    g[std::size_t(chain.order[j])] = chain.marginals[j];
  return g;
}

SolveReport solve_submp_rel(const MultiwayInstance& inst, const SolveConfig& cfg) {
  validate_instance(inst);
  if (cfg.max_iters < 1) throw DomainError("iteration budget must be positive");
  if (!(cfg.tol > 0.0)) throw DomainError("tolerance must be positive");
  const int n = inst.oracle.ground.n;
  const int k = inst.k;
  int n_free = n - k;

  std::vector<std::vector<double>> raw(std::size_t(n),
                                       std::vector<double>(std::size_t(k), 1.0 / double(k)));
  FractionalAssignment x = project_feasible(inst, raw);

  SolveReport rep;
  rep.assignment = x;
  double best_val = relaxation_value(inst, x);
  rep.method = "subgradient";

  std::vector<std::vector<double>> g(std::size_t(n), std::vector<double>(std::size_t(k), 0.0));
  double gmax = 0.0;
  const int stall_window = 500;
  int iters = 0;
  for (int t = 0; t < cfg.max_iters; ++t) {
    double norm2 = 0.0;
    for (int l = 0; l < k; ++l) {
      const std::vector<double> gl = subgradient_at(inst.oracle, column_of(x, l));
      for (int v = 0; v < n; ++v) {
        g[std::size_t(v)][std::size_t(l)] = gl[std::size_t(v)];
        norm2 += gl[std::size_t(v)] * gl[std::size_t(v)];
      }
    }
    if (t < 10) gmax = std::max(gmax, std::sqrt(norm2));
    const double scale =
        cfg.step_scale > 0.0
            ? cfg.step_scale
            : (gmax > 0.0 ? std::sqrt(2.0 * double(std::max(n_free, 1))) / gmax : 1.0);
    const double eta = scale / std::sqrt(double(t + 1));
    for (int v = 0; v < n; ++v)
      for (int l = 0; l < k; ++l)
        raw[std::size_t(v)][std::size_t(l)] =
            x.x[std::size_t(v)][std::size_t(l)] - eta * g[std::size_t(v)][std::size_t(l)];
    x = project_feasible(inst, raw);
    const double val = relaxation_value(inst, x);
    if (val < best_val) {
      best_val = val;
      rep.assignment = x;
    }
    rep.trace.push_back(best_val);
    iters = t + 1;
    if (t >= stall_window &&
        rep.trace[std::size_t(t - stall_window)] - best_val < cfg.tol)
      break;
  }
  rep.iterations = iters;
  const double subgradient_best = best_val;

  // dictator candidates: every free vertex onto one part
  for (int l0 = 0; l0 < k; ++l0) {
    for (int v = 0; v < n; ++v) {
      std::fill(raw[std::size_t(v)].begin(), raw[std::size_t(v)].end(), 0.0);
      raw[std::size_t(v)][std::size_t(l0)] = 1.0;
    }
    const FractionalAssignment cand = project_feasible(inst, raw);
    const double val = relaxation_value(inst, cand);
    if (val < best_val) {
      best_val = val;
      rep.assignment = cand;
      rep.method = "dictator";
    }
  }

  if (cfg.exact_refine) {
    const SetLpOutcome lp = solve_set_distribution_lp(inst);
    if (lp.solved) {
      const double val = relaxation_value(inst, lp.assignment);
      if (val <= best_val) {
        best_val = val;
        rep.assignment = lp.assignment;
        rep.method = "set-distribution-lp";
      }
      rep.gap_estimate = std::max(0.0, best_val - lp.objective);
    } else {
      rep.gap_estimate =
          rep.trace.size() > std::size_t(stall_window)
              ? rep.trace[rep.trace.size() - 1 - std::size_t(stall_window)] - subgradient_best
              : 0.0;
    }
  }

  rep.value = relaxation_value(inst, rep.assignment);
  return rep;
}

}  // namespace submp
