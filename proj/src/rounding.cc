#include "submp/rounding.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "submp/common.h"
#include "submp/rng.h"

namespace submp {

namespace {

std::string format_set(Set s, int n) {
  std::ostringstream out;
  out << "{";
  bool first = true;
  for (int v = 0; v < n; ++v)
    if (set_has(s, v)) {
      if (!first) out << ",";
      out << v;
      first = false;
    }
  out << "}";
  return out.str();
}

double row_max(const FractionalAssignment& a, int v) {
  double best = 0.0;
  for (double val : a.x[std::size_t(v)]) best = std::max(best, val);
  return best;
}

// Integral over [lo, hi] of a function constant strictly between consecutive
// profile points; each clipped piece is evaluated at its own midpoint.
double integrate(const ThetaProfile& prof, double lo, double hi,
                 const std::function<double(double)>& integrand) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < prof.points.size(); ++i) {
    const double a = std::max(lo, prof.points[i]);
    const double b = std::min(hi, prof.points[i + 1]);
    if (b <= a) continue;
    total += (b - a) * integrand(0.5 * (a + b));
  }
  return total;
}

}  // namespace

Set upper_level_set(const FractionalAssignment& a, int l, double theta) {
  Set s = 0;
  for (std::size_t v = 0; v < a.x.size(); ++v)
    if (a.x[v][std::size_t(l)] > theta) s |= 1ull << v;
  return s;
}

Set leftover_set(const FractionalAssignment& a, double theta) {
  Set s = 0;
  for (std::size_t v = 0; v < a.x.size(); ++v)
    if (row_max(a, static_cast<int>(v)) <= theta) s |= 1ull << v;
  return s;
}

ThetaProfile theta_profile(const FractionalAssignment& a) {
  ThetaProfile prof;
  prof.points = {0.0, 0.5, 1.0};
  for (std::size_t v = 0; v < a.x.size(); ++v) {
    for (double val : a.x[v])
      prof.points.push_back(std::clamp(val, 0.0, 1.0));
    prof.points.push_back(std::clamp(1.0 - row_max(a, static_cast<int>(v)), 0.0, 1.0));
  }
  std::sort(prof.points.begin(), prof.points.end());
  // merge ulp-level near-duplicates (solver noise); dropped widths are far
  // below every tolerance used downstream
  prof.points.erase(std::unique(prof.points.begin(), prof.points.end(),
                                [](double a, double b) { return b - a < 1e-12; }),
                    prof.points.end());
  return prof;
}

Partition round_at(const MultiwayInstance& inst, const FractionalAssignment& a,
                   double theta, int fallback_terminal) {
  validate_assignment(inst, a);
  if (!(theta > 0.5) || !(theta <= 1.0))
    throw DomainError("threshold must lie in (1/2, 1]");
  if (fallback_terminal < 0 || fallback_terminal >= inst.k)
    throw DomainError("fallback terminal out of range");
  const int n = inst.oracle.ground.n;
  Partition p;
  p.label.assign(std::size_t(n), fallback_terminal);
  for (int v = 0; v < n; ++v)
    for (int l = 0; l < inst.k; ++l)
      if (a.x[std::size_t(v)][std::size_t(l)] > theta) {
        p.label[std::size_t(v)] = l;
        break;  // rows sum to one, so at most one coordinate clears 1/2
      }
  // theta = 1 would otherwise sweep the terminals into the fallback part
  for (int i = 0; i < inst.k; ++i) p.label[std::size_t(inst.terminals[std::size_t(i)])] = i;
  return p;
}

double lp_cost_exact(const MultiwayInstance& inst, const FractionalAssignment& a) {
  validate_assignment(inst, a);
  const ThetaProfile prof = theta_profile(a);
  double total = 0.0;
  for (int l = 0; l < inst.k; ++l)
    total += integrate(prof, 0.0, 1.0, [&](double th) {
      return inst.oracle.evaluate(upper_level_set(a, l, th));
    });
  return total;
}

double expected_cost_exact(const MultiwayInstance& inst, const FractionalAssignment& a) {
  validate_assignment(inst, a);
  const ThetaProfile prof = theta_profile(a);
  const double k = inst.k;
  double high = 0.0, low = 0.0;
  for (int l = 0; l < inst.k; ++l) {
    high += integrate(prof, 0.5, 1.0, [&](double th) {
      return inst.oracle.evaluate(upper_level_set(a, l, th));
    });
    low += integrate(prof, 0.0, 0.5, [&](double th) {
      // B(theta), the verts still unclaimed at 1 - theta
      const Set b = leftover_set(a, 1.0 - th);
      return inst.oracle.evaluate(upper_level_set(a, l, th) | b);
    });
  }
  return (2.0 - 2.0 / k) * high + (2.0 / k) * low;
}

double expected_cost_sampled(const MultiwayInstance& inst, const FractionalAssignment& a,
                             long long samples, std::uint64_t seed) {
  validate_assignment(inst, a);
  if (samples < 1) throw DomainError("sample count must be positive");
  Rng rng(seed);
  double total = 0.0;
  for (long long it = 0; it < samples; ++it) {
    const double theta = 0.5 + 0.5 * (1.0 - rng.uniform());  // uniform on (1/2, 1]
    const int fallback = static_cast<int>(rng.below(std::uint64_t(inst.k)));
    total += partition_cost(inst, round_at(inst, a, theta, fallback));
  }
  return total / double(samples);
}

BestRounding best_rounding(const MultiwayInstance& inst, const FractionalAssignment& a) {
  validate_assignment(inst, a);
  const ThetaProfile prof = theta_profile(a);
  BestRounding best;
  bool found = false;
  for (std::size_t i = 0; i + 1 < prof.points.size(); ++i) {
    const double lo = std::max(prof.points[i], 0.5);
    const double hi = std::min(prof.points[i + 1], 1.0);
    if (hi - lo < 1e-12) continue;  // outside (1/2,1] or an empty sliver
    const double theta = 0.5 * (lo + hi);
    for (int fb = 0; fb < inst.k; ++fb) {
      Partition p = round_at(inst, a, theta, fb);
      const double cost = partition_cost(inst, p);
      if (!found || cost < best.value) {
        best.partition = std::move(p);
        best.value = cost;
        best.theta = theta;
        best.fallback_terminal = fb;
        found = true;
      }
    }
  }
  return best;
}

DeltaResiduals delta_residuals(const MultiwayInstance& inst, const FractionalAssignment& a,
                               double delta) {
  validate_assignment(inst, a);
  if (delta < 0.5 - 1e-12 || delta > 1.0 + 1e-12)
    throw DomainError("delta must lie in [1/2, 1]");
  const ThetaProfile prof = theta_profile(a);
  const SubmodularOracle& f = inst.oracle;

  double parts = 0.0;
  for (int l = 0; l < inst.k; ++l)
    parts += integrate(prof, 0.0, delta,
                       [&](double th) { return f.evaluate(upper_level_set(a, l, th)); });
  const double whole = integrate(prof, 0.0, delta, [&](double th) {
    Set u = 0;
    for (int l = 0; l < inst.k; ++l) u |= upper_level_set(a, l, th);
    return f.evaluate(u);
  });
  const double leftover = integrate(
      prof, 0.0, 1.0, [&](double th) { return f.evaluate(leftover_set(a, th)); });
  double prefix = 0.0;
  for (int i = 1; i < inst.k; ++i)
    prefix += integrate(prof, 0.0, delta, [&](double th) {
      Set u = 0;
      for (int l = 0; l < i; ++l) u |= upper_level_set(a, l, th);
      return f.evaluate(u & upper_level_set(a, i, th));
    });

  DeltaResiduals res;
  res.parts_vs_union = parts - (whole + leftover);
  res.prefix_intersection = prefix - leftover;
  return res;
}

LemmaReport check_analysis_lemmas(const MultiwayInstance& inst, const FractionalAssignment& a) {
  validate_assignment(inst, a);
  const ThetaProfile prof = theta_profile(a);
  const SubmodularOracle& f = inst.oracle;
  const int k = inst.k;

  double parts_low = 0.0, aug_low = 0.0, prefix_low = 0.0;
  for (int l = 0; l < k; ++l) {
    parts_low += integrate(prof, 0.0, 0.5,
                           [&](double th) { return f.evaluate(upper_level_set(a, l, th)); });
    aug_low += integrate(prof, 0.0, 0.5, [&](double th) {
      return f.evaluate(upper_level_set(a, l, th) | leftover_set(a, 1.0 - th));
    });
    if (l >= 1)
      prefix_low += integrate(prof, 0.0, 0.5, [&](double th) {
        Set u = 0;
        for (int j = 0; j < l; ++j) u |= upper_level_set(a, j, th);
        return f.evaluate(u & upper_level_set(a, l, th));
      });
  }
  const double union_low = integrate(prof, 0.0, 0.5, [&](double th) {
    Set u = 0;
    for (int l = 0; l < k; ++l) u |= upper_level_set(a, l, th);
    return f.evaluate(u);
  });
  const double buffer_low = integrate(prof, 0.0, 0.5, [&](double th) {
    return f.evaluate(leftover_set(a, 1.0 - th));
  });
  const double leftover_full = integrate(
      prof, 0.0, 1.0, [&](double th) { return f.evaluate(leftover_set(a, th)); });
  const double lp = lp_cost_exact(inst, a);
  const double alg = expected_cost_exact(inst, a);

  LemmaReport rep;
  rep.lp_cost = lp;
  rep.expected_cost = alg;
  auto push = [&rep](const std::string& name, double lhs, double rhs) {
    rep.residuals.push_back({name, lhs, rhs, lhs - rhs});
  };
  push("prefix-intersection", prefix_low, leftover_full);
  push("parts-vs-union", parts_low, union_low + leftover_full);
  push("parts-vs-leftover", parts_low, buffer_low);
  push("parts-vs-augmented", parts_low, aug_low - double(k - 2) * buffer_low);
  push("approximation-factor", (2.0 - 2.0 / double(k)) * lp, alg);

  rep.min_residual = rep.residuals.front().residual;
  for (const LemmaResidual& r : rep.residuals)
    rep.min_residual = std::min(rep.min_residual, r.residual);

  if (rep.min_residual < -1e-9) {
    if (auto bad = check_submodularity(f)) {
      std::ostringstream msg;
      msg << "analysis inequality failed because the cost is not submodular: f("
          << format_set(bad->a, f.ground.n) << ") + f(" << format_set(bad->b, f.ground.n)
          << ") = " << bad->lhs << " < " << bad->rhs << " = f(union) + f(intersection)";
      throw DomainError(msg.str());
    }
  }
  return rep;
}

}  // namespace submp
