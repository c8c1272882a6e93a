#include "submp/brute_force.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "submp/common.h"

namespace submp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kStateBudget = 1ull << 28;
constexpr std::uint64_t kResyncPeriod = 1ull << 20;

// k^digits, or CapacityError past the enumeration budget.
std::uint64_t counted_states(int k, int digits) {
  std::uint64_t total = 1;
  for (int i = 0; i < digits; ++i) {
    total *= std::uint64_t(k);
    if (total > kStateBudget)
      throw CapacityError("label enumeration exceeds the 2^28 state budget");
  }
  return total;
}

double exact_cost(const SubmodularOracle& f, int k, const std::vector<int>& label) {
  if (f.decomposed()) {
    double total = 0.0;
    std::vector<Set> m;
    for (const EdgeCost& ec : f.edges) {
      m.assign(std::size_t(k), 0);
      for (int j = 0; j < ec.arity(); ++j)
        m[std::size_t(label[std::size_t(ec.verts[std::size_t(j)])])] |= 1ull << j;
      double s = 0.0;
      for (int l = 0; l < k; ++l) s += ec.table[std::size_t(m[std::size_t(l)])];
      total += ec.weight * s;
    }
    return total;
  }
  std::vector<Set> parts(std::size_t(k), 0);
  for (int v = 0; v < f.ground.n; ++v) parts[std::size_t(label[std::size_t(v)])] |= 1ull << v;
  double total = 0.0;
  for (int l = 0; l < k; ++l) total += f.table[std::size_t(parts[std::size_t(l)])];
  return total;
}

// Incremental cost of a full labeling; relabel touches only incident terms.
class DecomposedTracker {
 public:
  DecomposedTracker(const SubmodularOracle& f, int k) : f_(&f), k_(k) {}

  void reset(const std::vector<int>& label) {
    masks_.assign(f_->edges.size() * std::size_t(k_), 0);
    for (int v = 0; v < f_->ground.n; ++v)
      for (const auto& [e, bit] : f_->incidence[std::size_t(v)])
        masks_[slot(e, label[std::size_t(v)])] |= 1ull << bit;
    total_ = 0.0;
    for (std::size_t e = 0; e < f_->edges.size(); ++e) {
      const EdgeCost& ec = f_->edges[e];
      double s = 0.0;
      for (int l = 0; l < k_; ++l) s += ec.table[std::size_t(masks_[slot(int(e), l)])];
      total_ += ec.weight * s;
    }
  }

  void relabel(int v, int from, int to) {
    for (const auto& [e, bit] : f_->incidence[std::size_t(v)]) {
      const EdgeCost& ec = f_->edges[std::size_t(e)];
      const Set b = 1ull << bit;
      Set& mo = masks_[slot(e, from)];
      total_ += ec.weight * (ec.table[std::size_t(mo ^ b)] - ec.table[std::size_t(mo)]);
      mo ^= b;
      Set& mn = masks_[slot(e, to)];
      total_ += ec.weight * (ec.table[std::size_t(mn | b)] - ec.table[std::size_t(mn)]);
      mn |= b;
    }
  }

  double total() const { return total_; }
  double exact(const std::vector<int>& label) const { return exact_cost(*f_, k_, label); }

 private:
  std::size_t slot(int e, int l) const {
    return std::size_t(e) * std::size_t(k_) + std::size_t(l);
  }
  const SubmodularOracle* f_;
  int k_;
  std::vector<Set> masks_;
  double total_ = 0.0;
};

class TableTracker {
 public:
  TableTracker(const SubmodularOracle& f, int k) : f_(&f), k_(k) {}

  void reset(const std::vector<int>& label) {
    parts_.assign(std::size_t(k_), 0);
    for (int v = 0; v < f_->ground.n; ++v)
      parts_[std::size_t(label[std::size_t(v)])] |= 1ull << v;
    total_ = 0.0;
    for (int l = 0; l < k_; ++l) total_ += f_->table[std::size_t(parts_[std::size_t(l)])];
  }

  void relabel(int v, int from, int to) {
    const Set b = 1ull << v;
    Set& mo = parts_[std::size_t(from)];
    total_ += f_->table[std::size_t(mo ^ b)] - f_->table[std::size_t(mo)];
    mo ^= b;
    Set& mn = parts_[std::size_t(to)];
    total_ += f_->table[std::size_t(mn | b)] - f_->table[std::size_t(mn)];
    mn |= b;
  }

  double total() const { return total_; }
  double exact(const std::vector<int>& label) const { return exact_cost(*f_, k_, label); }

 private:
  const SubmodularOracle* f_;
  int k_;
  std::vector<Set> parts_;
  double total_ = 0.0;
};

struct SearchBest {
  double value = kInf;
  std::vector<int> labels;
};

// Enumerates label vectors over the units (each unit takes one label shared
// by its members) in lexicographic order for indices [begin, end). Keeps the
// first strict minimizer, so the lexicographically smallest survives ties.
template <class Tracker>
void scan_chunk(const MultiwayInstance& inst, const std::vector<std::vector<int>>& units,
                const std::vector<int>& base_label, std::uint64_t begin, std::uint64_t end,
                SearchBest* best) {
  const int k = inst.k;
  const int nu = static_cast<int>(units.size());
  std::vector<int> digit(std::size_t(nu), 0);
  std::vector<int> label = base_label;
  std::uint64_t rem = begin;
  for (int i = nu - 1; i >= 0; --i) {
    digit[std::size_t(i)] = static_cast<int>(rem % std::uint64_t(k));
    rem /= std::uint64_t(k);
    for (int v : units[std::size_t(i)]) label[std::size_t(v)] = digit[std::size_t(i)];
  }
  Tracker tr(inst.oracle, k);
  tr.reset(label);
  std::uint64_t since_resync = 0;
  for (std::uint64_t it = begin; it < end; ++it) {
    if (++since_resync >= kResyncPeriod) {
      tr.reset(label);  // shed accumulated float drift
      since_resync = 0;
    }
    if (tr.total() < best->value - 1e-9) {
      const double ex = tr.exact(label);
      if (ex < best->value) {
        best->value = ex;
        best->labels = label;
      }
    }
    if (it + 1 == end) break;
    int pos = nu - 1;
    while (digit[std::size_t(pos)] == k - 1) {
      for (int v : units[std::size_t(pos)]) tr.relabel(v, k - 1, 0);
      for (int v : units[std::size_t(pos)]) label[std::size_t(v)] = 0;
      digit[std::size_t(pos)] = 0;
      --pos;
    }
    const int old = digit[std::size_t(pos)];
    for (int v : units[std::size_t(pos)]) tr.relabel(v, old, old + 1);
    for (int v : units[std::size_t(pos)]) label[std::size_t(v)] = old + 1;
    ++digit[std::size_t(pos)];
  }
}

BruteForceResult scan_all(const MultiwayInstance& inst,
                          const std::vector<std::vector<int>>& units,
                          const std::vector<int>& base_label, int threads) {
  const std::uint64_t total = counted_states(inst.k, static_cast<int>(units.size()));
  const std::uint64_t nt = std::min<std::uint64_t>(std::uint64_t(std::max(threads, 1)), total);
  std::vector<SearchBest> bests(static_cast<std::size_t>(nt));
  auto run = [&](std::uint64_t t) {
    const std::uint64_t chunk = (total + nt - 1) / nt;
    const std::uint64_t begin = t * chunk;
    const std::uint64_t end = std::min(total, begin + chunk);
    if (begin >= end) return;
    if (inst.oracle.decomposed())
      scan_chunk<DecomposedTracker>(inst, units, base_label, begin, end,
                                    &bests[std::size_t(t)]);
    else
      scan_chunk<TableTracker>(inst, units, base_label, begin, end, &bests[std::size_t(t)]);
  };
  if (nt == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (std::uint64_t t = 0; t < nt; ++t) pool.emplace_back(run, t);
    for (auto& th : pool) th.join();
  }
  const SearchBest* win = nullptr;
  for (const SearchBest& cand : bests) {
    if (cand.labels.empty()) continue;
    if (win == nullptr || cand.value < win->value ||
        (cand.value == win->value && cand.labels < win->labels))
      win = &cand;
  }
  BruteForceResult res;
  res.partition.label = win->labels;
  res.value = win->value;
  res.states = total;
  return res;
}

struct SymmetricSetup {
  std::vector<int> base_label;          // pinned vertices labeled, free hold -1
  std::vector<std::vector<int>> units;  // free orbits, ascending orbit id
};

SymmetricSetup symmetric_setup(const MultiwayInstance& inst, const SymmetrySpec& sym) {
  const int n = inst.oracle.ground.n;
  const Orbits orb = compute_orbits(n, sym);
  std::vector<int> orbit_pin(orb.members.size(), -1);
  for (int i = 0; i < inst.k; ++i) {
    int& pin = orbit_pin[std::size_t(orb.orbit_of[std::size_t(inst.terminals[std::size_t(i)])])];
    if (pin >= 0) throw DomainError("symmetry maps one terminal onto another");
    pin = i;
  }
  SymmetricSetup setup;
  setup.base_label.assign(std::size_t(n), -1);
  for (std::size_t w = 0; w < orb.members.size(); ++w) {
    if (orbit_pin[w] >= 0)
      for (int v : orb.members[w]) setup.base_label[std::size_t(v)] = orbit_pin[w];
    else
      setup.units.push_back(orb.members[w]);
  }
  return setup;
}

// ---- branch and bound over orbit labelings ----
//
// Needs every edge term to carry a cardinality profile and every flag vertex
// to be pre-pinned; then the per-label local cost is a concave function of
// the count of that label inside the edge, and sending all of an edge's
// unassigned verts to a single label is the cheapest completion.

struct BBEdge {
  double weight = 0.0;
  std::vector<const double*> psi;  // per label, indexed by assigned count
  std::vector<int> count;
  int rem = 0;
};

class BranchBound {
 public:
  BranchBound(const MultiwayInstance& inst, const SymmetricSetup& setup)
      : inst_(inst), setup_(setup), k_(inst.k) {
    const SubmodularOracle& f = inst.oracle;
    edges_.resize(f.edges.size());
    for (std::size_t e = 0; e < f.edges.size(); ++e) {
      const EdgeCost& ec = f.edges[e];
      if (!ec.has_profile())
        throw CapacityError("symmetric search too large and a cost term has no profile");
      BBEdge& be = edges_[e];
      be.weight = ec.weight;
      be.count.assign(std::size_t(k_), 0);
      be.psi.assign(std::size_t(k_), ec.phi_out.data());
      if (ec.flag_pos >= 0) {
        const int flag_vertex = ec.verts[std::size_t(ec.flag_pos)];
        const int flag_label = setup.base_label[std::size_t(flag_vertex)];
        if (flag_label < 0)
          throw CapacityError("symmetric search too large and a flag vertex is unpinned");
        be.psi[std::size_t(flag_label)] = ec.phi_in.data();
      }
    }
    // seed counts with the pinned vertices; flags stay out of the counts
    for (int v = 0; v < f.ground.n; ++v) {
      const int l = setup.base_label[std::size_t(v)];
      if (l < 0) continue;
      for (const auto& [e, bit] : f.incidence[std::size_t(v)]) {
        if (f.edges[std::size_t(e)].flag_pos == bit) continue;
        ++edges_[std::size_t(e)].count[std::size_t(l)];
      }
    }
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const EdgeCost& ec = f.edges[e];
      edges_[e].rem = ec.arity() - (ec.flag_pos >= 0 ? 1 : 0);
      for (int l = 0; l < k_; ++l) edges_[e].rem -= edges_[e].count[std::size_t(l)];
      double s = 0.0;
      for (int l = 0; l < k_; ++l)
        s += edges_[e].psi[std::size_t(l)][std::size_t(edges_[e].count[std::size_t(l)])];
      total_ += edges_[e].weight * s;
    }
    label_ = setup.base_label;
  }

  BruteForceResult run() {
    best_.value = kInf;
    nodes_ = 0;
    dfs(0);
    BruteForceResult res;
    res.partition.label = best_.labels;
    res.value = best_.value;
    res.states = nodes_;
    return res;
  }

 private:
  void apply(int unit, int l, int dir) {
    for (int v : setup_.units[std::size_t(unit)]) {
      label_[std::size_t(v)] = dir > 0 ? l : -1;
      for (const auto& [e, bit] : inst_.oracle.incidence[std::size_t(v)]) {
        (void)bit;
        BBEdge& be = edges_[std::size_t(e)];
        int& c = be.count[std::size_t(l)];
        const double* psi = be.psi[std::size_t(l)];
        if (dir > 0) {
          total_ += be.weight * (psi[std::size_t(c + 1)] - psi[std::size_t(c)]);
          ++c;
          --be.rem;
        } else {
          total_ += be.weight * (psi[std::size_t(c - 1)] - psi[std::size_t(c)]);
          --c;
          ++be.rem;
        }
      }
    }
  }

  double lower_bound() const {
    double bound = total_;
    for (const BBEdge& be : edges_) {
      if (be.rem == 0) continue;
      double cheapest = kInf;
      for (int l = 0; l < k_; ++l) {
        const double* psi = be.psi[std::size_t(l)];
        const int c = be.count[std::size_t(l)];
        cheapest = std::min(cheapest, psi[std::size_t(c + be.rem)] - psi[std::size_t(c)]);
      }
      bound += be.weight * cheapest;
    }
    return bound;
  }

  void dfs(int depth) {
    ++nodes_;
    if (depth == static_cast<int>(setup_.units.size())) {
      if (total_ < best_.value - 1e-9) {
        const double ex = exact_cost(inst_.oracle, k_, label_);
        if (ex < best_.value) {
          best_.value = ex;
          best_.labels = label_;
        }
      }
      return;
    }
    if (lower_bound() >= best_.value - 1e-9) return;
    for (int l = 0; l < k_; ++l) {
      apply(depth, l, +1);
      dfs(depth + 1);
      apply(depth, l, -1);
    }
  }

  const MultiwayInstance& inst_;
  const SymmetricSetup& setup_;
  int k_;
  std::vector<BBEdge> edges_;
  std::vector<int> label_;
  double total_ = 0.0;
  SearchBest best_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

double partition_cost(const MultiwayInstance& inst, const Partition& p) {
  validate_instance(inst);
  const int n = inst.oracle.ground.n;
  if (static_cast<int>(p.label.size()) != n) throw DomainError("label vector size mismatch");
  for (int l : p.label)
    if (l < 0 || l >= inst.k) throw DomainError("label out of range");
  for (int i = 0; i < inst.k; ++i)
    if (p.label[std::size_t(inst.terminals[std::size_t(i)])] != i)
      throw DomainError("terminal carries the wrong label");
  return exact_cost(inst.oracle, inst.k, p.label);
}

BruteForceResult brute_force_partition(const MultiwayInstance& inst, int threads) {
  validate_instance(inst);
  if (threads < 1 || threads > 64) throw DomainError("thread count out of range");
  const int n = inst.oracle.ground.n;
  std::vector<int> base(std::size_t(n), -1);
  for (int i = 0; i < inst.k; ++i) base[std::size_t(inst.terminals[std::size_t(i)])] = i;
  std::vector<std::vector<int>> units;
  for (int v = 0; v < n; ++v)
    if (base[std::size_t(v)] < 0) units.push_back({v});
  return scan_all(inst, units, base, threads);
}

BruteForceResult brute_force_symmetric(const MultiwayInstance& inst, const SymmetrySpec& sym) {
  validate_instance(inst);
  const SymmetricSetup setup = symmetric_setup(inst, sym);
  bool within_budget = true;
  try {
    counted_states(inst.k, static_cast<int>(setup.units.size()));
  } catch (const CapacityError&) {
    within_budget = false;
  }
  if (within_budget) return scan_all(inst, setup.units, setup.base_label, 1);
  return BranchBound(inst, setup).run();
}

BruteForceResult brute_force_symmetric_branch_bound(const MultiwayInstance& inst,
                                                    const SymmetrySpec& sym) {
  validate_instance(inst);
  const SymmetricSetup setup = symmetric_setup(inst, sym);
  return BranchBound(inst, setup).run();
}

}  // namespace submp
