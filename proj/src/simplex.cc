#include "submp/simplex.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "submp/common.h"

namespace submp {

namespace {

constexpr double kStallEps = 1e-12;
constexpr int kMaxPivots = 200000;

// Dense tableau with explicit artificial columns. Layout per row:
// [structural 0..n) | artificial n..n+m) | rhs].
class Tableau {
 public:
  Tableau(const LpProblem& p, double pivot_tol)
      : m_(p.rows), n_(p.cols), width_(p.cols + p.rows + 1), tol_(pivot_tol) {
    t_.assign(std::size_t(m_) * std::size_t(width_), 0.0);
    basis_.resize(std::size_t(m_));
    for (int r = 0; r < m_; ++r) {
      const double sign = p.b[std::size_t(r)] < 0.0 ? -1.0 : 1.0;
      double* row = row_ptr(r);
      for (int j = 0; j < n_; ++j) row[j] = sign * p.at(r, j);
      row[n_ + r] = 1.0;
      row[width_ - 1] = sign * p.b[std::size_t(r)];
      basis_[std::size_t(r)] = n_ + r;
    }
  }

  double* row_ptr(int r) { return t_.data() + std::size_t(r) * std::size_t(width_); }
  const double* row_ptr(int r) const {
    return t_.data() + std::size_t(r) * std::size_t(width_);
  }

  // Minimizes cost (size n_ + m_, artificials included) starting from the
  // current basis. Columns at or past limit never enter. Returns pivots.
  int optimize(const std::vector<double>& cost, int limit) {
    // reduced costs for the current basis
    red_ = cost;
    obj_ = 0.0;
    for (int r = 0; r < m_; ++r) {
      const double cb = cost[std::size_t(basis_[std::size_t(r)])];
      if (cb == 0.0) continue;
      const double* row = row_ptr(r);
      for (int j = 0; j < n_ + m_; ++j) red_[std::size_t(j)] -= cb * row[j];
      obj_ += cb * row[width_ - 1];
    }
    int pivots = 0;
    int stall = 0;
    bool bland = false;
    while (true) {
      int enter = -1;
      if (bland) {
        for (int j = 0; j < limit; ++j)
          if (red_[std::size_t(j)] < -tol_) {
            enter = j;
            break;
          }
      } else {
        double most = -tol_;
        for (int j = 0; j < limit; ++j)
          if (red_[std::size_t(j)] < most) {
            most = red_[std::size_t(j)];
            enter = j;
          }
      }
      if (enter < 0) break;
      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m_; ++r) {
        const double* row = row_ptr(r);
        if (row[enter] <= tol_) continue;
        const double ratio = row[width_ - 1] / row[enter];
        if (ratio < best_ratio - 1e-12 ||
            (ratio < best_ratio + 1e-12 &&
             (leave < 0 || basis_[std::size_t(r)] < basis_[std::size_t(leave)]))) {
          best_ratio = ratio;
          leave = r;
        }
      }
      if (leave < 0) throw NumericError("linear program is unbounded");
      const double before = obj_;
      pivot(leave, enter);
      ++pivots;
      if (++stall > 50 + m_ && !bland) bland = true;  // degenerate streak
      if (before - obj_ > kStallEps) stall = 0;
      if (pivots > kMaxPivots) throw NumericError("simplex pivot limit exhausted");
    }
    return pivots;
  }

  void pivot(int pr, int pc) {
    double* prow = row_ptr(pr);
    const double inv = 1.0 / prow[pc];
    for (int j = 0; j < width_; ++j) prow[j] *= inv;
    prow[pc] = 1.0;
    for (int r = 0; r < m_; ++r) {
      if (r == pr) continue;
      double* row = row_ptr(r);
      const double f = row[pc];
      if (f == 0.0) continue;
      for (int j = 0; j < width_; ++j) row[j] -= f * prow[j];
      row[pc] = 0.0;
    }
    const double f = red_[std::size_t(pc)];
    if (f != 0.0) {
      for (int j = 0; j < n_ + m_; ++j) red_[std::size_t(j)] -= f * prow[j];
      red_[std::size_t(pc)] = 0.0;
      obj_ += f * prow[width_ - 1];  // z moves by (reduced cost) * (entering value)
    }
    basis_[std::size_t(pr)] = pc;
  }

  // Pivots basic artificials onto structural columns where possible;
  // rows that cannot be cleared are redundant and stay inert (their rhs is
  // zero and every structural entry is zero, so later pivots skip them).
  void evict_artificials() {
    for (int r = 0; r < m_; ++r) {
      if (basis_[std::size_t(r)] < n_) continue;
      const double* row = row_ptr(r);
      int pc = -1;
      for (int j = 0; j < n_; ++j)
        if (std::abs(row[j]) > tol_) {
          pc = j;
          break;
        }
      if (pc >= 0) pivot(r, pc);
    }
  }

  double objective() const { return obj_; }
  int rows() const { return m_; }
  int cols() const { return n_; }
  int basic_var(int r) const { return basis_[std::size_t(r)]; }
  double rhs(int r) const { return row_ptr(r)[width_ - 1]; }

 private:
  int m_, n_, width_;
  double tol_;
  std::vector<double> t_;
  std::vector<int> basis_;
  std::vector<double> red_;
  double obj_ = 0.0;
};

}  // namespace

LpResult solve_lp_dense(const LpProblem& p, double pivot_tol) {
  if (p.rows < 1 || p.cols < 1) throw DomainError("degenerate linear program shape");
  if (p.a.size() != std::size_t(p.rows) * std::size_t(p.cols) ||
      p.b.size() != std::size_t(p.rows) || p.c.size() != std::size_t(p.cols))
    throw DomainError("linear program storage mismatch");
  for (double v : p.a)
    if (!std::isfinite(v)) throw DomainError("linear program entry not finite");
  for (double v : p.b)
    if (!std::isfinite(v)) throw DomainError("linear program rhs not finite");
  for (double v : p.c)
    if (!std::isfinite(v)) throw DomainError("linear program cost not finite");

  Tableau tab(p, pivot_tol);
  LpResult res;

  std::vector<double> phase1(std::size_t(p.cols + p.rows), 0.0);
  for (int j = p.cols; j < p.cols + p.rows; ++j) phase1[std::size_t(j)] = 1.0;
  res.phase1_pivots = tab.optimize(phase1, p.cols + p.rows);
  if (tab.objective() > 1e-7)
    throw InfeasibleError("constraints admit no feasible point", tab.objective());
  tab.evict_artificials();

  std::vector<double> phase2(std::size_t(p.cols + p.rows), 0.0);
  for (int j = 0; j < p.cols; ++j) phase2[std::size_t(j)] = p.c[std::size_t(j)];
  res.phase2_pivots = tab.optimize(phase2, p.cols);

  res.x.assign(std::size_t(p.cols), 0.0);
  for (int r = 0; r < tab.rows(); ++r)
    if (tab.basic_var(r) < p.cols) res.x[std::size_t(tab.basic_var(r))] = tab.rhs(r);
  res.objective = 0.0;
  for (int j = 0; j < p.cols; ++j) res.objective += p.c[std::size_t(j)] * res.x[std::size_t(j)];
  return res;
}

}  // namespace submp
