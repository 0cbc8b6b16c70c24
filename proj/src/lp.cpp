#include "vecgame/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace vecgame::lp {

namespace {

constexpr double kCostTol = 1e-9;
constexpr double kPhase1Tol = 1e-7;
constexpr int kRefactorevery = 50;

// Internal column: structural variable (possibly one half of a free-variable
// split), slack/surplus, or artificial.
struct Column {
  int structural = -1;  // original variable index, -1 for slack/artificial
  double sign = 1.0;
  bool artificial = false;
};

// Working tableau plus the pristine [A | b] it was built from. The working
// rows drift with every elimination, so the tableau is rebuilt from the
// original data and the current basis at a fixed pivot cadence; without that
// the drift compounds through small pivots and can end in a silently
// infeasible "optimal" basis.
struct Tableau {
  RowMat t;   // (m+1) x (n+1); last row = reduced costs, last col = rhs
  RowMat a0;  // m x (n+1) original rows, never modified
  Vec cost;   // current phase objective over columns
  std::vector<int> basis;
  std::vector<char> allowed;
  int m = 0;
  int n = 0;
  int pivots_since_refactor = 0;

  double rhs(int i) const { return t(i, n); }

  void pivot(int row, int col) {
    t.row(row) /= t(row, col);
    t(row, col) = 1.0;
    for (int i = 0; i <= m; ++i) {
      if (i == row) continue;
      const double f = t(i, col);
      if (f != 0.0) {
        t.row(i) -= f * t.row(row);
        t(i, col) = 0.0;  // keep the unit column exact
      }
    }
    basis[row] = col;
    ++pivots_since_refactor;
  }

  // Rebuilds the working tableau as B^-1 [A | b] with the priced-out cost
  // row, straight from the original data. Returns false when the current
  // basis has drifted into infeasibility and the solve must restart.
  bool refactorize() {
    Mat basis_mat(m, m);
    for (int r = 0; r < m; ++r) basis_mat.col(r) = a0.block(0, basis[r], m, 1);
    Eigen::PartialPivLU<Mat> lu(basis_mat);
    Mat z = lu.solve(Mat(a0));
    if (!z.allFinite()) return false;
    for (int i = 0; i < m; ++i) {
      double v = z(i, n);
      if (v < 0.0) {
        if (v < -1e-7) return false;
        v = 0.0;
      }
      z(i, n) = v;
    }
    t.topRows(m) = z;
    Vec cb(m);
    for (int r = 0; r < m; ++r) cb[r] = cost[basis[r]];
    t.row(m).head(n) = cost.transpose();
    t(m, n) = 0.0;
    t.row(m) -= cb.transpose() * t.topRows(m);
    pivots_since_refactor = 0;
    return true;
  }
};

int pick_entering(const Tableau& tab, bool bland) {
  int best = -1;
  double best_cost = -kCostTol;
  for (int j = 0; j < tab.n; ++j) {
    if (!tab.allowed[j]) continue;
    const double c = tab.t(tab.m, j);
    if (c < -kCostTol) {
      if (bland) return j;
      if (c < best_cost) {
        best_cost = c;
        best = j;
      }
    }
  }
  return best;
}

// Ratio test. Among rows within a hair of the minimum ratio, prefer the
// largest pivot magnitude (numerical stability); under Bland's rule prefer
// the lowest basic index instead so the anti-cycling argument stays intact.
int pick_leaving(const Tableau& tab, int enter, double pivot_tol, bool bland) {
  double best_ratio = std::numeric_limits<double>::infinity();
  for (int i = 0; i < tab.m; ++i) {
    const double a = tab.t(i, enter);
    if (a <= pivot_tol) continue;
    best_ratio = std::min(best_ratio, tab.rhs(i) / a);
  }
  if (std::isinf(best_ratio)) return -1;
  int best = -1;
  for (int i = 0; i < tab.m; ++i) {
    const double a = tab.t(i, enter);
    if (a <= pivot_tol) continue;
    if (tab.rhs(i) / a > best_ratio + 1e-9) continue;
    if (best < 0) {
      best = i;
    } else if (bland) {
      if (tab.basis[i] < tab.basis[best]) best = i;
    } else if (a > tab.t(best, enter) ||
               (a == tab.t(best, enter) && tab.basis[i] < tab.basis[best])) {
      best = i;
    }
  }
  return best;
}

enum class RunOutcome { Optimal, Unbounded, LostFeasibility };

// Anti-cycling: switches to Bland's rule for good after a long streak of
// degenerate pivots.
RunOutcome run_simplex(Tableau& tab, int max_iters, double pivot_tol, bool bland_from_start) {
  int degenerate_streak = 0;
  bool bland = bland_from_start;
  for (int iter = 0; iter < max_iters; ++iter) {
    if (tab.pivots_since_refactor >= kRefactorevery) {
      if (!tab.refactorize()) return RunOutcome::LostFeasibility;
    }
    const int enter = pick_entering(tab, bland);
    if (enter < 0) {
      // Confirm optimality against a freshly rebuilt tableau; drift can
      // fake converged reduced costs.
      if (tab.pivots_since_refactor > 0) {
        if (!tab.refactorize()) return RunOutcome::LostFeasibility;
        if (pick_entering(tab, bland) >= 0) continue;
      }
      return RunOutcome::Optimal;
    }
    const int leave = pick_leaving(tab, enter, pivot_tol, bland);
    if (leave < 0) return RunOutcome::Unbounded;
    const double ratio = tab.rhs(leave) / tab.t(leave, enter);
    if (ratio < 1e-12) {
      if (++degenerate_streak > 100) bland = true;
    } else {
      degenerate_streak = 0;
    }
    tab.pivot(leave, enter);
  }
  throw NumericError("simplex iteration limit exceeded");
}

struct Internal {
  std::vector<Column> cols;
  std::vector<double> shift;
  int n_struct = 0;
  struct Row {
    Vec a;  // over structural columns
    Relation rel;
    double b;
  };
  std::vector<Row> rows;
  std::vector<int> slack_col, artificial_col;
  bool any_artificial = false;
};

Internal build_internal(const LinearProgram& lp) {
  const int nv = lp.variable_count;
  Internal w;
  w.shift.assign(nv, 0.0);
  std::vector<std::vector<int>> var_cols(nv);
  for (int j = 0; j < nv; ++j) {
    if (std::isinf(lp.lower[j])) {
      w.cols.push_back({j, 1.0, false});
      var_cols[j].push_back(static_cast<int>(w.cols.size()) - 1);
      w.cols.push_back({j, -1.0, false});
      var_cols[j].push_back(static_cast<int>(w.cols.size()) - 1);
    } else {
      w.shift[j] = lp.lower[j];
      w.cols.push_back({j, 1.0, false});
      var_cols[j].push_back(static_cast<int>(w.cols.size()) - 1);
    }
  }
  w.n_struct = static_cast<int>(w.cols.size());

  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    Vec a = Vec::Zero(w.n_struct);
    double b = lp.rhs[i];
    for (int j = 0; j < nv; ++j) {
      const double c = lp.rows[i][j];
      if (c == 0.0) continue;
      b -= c * w.shift[j];
      for (int cj : var_cols[j]) a[cj] += c * w.cols[cj].sign;
    }
    w.rows.push_back({std::move(a), lp.relations[i], b});
  }
  for (int j = 0; j < nv; ++j) {
    if (std::isinf(lp.upper[j])) continue;
    Vec a = Vec::Zero(w.n_struct);
    for (int cj : var_cols[j]) a[cj] = w.cols[cj].sign;
    w.rows.push_back({std::move(a), Relation::LessEq, lp.upper[j] - w.shift[j]});
  }

  // Flip rows so every rhs is nonnegative; <= rows then keep a unit slack
  // that can start basic, everything else gets an artificial.
  for (auto& r : w.rows) {
    if (r.b < 0.0) {
      r.a = -r.a;
      r.b = -r.b;
      r.rel = r.rel == Relation::LessEq ? Relation::GreaterEq
              : r.rel == Relation::GreaterEq ? Relation::LessEq
                                             : Relation::Eq;
    }
  }
  const int m = static_cast<int>(w.rows.size());
  w.slack_col.assign(m, -1);
  w.artificial_col.assign(m, -1);
  for (int i = 0; i < m; ++i) {
    if (w.rows[i].rel == Relation::Eq) continue;
    w.slack_col[i] = static_cast<int>(w.cols.size());
    w.cols.push_back({-1, w.rows[i].rel == Relation::LessEq ? 1.0 : -1.0, false});
  }
  for (int i = 0; i < m; ++i) {
    if (w.rows[i].rel == Relation::LessEq) continue;
    w.artificial_col[i] = static_cast<int>(w.cols.size());
    w.cols.push_back({-1, 1.0, true});
    w.any_artificial = true;
  }
  return w;
}

enum class AttemptOutcome { Done, Retry };

// One full two-phase run. For optimal results `violation` reports the worst
// constraint violation of the basis-resolved primal, the corruption tripwire.
AttemptOutcome attempt_solve(const LinearProgram& lp, const Internal& w, double pivot_tol,
                             bool bland_from_start, Solution& sol, double& violation) {
  const int m = static_cast<int>(w.rows.size());
  const int n = static_cast<int>(w.cols.size());
  const int nv = lp.variable_count;
  violation = 0.0;

  Tableau tab;
  tab.m = m;
  tab.n = n;
  tab.t = RowMat::Zero(m + 1, n + 1);
  tab.a0 = RowMat::Zero(m, n + 1);
  tab.cost = Vec::Zero(n);
  tab.basis.assign(m, -1);
  tab.allowed.assign(n, 1);
  for (int i = 0; i < m; ++i) {
    tab.a0.block(i, 0, 1, w.n_struct) = w.rows[i].a.transpose();
    if (w.slack_col[i] >= 0) tab.a0(i, w.slack_col[i]) = w.cols[w.slack_col[i]].sign;
    if (w.artificial_col[i] >= 0) tab.a0(i, w.artificial_col[i]) = 1.0;
    tab.a0(i, n) = w.rows[i].b;
    tab.basis[i] = w.artificial_col[i] >= 0 ? w.artificial_col[i] : w.slack_col[i];
  }
  tab.t.topRows(m) = tab.a0;

  const int max_iters = std::max(20000, 200 * m + 4 * n);

  if (w.any_artificial) {
    for (int j = 0; j < n; ++j) tab.cost[j] = w.cols[j].artificial ? 1.0 : 0.0;
    tab.t.row(m).head(n) = tab.cost.transpose();
    tab.t(m, n) = 0.0;
    for (int i = 0; i < m; ++i) {
      if (w.artificial_col[i] >= 0) tab.t.row(m) -= tab.t.row(i);
    }
    switch (run_simplex(tab, max_iters, pivot_tol, bland_from_start)) {
      case RunOutcome::Unbounded:
        throw NumericError("phase 1 unbounded; inconsistent program");
      case RunOutcome::LostFeasibility:
        return AttemptOutcome::Retry;
      case RunOutcome::Optimal:
        break;
    }
    if (tab.t(m, n) < -kPhase1Tol) {
      sol.status = Status::Infeasible;
      return AttemptOutcome::Done;
    }
    // Drive leftover artificials out of the basis when possible; block them
    // from ever re-entering.
    for (int i = 0; i < m; ++i) {
      if (!w.cols[tab.basis[i]].artificial) continue;
      int best = -1;
      for (int j = 0; j < w.n_struct; ++j) {
        if (std::abs(tab.t(i, j)) > 1e-7 &&
            (best < 0 || std::abs(tab.t(i, j)) > std::abs(tab.t(i, best)))) {
          best = j;
        }
      }
      if (best >= 0) tab.pivot(i, best);
      // Otherwise the row is redundant; the artificial stays basic at zero.
    }
    for (int j = 0; j < n; ++j) {
      if (w.cols[j].artificial) tab.allowed[j] = 0;
    }
  }

  // Phase 2: fresh cost row and a clean tableau for the current basis.
  for (int j = 0; j < n; ++j) {
    tab.cost[j] = j < w.n_struct ? lp.objective[w.cols[j].structural] * w.cols[j].sign : 0.0;
  }
  if (!tab.refactorize()) return AttemptOutcome::Retry;
  switch (run_simplex(tab, max_iters, pivot_tol, bland_from_start)) {
    case RunOutcome::Unbounded:
      sol.status = Status::Unbounded;
      return AttemptOutcome::Done;
    case RunOutcome::LostFeasibility:
      return AttemptOutcome::Retry;
    case RunOutcome::Optimal:
      break;
  }

  // Resolve the basic values against the original data so the answer does
  // not carry tableau error from the final stretch of pivots.
  Mat basis_mat(m, m);
  for (int r = 0; r < m; ++r) basis_mat.col(r) = tab.a0.block(0, tab.basis[r], m, 1);
  Vec b_vec(m);
  for (int i = 0; i < m; ++i) b_vec[i] = w.rows[i].b;
  Eigen::PartialPivLU<Mat> lu(basis_mat);
  Vec xb = lu.solve(b_vec);
  if (!xb.allFinite() || (basis_mat * xb - b_vec).cwiseAbs().maxCoeff() > 1e-8) {
    for (int r = 0; r < m; ++r) xb[r] = tab.rhs(r);
  }

  sol.status = Status::Optimal;
  sol.primal = Vec::Zero(nv);
  for (int j = 0; j < nv; ++j) sol.primal[j] = w.shift[j];
  Vec internal_x = Vec::Zero(w.n_struct);
  for (int r = 0; r < m; ++r) {
    const int j = tab.basis[r];
    violation = std::max(violation, -xb[r]);
    if (j < w.n_struct) {
      internal_x[j] += std::max(0.0, xb[r]);
      sol.primal[w.cols[j].structural] += w.cols[j].sign * std::max(0.0, xb[r]);
    }
  }
  sol.objective = nv > 0 ? lp.objective.dot(sol.primal) : 0.0;
  sol.basis.assign(lp.rows.size(), -1);
  for (int r = 0; r < m && r < static_cast<int>(lp.rows.size()); ++r) {
    const int j = tab.basis[r];
    if (j < w.n_struct) sol.basis[r] = w.cols[j].structural;
  }

  // Corruption tripwire: the resolved point must satisfy every internal row.
  for (int i = 0; i < m; ++i) {
    const double lhs = w.rows[i].a.dot(internal_x);
    switch (w.rows[i].rel) {
      case Relation::LessEq: violation = std::max(violation, lhs - w.rows[i].b); break;
      case Relation::GreaterEq: violation = std::max(violation, w.rows[i].b - lhs); break;
      case Relation::Eq: violation = std::max(violation, std::abs(lhs - w.rows[i].b)); break;
    }
  }
  return AttemptOutcome::Done;
}

}  // namespace

Solution solve_min(const LinearProgram& lp) {
  const Internal w = build_internal(lp);
  Solution sol;
  double violation = 0.0;
  const auto first = attempt_solve(lp, w, 1e-9, false, sol, violation);
  if (first == AttemptOutcome::Done && (sol.status != Status::Optimal || violation <= 1e-7))
    return sol;
  if (std::getenv("VECGAME_LP_DEBUG"))
    std::fprintf(stderr, "[lp] retrying under Bland (violation %.3e)\n", violation);
  // Deterministic fallback: Bland's rule from the start with a stricter
  // pivot threshold.
  sol = Solution{};
  const auto second = attempt_solve(lp, w, 1e-7, true, sol, violation);
  if (second == AttemptOutcome::Retry ||
      (sol.status == Status::Optimal && violation > 1e-7))
    throw NumericError("simplex produced an unusable basis twice");
  return sol;
}

}  // namespace vecgame::lp
