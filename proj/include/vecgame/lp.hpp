#pragma once

#include "vecgame/types.hpp"

#include <limits>
#include <vector>

namespace vecgame::lp {

enum class Relation { LessEq, Eq, GreaterEq };

enum class Status { Optimal, Infeasible, Unbounded };

/// Minimization program
///   min c'x  s.t.  row_i x (<=|=|>=) rhs_i,  lower <= x <= upper.
/// Lower bounds default to 0; set lower[j] = -infinity() for a free variable.
struct LinearProgram {
  int variable_count = 0;
  Vec objective;
  std::vector<Vec> rows;
  std::vector<Relation> relations;
  std::vector<double> rhs;
  Vec lower;
  Vec upper;

  static double infinity() { return std::numeric_limits<double>::infinity(); }

  static LinearProgram with_variables(int n) {
    LinearProgram p;
    p.variable_count = n;
    p.objective = Vec::Zero(n);
    p.lower = Vec::Zero(n);
    p.upper = Vec::Constant(n, infinity());
    return p;
  }

  void add_row(Vec coeffs, Relation rel, double b) {
    rows.push_back(std::move(coeffs));
    relations.push_back(rel);
    rhs.push_back(b);
  }
};

struct Solution {
  Status status = Status::Infeasible;
  double objective = 0.0;
  Vec primal;
  /// Structural variable index basic in each constraint row, or -1 when the
  /// basic variable of that row is a slack/artificial. Identifies the vertex
  /// of the feasible polyhedron the solver stopped at: the number of nonzero
  /// structural variables never exceeds the number of rows.
  std::vector<int> basis;
};

/// Two-phase dense simplex. Always terminates at a basic solution; pivoting
/// is deterministic (largest-coefficient entering with index tie-breaks,
/// falling back to Bland's rule after a degeneracy streak). The reported
/// primal is recomputed from the final basis against the original data, so
/// feasibility holds to ~1e-12 rather than accumulated-tableau precision.
Solution solve_min(const LinearProgram& lp);

}  // namespace vecgame::lp
