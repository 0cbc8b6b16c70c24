#include "vecgame/geometry.hpp"

#include "vecgame/lp.hpp"

#include <cmath>
#include <stdexcept>

namespace vecgame {

bool dominates(const Vec& u, const Vec& v) {
  if (u.size() != v.size()) throw std::invalid_argument("dominates: dimension mismatch");
  return (u.array() <= v.array()).all();
}

std::vector<Vec> pareto_prune(const std::vector<Vec>& points) {
  if (points.empty()) throw std::invalid_argument("pareto_prune: empty input");
  std::vector<Vec> kept;
  kept.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool drop = false;
    for (std::size_t j = 0; j < points.size() && !drop; ++j) {
      if (j == i) continue;
      if (!dominates(points[j], points[i])) continue;
      if (points[j] != points[i]) {
        drop = true;  // strictly dominated
      } else if (j < i) {
        drop = true;  // duplicate, keep first
      }
    }
    if (!drop) kept.push_back(points[i]);
  }
  return kept;
}

ParamGrid param_grid(int k, int n) {
  if (k < 2) throw std::invalid_argument("param_grid: need k >= 2");
  if (n < 1) throw std::invalid_argument("param_grid: need n >= 1");
  ParamGrid grid;
  grid.k = k;
  grid.n = n;
  long per_face = 1;
  for (int i = 0; i < k - 1; ++i) per_face *= (n + 1);
  grid.nominal_size = static_cast<long>(k) * per_face - (k - 1);

  std::vector<Vec> pts;
  pts.reserve(static_cast<std::size_t>(grid.nominal_size));
  std::vector<int> idx(k - 1, 0);
  for (int face = 0; face < k; ++face) {
    std::fill(idx.begin(), idx.end(), 0);
    for (long c = 0; c < per_face; ++c) {
      Vec p = Vec::Zero(k);
      int pos = 0;
      for (int d = 0; d < k; ++d) {
        if (d == face) continue;
        p[d] = static_cast<double>(idx[pos++]) / n;
      }
      // A point with several zero coordinates already appeared on an earlier
      // face; exact comparison is safe because i/n is computed identically.
      bool duplicate = false;
      for (int d = 0; d < face && !duplicate; ++d) duplicate = p[d] == 0.0;
      if (!duplicate) pts.push_back(std::move(p));
      for (int pos2 = k - 2; pos2 >= 0; --pos2) {
        if (++idx[pos2] <= n) break;
        idx[pos2] = 0;
      }
    }
  }
  grid.points.resize(k, static_cast<int>(pts.size()));
  for (std::size_t j = 0; j < pts.size(); ++j) grid.points.col(static_cast<int>(j)) = pts[j];
  return grid;
}

LineIntersector::LineIntersector(const Frontier& v) : vertices_(v.vertices) {
  const int k = v.dim();
  const int j = v.count();
  if (j == 0) throw std::invalid_argument("frontier_intersect: empty frontier");
  // Variables: t (free), then hull weights w_j >= 0.
  lp_ = lp::LinearProgram::with_variables(1 + j);
  lp_.lower[0] = -lp::LinearProgram::infinity();
  lp_.objective[0] = 1.0;
  for (int r = 0; r < k; ++r) {
    Vec row = Vec::Zero(1 + j);
    row[0] = 1.0;
    row.tail(j) = -v.vertices.row(r).transpose();
    lp_.add_row(std::move(row), lp::Relation::GreaterEq, 0.0);  // rhs set per direction
  }
  Vec simplex_row = Vec::Zero(1 + j);
  simplex_row.tail(j).setOnes();
  lp_.add_row(std::move(simplex_row), lp::Relation::Eq, 1.0);
}

IntersectResult LineIntersector::at(const Vec& p) {
  const int k = static_cast<int>(vertices_.rows());
  if (p.size() != k) throw std::invalid_argument("frontier_intersect: dimension mismatch");
  for (int r = 0; r < k; ++r) lp_.rhs[r] = -p[r];
  const auto sol = lp::solve_min(lp_);
  if (sol.status != lp::Status::Optimal)
    throw NumericError("frontier_intersect: line/upset program not optimal");
  IntersectResult res;
  res.t = sol.primal[0];
  res.x = Vec::Constant(k, res.t) + p;
  res.weights = sol.primal.tail(vertices_.cols());
  return res;
}

IntersectResult frontier_intersect(const Vec& p, const Frontier& v) {
  return LineIntersector(v).at(p);
}

DistancePair frontier_gaps(const Frontier& u, const Frontier& v, int m, int threads) {
  if (u.dim() != v.dim()) throw std::invalid_argument("frontier distance: dimension mismatch");
  if (m < 1) throw std::invalid_argument("frontier distance: need m >= 1");
  const ParamGrid grid = param_grid(u.dim(), m);
  const int count = grid.count();
  std::vector<double> tu(count), tv(count);
  const LineIntersector master_u(u);
  const LineIntersector master_v(v);
  run_sharded(count, threads, [&](int lo, int hi) {
    LineIntersector iu = master_u;
    LineIntersector iv = master_v;
    for (int i = lo; i < hi; ++i) {
      const Vec p = grid.points.col(i);
      tu[i] = iu.at(p).t;
      tv[i] = iv.at(p).t;
    }
  });
  DistancePair out;
  for (int i = 0; i < count; ++i) {
    out.e_uv = std::max(out.e_uv, tv[i] - tu[i]);
    out.e_vu = std::max(out.e_vu, tu[i] - tv[i]);
  }
  return out;
}

double e_distance(const Frontier& u, const Frontier& v, int m, int threads) {
  return frontier_gaps(u, v, m, threads).e_uv;
}

double d_distance(const Frontier& u, const Frontier& v, int m, int threads) {
  return frontier_gaps(u, v, m, threads).d();
}

Frontier gamma_approx(const Frontier& v, const ParamGrid& grid, int threads) {
  if (v.dim() != grid.k) throw std::invalid_argument("gamma_approx: dimension mismatch");
  Frontier out;
  out.vertices.resize(grid.k, grid.count());
  out.params = grid.points;
  const LineIntersector master(v);
  run_sharded(grid.count(), threads, [&](int lo, int hi) {
    LineIntersector local = master;
    for (int i = lo; i < hi; ++i) out.vertices.col(i) = local.at(grid.points.col(i)).x;
  });
  return out;
}

}  // namespace vecgame
