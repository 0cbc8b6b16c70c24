#pragma once

#include "vecgame/lp.hpp"
#include "vecgame/types.hpp"

#include <vector>

namespace vecgame {

// ---------------------------------------------------------------------------
// Pareto frontiers of convex polytopes, represented by their vertex lists.
// A point u dominates v when u <= v componentwise; the frontier of a vertex
// set is the lower Pareto frontier of its closed convex hull. Every frontier
// point lies on exactly one line x = t*1 + p with p on the "one coordinate
// zero" faces of the unit cube, which is what all distance computations and
// the solver build on.
// ---------------------------------------------------------------------------

/// Direction set: the K faces of [0,1]^K with one coordinate pinned to zero,
/// each quantized to steps of 1/N, duplicates across faces removed.
struct ParamGrid {
  int k = 0;
  int n = 0;
  Mat points;            // k x count, one direction per column
  long nominal_size = 0; // K(N+1)^(K-1) - (K-1); counts shared boundaries twice for K >= 3

  int count() const { return static_cast<int>(points.cols()); }
};

/// Lower Pareto frontier of the convex hull of `vertices` (k x j, one vertex
/// per column). `params` optionally tags each vertex with the direction whose
/// line produced it. Dominated columns are allowed; they do not change the
/// hull's frontier.
struct Frontier {
  Mat vertices;
  Mat params;  // k x j or empty

  int dim() const { return static_cast<int>(vertices.rows()); }
  int count() const { return static_cast<int>(vertices.cols()); }
  bool has_params() const { return params.size() > 0; }

  static Frontier single(const Vec& v) {
    Frontier f;
    f.vertices = v;
    return f;
  }
  static Frontier from_columns(Mat m) {
    Frontier f;
    f.vertices = std::move(m);
    return f;
  }
};

/// u <= v componentwise. Throws std::invalid_argument on dimension mismatch.
bool dominates(const Vec& u, const Vec& v);

/// Points of `points` not dominated by any other listed point; exact
/// duplicates collapse to their first occurrence. Order-stable.
std::vector<Vec> pareto_prune(const std::vector<Vec>& points);

ParamGrid param_grid(int k, int n);

struct IntersectResult {
  double t = 0.0;
  Vec x;        // t*1 + p
  Vec weights;  // hull weights of the dominated point, basic (sparse) solution
};

/// Componentwise smallest point of the line x = t*1 + p inside the upset of
/// V: min t s.t. t*1 + p >= sum_j w_j v_j, sum w = 1, w >= 0.
IntersectResult frontier_intersect(const Vec& p, const Frontier& v);

/// Repeated intersections against one frontier: the program matrix is built
/// once and only the right-hand side changes per direction. Copy one
/// instance per thread; at() mutates internal state.
class LineIntersector {
 public:
  explicit LineIntersector(const Frontier& v);
  IntersectResult at(const Vec& p);

 private:
  lp::LinearProgram lp_;
  Mat vertices_;
};

/// Directed frontier distance e(U, V) sampled on param_grid(k, m):
/// max over directions of (t_V - t_U)^+. Underestimates the continuous
/// supremum by at most 2/m for frontiers in [0,1]^K.
double e_distance(const Frontier& u, const Frontier& v, int m, int threads = 1);

/// d(U, V) = max(e(U,V), e(V,U)) at the same direction grid.
double d_distance(const Frontier& u, const Frontier& v, int m, int threads = 1);

/// Both directed gaps in one pass (two LPs per direction instead of four).
struct DistancePair {
  double e_uv = 0.0;
  double e_vu = 0.0;
  double d() const { return std::max(e_uv, e_vu); }
};
DistancePair frontier_gaps(const Frontier& u, const Frontier& v, int m, int threads = 1);

/// Approximation operator: frontier spanned by the intersections of V with
/// every grid line, tagged by direction. No dominance pruning: dominated
/// intersections stay as columns (hull-equivalent) so vertex indices remain
/// aligned with the grid.
Frontier gamma_approx(const Frontier& v, const ParamGrid& grid, int threads = 1);

}  // namespace vecgame
