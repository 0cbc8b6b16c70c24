#pragma once

#include "vecgame/geometry.hpp"
#include "vecgame/types.hpp"

#include <utility>

namespace vecgame {

/// Two-player game with vector losses for the row player. Losses are stored
/// as one K-vector per action pair; beta is the discount factor.
struct VectorGame {
  int m = 0;  // row-player actions
  int n = 0;  // adversary actions
  int k = 0;  // loss dimensions
  double beta = 0.0;
  Mat losses;  // k x (m*n); column a*n + b holds r(a, b)

  Eigen::Block<const Mat> loss(int a, int b) const {
    return losses.block(0, a * n + b, k, 1);
  }
  /// K x m matrix whose columns are r(., b) for fixed adversary action b.
  Mat loss_for_adversary(int b) const {
    Mat r(k, m);
    for (int a = 0; a < m; ++a) r.col(a) = losses.col(a * n + b);
    return r;
  }
};

/// Affine map taking raw stage losses into [0, 1-beta]: normalized = scale * raw + shift.
/// The scale is uniform across components so componentwise order is preserved.
struct NormalizationRecord {
  double scale = 1.0;
  Vec shifts;
};

struct ScalarGame {
  int m = 0;
  int n = 0;
  Mat losses;  // m x n
};

/// Scales and shifts so every stage loss lands in [0, 1-beta] (so discounted
/// totals land in [0, 1]). Constant components map to zero.
std::pair<VectorGame, NormalizationRecord> normalize(const VectorGame& g);

/// Inverse of the normalization on discounted-sum space:
/// raw_k = (v_k - shift_k / (1-beta)) / scale.
Vec denormalize_vector(const Vec& v, const NormalizationRecord& rec, double beta);

/// Forward map on discounted-sum space; inverse of denormalize_vector.
Vec normalize_vector(const Vec& raw, const NormalizationRecord& rec, double beta);

/// Regret transformation: K = m components, r_k(a,b) = l(a,b) - l(k,b).
VectorGame regret_game(const ScalarGame& g, double beta);

/// Prediction with expert advice under {0,1} losses, constant outcome columns
/// omitted. K=2: one column per erring expert. K=3: one column per nonempty
/// proper subset of erring experts, ordered {1},{2},{3},{1,2},{1,3},{2,3}.
ScalarGame experts_game(int k);

/// 2x2 two-objective demo game whose one-step frontier from {0} is the
/// segment (2,2)-(3,1) with (4,2) dominated.
VectorGame demo_game(double beta);

struct MinmaxPoint {
  double value = 0.0;
  Vec x;
};

/// Intersection of the frontier's upset with the main diagonal: the minmax
/// readout min over hull points of the largest component.
MinmaxPoint minmax_point(const Frontier& v);

struct PriorSelection {
  int vertex = 0;
  Vec point;
  double value = 0.0;
};

/// Vertex minimizing the prior-weighted sum; ties break to the lowest index.
PriorSelection prior_select(const Frontier& v, const Vec& prior);

}  // namespace vecgame
