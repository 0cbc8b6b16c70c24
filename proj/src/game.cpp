#include "vecgame/game.hpp"

#include <cmath>
#include <stdexcept>

namespace vecgame {

std::pair<VectorGame, NormalizationRecord> normalize(const VectorGame& g) {
  if (g.losses.size() == 0) throw std::invalid_argument("normalize: empty game");
  const Vec mins = g.losses.rowwise().minCoeff();
  const Vec maxs = g.losses.rowwise().maxCoeff();
  const double max_range = (maxs - mins).maxCoeff();
  const double target = 1.0 - g.beta;
  NormalizationRecord rec;
  rec.scale = max_range > 0.0 ? target / max_range : target;
  rec.shifts = -rec.scale * mins;

  VectorGame out = g;
  out.losses = (rec.scale * g.losses).colwise() + rec.shifts;
  return {std::move(out), std::move(rec)};
}

Vec denormalize_vector(const Vec& v, const NormalizationRecord& rec, double beta) {
  if (rec.scale <= 0.0) throw std::invalid_argument("denormalize_vector: scale must be positive");
  return (v - rec.shifts / (1.0 - beta)) / rec.scale;
}

Vec normalize_vector(const Vec& raw, const NormalizationRecord& rec, double beta) {
  if (rec.scale <= 0.0) throw std::invalid_argument("normalize_vector: scale must be positive");
  return rec.scale * raw + rec.shifts / (1.0 - beta);
}

VectorGame regret_game(const ScalarGame& g, double beta) {
  VectorGame out;
  out.m = g.m;
  out.n = g.n;
  out.k = g.m;
  out.beta = beta;
  out.losses.resize(out.k, g.m * g.n);
  for (int a = 0; a < g.m; ++a) {
    for (int b = 0; b < g.n; ++b) {
      for (int k = 0; k < out.k; ++k) {
        out.losses(k, a * g.n + b) = g.losses(a, b) - g.losses(k, b);
      }
    }
  }
  return out;
}

ScalarGame experts_game(int k) {
  ScalarGame g;
  if (k == 2) {
    g.m = 2;
    g.n = 2;
    g.losses.resize(2, 2);
    g.losses << 1, 0,
                0, 1;
    return g;
  }
  if (k == 3) {
    g.m = 3;
    g.n = 6;
    g.losses.resize(3, 6);
    const int subsets[6][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1},
                               {1, 1, 0}, {1, 0, 1}, {0, 1, 1}};
    for (int b = 0; b < 6; ++b)
      for (int a = 0; a < 3; ++a) g.losses(a, b) = subsets[b][a];
    return g;
  }
  throw std::invalid_argument("experts_game: only 2 or 3 experts supported");
}

VectorGame demo_game(double beta) {
  VectorGame g;
  g.m = 2;
  g.n = 2;
  g.k = 2;
  g.beta = beta;
  g.losses.resize(2, 4);
  // r(0,0)=(0,2)  r(0,1)=(2,0)  r(1,0)=(2,0)  r(1,1)=(4,2)
  g.losses << 0, 2, 2, 4,
              2, 0, 0, 2;
  return g;
}

MinmaxPoint minmax_point(const Frontier& v) {
  const auto res = frontier_intersect(Vec::Zero(v.dim()), v);
  MinmaxPoint out;
  out.value = res.t;
  out.x = res.x;
  return out;
}

PriorSelection prior_select(const Frontier& v, const Vec& prior) {
  if (prior.size() != v.dim()) throw std::invalid_argument("prior_select: prior dimension mismatch");
  if ((prior.array() < -1e-12).any() || std::abs(prior.sum() - 1.0) > 1e-9)
    throw std::invalid_argument("prior_select: prior must be a probability vector");
  const Vec scores = v.vertices.transpose() * prior;
  PriorSelection sel;
  sel.vertex = 0;
  for (int j = 1; j < v.count(); ++j) {
    if (scores[j] < scores[sel.vertex] - 1e-15) sel.vertex = j;
  }
  sel.point = v.vertices.col(sel.vertex);
  sel.value = scores[sel.vertex];
  return sel;
}

}  // namespace vecgame
