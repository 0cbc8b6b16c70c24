#include "vecgame/strategy.hpp"

#include "vecgame/lp.hpp"

#include <cmath>
#include <stdexcept>

namespace vecgame {

namespace {

// Basic convex-combination weights writing `point` over the columns of
// `vertices`. A basic solution of K equality rows plus the simplex row has
// at most K+1 nonzero weights.
std::vector<Transition> decompose_over(const Mat& vertices, const Vec& point) {
  const int k = static_cast<int>(vertices.rows());
  const int j = static_cast<int>(vertices.cols());
  // Exact-vertex fast path keeps single-mode transitions deterministic.
  for (int c = 0; c < j; ++c) {
    if ((vertices.col(c) - point).cwiseAbs().maxCoeff() <= 1e-9) return {{c, 1.0}};
  }
  auto lp = lp::LinearProgram::with_variables(j);
  for (int r = 0; r < k; ++r)
    lp.add_row(vertices.row(r).transpose(), lp::Relation::Eq, point[r]);
  lp.add_row(Vec::Ones(j), lp::Relation::Eq, 1.0);
  const auto sol = lp::solve_min(lp);
  if (sol.status != lp::Status::Optimal)
    throw NumericError("strategy extraction: continuation point is not in the stored hull");
  std::vector<Transition> out;
  double total = 0.0;
  for (int c = 0; c < j; ++c) {
    if (sol.primal[c] > 1e-10) {
      out.push_back({c, sol.primal[c]});
      total += sol.primal[c];
    }
  }
  if (out.empty() || total <= 0.0)
    throw NumericError("strategy extraction: empty decomposition");
  for (auto& tr : out) tr.weight /= total;
  return out;
}

}  // namespace

ModeStrategy extract_strategy(const SolveResult& res, int threads) {
  const int modes = res.grid.count();
  if (res.prev_frontier.count() != modes)
    throw std::invalid_argument(
        "extract_strategy: need a solve of at least two iterations so modes are grid-aligned");
  if (static_cast<int>(res.modes.size()) != modes)
    throw std::invalid_argument("extract_strategy: missing per-direction solutions");

  ModeStrategy s;
  s.k = res.game.k;
  s.m = res.game.m;
  s.n = res.game.n;
  s.beta = res.game.beta;
  s.grid = res.grid;
  s.record = res.record;
  s.alpha.resize(s.m, modes);
  s.guarantee.resize(s.k, modes);
  s.transitions.assign(modes, {});
  parallel_for(modes, threads, [&](int i) {
    s.alpha.col(i) = res.modes[i].alpha;
    s.guarantee.col(i) = res.frontier.vertices.col(i);
    auto& per_b = s.transitions[i];
    per_b.resize(s.n);
    for (int b = 0; b < s.n; ++b)
      per_b[b] = decompose_over(res.prev_frontier.vertices, res.modes[i].q.col(b));
  });
  return s;
}

EvaluationResult evaluate_strategy(const VectorGame& g, const ModeStrategy& s, double tol) {
  if (g.k != s.k || g.m != s.m || g.n != s.n)
    throw std::invalid_argument("evaluate_strategy: game/strategy shape mismatch");
  const int modes = s.mode_count();

  // Stage terms sum_a alpha_a(p) r(.,b) never change across sweeps.
  std::vector<Mat> stage(g.n);
  for (int b = 0; b < g.n; ++b) stage[b] = g.loss_for_adversary(b) * s.alpha;

  EvaluationResult ev;
  ev.guarantees = Mat::Zero(g.k, modes);
  const double stop = tol * (1.0 - g.beta);
  const int max_sweeps = 1000000;
  Mat next(g.k, modes);
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    for (int i = 0; i < modes; ++i) {
      Vec best = Vec::Constant(g.k, -std::numeric_limits<double>::infinity());
      for (int b = 0; b < g.n; ++b) {
        Vec cont = Vec::Zero(g.k);
        for (const auto& tr : s.transitions[i][b]) cont += tr.weight * ev.guarantees.col(tr.mode);
        best = best.cwiseMax(stage[b].col(i) + g.beta * cont);
      }
      next.col(i) = best;
    }
    ev.final_delta = (next - ev.guarantees).cwiseAbs().maxCoeff();
    ev.guarantees.swap(next);
    ev.iterations = sweep;
    if (ev.final_delta <= stop) return ev;
  }
  throw NumericError("evaluate_strategy: contraction did not reach tolerance");
}

double mode_sup_gap(const ParamGrid& grid, const Mat& f, const Mat& g) {
  if (f.cols() != grid.count() || g.cols() != grid.count() || f.rows() != grid.k ||
      g.rows() != grid.k)
    throw std::invalid_argument("mode_sup_gap: table shape does not match the grid");
  double worst = 0.0;
  for (int i = 0; i < grid.count(); ++i) {
    const Vec p = grid.points.col(i);
    worst = std::max(worst, std::abs(line_value(f.col(i), p) - line_value(g.col(i), p)));
  }
  return worst;
}

std::vector<Transition> initial_modes(const ModeStrategy& s, const InitialTarget& target) {
  Frontier hull;
  hull.vertices = s.guarantee;

  if (target.kind == InitialTarget::Kind::Prior) {
    const auto sel = prior_select(hull, target.weights);
    return {{sel.vertex, 1.0}};
  }
  const Vec p = target.kind == InitialTarget::Kind::Minmax ? Vec::Zero(s.k) : target.weights;
  if (p.size() != s.k) throw std::invalid_argument("initial_modes: direction dimension mismatch");
  const auto hit = frontier_intersect(p, hull);
  // The intersection already carries basic hull weights of the dominated
  // point; reuse them instead of re-decomposing.
  for (int c = 0; c < s.mode_count(); ++c) {
    if ((s.guarantee.col(c) - hit.x).cwiseAbs().maxCoeff() <= kGeomTol) return {{c, 1.0}};
  }
  std::vector<Transition> out;
  double total = 0.0;
  for (int c = 0; c < s.mode_count(); ++c) {
    if (hit.weights[c] > 1e-10) {
      out.push_back({c, hit.weights[c]});
      total += hit.weights[c];
    }
  }
  if (out.empty()) throw NumericError("initial_modes: degenerate intersection weights");
  for (auto& tr : out) tr.weight /= total;
  return out;
}

int step(const ModeStrategy& s, int mode, Rng& rng) {
  if (mode < 0 || mode >= s.mode_count()) throw std::out_of_range("step: invalid mode");
  return rng.sample(s.alpha.col(mode));
}

int observe(const ModeStrategy& s, int mode, int b, Rng& rng) {
  if (mode < 0 || mode >= s.mode_count()) throw std::out_of_range("observe: invalid mode");
  if (b < 0 || b >= s.n) throw std::out_of_range("observe: invalid adversary action");
  const auto& list = s.transitions[mode][b];
  const double u = rng.next_double();
  double acc = 0.0;
  for (const auto& tr : list) {
    acc += tr.weight;
    if (u < acc) return tr.mode;
  }
  return list.back().mode;
}

}  // namespace vecgame
