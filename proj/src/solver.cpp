#include "vecgame/solver.hpp"

#include "vecgame/lp.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace vecgame {

Vec guarantee_vector(const VectorGame& g, const Vec& alpha, const Mat& q) {
  if (alpha.size() != g.m) throw std::invalid_argument("guarantee_vector: alpha size mismatch");
  if (q.rows() != g.k || q.cols() != g.n)
    throw std::invalid_argument("guarantee_vector: continuation size mismatch");
  Vec u = Vec::Constant(g.k, -std::numeric_limits<double>::infinity());
  for (int b = 0; b < g.n; ++b) {
    const Vec stage = g.loss_for_adversary(b) * alpha + g.beta * q.col(b);
    u = u.cwiseMax(stage);
  }
  return u;
}

namespace {

void check_normalized(const VectorGame& g) {
  const double hi = 1.0 - g.beta + 1e-9;
  if ((g.losses.array() < -1e-9).any() || (g.losses.array() > hi).any())
    throw std::invalid_argument(
        "solver requires a normalized game with stage losses in [0, 1-beta]");
}

// The one-step program shares its matrix across directions; only the first
// n*k right-hand sides (the direction coordinates) change with p.
lp::LinearProgram build_step_program(const VectorGame& g, const Frontier& v) {
  const int jv = v.count();
  const int vars = 1 + g.m + g.n * jv;  // t, alpha, hull weights per b
  auto lp = lp::LinearProgram::with_variables(vars);
  lp.lower[0] = -lp::LinearProgram::infinity();
  lp.objective[0] = 1.0;
  for (int b = 0; b < g.n; ++b) {
    const Mat r_b = g.loss_for_adversary(b);
    for (int r = 0; r < g.k; ++r) {
      Vec row = Vec::Zero(vars);
      row[0] = -1.0;
      row.segment(1, g.m) = r_b.row(r).transpose();
      row.segment(1 + g.m + b * jv, jv) = g.beta * v.vertices.row(r).transpose();
      lp.add_row(std::move(row), lp::Relation::LessEq, 0.0);  // rhs set per direction
    }
  }
  Vec alpha_row = Vec::Zero(vars);
  alpha_row.segment(1, g.m).setOnes();
  lp.add_row(std::move(alpha_row), lp::Relation::Eq, 1.0);
  for (int b = 0; b < g.n; ++b) {
    Vec w_row = Vec::Zero(vars);
    w_row.segment(1 + g.m + b * jv, jv).setOnes();
    lp.add_row(std::move(w_row), lp::Relation::Eq, 1.0);
  }
  return lp;
}

ModeSolution solve_direction(lp::LinearProgram& lp, const VectorGame& g, const Frontier& v,
                             const Vec& p) {
  for (int b = 0; b < g.n; ++b)
    for (int r = 0; r < g.k; ++r) lp.rhs[b * g.k + r] = p[r];
  const auto sol = lp::solve_min(lp);
  if (sol.status != lp::Status::Optimal) {
    throw NumericError("dp_step: program not optimal at direction [" +
                       std::to_string(p[0]) + ", ...]");
  }
  const int jv = v.count();
  ModeSolution mode;
  mode.t = sol.primal[0];
  mode.alpha = sol.primal.segment(1, g.m);
  mode.q.resize(g.k, g.n);
  for (int b = 0; b < g.n; ++b)
    mode.q.col(b) = v.vertices * sol.primal.segment(1 + g.m + b * jv, jv);
  return mode;
}

}  // namespace

DpStepResult dp_step(const VectorGame& g, const Frontier& v, const ParamGrid& grid,
                     int threads) {
  check_normalized(g);
  if (v.dim() != g.k || grid.k != g.k) throw std::invalid_argument("dp_step: dimension mismatch");
  const lp::LinearProgram master = build_step_program(g, v);
  const int count = grid.count();

  DpStepResult out;
  out.modes.resize(count);
  out.frontier.vertices.resize(g.k, count);
  out.frontier.params = grid.points;

  const int workers = std::max(1, std::min(threads, count));
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    lp::LinearProgram local = master;  // per-worker copy; only the rhs mutates
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        const Vec p = grid.points.col(i);
        out.modes[i] = solve_direction(local, g, v, p);
        out.frontier.vertices.col(i) = Vec::Constant(g.k, out.modes[i].t) + p;
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

ErrorBounds error_bounds(int n_grid, int iterations, double beta) {
  if (n_grid < 1) throw std::invalid_argument("error_bounds: need grid level >= 1");
  if (iterations < 0) throw std::invalid_argument("error_bounds: need iterations >= 0");
  if (beta < 0.0 || beta >= 1.0) throw std::invalid_argument("error_bounds: beta in [0,1)");
  ErrorBounds b;
  const double bn = std::pow(beta, iterations);
  const double geo = (1.0 - bn) / (1.0 - beta);
  b.e_upper = bn;
  b.d_upper = geo / n_grid + bn;
  b.strategy_d_upper =
      geo / n_grid + 2.0 * bn +
      (2.0 - bn - bn * beta) / ((1.0 - beta) * (1.0 - beta) * n_grid);
  return b;
}

Frontier SolveResult::raw_frontier() const {
  Frontier raw = frontier;
  for (int j = 0; j < raw.count(); ++j)
    raw.vertices.col(j) = denormalize_vector(frontier.vertices.col(j), record, game.beta);
  return raw;
}

SolveResult value_iteration(const VectorGame& normalized, const NormalizationRecord& rec,
                            int n_grid, const StopRule& stop, int threads) {
  check_normalized(normalized);
  if (stop.max_iterations < 1)
    throw std::invalid_argument("value_iteration: need at least one iteration");

  SolveResult res;
  res.game = normalized;
  res.record = rec;
  res.grid = param_grid(normalized.k, n_grid);

  Frontier current = Frontier::single(Vec::Zero(normalized.k));
  Vec t_prev = Vec::Zero(res.grid.count());
  for (int it = 0; it < stop.max_iterations; ++it) {
    DpStepResult step = dp_step(normalized, current, res.grid, threads);
    Vec t_new(res.grid.count());
    for (int i = 0; i < res.grid.count(); ++i) t_new[i] = step.modes[i].t;
    const double delta = (t_new - t_prev).cwiseAbs().maxCoeff();
    res.deltas.push_back(delta);
    res.prev_frontier = std::move(current);
    current = std::move(step.frontier);
    res.modes = std::move(step.modes);
    t_prev = std::move(t_new);
    res.iterations = it + 1;
    if (stop.tolerance && delta <= *stop.tolerance) break;
  }
  res.frontier = std::move(current);
  res.bounds = error_bounds(n_grid, res.iterations, normalized.beta);
  return res;
}

double regret_upper_bound(double raw_minmax, double beta, int iterations) {
  return raw_minmax + std::pow(beta, iterations) / (1.0 - beta);
}

// ---------------------------------------------------------------------------
// Closed-form two-expert frontier at beta = 1/2.
// ---------------------------------------------------------------------------

double oracle_f(double x) {
  if (x < -1e-12 || x > 2.0 + 1e-12) throw std::invalid_argument("oracle_f: x outside [0, 2]");
  x = std::min(std::max(x, 0.0), 2.0);
  return -2.0 * std::sqrt(2.0 * x) + x + 2.0;
}

Frontier oracle_frontier_k2_half(int samples) {
  if (samples < 2) throw std::invalid_argument("oracle_frontier_k2_half: need >= 2 samples");
  Frontier f;
  f.vertices.resize(2, samples);
  for (int i = 0; i < samples; ++i) {
    const double u = static_cast<double>(i) / (samples - 1);
    const double x = 2.0 * u * u;
    f.vertices(0, i) = x;
    f.vertices(1, i) = oracle_f(x);
  }
  return f;
}

Vec oracle_policy_action(const OracleState& s) {
  if (s.x < -1e-12 || s.x > 0.5 + 1e-12)
    throw std::invalid_argument("oracle policy: state parameter outside [0, 1/2]");
  Vec a(2);
  if (!s.mirrored) {
    a << 1.0 - s.x, s.x;
  } else {
    a << s.x, 1.0 - s.x;
  }
  return a;
}

OracleState oracle_policy_next(const OracleState& s, int adversary_action) {
  if (adversary_action != 0 && adversary_action != 1)
    throw std::invalid_argument("oracle policy: adversary action out of range");
  // Attaining (x, f(x)): on action 0 continue at (4x, f(4x)), on action 1 at
  // (0, f(0)). The mirrored branch swaps the roles. Points with first
  // coordinate above 1/2 are re-expressed through the mirror using f = f^{-1}.
  const bool advance = s.mirrored ? adversary_action == 1 : adversary_action == 0;
  double nx = advance ? 4.0 * s.x : 0.0;
  bool mirrored = s.mirrored;
  if (nx > 0.5) {
    nx = oracle_f(nx);
    mirrored = !mirrored;
  }
  return {nx, mirrored};
}

}  // namespace vecgame
