#pragma once

#include "vecgame/game.hpp"
#include "vecgame/geometry.hpp"

#include <optional>
#include <vector>

namespace vecgame {

/// One-step guarantee of mixing alpha now and continuing with Q(b) after the
/// adversary plays b: component k is max_b [ sum_a alpha_a r_k(a,b) + beta Q_k(b) ].
Vec guarantee_vector(const VectorGame& g, const Vec& alpha, const Mat& q);

/// Per-direction solution of the one-step program.
struct ModeSolution {
  Vec alpha;   // mixed action over A
  Mat q;       // k x n: continuation point per adversary action
  double t = 0.0;
};

struct DpStepResult {
  Frontier frontier;                // one vertex t(p)*1 + p per grid direction
  std::vector<ModeSolution> modes;
};

/// One application of the quantized dynamic-programming operator: for every
/// grid direction p, minimize t subject to
///   t*1 + p >= sum_a alpha_a r(.,b) + beta Q(b)   for all b,
///   alpha in Delta(A),  Q(b) in hull(V's vertices).
/// Requires a normalized game (stage losses in [0, 1-beta]).
DpStepResult dp_step(const VectorGame& g, const Frontier& v, const ParamGrid& grid,
                     int threads = 1);

struct ErrorBounds {
  double e_upper = 0.0;           // beta^n
  double d_upper = 0.0;           // (1/N)(1-beta^n)/(1-beta) + beta^n
  double strategy_d_upper = 0.0;  // extracted-automaton guarantee distance
};

ErrorBounds error_bounds(int n_grid, int iterations, double beta);

struct StopRule {
  int max_iterations = 0;
  std::optional<double> tolerance;  // stop once the sup-norm delta drops below
};

struct SolveResult {
  VectorGame game;  // normalized
  NormalizationRecord record;
  ParamGrid grid;
  Frontier frontier;       // final iterate
  Frontier prev_frontier;  // iterate the final-step continuation points lie on
  std::vector<ModeSolution> modes;  // final-iteration solutions, one per direction
  std::vector<double> deltas;       // sup-norm vertex movement per iteration
  int iterations = 0;
  ErrorBounds bounds;

  /// Frontier with every vertex mapped back to raw loss units.
  Frontier raw_frontier() const;
};

/// Iterates dp_step from the singleton {0}, recording per-iteration sup-norm
/// deltas and the final-iteration solutions. Refuses games whose stage losses
/// are not already in [0, 1-beta].
SolveResult value_iteration(const VectorGame& normalized, const NormalizationRecord& rec,
                            int n_grid, const StopRule& stop, int threads = 1);

/// Iteration-error correction applied to a raw-unit minmax readout when
/// reporting an upper bound on the optimal value: readout + beta^n/(1-beta).
double regret_upper_bound(double raw_minmax, double beta, int iterations);

// ---------------------------------------------------------------------------
// Closed-form frontier for the two-expert regret game at beta = 1/2, in raw
// units on [0,2]^2: the curve (x, f(x)) with f(x) = -2*sqrt(2x) + x + 2.
// ---------------------------------------------------------------------------

double oracle_f(double x);

/// Polyline frontier sampled on the curve. Samples are uniform in sqrt(x)
/// (the curve is quadratic in that parameter, so chord error is O(1/samples^2)
/// even at the steep left end).
Frontier oracle_frontier_k2_half(int samples);

/// State of the closed-form optimal automaton: attains (x, f(x)) when not
/// mirrored, (f(x), x) when mirrored, for x in [0, 1/2].
struct OracleState {
  double x = 0.0;
  bool mirrored = false;
};

Vec oracle_policy_action(const OracleState& s);
OracleState oracle_policy_next(const OracleState& s, int adversary_action);

}  // namespace vecgame
