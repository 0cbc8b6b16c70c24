#pragma once

#include "vecgame/solver.hpp"

#include <vector>

namespace vecgame {

struct Transition {
  int mode = 0;
  double weight = 0.0;
};

/// Randomized finite automaton with one mode per grid direction. A mode
/// carries a mixed action; after the adversary's action b the next mode is
/// sampled from a short transition list (support <= K+1). Transitions depend
/// only on (mode, b), never on the player's own realized action.
struct ModeStrategy {
  int k = 0;
  int m = 0;
  int n = 0;
  double beta = 0.0;
  ParamGrid grid;
  Mat alpha;      // m x modes
  std::vector<std::vector<std::vector<Transition>>> transitions;  // [mode][b]
  Mat guarantee;  // k x modes, normalized units
  NormalizationRecord record;

  int mode_count() const { return static_cast<int>(alpha.cols()); }
};

/// Builds the automaton from the final-iteration solutions: the mixed action
/// is taken as solved, and each continuation point Q(b,p) is re-expressed as
/// a basic (hence <= K+1 sparse) convex combination of the vertices of the
/// frontier it was drawn from. Needs a solve of at least two iterations so
/// that frontier is grid-aligned.
ModeStrategy extract_strategy(const SolveResult& res, int threads = 1);

struct EvaluationResult {
  Mat guarantees;  // k x modes: fixed point of the policy-evaluation operator
  int iterations = 0;
  double final_delta = 0.0;
};

/// Exact per-mode guarantees of the automaton: iterates
///   F(p) <- ( max_b { sum_a alpha_a(p) r_k(a,b) + beta * sum_i z_i F_k(q_i) } )_k
/// from zero until the sup-norm step is below tol*(1-beta), which leaves the
/// result within tol of the unique fixed point.
EvaluationResult evaluate_strategy(const VectorGame& g, const ModeStrategy& s, double tol = 1e-8);

/// Line coordinate of a point at direction p: the smallest t with t*1+p >= x.
/// Stored frontier vertices t*1+p map back to t exactly.
inline double line_value(const Vec& x, const Vec& p) { return (x - p).maxCoeff(); }

/// Sup over modes of the line-coordinate gap between two per-mode value
/// tables (k x modes). Directions whose lines meet the upset above the
/// frontier's extent carry slack components that no achievable guarantee
/// reaches, so per-mode values are compared in the frontier parameterization
/// rather than componentwise; this is the same coordinate the solver's
/// per-iteration deltas are recorded in.
double mode_sup_gap(const ParamGrid& grid, const Mat& f, const Mat& g);

struct InitialTarget {
  enum class Kind { Minmax, Prior, Param };
  Kind kind = Kind::Minmax;
  Vec weights;  // prior probabilities or an explicit direction, by kind

  static InitialTarget minmax() { return {Kind::Minmax, {}}; }
  static InitialTarget prior(Vec w) { return {Kind::Prior, std::move(w)}; }
  static InitialTarget param(Vec p) { return {Kind::Param, std::move(p)}; }
};

/// Initial randomization over modes attaining the requested point of the
/// hull of the per-mode guarantees: the diagonal (minmax) point, the
/// prior-weighted optimum, or the point on the line of an explicit direction.
std::vector<Transition> initial_modes(const ModeStrategy& s, const InitialTarget& target);

/// Samples the mixed action of the current mode.
int step(const ModeStrategy& s, int mode, Rng& rng);

/// Samples the successor mode after the adversary played b.
int observe(const ModeStrategy& s, int mode, int b, Rng& rng);

}  // namespace vecgame
