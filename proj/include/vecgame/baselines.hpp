#pragma once

#include "vecgame/strategy.hpp"

#include <memory>
#include <string>
#include <vector>

namespace vecgame {

// ---------------------------------------------------------------------------
// Forecaster distributions.
// ---------------------------------------------------------------------------

/// Default learning rate sqrt(8 ln K (1 - beta^2)).
double hedge_eta(int k, double beta);

/// p_i proportional to exp(-eta * L_i) over discounted cumulative losses.
Vec hedge_distribution(const Vec& discounted_losses, double eta);

double gps_xi(double beta);

/// (leader, laggard) probabilities for the two-expert geometric-horizon
/// forecaster at undiscounted cumulative-loss gap d >= 0.
Vec gps2_distribution(int gap, double beta);

/// (leader, second, laggard) probabilities for three experts, from the gaps
/// d12, d13, d23 between the rank-sorted cumulative losses.
Vec gps3_distribution(int d12, int d13, int d23, double beta);

// ---------------------------------------------------------------------------
// Stateful players for the simulation harness. Experts double as actions:
// the forecaster picks an expert each stage and then observes the full loss
// vector the adversary produced.
// ---------------------------------------------------------------------------

class Forecaster {
 public:
  virtual ~Forecaster() = default;
  virtual std::unique_ptr<Forecaster> clone() const = 0;
  virtual void reset(Rng& rng) = 0;
  virtual Vec distribution(int t) = 0;
  virtual void observe(const Vec& losses, int t, Rng& rng) = 0;
};

std::unique_ptr<Forecaster> make_hedge(int experts, double beta);
std::unique_ptr<Forecaster> make_hedge(int experts, double beta, double eta);
std::unique_ptr<Forecaster> make_gps(int experts, double beta);

/// Runs the extracted automaton against a scalar game whose columns enumerate
/// the adversary outcomes. Realized loss vectors equal to a column advance
/// the mode; constant vectors (possible under Bernoulli adversaries) leave it
/// unchanged.
std::unique_ptr<Forecaster> make_mode_strategy_forecaster(const ModeStrategy& s,
                                                          const ScalarGame& game,
                                                          std::vector<Transition> initial);

enum class AdversaryKind { A, B, C, D, E, F };

/// Adversary C's stage rule: probability that expert 1 (and only expert 1)
/// errs at stage t is 0.9^(1/t) for odd t and 0.9^t for even t.
double adversary_c_error_prob(int t);

AdversaryKind adversary_from_name(const std::string& name);
std::string adversary_name(AdversaryKind kind);

class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual std::unique_ptr<Adversary> clone() const = 0;
  virtual void reset() = 0;
  virtual Vec sample(int t, Rng& rng) = 0;
  virtual int experts() const = 0;
};

/// A, B, C play two-expert games; D, E, F three-expert games. B and F use a
/// Bernoulli(1/2 - sqrt(1-beta)) arm and are rejected for beta < 0.75 where
/// that parameter would be negative.
std::unique_ptr<Adversary> make_adversary(AdversaryKind kind, double beta);

// ---------------------------------------------------------------------------
// Monte-Carlo discounted-regret estimates.
// ---------------------------------------------------------------------------

struct RunStats {
  int runs = 0;
  int horizon = 0;
  std::vector<double> per_run;  // realized discounted regret of each run
  double mean = 0.0;
  double std_error = 0.0;
  double ci_half_width = 0.0;  // 1.96 * std_error
};

/// Realized discounted regret, averaged over independent runs. Per-run RNG
/// streams derive from (seed, run), so results are bit-identical for a given
/// configuration regardless of the thread count.
RunStats simulate(const Forecaster& forecaster, const Adversary& adversary, double beta,
                  int horizon, int runs, std::uint64_t seed, int threads = 1);

}  // namespace vecgame
