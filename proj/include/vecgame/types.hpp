#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace vecgame {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
// Simplex tableaus are traversed row-wise.
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr const char* kVersion = "0.1.0";

// Absolute tolerance for geometric comparisons (dominance with slack,
// vertex matching, hull membership checks).
inline constexpr double kGeomTol = 1e-7;
// LP feasibility / optimality tolerance.
inline constexpr double kLpTol = 1e-9;

/// Numeric failure inside an LP solve or an iteration that should not
/// happen for well-posed inputs.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// File or serialization failure.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Deterministic random numbers.
//
// All randomized components draw from this generator so that results are
// reproducible from a seed independently of platform and thread schedule.
// ---------------------------------------------------------------------------

inline std::uint64_t split_mix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// split_mix64 stream. Fully specified here so draws are identical across
/// platforms and standard-library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    // Warm up so that small seeds do not produce correlated first draws.
    for (int i = 0; i < 4; ++i) split_mix64(state_);
  }

  std::uint64_t next_u64() { return split_mix64(state_); }

  /// Uniform double in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Index sampled from an (unnormalized is not allowed) probability vector.
  int sample(const Vec& probs) {
    const double u = next_double();
    double acc = 0.0;
    for (int i = 0; i < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) return i;
    }
    return static_cast<int>(probs.size()) - 1;
  }

 private:
  std::uint64_t state_;
};

/// Derives a child seed for (seed, stream...) tuples.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  std::uint64_t s = seed;
  split_mix64(s);
  s ^= 0x9e3779b97f4a7c15ULL * (a + 1);
  split_mix64(s);
  s ^= 0xc2b2ae3d27d4eb4fULL * (b + 1);
  split_mix64(s);
  return s;
}

/// Runs fn(0..count-1), optionally on `threads` workers. Results must be
/// written to disjoint slots; the partition of indices over workers does not
/// affect the output.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

/// Splits [0, count) into one contiguous shard per worker and runs
/// fn(lo, hi) on each. Lets workers keep per-shard scratch state.
void run_sharded(int count, int threads, const std::function<void(int, int)>& fn);

}  // namespace vecgame
