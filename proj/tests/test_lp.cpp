#include "vecgame/lp.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace vecgame;
namespace vlp = vecgame::lp;

namespace {

vlp::LinearProgram min_t_above(const std::vector<double>& bounds) {
  auto lp = vlp::LinearProgram::with_variables(1);
  lp.lower[0] = -vlp::LinearProgram::infinity();
  lp.objective[0] = 1.0;
  for (double b : bounds) lp.add_row(Vec::Ones(1), vlp::Relation::GreaterEq, b);
  return lp;
}

}  // namespace

TEST_CASE("min t over lower bounds picks the largest bound") {
  const auto sol = vlp::solve_min(min_t_above({0.4, 0.6}));
  REQUIRE(sol.status == vlp::Status::Optimal);
  CHECK(sol.primal[0] == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("symmetric frontier midpoint") {
  // min t s.t. t*1 + 0 >= w1*(0,1) + w2*(1,0), w in simplex.
  auto lp = vlp::LinearProgram::with_variables(3);
  lp.lower[0] = -vlp::LinearProgram::infinity();
  lp.objective[0] = 1.0;
  Vec r1(3), r2(3), s(3);
  r1 << 1.0, 0.0, -1.0;
  r2 << 1.0, -1.0, 0.0;
  s << 0.0, 1.0, 1.0;
  lp.add_row(r1, vlp::Relation::GreaterEq, 0.0);
  lp.add_row(r2, vlp::Relation::GreaterEq, 0.0);
  lp.add_row(s, vlp::Relation::Eq, 1.0);
  const auto sol = vlp::solve_min(lp);
  REQUIRE(sol.status == vlp::Status::Optimal);
  CHECK(sol.primal[0] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("infeasible and unbounded programs are reported, not thrown") {
  auto infeasible = vlp::LinearProgram::with_variables(1);
  infeasible.add_row(Vec::Ones(1), vlp::Relation::LessEq, 1.0);
  infeasible.add_row(Vec::Ones(1), vlp::Relation::GreaterEq, 2.0);
  CHECK(vlp::solve_min(infeasible).status == vlp::Status::Infeasible);

  auto unbounded = vlp::LinearProgram::with_variables(1);
  unbounded.objective[0] = -1.0;
  unbounded.add_row(Vec::Ones(1), vlp::Relation::GreaterEq, 0.0);
  CHECK(vlp::solve_min(unbounded).status == vlp::Status::Unbounded);
}

TEST_CASE("random programs match vertex enumeration") {
  Rng rng(20240401);
  int solved = 0;
  for (int trial = 0; trial < 40; ++trial) {
    auto lp = vlp::LinearProgram::with_variables(3);
    for (int j = 0; j < 3; ++j) {
      lp.upper[j] = 3.0;
      lp.objective[j] = rng.next_double() * 2.0 - 1.0;
    }
    const int rows = 3 + static_cast<int>(rng.next_double() * 3.0);
    for (int i = 0; i < rows; ++i) {
      Vec a(3);
      for (int j = 0; j < 3; ++j) a[j] = rng.next_double() * 2.0 - 1.0;
      const double roll = rng.next_double();
      const auto rel = roll < 0.4   ? vlp::Relation::LessEq
                       : roll < 0.8 ? vlp::Relation::GreaterEq
                                    : vlp::Relation::Eq;
      lp.add_row(a, rel, rng.next_double() * 2.0 - 0.5);
    }
    const auto oracle = oracles::enumerate_lp_min(lp);
    const auto sol = vlp::solve_min(lp);
    if (!oracle) {
      CHECK(sol.status == vlp::Status::Infeasible);
      continue;
    }
    REQUIRE(sol.status == vlp::Status::Optimal);
    CHECK(sol.objective == doctest::Approx(*oracle).epsilon(1e-7));
    ++solved;

    // Feasibility of the reported point.
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
      const double lhs = lp.rows[i].dot(sol.primal);
      switch (lp.relations[i]) {
        case vlp::Relation::LessEq: CHECK(lhs <= lp.rhs[i] + 1e-9); break;
        case vlp::Relation::GreaterEq: CHECK(lhs >= lp.rhs[i] - 1e-9); break;
        case vlp::Relation::Eq: CHECK(std::abs(lhs - lp.rhs[i]) <= 1e-9); break;
      }
    }
    // No sampled feasible point does better.
    for (int s = 0; s < 200; ++s) {
      Vec x(3);
      for (int j = 0; j < 3; ++j) x[j] = rng.next_double() * 3.0;
      bool ok = true;
      for (std::size_t i = 0; i < lp.rows.size() && ok; ++i) {
        const double lhs = lp.rows[i].dot(x);
        if (lp.relations[i] == vlp::Relation::LessEq) ok = lhs <= lp.rhs[i];
        if (lp.relations[i] == vlp::Relation::GreaterEq) ok = lhs >= lp.rhs[i];
        if (lp.relations[i] == vlp::Relation::Eq) ok = std::abs(lhs - lp.rhs[i]) <= 1e-9;
      }
      if (ok) CHECK(lp.objective.dot(x) >= sol.objective - 1e-6);
    }
  }
  CHECK(solved >= 10);  // the generator must produce enough feasible programs
}

TEST_CASE("basic solutions keep convex decompositions sparse") {
  // Equality-constrained convex combination: support of a basic solution is
  // at most the row count (K+1 here), whatever the column count.
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 2 + static_cast<int>(rng.next_double() * 2.0);  // 2 or 3
    const int cols = 20;
    Mat v(k, cols);
    for (int j = 0; j < cols; ++j)
      for (int r = 0; r < k; ++r) v(r, j) = rng.next_double();
    // Target inside the hull by construction.
    Vec w = Vec::Zero(cols);
    for (int j = 0; j < 5; ++j) w[static_cast<int>(rng.next_double() * cols)] += 1.0;
    w /= w.sum();
    const Vec target = v * w;

    auto lp = vlp::LinearProgram::with_variables(cols);
    for (int r = 0; r < k; ++r) lp.add_row(v.row(r).transpose(), vlp::Relation::Eq, target[r]);
    lp.add_row(Vec::Ones(cols), vlp::Relation::Eq, 1.0);
    const auto sol = vlp::solve_min(lp);
    REQUIRE(sol.status == vlp::Status::Optimal);
    int support = 0;
    for (int j = 0; j < cols; ++j) {
      if (sol.primal[j] > 1e-9) ++support;
    }
    CHECK(support <= k + 1);
    CHECK((v * sol.primal - target).cwiseAbs().maxCoeff() <= 1e-9);
  }
}
