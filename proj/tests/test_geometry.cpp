#include "vecgame/geometry.hpp"

#include "vecgame/lp.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <array>
#include <set>

using namespace vecgame;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Vec v3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

Frontier frontier2(std::initializer_list<std::pair<double, double>> pts) {
  Mat m(2, static_cast<int>(pts.size()));
  int j = 0;
  for (const auto& [a, b] : pts) m.col(j++) = v2(a, b);
  return Frontier::from_columns(std::move(m));
}

bool upset_member(const Frontier& v, const Vec& x) {
  // Feasibility program: exists hull weights with V w <= x.
  auto lp = lp::LinearProgram::with_variables(v.count());
  for (int r = 0; r < v.dim(); ++r)
    lp.add_row(v.vertices.row(r).transpose(), lp::Relation::LessEq, x[r]);
  lp.add_row(Vec::Ones(v.count()), lp::Relation::Eq, 1.0);
  return lp::solve_min(lp).status == lp::Status::Optimal;
}

}  // namespace

TEST_CASE("dominance basics") {
  CHECK(dominates(v2(0, 0), v2(0, 0)));
  CHECK_FALSE(dominates(v2(2, 2), v2(3, 1)));
  CHECK_FALSE(dominates(v2(3, 1), v2(2, 2)));
  CHECK(dominates(v3(0.1, 0.2, 0.3), v3(0.1, 0.25, 0.3)));
  CHECK_THROWS_AS(dominates(v2(0, 0), v3(0, 0, 0)), std::invalid_argument);
}

TEST_CASE("dominance is a partial order on random triples") {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = 2 + trial % 3;
    Vec a(k), b(k), c(k);
    for (int d = 0; d < k; ++d) {
      // Coarse grid so that coincidences actually happen.
      a[d] = std::floor(rng.next_double() * 4.0);
      b[d] = std::floor(rng.next_double() * 4.0);
      c[d] = std::floor(rng.next_double() * 4.0);
    }
    CHECK(dominates(a, a));
    if (dominates(a, b) && dominates(b, a)) CHECK(a == b);
    if (dominates(a, b) && dominates(b, c)) CHECK(dominates(a, c));
  }
}

TEST_CASE("pareto_prune examples") {
  const auto kept = pareto_prune({v2(2, 2), v2(3, 1), v2(4, 2)});
  REQUIRE(kept.size() == 2);
  CHECK(kept[0] == v2(2, 2));
  CHECK(kept[1] == v2(3, 1));

  const auto single = pareto_prune({v2(0, 0)});
  REQUIRE(single.size() == 1);
  CHECK(single[0] == v2(0, 0));

  CHECK_THROWS_AS(pareto_prune({}), std::invalid_argument);
}

TEST_CASE("pareto_prune equals brute force and leaves an antichain") {
  Rng rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Vec> pts;
    const int count = 100;
    for (int i = 0; i < count; ++i) {
      Vec p(3);
      for (int d = 0; d < 3; ++d) p[d] = std::round(rng.next_double() * 10.0) / 10.0;
      pts.push_back(std::move(p));
    }
    const auto ours = pareto_prune(pts);
    const auto expected = oracles::prune(pts);
    REQUIRE(ours.size() == expected.size());
    for (std::size_t i = 0; i < ours.size(); ++i) CHECK(ours[i] == expected[i]);
    for (std::size_t i = 0; i < ours.size(); ++i) {
      for (std::size_t j = 0; j < ours.size(); ++j) {
        const bool strictly_dominated =
            i != j && dominates(ours[i], ours[j]) && ours[i] != ours[j];
        CHECK_FALSE(strictly_dominated);
      }
    }
    // Every removed point is dominated by a kept one.
    for (const auto& p : pts) {
      bool covered = false;
      for (const auto& q : ours) covered = covered || dominates(q, p);
      CHECK(covered);
    }
  }
}

TEST_CASE("param_grid shapes and counts") {
  const auto g21 = param_grid(2, 1);
  CHECK(g21.nominal_size == 3);
  REQUIRE(g21.count() == 3);
  std::set<std::pair<double, double>> pts;
  for (int j = 0; j < 3; ++j) pts.insert({g21.points(0, j), g21.points(1, j)});
  CHECK(pts == std::set<std::pair<double, double>>{{0, 0}, {0, 1}, {1, 0}});

  CHECK(param_grid(2, 100).count() == 201);
  CHECK(param_grid(2, 100).nominal_size == 201);

  const auto g3 = param_grid(3, 20);
  CHECK(g3.nominal_size == 1321);
  CHECK(g3.count() == 1261);
  // Oracle: enumerate the union of the three faces via a set.
  std::set<std::array<long, 3>> uniq;
  for (int face = 0; face < 3; ++face) {
    for (int i = 0; i <= 20; ++i) {
      for (int j = 0; j <= 20; ++j) {
        std::array<long, 3> p{};
        int pos = 0;
        for (int d = 0; d < 3; ++d) p[d] = d == face ? 0 : (pos++ == 0 ? i : j);
        uniq.insert(p);
      }
    }
  }
  CHECK(static_cast<long>(uniq.size()) == g3.count());

  for (int j = 0; j < g3.count(); ++j) {
    CHECK(g3.points.col(j).minCoeff() == 0.0);  // every direction touches a face
  }
  CHECK_THROWS_AS(param_grid(1, 5), std::invalid_argument);
  CHECK_THROWS_AS(param_grid(2, 0), std::invalid_argument);
}

TEST_CASE("frontier_intersect basics") {
  const auto zero = Frontier::single(v2(0, 0));
  const auto hit = frontier_intersect(v2(0.3, 0.0), zero);
  CHECK(hit.t == doctest::Approx(0.0).epsilon(1e-12));
  CHECK((hit.x - v2(0.3, 0.0)).cwiseAbs().maxCoeff() <= 1e-9);

  const auto seg = frontier2({{0, 1}, {1, 0}});
  const auto mid = frontier_intersect(v2(0, 0), seg);
  CHECK(mid.t == doctest::Approx(0.5).epsilon(1e-9));
  CHECK((mid.x - v2(0.5, 0.5)).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("frontier_intersect against the envelope oracle, with minimality") {
  Rng rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const auto v = oracles::random_frontier(rng, 2, 4);
    const Vec p = oracles::random_direction(rng, 2);
    const auto hit = frontier_intersect(p, v);
    const double expect = oracles::mesh_intersect_t(p, v);
    CHECK(std::abs(hit.t - expect) <= 2e-3);
    // x lies exactly on the line and inside the upset; t - 1e-6 does not.
    CHECK((hit.x - (Vec::Constant(2, hit.t) + p)).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(upset_member(v, hit.x.array() + 1e-9));
    CHECK_FALSE(upset_member(v, Vec::Constant(2, hit.t - 1e-6) + p));
    // Reported hull weights reconstruct a dominated point.
    const Vec q = v.vertices * hit.weights;
    CHECK(hit.weights.sum() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK((q - hit.x).maxCoeff() <= 1e-9);
  }
}

TEST_CASE("e_distance identities") {
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const auto v = oracles::random_frontier(rng, 2, 4);
    CHECK(e_distance(v, v, 50) == doctest::Approx(0.0).epsilon(1e-9));

    const double c = 0.3 * rng.next_double();
    Frontier shifted = v;
    shifted.vertices.array() += c;
    // Shifting by c along the diagonal moves every line intersection by c.
    CHECK(std::abs(e_distance(v, shifted, 40) - c) <= 1e-7);
    CHECK(e_distance(shifted, v, 40) <= 1e-9);
  }
  const auto origin = Frontier::single(v2(0, 0));
  const auto shifted = Frontier::single(v2(0.25, 0.25));
  CHECK(e_distance(origin, shifted, 30) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("d_distance equals mesh brute force on random pairs") {
  Rng rng(123);
  for (int trial = 0; trial < 50; ++trial) {
    const auto u = oracles::random_frontier(rng, 2, 3);
    const auto v = oracles::random_frontier(rng, 2, 3);
    const double ours = d_distance(u, v, 1000);
    const double expect =
        std::max(oracles::mesh_e_distance(u, v), oracles::mesh_e_distance(v, u));
    CHECK(std::abs(ours - expect) <= 5e-3);
    // Symmetry by construction.
    CHECK(d_distance(v, u, 1000) == doctest::Approx(ours).epsilon(1e-12));
  }
}

TEST_CASE("d_distance triangle inequality within sampling slack") {
  Rng rng(321);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = trial % 2 == 0 ? 2 : 3;
    // The direction grid has ~K*m^(K-1) points, so K=3 needs a coarser m.
    const int m = k == 2 ? 400 : 40;
    const auto a = oracles::random_frontier(rng, k, 4);
    const auto b = oracles::random_frontier(rng, k, 4);
    const auto c = oracles::random_frontier(rng, k, 4);
    const double ab = d_distance(a, b, m);
    const double bc = d_distance(b, c, m);
    const double ac = d_distance(a, c, m);
    CHECK(ac <= ab + bc + 2.0 * (2.0 / m) + 1e-9);
  }
}

TEST_CASE("gamma_approx sandwich and idempotence") {
  Rng rng(2718);
  const int n = 25;
  const auto grid = param_grid(2, n);
  for (int trial = 0; trial < 25; ++trial) {
    const auto v = oracles::random_frontier(rng, 2, 5);
    const auto approx = gamma_approx(v, grid);
    CHECK(approx.count() == grid.count());
    CHECK(approx.has_params());
    // Approximation never loses dominance and loses at most 1/N of accuracy.
    CHECK(e_distance(approx, v, 500) <= 1e-7);
    CHECK(e_distance(v, approx, 500) <= 1.0 / n + 1e-7);
    // Re-intersecting reproduces the same vertex set.
    const auto again = gamma_approx(approx, grid);
    CHECK((again.vertices - approx.vertices).cwiseAbs().maxCoeff() <= 1e-7);
  }
}
