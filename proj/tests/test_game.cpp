#include "vecgame/game.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace vecgame;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

VectorGame constant_game(double c, double beta) {
  VectorGame g;
  g.m = 2;
  g.n = 2;
  g.k = 2;
  g.beta = beta;
  g.losses = Mat::Constant(2, 4, c);
  return g;
}

}  // namespace

TEST_CASE("normalize maps the two-expert regret game onto {0, 1/4, 1/2}") {
  const auto game = regret_game(experts_game(2), 0.5);
  const auto [norm, rec] = normalize(game);
  CHECK(rec.scale == doctest::Approx(0.25));
  CHECK(rec.shifts[0] == doctest::Approx(0.25));
  CHECK(rec.shifts[1] == doctest::Approx(0.25));
  for (int i = 0; i < norm.losses.size(); ++i) {
    const double v = norm.losses(i);
    const bool on_grid = std::abs(v) < 1e-12 || std::abs(v - 0.25) < 1e-12 ||
                         std::abs(v - 0.5) < 1e-12;
    CHECK(on_grid);
  }
  CHECK(norm.losses.minCoeff() == doctest::Approx(0.0));
  CHECK(norm.losses.maxCoeff() == doctest::Approx(0.5));
}

TEST_CASE("normalize is a projection: renormalizing changes nothing") {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    VectorGame g;
    g.m = 2 + static_cast<int>(rng.next_double() * 2);
    g.n = 2 + static_cast<int>(rng.next_double() * 2);
    g.k = 2;
    g.beta = 0.3 + 0.6 * rng.next_double();
    g.losses.resize(g.k, g.m * g.n);
    for (int i = 0; i < g.losses.size(); ++i) g.losses(i) = rng.next_double() * 8.0 - 4.0;
    const auto [norm, rec] = normalize(g);
    CHECK(norm.losses.minCoeff() >= -1e-12);
    CHECK(norm.losses.maxCoeff() <= 1.0 - g.beta + 1e-12);
    const auto [again, rec2] = normalize(norm);
    CHECK((again.losses - norm.losses).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("constant games collapse to zero") {
  const auto [norm, rec] = normalize(constant_game(3.0, 0.5));
  CHECK(norm.losses.cwiseAbs().maxCoeff() <= 1e-12);
  // Guarantee (0,0) in normalized units denormalizes to the discounted sum
  // of the constant stage loss: 3 / (1 - 0.5).
  const Vec raw = denormalize_vector(v2(0, 0), rec, 0.5);
  CHECK(raw[0] == doctest::Approx(6.0));
  CHECK(raw[1] == doctest::Approx(6.0));
}

TEST_CASE("denormalize inverts normalize on discounted sums") {
  CHECK(denormalize_vector(v2(0, 0), {0.5, v2(0, 0)}, 0.5) == v2(0, 0));
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    VectorGame g;
    g.m = 2;
    g.n = 3;
    g.k = 2;
    g.beta = 0.2 + 0.7 * rng.next_double();
    g.losses.resize(2, 6);
    for (int i = 0; i < g.losses.size(); ++i) g.losses(i) = rng.next_double() * 4.0 - 2.0;
    const auto [norm, rec] = normalize(g);

    // Simulation oracle: discounted sums of a constant action pair must map
    // through the record exactly.
    const int a = static_cast<int>(rng.next_double() * 2);
    const int b = static_cast<int>(rng.next_double() * 3);
    const int horizon = 400;  // geometric tail below 1e-12 for beta <= 0.9
    Vec raw_sum = Vec::Zero(2), norm_sum = Vec::Zero(2);
    double disc = 1.0;
    for (int t = 0; t < horizon; ++t) {
      raw_sum += disc * g.loss(a, b);
      norm_sum += disc * norm.loss(a, b);
      disc *= g.beta;
    }
    const Vec raw_back = denormalize_vector(norm_sum, rec, g.beta);
    CHECK((raw_back - raw_sum).cwiseAbs().maxCoeff() <= 1e-6);
    const Vec round_trip = normalize_vector(raw_back, rec, g.beta);
    CHECK((round_trip - norm_sum).cwiseAbs().maxCoeff() <= 1e-9);
  }
  NormalizationRecord bad;
  bad.scale = 0.0;
  bad.shifts = v2(0, 0);
  CHECK_THROWS_AS(denormalize_vector(v2(0, 0), bad, 0.5), std::invalid_argument);
}

TEST_CASE("regret transformation of the expert games") {
  const auto g2 = regret_game(experts_game(2), 0.9);
  REQUIRE(g2.k == 2);
  REQUIRE(g2.n == 2);
  CHECK(Vec(g2.loss(0, 0)) == v2(0, 1));
  CHECK(Vec(g2.loss(0, 1)) == v2(0, -1));
  CHECK(Vec(g2.loss(1, 0)) == v2(-1, 0));
  CHECK(Vec(g2.loss(1, 1)) == v2(1, 0));

  const auto g3 = regret_game(experts_game(3), 0.8);
  REQUIRE(g3.k == 3);
  REQUIRE(g3.n == 6);
  // Column {1,2}: experts 1 and 2 err; r_k(a, S) = 1{a in S} - 1{k in S}.
  const int col_12 = 3;
  for (int a = 0; a < 3; ++a) {
    for (int k = 0; k < 3; ++k) {
      const double in_a = a == 0 || a == 1 ? 1.0 : 0.0;
      const double in_k = k == 0 || k == 1 ? 1.0 : 0.0;
      CHECK(g3.loss(a, col_12)(k, 0) == in_a - in_k);
    }
  }
  CHECK((g3.losses.array().abs() <= 1.0).all());
}

TEST_CASE("regret diagonal and antisymmetry properties") {
  Rng rng(5);
  ScalarGame g;
  g.m = 4;
  g.n = 5;
  g.losses.resize(4, 5);
  for (int i = 0; i < g.losses.size(); ++i) g.losses(i) = rng.next_double() * 3.0;
  const auto vg = regret_game(g, 0.7);
  for (int a = 0; a < vg.m; ++a) {
    for (int b = 0; b < vg.n; ++b) {
      CHECK(vg.loss(a, b)(a, 0) == 0.0);
      for (int k = 0; k < vg.k; ++k) CHECK(vg.loss(a, b)(k, 0) == -vg.loss(k, b)(a, 0));
    }
  }
}

TEST_CASE("experts_game shapes") {
  const auto g2 = experts_game(2);
  CHECK(g2.losses(0, 0) == 1.0);
  CHECK(g2.losses(0, 1) == 0.0);
  CHECK(g2.losses(1, 0) == 0.0);
  CHECK(g2.losses(1, 1) == 1.0);
  const auto g3 = experts_game(3);
  REQUIRE(g3.n == 6);
  for (int b = 0; b < 6; ++b) {
    const double ones = g3.losses.col(b).sum();
    CHECK(ones >= 1.0);
    CHECK(ones <= 2.0);
  }
  // Column {1,2} gives losses (1,1,0).
  CHECK(g3.losses(0, 3) == 1.0);
  CHECK(g3.losses(1, 3) == 1.0);
  CHECK(g3.losses(2, 3) == 0.0);
  CHECK_THROWS_AS(experts_game(4), std::invalid_argument);
}

TEST_CASE("minmax_point") {
  Mat seg(2, 2);
  seg.col(0) = v2(0, 1);
  seg.col(1) = v2(1, 0);
  const auto mm = minmax_point(Frontier::from_columns(seg));
  CHECK(mm.value == doctest::Approx(0.5).epsilon(1e-9));
  CHECK((mm.x - v2(0.5, 0.5)).cwiseAbs().maxCoeff() <= 1e-9);

  // Appending dominated vertices does not change the readout.
  Mat padded(2, 4);
  padded.col(0) = v2(0, 1);
  padded.col(1) = v2(1, 0);
  padded.col(2) = v2(0.9, 0.9);
  padded.col(3) = v2(1, 1);
  CHECK(minmax_point(Frontier::from_columns(padded)).value ==
        doctest::Approx(0.5).epsilon(1e-9));

  // Mesh oracle on a second frontier.
  Mat two(2, 2);
  two.col(0) = v2(0.2, 0.7);
  two.col(1) = v2(0.6, 0.3);
  const double expect = oracles::mesh_intersect_t(Vec::Zero(2), Frontier::from_columns(two));
  CHECK(std::abs(minmax_point(Frontier::from_columns(two)).value - expect) <= 1e-4);
}

TEST_CASE("prior_select") {
  Mat seg(2, 2);
  seg.col(0) = v2(0, 1);
  seg.col(1) = v2(1, 0);
  const Frontier f = Frontier::from_columns(seg);

  // All mass on a coordinate picks the vertex minimal there.
  const auto e1 = prior_select(f, v2(1, 0));
  CHECK(e1.vertex == 0);
  // Tie at the uniform prior breaks to the lowest index.
  const auto tie = prior_select(f, v2(0.5, 0.5));
  CHECK(tie.vertex == 0);
  CHECK(tie.value == doctest::Approx(0.5));

  CHECK_THROWS_AS(prior_select(f, v2(0.4, 0.4)), std::invalid_argument);

  Rng rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const auto v = oracles::random_frontier(rng, 3, 6);
    Vec prior(3);
    for (int d = 0; d < 3; ++d) prior[d] = rng.next_double();
    prior /= prior.sum();
    const auto sel = prior_select(v, prior);
    int best = 0;
    for (int j = 1; j < v.count(); ++j) {
      if (prior.dot(v.vertices.col(j)) < prior.dot(v.vertices.col(best)) - 1e-15) best = j;
    }
    CHECK(sel.vertex == best);
  }
}

TEST_CASE("normalization preserves order and linear-objective argmins") {
  Rng rng(57);
  for (int trial = 0; trial < 30; ++trial) {
    VectorGame g;
    g.m = 2;
    g.n = 2;
    g.k = 2;
    g.beta = 0.5;
    g.losses.resize(2, 4);
    for (int i = 0; i < g.losses.size(); ++i) g.losses(i) = rng.next_double() * 6.0 - 3.0;
    const auto [norm, rec] = normalize(g);

    const Vec u = g.losses.col(0), v = g.losses.col(1);
    const Vec nu = rec.scale * u + rec.shifts, nv = rec.scale * v + rec.shifts;
    CHECK(dominates(u, v) == dominates(nu, nv));

    // prior_select commutes with the affine map on a random frontier.
    const auto raw = oracles::random_frontier(rng, 2, 5);
    Frontier mapped = raw;
    for (int j = 0; j < mapped.count(); ++j)
      mapped.vertices.col(j) = normalize_vector(raw.vertices.col(j), rec, g.beta);
    Vec prior(2);
    prior << 0.3, 0.7;
    CHECK(prior_select(raw, prior).vertex == prior_select(mapped, prior).vertex);
  }
}
