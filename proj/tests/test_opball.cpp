#include <catch_amalgamated.hpp>

#include <cmath>

#include "ncball/opball.hpp"
#include "oracles.hpp"

using namespace ncball;
using Catch::Matchers::WithinAbs;

namespace {
CMatrix unit(int r, int c, int i, int j) {
  CMatrix e = CMatrix::Zero(r, c);
  e(i, j) = 1.0;
  return e;
}

PolyMatrix row_poly(int d) {
  PolyMatrix f(1);
  for (int j = 1; j <= d; ++j) f[0].push_back(FreePoly::variable(d, j));
  return f;
}
}  // namespace

TEST_CASE("standard pencils") {
  const auto row = row_ball(2);
  CHECK(row.pencil()[0] == unit(1, 2, 0, 0));
  CHECK(row.pencil()[1] == unit(1, 2, 0, 1));
  const auto ut = upper_triangular(2);
  REQUIRE(ut.num_vars() == 3);
  CHECK(ut.pencil()[0] == unit(2, 2, 0, 0));
  CHECK(ut.pencil()[1] == unit(2, 2, 0, 1));
  CHECK(ut.pencil()[2] == unit(2, 2, 1, 1));
  CHECK(ut.injectivity() == Injectivity::kKnownNonInjective);
  const auto fm = full_matrix(2);
  REQUIRE(fm.num_vars() == 4);
  CHECK(fm.pencil()[0] == unit(2, 2, 0, 0));
  CHECK(fm.pencil()[1] == unit(2, 2, 0, 1));
  CHECK(fm.pencil()[2] == unit(2, 2, 1, 1));
  CHECK(fm.pencil()[3] == unit(2, 2, 1, 0));
  CHECK(full_matrix(3).num_vars() == 9);
  const auto br = block_rows({2, 1});
  CHECK(br.pencil()[2] == unit(2, 3, 1, 2));
  CHECK(polydisk(3).pencil()[1] == unit(3, 3, 1, 1));
}

TEST_CASE("gauges") {
  CHECK(gauge(polydisk(2), MatTuple::zeros(3, 2)) == 0.0);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK_THAT(gauge(row_ball(2), MatTuple::identities(3, 2) * s), WithinAbs(1.0, 1e-15));
  CHECK(on_boundary(row_ball(2), MatTuple::identities(3, 2) * s));
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const MatTuple x = sample_ginibre_tuple(3, 2, 1.0, rng);
    CHECK_THAT(gauge(polydisk(2), x), WithinAbs(max_norm(x), 1e-10));
    const double lambda = 3.0 * rng.uniform();
    CHECK_THAT(gauge(row_ball(2), x * lambda), WithinAbs(lambda * gauge(row_ball(2), x), 1e-12));
  }
}

TEST_CASE("uniform radius") {
  CHECK_THAT(uniform_radius(polydisk(2), MatTuple::zeros(2, 2)), WithinAbs(0.5, 1e-15));
  CHECK_THAT(uniform_radius(row_ball(2), MatTuple::zeros(2, 2)), WithinAbs(0.5, 1e-15));
  const MatTuple x = sample_ginibre_tuple(2, 2, 1.0, std::uint64_t{5});
  const MatTuple on = project_inside(polydisk(2), x, 0.0);
  double prev = 1.0;
  for (double t : {0.1, 0.5, 0.9, 0.99, 0.999}) {
    const double r = uniform_radius(polydisk(2), on * t);
    CHECK(r < prev);
    prev = r;
  }
  CHECK_THROWS_AS(uniform_radius(polydisk(2), on * 1.5), std::invalid_argument);
}

TEST_CASE("projection") {
  const auto ball = polydisk(2);
  const MatTuple x = MatTuple::identities(2, 2) * 2.0;
  CHECK_THAT(gauge(ball, project_inside(ball, x, 0.0)), WithinAbs(1.0, 1e-15));
  const MatTuple small = MatTuple::identities(2, 2) * 0.3;
  CHECK(project_inside(ball, small, 1e-3) == small);
  Rng rng(12);
  const MatTuple y = sample_ginibre_tuple(3, 2, 2.0, rng);
  const CMatrix u = sample_haar_unitary(3, rng);
  const MatTuple a = unitary_conjugate(project_inside(ball, y, 0.01), u);
  const MatTuple b = project_inside(ball, unitary_conjugate(y, u), 0.01);
  for (int j = 0; j < 2; ++j) CHECK(oracles::max_abs(a[j] - b[j]) <= 1e-12);
}

TEST_CASE("sup estimates") {
  const auto ball = polydisk(2);
  const auto est = sup_norm_estimate(ball, row_poly(2), {1, 2}, 100, 7);
  CHECK_THAT(est.lower_bound, WithinAbs(std::sqrt(2.0), 1e-12));
  CHECK(est.max_sampled <= std::sqrt(2.0) + 1e-9);
  CHECK(est.witness.gauge_value <= 1.0 + 1e-12);

  PolyMatrix z1{{FreePoly::variable(2, 1)}};
  CHECK_THAT(sup_norm_estimate(ball, z1, {1, 2}, 50, 1).lower_bound, WithinAbs(1.0, 1e-12));
  PolyMatrix sum{{FreePoly::variable(2, 1) + FreePoly::variable(2, 2)}};
  CHECK_THAT(sup_norm_estimate(ball, sum, {1}, 50, 1).lower_bound, WithinAbs(2.0, 1e-12));

  const auto again = sup_norm_estimate(ball, row_poly(2), {1, 2}, 100, 7);
  CHECK(again.witness.x == est.witness.x);
  CHECK(again.per_level == est.per_level);
}

TEST_CASE("unitary and contraction suprema") {
  PolyMatrix z1{{FreePoly::variable(2, 1)}};
  const auto uc = unitary_vs_contraction_sup(polydisk(2), z1, 3, 200, 4);
  CHECK_THAT(uc.over_unitaries, WithinAbs(1.0, 1e-12));
  CHECK(uc.over_contractions <= 1.0 + 1e-12);
  CHECK_THROWS_AS(unitary_vs_contraction_sup(row_ball(2), z1, 3, 10, 4), std::invalid_argument);
}
