#include <catch_amalgamated.hpp>

#include <cmath>

#include "ncball/ncderiv.hpp"
#include "oracles.hpp"

using namespace ncball;

namespace {

FreePoly z(int d, int j) { return FreePoly::variable(d, j); }

NcMap random_map(int d, int e, int deg, Rng& rng) {
  std::vector<FreePoly> comps;
  for (int i = 0; i < e; ++i) comps.push_back(oracles::random_poly(d, deg, rng, 0.4));
  return NcMap(std::move(comps));
}

double max_diff(const std::vector<CMatrix>& a, const std::vector<CMatrix>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, oracles::max_abs(a[i] - b[i]));
  return worst;
}

}  // namespace

TEST_CASE("derivative of a linear map is the map") {
  const NcMap f({z(2, 1) * 2.0 + z(2, 2), z(2, 2) * Complex(0, 1)});
  Rng rng(1);
  const MatTuple y = sample_ginibre_tuple(3, 2, 1.0, rng);
  const MatTuple x = sample_ginibre_tuple(3, 2, 1.0, rng);
  CHECK(max_diff(delta_block(f, y, x), map_eval(f, x)) <= 1e-13);
}

TEST_CASE("product rule") {
  const NcMap f({z(2, 1) * z(2, 2)});
  Rng rng(2);
  const MatTuple y = sample_ginibre_tuple(3, 2, 1.0, rng);
  const MatTuple x = sample_ginibre_tuple(3, 2, 1.0, rng);
  CHECK(oracles::max_abs(delta_block(f, MatTuple::zeros(3, 2), x)[0]) == 0.0);
  const CMatrix expected = y[0] * x[1] + x[0] * y[1];
  CHECK(oracles::max_abs(delta_block(f, y, x)[0] - expected) <= 1e-12);
  CHECK(oracles::max_abs(delta_leibniz(f, y, x)[0] - expected) <= 1e-12);

  const NcMap sq({z(2, 1) * z(2, 1)});
  CHECK(oracles::max_abs(delta_leibniz(sq, y, x)[0] - (y[0] * x[0] + x[0] * y[0])) <= 1e-12);
  const NcMap c({FreePoly::constant(2, 3.0)});
  CHECK(oracles::max_abs(delta_leibniz(c, y, x)[0]) == 0.0);
}

TEST_CASE("block and Leibniz derivatives agree") {
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + t % 4;
    const NcMap f = random_map(2, 2, 1 + t % 5, rng);
    const MatTuple y = sample_ginibre_tuple(n, 2, 0.7, rng);
    const MatTuple x = sample_ginibre_tuple(n, 2, 0.7, rng);
    CHECK(max_diff(delta_block(f, y, x), delta_leibniz(f, y, x)) <= 1e-12);
  }
}

TEST_CASE("difference-differential identity") {
  Rng rng(4);
  for (int t = 0; t < 30; ++t) {
    const NcMap f = random_map(2, 2, 4, rng);
    const MatTuple x = sample_ginibre_tuple(3, 2, 0.8, rng);
    const MatTuple y = sample_ginibre_tuple(3, 2, 0.8, rng);
    const auto d = delta_two_point(f, x, y, x - y);
    const auto fx = map_eval(f, x), fy = map_eval(f, y);
    for (int i = 0; i < 2; ++i) CHECK(oracles::max_abs(fx[i] - fy[i] - d[i]) <= 1e-10);
    CHECK(max_diff(delta_two_point(f, y, y, x), delta_block(f, y, x)) <= 1e-14);
  }
  const NcMap c({FreePoly::constant(2, 1.5)});
  const MatTuple x = sample_ginibre_tuple(2, 2, 1.0, rng);
  CHECK(oracles::max_abs(delta_two_point(c, x, x * 0.5, x)[0]) == 0.0);
}

TEST_CASE("linear part") {
  const NcMap f({z(2, 1) + z(2, 1) * z(2, 2), z(2, 2)});
  CHECK(linear_part(f) == CMatrix::Identity(2, 2));
  const NcMap swap({z(2, 2), z(2, 1)});
  CMatrix s = CMatrix::Zero(2, 2);
  s(0, 1) = s(1, 0) = 1.0;
  CHECK(linear_part(swap) == s);

  Rng rng(5);
  const NcMap g = random_map(3, 2, 3, rng);
  const CMatrix a = linear_part(g);
  for (int t = 0; t < 10; ++t) {
    CVector v(3);
    for (int j = 0; j < 3; ++j) v(j) = rng.complex_normal();
    const CMatrix tm = sample_ginibre(3, 1.0, rng);
    std::vector<CMatrix> vt;
    for (int j = 0; j < 3; ++j) vt.push_back(v(j) * tm);
    const auto lhs = delta_block(g, MatTuple::zeros(3, 3), MatTuple(vt));
    const CVector av = a * v;
    for (int i = 0; i < 2; ++i) CHECK(oracles::max_abs(lhs[i] - av(i) * tm) <= 1e-12);
  }
}

TEST_CASE("chain rule at the origin") {
  Rng rng(6);
  for (int t = 0; t < 10; ++t) {
    // Inner map without constant term so that it fixes 0.
    NcMap inner = random_map(2, 2, 3, rng);
    std::vector<FreePoly> fixed;
    for (const auto& c : inner.components()) fixed.push_back(c - homogeneous_part(c, 0));
    inner = NcMap(fixed);
    const NcMap outer = random_map(2, 2, 3, rng);
    const CMatrix lhs = linear_part(compose(outer, inner));
    CHECK(oracles::max_abs(lhs - linear_part(outer) * linear_part(inner)) <= 1e-10);
  }
}

TEST_CASE("first-order finite differences") {
  Rng rng(7);
  const NcMap f = random_map(2, 1, 4, rng);
  const MatTuple y = sample_ginibre_tuple(3, 2, 0.5, rng);
  const MatTuple x = sample_ginibre_tuple(3, 2, 0.5, rng);
  const CMatrix exact = delta_block(f, y, x)[0];
  auto err = [&](double t) {
    const CMatrix fd = (map_eval(f, y + x * t)[0] - map_eval(f, y)[0]) / t;
    return operator_norm(fd - exact);
  };
  const double ratio = err(1e-3) / err(1e-4);
  CHECK(ratio >= 8.0);
  CHECK(ratio <= 12.0);
}

TEST_CASE("identity on a cloud") {
  const NcMap f({z(2, 1) + z(2, 1) * z(2, 2) - z(2, 2) * z(2, 1), z(2, 2)});
  Rng rng(8);
  std::vector<MatTuple> cloud;
  for (int s = 0; s < 5; ++s) cloud.push_back(sample_ginibre_tuple(3, 2, 0.5, rng));
  CHECK(linear_identity_residual(f, cloud) <= 1e-10);
  const NcMap g({z(2, 2), z(2, 1)});
  CHECK(linear_identity_residual(g, cloud) > 0.1);
}

TEST_CASE("map validation") {
  CHECK_THROWS_AS(NcMap({}), std::invalid_argument);
  CHECK_THROWS_AS(NcMap({z(2, 1), z(3, 1)}), std::invalid_argument);
  const NcMap f({z(2, 1)});
  CHECK_THROWS_AS(delta_block(f, MatTuple::zeros(2, 2), MatTuple::zeros(3, 2)), std::invalid_argument);
}
