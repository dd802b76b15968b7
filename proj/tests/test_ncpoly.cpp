#include <catch_amalgamated.hpp>

#include <cmath>

#include "ncball/ncpoly.hpp"
#include "oracles.hpp"

using namespace ncball;
using Catch::Matchers::WithinAbs;

namespace {
FreePoly z(int j) { return FreePoly::variable(2, j); }
}  // namespace

TEST_CASE("polynomial arithmetic") {
  const FreePoly z12 = z(1) * z(2);
  CHECK(z12.coeffs().size() == 1);
  CHECK(z12.coeff(Word::parse("12", 2)) == Complex(1.0));
  CHECK(poly_mul(z(1), z(2)) == z12);
  CHECK((z12 * FreePoly(2)).is_zero());
  CHECK((z(1) - z(1)).is_zero());
  CHECK(FreePoly(2).degree() == -1);
  CHECK((z12 + z(1)).degree() == 2);
  CHECK_FALSE((z12 + z(1)).is_homogeneous());
  CHECK(oracles::commutator().is_homogeneous());
  CHECK(poly_add(z(1), z(2)).coeffs().size() == 2);
  CHECK_THROWS_AS(FreePoly::variable(2, 3), std::invalid_argument);
}

TEST_CASE("evaluation") {
  const MatTuple x = sample_ginibre_tuple(3, 2, 1.0, std::uint64_t{1});
  CHECK(poly_eval(FreePoly::constant(2, 1.0), x) == CMatrix::Identity(3, 3));
  const MatTuple s({CMatrix::Constant(1, 1, 0.4), CMatrix::Constant(1, 1, Complex(0.2, 0.7))});
  CHECK(std::abs(poly_eval(oracles::commutator(), s)(0, 0)) == 0.0);

  CMatrix x1 = CMatrix::Zero(2, 2), x2 = CMatrix::Zero(2, 2);
  x1(0, 1) = 1.0;
  x2(0, 0) = 1.0;
  // X1 X2 = 0, X2 X1 = E12
  CMatrix expected = CMatrix::Zero(2, 2);
  expected(0, 1) = -1.0;
  CHECK(poly_eval(oracles::commutator(), MatTuple({x1, x2})) == expected);
}

TEST_CASE("evaluation is multiplicative") {
  Rng rng(17);
  for (int t = 0; t < 40; ++t) {
    const int n = 1 + t % 4;
    const FreePoly p = oracles::random_poly(2, 1 + t % 5, rng);
    const FreePoly q = oracles::random_poly(2, 5 - t % 5, rng);
    const MatTuple x = sample_ginibre_tuple(n, 2, 0.8, rng);
    const CMatrix lhs = poly_eval(p * q, x);
    const CMatrix rhs = poly_eval(p, x) * poly_eval(q, x);
    CHECK(oracles::max_abs(lhs - rhs) <= 1e-10 * std::max(1.0, oracles::max_abs(rhs)));
  }
}

TEST_CASE("homogeneous parts partition the support") {
  Rng rng(2);
  const FreePoly p = oracles::random_poly(2, 4, rng, 0.7);
  FreePoly sum(2);
  for (int k = 0; k <= p.degree(); ++k) sum += homogeneous_part(p, k);
  CHECK(sum == p);
  const FreePoly c = FreePoly::constant(2, 3.0) + z(1);
  CHECK(homogeneous_part(c, 0) == FreePoly::constant(2, 3.0));
  CHECK(homogeneous_part(z(1) * z(2), 1).is_zero());
}

TEST_CASE("cesaro sums") {
  CoeffMap geo;
  Word w = Word::empty(2);
  for (int k = 0; k <= 10; ++k) {
    geo[w] = std::pow(0.8, k);
    w = w + Word::letter(2, 1);
  }
  const TruncatedSeries f(2, 10, geo);
  CHECK(cesaro_sum(f, 0) == FreePoly::constant(2, 1.0));
  const FreePoly s3 = cesaro_sum(f, 3);
  CHECK(s3.degree() == 3);
  CHECK_THAT(s3.coeff(Word::parse("11", 2)).real(), WithinAbs(0.64 * 0.5, 1e-15));
  const TruncatedSeries c(FreePoly::constant(2, 2.5), 6);
  for (int m = 0; m <= 6; ++m) CHECK(cesaro_sum(c, m) == FreePoly::constant(2, 2.5));
  CHECK_THROWS_AS(cesaro_sum(f, 11), std::invalid_argument);
}

TEST_CASE("scale_arg") {
  Rng rng(6);
  const FreePoly p = oracles::random_poly(2, 5, rng);
  CHECK(scale_arg(p, 1.0) == p);
  CHECK(scale_arg(p, 0.0) == homogeneous_part(p, 0));
  for (int t = 0; t < 10; ++t) {
    const MatTuple x = sample_ginibre_tuple(3, 2, 1.0, rng);
    const double r = rng.uniform();
    const CMatrix a = poly_eval(scale_arg(p, r), x);
    const CMatrix b = poly_eval(p, x * r);
    CHECK(oracles::max_abs(a - b) <= 1e-12 * std::max(1.0, oracles::max_abs(b)));
  }
  // Dyadic factors compose exactly.
  CHECK(scale_arg(scale_arg(p, 0.5), 0.25) == scale_arg(p, 0.125));
}

TEST_CASE("text format round-trips") {
  CHECK(to_string(oracles::commutator()) == "1*12-1*21");
  CHECK(parse_poly("1*12-1*21", 2) == oracles::commutator());
  CHECK(to_string(FreePoly(2)) == "0");
  CHECK(parse_poly("0", 2).is_zero());
  CHECK(parse_poly("2.5*e+(0+1i)*2", 2) == FreePoly::constant(2, 2.5) + Complex(0, 1) * z(2));
  Rng rng(10);
  for (int t = 0; t < 20; ++t) {
    const FreePoly p = oracles::random_poly(3, 4, rng);
    CHECK(parse_poly(to_string(p), 3) == p);
  }
  CHECK_THROWS_AS(parse_poly("1*13", 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_poly("1*", 2), std::invalid_argument);
}

TEST_CASE("pencils") {
  CMatrix e1 = CMatrix::Zero(1, 2), e2 = CMatrix::Zero(1, 2);
  e1(0, 0) = 1.0;
  e2(0, 1) = 1.0;
  const LinearPencil row({e1, e2});
  CHECK(pencil_eval(row, MatTuple::zeros(2, 2)).isZero(0.0));
  const MatTuple p({CMatrix::Constant(1, 1, 0.6), CMatrix::Constant(1, 1, 0.8)});
  const CMatrix v = pencil_eval(row, p);
  CHECK(v(0, 0) == Complex(0.6));
  CHECK(v(0, 1) == Complex(0.8));
  CHECK_THAT(operator_norm(v), WithinAbs(1.0, 1e-15));

  const MatTuple x = sample_ginibre_tuple(3, 2, 1.0, std::uint64_t{1});
  const MatTuple y = sample_ginibre_tuple(3, 2, 1.0, std::uint64_t{2});
  CHECK(pencil_eval(row, x + y) == pencil_eval(row, x) + pencil_eval(row, y));
  CHECK_THROWS_AS(LinearPencil({e1, 2.0 * e1}), std::invalid_argument);
  CHECK_THROWS_AS(LinearPencil({e1, CMatrix::Zero(2, 2)}), std::invalid_argument);
}
