#include <catch_amalgamated.hpp>

#include <cmath>

#include "ncball/fockspace.hpp"
#include "ncball/opball.hpp"
#include "oracles.hpp"

using namespace ncball;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

FockVector mono(const FockSpacePtr& h, const char* w) {
  return FockVector(h, FreePoly::monomial(Word::parse(w, h->num_vars())));
}

Word power(int d, int j, int k) {
  Word w = Word::empty(d);
  for (int i = 0; i < k; ++i) w = w + Word::letter(d, j);
  return w;
}

}  // namespace

TEST_CASE("Fock norms") {
  const auto h = WeightedFockSpace::nc_hardy(2);
  CHECK(fock_norm(mono(h, "e")) == 1.0);
  CHECK_THAT(fock_norm(mono(h, "12")), WithinAbs(std::sqrt(2.0), 1e-15));
  for (int k = 0; k < 25; ++k) {
    const BigRational ratio(h->exact_weight(Word::letter(2, 2) + power(2, 1, k)), h->exact_weight(power(2, 1, k)));
    CHECK(ratio == BigRational(k + 1));
  }
  const auto da = WeightedFockSpace::drury_arveson(2);
  CHECK(fock_norm(mono(da, "1221")) == 1.0);
  CHECK_THROWS_AS(fock_inner(mono(h, "1"), mono(da, "1")), std::invalid_argument);
  CHECK_THROWS_AS(WeightedFockSpace::custom(2, [](const Word&) { return 2.0; }), std::invalid_argument);
  const auto c = WeightedFockSpace::custom(2, [](const Word& w) { return 1.0 + w.length(); });
  CHECK_THAT(fock_norm(mono(c, "12")), WithinAbs(std::sqrt(3.0), 1e-15));
  CHECK_FALSE(c->has_tail_bounds());
}

TEST_CASE("evaluation bound") {
  const auto h = WeightedFockSpace::nc_hardy(2);
  const auto one = eval_vector(mono(h, "e"), MatTuple::zeros(3, 2) , 0.5);
  CHECK(one.value == CMatrix::Identity(3, 3));
  CHECK(one.bound >= 1.0);

  Rng rng(1);
  int violations = 0;
  for (int t = 0; t < 200; ++t) {
    const FockVector f(h, oracles::random_poly(2, 6, rng));
    const MatTuple x = project_inside(polydisk(2), sample_ginibre_tuple(1 + t % 3, 2, 1.0, rng), 0.0) * 0.5;
    const auto ev = eval_vector(f, x, 0.5);
    CHECK_THAT(ev.bound, WithinRel(4.0 * fock_norm(f), 1e-14));
    if (!ev.bound_holds) ++violations;
  }
  CHECK(violations == 0);

  CoeffMap geo;
  for (int k = 0; k <= 20; ++k) geo[power(2, 1, k)] = 1.0;
  const MatTuple pt({CMatrix::Constant(1, 1, 0.3), CMatrix::Zero(1, 1)});
  const auto ev = eval_vector(FockVector(h, geo), pt);
  CHECK_THAT(ev.value(0, 0).real(), WithinRel((1 - std::pow(0.3, 21)) / 0.7, 1e-14));
  CHECK(std::isinf(eval_vector(FockVector(h, geo), pt, 1.0).bound));
}

TEST_CASE("kernel") {
  const auto h = WeightedFockSpace::nc_hardy(2);
  Rng rng(2);
  const CMatrix t = sample_ginibre(2, 1.0, rng);
  const auto k0 = kernel_apply(*h, MatTuple::zeros(2, 2), MatTuple::zeros(2, 2), t, 6);
  CHECK(k0.value == t);
  CHECK(k0.tail_bound == 0.0);

  const MatTuple x({CMatrix::Constant(1, 1, 0.3), CMatrix::Constant(1, 1, 0.2)});
  const auto k1 = kernel_apply(*h, x, x, CMatrix::Identity(1, 1), 12);
  const double szego = 1.0 / (0.91 * 0.96);
  CHECK(std::abs(k1.value(0, 0) - szego) <= k1.tail_bound + 1e-14);
  CHECK(k1.tail_bound < 1e-6);

  const MatTuple y = project_inside(polydisk(2), sample_ginibre_tuple(3, 2, 1.0, rng), 0.0) * 0.5;
  const CMatrix kyy = kernel_apply(*h, y, y, CMatrix::Identity(3, 3), 10).value;
  CHECK(oracles::max_abs(kyy - kyy.adjoint()) <= 1e-10);
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(kyy);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
}

TEST_CASE("tail sums") {
  const auto h = WeightedFockSpace::nc_hardy(2);
  // sum_{k > N} (k+1) x^k, closed form
  const double x = 0.25;
  for (int n : {0, 3, 12}) {
    double exact = 0.0;
    for (int k = n + 1; k < 400; ++k) exact += (k + 1) * std::pow(x, k);
    CHECK_THAT(kernel_tail_sum(*h, n, x), WithinRel(exact, 1e-12));
    CHECK(kernel_tail_sum(*h, n, x) >= exact * (1 - 1e-14));
  }
  const auto da = WeightedFockSpace::drury_arveson(2);
  CHECK_THAT(kernel_tail_sum(*da, 4, 0.25), WithinRel(std::pow(0.5, 5) / 0.5, 1e-12));
  CHECK(std::isinf(kernel_tail_sum(*da, 4, 0.5)));
  CHECK(std::isinf(kernel_tail_sum(*h, 4, 1.0)));
}

TEST_CASE("reproducing property") {
  const auto h = WeightedFockSpace::nc_hardy(2);
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const int n = 1 + t % 2;
    const MatTuple x = project_inside(polydisk(2), sample_ginibre_tuple(n, 2, 1.0, rng), 0.0) * 0.5;
    CVector v(n), y(n);
    for (int i = 0; i < n; ++i) {
      v(i) = rng.complex_normal();
      y(i) = rng.complex_normal();
    }
    const FockVector low(h, oracles::random_poly(2, 6, rng));
    const auto kv = kernel_vector(h, x, v, y, 6);
    const Complex direct = y.dot(poly_eval(low.polynomial(), x) * v);
    CHECK(std::abs(direct - fock_inner(low, kv)) <= 1e-12 * std::max(1.0, std::abs(direct)));
    CHECK(reproducing_tail_bound(low, x, v, y, 6) == 0.0);

    const FockVector high(h, oracles::random_poly(2, 9, rng));
    const auto kv4 = kernel_vector(h, x, v, y, 4);
    const Complex d2 = y.dot(poly_eval(high.polynomial(), x) * v);
    CHECK(std::abs(d2 - fock_inner(high, kv4)) <= reproducing_tail_bound(high, x, v, y, 4) + 1e-12);
  }
  const auto kz = kernel_vector(h, MatTuple::zeros(2, 2), CVector::Ones(2), CVector::Ones(2), 3);
  CHECK(kz.coeffs().size() == 1);
  CHECK(kz.coeffs().begin()->second == Complex(2.0));
}

TEST_CASE("kernel Gram matrices are positive") {
  const auto h = WeightedFockSpace::nc_hardy(2);
  Rng rng(4);
  std::vector<FockVector> ks;
  for (int t = 0; t < 6; ++t) {
    const MatTuple x = project_inside(polydisk(2), sample_ginibre_tuple(2, 2, 1.0, rng), 0.0) * 0.6;
    CVector v(2), y(2);
    v << rng.complex_normal(), rng.complex_normal();
    y << rng.complex_normal(), rng.complex_normal();
    ks.push_back(kernel_vector(h, x, v, y, 6));
  }
  CMatrix g(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) g(i, j) = fock_inner(ks[j], ks[i]);
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(g);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
}

TEST_CASE("multiplication matrices") {
  const auto h = WeightedFockSpace::nc_hardy(2);
  const auto da = WeightedFockSpace::drury_arveson(2);
  const auto id = mult_matrix(*h, FreePoly::constant(2, 1.0), 3);
  CHECK(CMatrix(id.matrix) == CMatrix::Identity(15, 15));
  CHECK_THAT(id.norm_lower_bound, WithinAbs(1.0, 1e-14));
  for (int n = 0; n <= 6; ++n)
    CHECK_THAT(mult_matrix(*da, FreePoly::variable(2, 1), n).norm_lower_bound, WithinAbs(1.0, 1e-12));

  std::vector<Word> dom;
  for (int k = 0; k <= 30; ++k) dom.push_back(power(2, 1, k));
  const auto m = mult_matrix(*h, FreePoly::variable(2, 2), dom);
  const CMatrix dense(m.matrix);
  for (int k = 0; k <= 30; ++k) CHECK_THAT(dense.col(k).norm(), WithinRel(std::sqrt(k + 1.0), 1e-12));

  double prev = 0.0;
  const FreePoly phi = FreePoly::variable(2, 1) + FreePoly::variable(2, 2) * 0.5;
  for (int n = 0; n <= 5; ++n) {
    const double v = mult_matrix(*h, phi, n).norm_lower_bound;
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
}

TEST_CASE("divergence tables") {
  const auto t1 = multiplier_divergence_table(Word::parse("1", 2), 2, 60);
  for (int k = 0; k <= 60; ++k) CHECK(t1[static_cast<std::size_t>(k)] == BigRational(k + 1));
  const auto t2 = multiplier_divergence_table(Word::parse("12", 2), 1, 40);
  for (int k = 0; k <= 40; ++k) CHECK(t2[static_cast<std::size_t>(k)] == BigRational(k + 2));
  const auto t3 = multiplier_divergence_table(Word::parse("1223", 3), 2, 30);
  for (std::size_t k = 1; k < t3.size(); ++k) CHECK(t3[k] > t3[k - 1]);
  CHECK_THROWS_AS(multiplier_divergence_table(Word::parse("22", 2), 2, 5), std::invalid_argument);
  CHECK_THROWS_AS(multiplier_divergence_table(Word::parse("1", 1), 1, 5), std::invalid_argument);
  CHECK_THROWS_AS(multiplier_divergence_table(Word::empty(2), 1, 5), std::invalid_argument);

  const auto s = shift_partial_sums(200);
  BigRational harmonic = 0;
  for (int k = 0; k <= 200; ++k) {
    harmonic += BigRational(1, k + 1);
    CHECK(s[static_cast<std::size_t>(k)] == harmonic);
  }
  CHECK(s[200] > 5);
}

TEST_CASE("symmetrization") {
  const auto h = WeightedFockSpace::nc_hardy(2);
  const auto xi10 = symmetrize(h, MultiIndex({1, 0}));
  CHECK(xi10.coeffs().size() == 1);
  CHECK(fock_norm(xi10) == 1.0);
  const auto xi11 = symmetrize(h, MultiIndex({1, 1}));
  CHECK(xi11.coeffs().at(Word::parse("12", 2)) == Complex(0.5));
  CHECK(xi11.coeffs().at(Word::parse("21", 2)) == Complex(0.5));
  CHECK_THAT(fock_norm(xi11), WithinAbs(1.0, 1e-15));
  const CMatrix g = sym_gram(2, 5);
  CHECK(g.rows() == 21);
  CHECK(oracles::max_abs(g - CMatrix::Identity(21, 21)) <= 1e-12);
  CHECK(oracles::max_abs(sym_gram(3, 3) - CMatrix::Identity(20, 20)) <= 1e-12);
}

TEST_CASE("spectral bound") {
  const auto da = WeightedFockSpace::drury_arveson(2);
  const auto h = WeightedFockSpace::nc_hardy(2);
  const FreePoly phi = FreePoly::variable(2, 1) + FreePoly::variable(2, 2);
  const MatTuple x = project_inside(row_ball(2), sample_ginibre_tuple(3, 2, 1.0, std::uint64_t{1}), 0.01);
  const auto sb = spectral_bound_check(*da, phi, x, 10);
  CHECK(sb.bound >= std::sqrt(2.0) - 0.01);
  CHECK(sb.bound <= std::sqrt(2.0) + 1e-9);
  CHECK(sb.rho <= sb.bound + 1e-9);
  const auto c = spectral_bound_check(*h, FreePoly::constant(2, Complex(0, 2)), x, 3);
  CHECK_THAT(c.rho, WithinAbs(2.0, 1e-12));
  CHECK_THAT(c.bound, WithinAbs(2.0, 1e-12));
  CHECK_THROWS_AS(spectral_bound_check(*da, phi, MatTuple::identities(2, 2), 3), std::invalid_argument);
}
