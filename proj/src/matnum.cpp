#include "ncball/matnum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace ncball {

namespace {

void require_finite(const CMatrix& a, const char* who) {
  if (!a.allFinite()) throw NumericalError(std::string(who) + ": non-finite input");
}

Eigen::VectorXd singular_values(const CMatrix& a) {
  if (a.rows() <= 64 && a.cols() <= 64) {
    Eigen::JacobiSVD<CMatrix> svd(a);
    return svd.singularValues();
  }
  Eigen::BDCSVD<CMatrix> svd(a);
  return svd.singularValues();
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

double operator_norm(const CMatrix& a) {
  require_finite(a, "operator_norm");
  if (a.size() == 0) return 0.0;
  return singular_values(a)(0);
}

double spectral_radius(const CMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("spectral_radius: matrix not square");
  require_finite(a, "spectral_radius");
  if (a.rows() == 0) return 0.0;
  Eigen::ComplexEigenSolver<CMatrix> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw NumericalError("spectral_radius: eigenvalue iteration did not converge");
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double condition_number(const CMatrix& a) {
  require_finite(a, "condition_number");
  const Eigen::VectorXd s = singular_values(a);
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

double largest_singular_value_lanczos(const SparseCMatrix& a, int max_steps) {
  const Eigen::Index n = a.cols();
  if (n == 0 || a.nonZeros() == 0) return 0.0;
  const int steps = static_cast<int>(std::min<Eigen::Index>(max_steps, n));

  CMatrix basis(n, steps);
  std::vector<double> alpha, beta;
  Rng rng(0x1A2C05ULL);
  CVector q(n);
  for (Eigen::Index i = 0; i < n; ++i) q(i) = rng.complex_normal();
  q.normalize();

  for (int k = 0; k < steps; ++k) {
    basis.col(k) = q;
    CVector w = a.adjoint() * (a * q);
    const double ak = q.dot(w).real();
    alpha.push_back(ak);
    // Full reorthogonalization, twice for stability.
    for (int pass = 0; pass < 2; ++pass) {
      auto head = basis.leftCols(k + 1);
      w -= head * (head.adjoint() * w);
    }
    const double bk = w.norm();
    if (k + 1 == steps || bk <= 1e-14 * std::max(1.0, std::abs(ak))) break;
    beta.push_back(bk);
    q = w / bk;
  }

  const auto m = static_cast<Eigen::Index>(alpha.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    t(i, i) = alpha[static_cast<std::size_t>(i)];
    if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

MatTuple direct_sum(const MatTuple& x, const MatTuple& y) {
  if (x.size() != y.size()) throw std::invalid_argument("direct_sum: tuple sizes differ");
  const int n = x.level(), m = y.level();
  std::vector<CMatrix> out;
  out.reserve(static_cast<std::size_t>(x.size()));
  for (int j = 0; j < x.size(); ++j) {
    CMatrix b = CMatrix::Zero(n + m, n + m);
    b.topLeftCorner(n, n) = x[j];
    b.bottomRightCorner(m, m) = y[j];
    out.push_back(std::move(b));
  }
  return MatTuple(std::move(out));
}

MatTuple ampliate(const MatTuple& x, int copies) {
  if (copies < 1) throw std::invalid_argument("ampliate: need copies >= 1");
  MatTuple out = x;
  for (int c = 1; c < copies; ++c) out = direct_sum(out, x);
  return out;
}

MatTuple conjugate(const MatTuple& x, const CMatrix& s) {
  const int n = x.level();
  if (s.rows() != n || s.cols() != n)
    throw std::invalid_argument("conjugate: similarity has the wrong size");
  require_finite(s, "conjugate");
  const Eigen::VectorXd sv = singular_values(s);
  if (sv(0) == 0.0 || sv(n - 1) < 1e-12 * sv(0)) throw NumericalError("conjugate: similarity is singular");
  const Eigen::PartialPivLU<CMatrix> lu(s);
  std::vector<CMatrix> out;
  out.reserve(static_cast<std::size_t>(x.size()));
  for (const auto& m : x.mats()) out.push_back(lu.solve(m * s));
  return MatTuple(std::move(out));
}

MatTuple unitary_conjugate(const MatTuple& x, const CMatrix& u) {
  std::vector<CMatrix> out;
  out.reserve(static_cast<std::size_t>(x.size()));
  for (const auto& m : x.mats()) out.push_back(u.adjoint() * m * u);
  return MatTuple(std::move(out));
}

double max_norm(const MatTuple& x) {
  double best = 0.0;
  for (const auto& m : x.mats()) best = std::max(best, operator_norm(m));
  return best;
}

CMatrix nullspace(const CMatrix& m, double tol_ratio) {
  if (!(tol_ratio > 0.0 && tol_ratio < 1.0))
    throw std::invalid_argument("nullspace: tol_ratio must lie in (0, 1)");
  require_finite(m, "nullspace");
  const Eigen::Index cols = m.cols();
  if (m.rows() == 0 || m.isZero(0.0)) return CMatrix::Identity(cols, cols);
  Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cutoff = tol_ratio * s(0);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < cols; ++i)
    if (i >= s.size() || s(i) <= cutoff) keep.push_back(i);
  CMatrix basis(cols, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c)
    basis.col(static_cast<Eigen::Index>(c)) = svd.matrixV().col(keep[c]);
  return basis;
}

CMatrix range_basis(const CMatrix& m, double tol_ratio) {
  if (!(tol_ratio > 0.0 && tol_ratio < 1.0))
    throw std::invalid_argument("range_basis: tol_ratio must lie in (0, 1)");
  require_finite(m, "range_basis");
  if (m.cols() == 0 || m.isZero(0.0)) return CMatrix(m.rows(), 0);
  Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeThinU);
  const Eigen::VectorXd& s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > tol_ratio * s(0)) ++r;
  return svd.matrixU().leftCols(r);
}

int numerical_rank(const CMatrix& m, double tol_ratio) {
  return static_cast<int>(range_basis(m, tol_ratio).cols());
}

double containment_sine(const CMatrix& a, const CMatrix& b) {
  if (a.cols() == 0) return 0.0;
  if (b.cols() == 0) return 1.0;
  const CMatrix residual = a - b * (b.adjoint() * a);
  return std::min(1.0, operator_norm(residual));
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

std::uint64_t Rng::mix(std::uint64_t seed, std::uint64_t task) {
  return splitmix64(splitmix64(seed) ^ splitmix64(task + 0x9E3779B97F4A7C15ULL));
}

Rng Rng::split(std::uint64_t task) const { return Rng(mix(seed_, task)); }

std::uint64_t Rng::next_u64() { return engine_(); }

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return Complex(re, im) * (1.0 / std::numbers::sqrt2);
}

CMatrix sample_ginibre(int n, double scale, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample_ginibre: need n >= 1");
  const double sigma = scale / std::sqrt(static_cast<double>(n));
  CMatrix a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = sigma * rng.complex_normal();
  return a;
}

CMatrix sample_haar_unitary(int n, Rng& rng) {
  const CMatrix g = sample_ginibre(n, 1.0, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    const double mag = std::abs(r(i, i));
    const Complex phase = mag > 0.0 ? r(i, i) / mag : Complex(1.0);
    q.col(i) *= phase;
  }
  return q;
}

MatTuple sample_ginibre_tuple(int n, int d, double scale, Rng& rng) {
  if (d < 1) throw std::invalid_argument("sample_ginibre_tuple: need d >= 1");
  std::vector<CMatrix> mats;
  mats.reserve(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) mats.push_back(sample_ginibre(n, scale, rng));
  return MatTuple(std::move(mats));
}

MatTuple sample_haar_unitary_tuple(int n, int d, Rng& rng) {
  if (d < 1) throw std::invalid_argument("sample_haar_unitary_tuple: need d >= 1");
  std::vector<CMatrix> mats;
  mats.reserve(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) mats.push_back(sample_haar_unitary(n, rng));
  return MatTuple(std::move(mats));
}

MatTuple sample_ginibre_tuple(int n, int d, double scale, std::uint64_t seed) {
  Rng rng = Rng(seed).split((static_cast<std::uint64_t>(n) << 32) ^ static_cast<std::uint64_t>(d));
  return sample_ginibre_tuple(n, d, scale, rng);
}

MatTuple sample_haar_unitary_tuple(int n, int d, std::uint64_t seed) {
  Rng rng = Rng(seed).split((static_cast<std::uint64_t>(n) << 32) ^ static_cast<std::uint64_t>(d) ^
                            0xA11CEULL);
  return sample_haar_unitary_tuple(n, d, rng);
}

CMatrix sample_conditioned(int n, double max_cond, Rng& rng) {
  const CMatrix u = sample_haar_unitary(n, rng);
  const CMatrix v = sample_haar_unitary(n, rng);
  Eigen::VectorXd s(n);
  for (int i = 0; i < n; ++i) s(i) = std::exp(rng.uniform() * std::log(max_cond));
  return u * s.cast<Complex>().asDiagonal() * v;
}

}  // namespace ncball
