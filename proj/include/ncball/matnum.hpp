#pragma once

// Dense complex matrices and d-tuples of them (the evaluation points of nc
// functions), plus the numeric kernels everything else is built on.

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "ncball/errors.hpp"
#include "ncball/freewords.hpp"

namespace ncball {

using Complex = std::complex<double>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using CMatrix = Matrix<Complex>;
using CVector = Vector<Complex>;
using SparseCMatrix = Eigen::SparseMatrix<Complex>;

// Default relative rank / nullspace tolerance.
inline constexpr double kDefaultTolRatio = 1e-8;

// A d-tuple X = (X_1, ..., X_d) of n x n matrices. Coordinates are 0-based in
// the API (X[0] is X_1).
template <typename Scalar>
class BasicMatTuple {
 public:
  using MatrixType = Matrix<Scalar>;

  BasicMatTuple() = default;

  explicit BasicMatTuple(std::vector<MatrixType> mats) : mats_(std::move(mats)) {
    if (mats_.empty()) throw std::invalid_argument("MatTuple: need d >= 1");
    const auto n = mats_.front().rows();
    if (n < 1) throw std::invalid_argument("MatTuple: need level n >= 1");
    for (const auto& m : mats_) {
      if (m.rows() != n || m.cols() != n)
        throw std::invalid_argument("MatTuple: components must be square of equal size");
      if (!m.allFinite()) throw std::invalid_argument("MatTuple: non-finite entry");
    }
  }

  static BasicMatTuple zeros(int n, int d) {
    return BasicMatTuple(std::vector<MatrixType>(d, MatrixType::Zero(n, n)));
  }
  static BasicMatTuple identities(int n, int d) {
    return BasicMatTuple(std::vector<MatrixType>(d, MatrixType::Identity(n, n)));
  }

  int level() const { return mats_.empty() ? 0 : static_cast<int>(mats_.front().rows()); }
  int size() const { return static_cast<int>(mats_.size()); }
  const MatrixType& operator[](int j) const { return mats_[static_cast<std::size_t>(j)]; }
  const std::vector<MatrixType>& mats() const { return mats_; }

  BasicMatTuple operator+(const BasicMatTuple& o) const { return zip(o, [](auto& a, auto& b) { return a + b; }); }
  BasicMatTuple operator-(const BasicMatTuple& o) const { return zip(o, [](auto& a, auto& b) { return a - b; }); }

  template <typename T>
  BasicMatTuple operator*(const T& s) const {
    std::vector<MatrixType> out;
    out.reserve(mats_.size());
    for (const auto& m : mats_) out.push_back(Scalar(s) * m);
    return BasicMatTuple(std::move(out));
  }

  friend bool operator==(const BasicMatTuple& a, const BasicMatTuple& b) {
    if (a.mats_.size() != b.mats_.size()) return false;
    for (std::size_t j = 0; j < a.mats_.size(); ++j)
      if (a.mats_[j].rows() != b.mats_[j].rows() || a.mats_[j] != b.mats_[j]) return false;
    return true;
  }

 private:
  template <typename Op>
  BasicMatTuple zip(const BasicMatTuple& o, Op op) const {
    if (o.size() != size() || o.level() != level())
      throw std::invalid_argument("MatTuple: shape mismatch");
    std::vector<MatrixType> out;
    out.reserve(mats_.size());
    for (std::size_t j = 0; j < mats_.size(); ++j) out.push_back(op(mats_[j], o.mats_[j]));
    return BasicMatTuple(std::move(out));
  }

  std::vector<MatrixType> mats_;
};

using MatTuple = BasicMatTuple<Complex>;

// Largest singular value (full SVD). Throws on non-finite input.
double operator_norm(const CMatrix& a);

// max |lambda| over the eigenvalues of a square matrix.
double spectral_radius(const CMatrix& a);

// sigma_max / sigma_min; infinity for singular input.
double condition_number(const CMatrix& a);

// Lower bound on the largest singular value of a sparse matrix from a
// Lanczos run on A^* A with full reorthogonalization. Ritz values never
// exceed the top eigenvalue, so the result is always <= ||A||.
double largest_singular_value_lanczos(const SparseCMatrix& a, int max_steps = 160);

BasicMatTuple<Complex> direct_sum(const MatTuple& x, const MatTuple& y);

// Block-diagonal with `copies` copies of x.
MatTuple ampliate(const MatTuple& x, int copies);

// S^{-1} X_j S for every component. Throws NumericalError when
// sigma_min(S) < 1e-12 sigma_max(S).
MatTuple conjugate(const MatTuple& x, const CMatrix& s);

// Coordinatewise U^* X_j U for unitary U.
MatTuple unitary_conjugate(const MatTuple& x, const CMatrix& u);

// a * b with every entry summed over k = 0, 1, ... in order. Unlike a blocked
// GEMM, entry (i, j) depends only on row i of a and column j of b, so
// products of block-diagonal matrices equal the blockwise products bitwise.
template <typename Scalar>
Matrix<Scalar> ordered_product(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("ordered_product: inner dimensions differ");
  Matrix<Scalar> out(a.rows(), b.cols());
  for (Eigen::Index j = 0; j < b.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      Scalar s(0);
      for (Eigen::Index k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      out(i, j) = s;
    }
  return out;
}

// Ordered product X_{w_1} ... X_{w_k}; identity for the empty word.
template <typename Scalar>
Matrix<Scalar> word_eval(const BasicMatTuple<Scalar>& x, const Word& w) {
  if (w.alphabet_size() != x.size())
    throw std::invalid_argument("word_eval: word alphabet does not match tuple size");
  const int n = x.level();
  if (w.is_empty()) return Matrix<Scalar>::Identity(n, n);
  Matrix<Scalar> out = x[w[0] - 1];
  for (std::size_t i = 1; i < w.length(); ++i) out = ordered_product(out, x[w[i] - 1]);
  return out;
}

double max_norm(const MatTuple& x);

// Orthonormal basis (columns) of the right nullspace: right singular vectors
// with sigma_i <= tol_ratio * sigma_max. A zero matrix yields the full space.
CMatrix nullspace(const CMatrix& m, double tol_ratio = kDefaultTolRatio);

// Orthonormal basis (columns) of the column space, same tolerance rule.
CMatrix range_basis(const CMatrix& m, double tol_ratio = kDefaultTolRatio);

// Numerical rank under the same rule.
int numerical_rank(const CMatrix& m, double tol_ratio = kDefaultTolRatio);

// sin of the largest principal angle by which span(a) leaves span(b)
// (both with orthonormal columns); 0 when span(a) is inside span(b).
double containment_sine(const CMatrix& a, const CMatrix& b);

// Splittable, seedable generator. A stream for task t is derived from
// (seed, t) as splitmix64(splitmix64(seed) ^ splitmix64(t + 0x9E3779B97F4A7C15)),
// which then seeds a std::mt19937_64. Gaussians come from Box-Muller on
// 53-bit uniforms, so draws do not depend on the standard library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  Rng split(std::uint64_t task) const;
  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();
  double uniform();  // [0, 1)
  double normal();
  // Complex Gaussian with E|z|^2 = 1.
  Complex complex_normal();

  static std::uint64_t mix(std::uint64_t seed, std::uint64_t task);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Entries i.i.d. complex Gaussian with mean 0 and variance scale^2 / n.
CMatrix sample_ginibre(int n, double scale, Rng& rng);
// Haar unitary: QR of a Ginibre matrix with the phases of diag(R) removed.
CMatrix sample_haar_unitary(int n, Rng& rng);

MatTuple sample_ginibre_tuple(int n, int d, double scale, Rng& rng);
MatTuple sample_haar_unitary_tuple(int n, int d, Rng& rng);
MatTuple sample_ginibre_tuple(int n, int d, double scale, std::uint64_t seed);
MatTuple sample_haar_unitary_tuple(int n, int d, std::uint64_t seed);

// Random invertible matrix U diag(s) V with s log-uniform in [1, max_cond].
CMatrix sample_conditioned(int n, double max_cond, Rng& rng);

}  // namespace ncball
