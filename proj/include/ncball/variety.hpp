#pragma once

// Homogeneous nc subvarieties of an operator ball, seeded point clouds on
// them, and the linear algebra read off those clouds: degree slices of the
// vanishing ideal, matrix spans and minimal sub-balls.

#include <cstdint>
#include <string>
#include <vector>

#include "ncball/opball.hpp"

namespace ncball {

class NcVariety {
 public:
  // Generators must share the ball's d and be nonzero.
  NcVariety(OperatorBall ball, std::vector<FreePoly> generators);

  const OperatorBall& ball() const { return ball_; }
  const std::vector<FreePoly>& generators() const { return generators_; }
  int num_vars() const { return ball_.num_vars(); }
  bool is_homogeneous() const { return homogeneous_; }

  // max_j ||g_j(X)||; 0 without generators.
  double residual(const MatTuple& x) const;

 private:
  OperatorBall ball_;
  std::vector<FreePoly> generators_;
  bool homogeneous_ = true;
};

inline constexpr double kCloudResidualTol = 1e-9;
inline constexpr double kMembershipTol = 1e-8;
inline constexpr double kCloudMargin = 1e-3;

struct Membership {
  bool member = false;
  double gauge = 0.0;
  double residual = 0.0;
};

Membership membership(const NcVariety& v, const MatTuple& x, double tol = kMembershipTol);

enum class SamplerKind { kCommuting, kQCommuting, kCoordinateZero, kJointlyNilpotent, kUserCloud };

struct SamplerSpec {
  SamplerKind kind = SamplerKind::kCommuting;
  Complex q = 1.0;             // q_commuting
  std::vector<int> zero_coords;  // coordinate_zero, 1-based
  std::string path;            // user_cloud

  static SamplerSpec commuting() { return {}; }
  static SamplerSpec q_commuting(Complex q) { return {SamplerKind::kQCommuting, q, {}, {}}; }
  static SamplerSpec coordinate_zero(std::vector<int> coords) {
    return {SamplerKind::kCoordinateZero, 1.0, std::move(coords), {}};
  }
  static SamplerSpec jointly_nilpotent() { return {SamplerKind::kJointlyNilpotent, 1.0, {}, {}}; }
  static SamplerSpec user_cloud(std::string path) { return {SamplerKind::kUserCloud, 1.0, {}, std::move(path)}; }
};

std::string to_string(SamplerKind kind);

// Smallest p <= 64 with q^p = 1 (to 1e-12) when |q| = 1, else 0.
int root_of_unity_order(Complex q);

class SampleCloud {
 public:
  // Validates every point: level n, gauge < 1 and residual <= residual_tol.
  SampleCloud(NcVariety variety, int level, std::vector<MatTuple> points, std::uint64_t seed,
              double residual_tol = kCloudResidualTol);

  const NcVariety& variety() const { return variety_; }
  int level() const { return level_; }
  const std::vector<MatTuple>& points() const { return points_; }
  std::uint64_t seed() const { return seed_; }
  double residual_tol() const { return residual_tol_; }
  int num_vars() const { return variety_.num_vars(); }

 private:
  NcVariety variety_;
  int level_;
  std::vector<MatTuple> points_;
  std::uint64_t seed_;
  double residual_tol_;
};

// m points at level n. Every point is projected inside the ball with margin
// 1e-3 and residual-checked against the generators (std::invalid_argument
// when the sampler does not fit the variety or the level).
//  commuting:         S^{-1} D_j S, D_j random diagonal, cond(S) <= 10
//  q_commuting(q):    d = 2. For q a primitive p-th root of unity with p | n,
//                     direct sums of scaled clock and shift matrices; for any
//                     other q the weighted shift X_1 (entries (j, j+1)) with
//                     X_2 = diag(a q^j). Then a random similarity.
//  coordinate_zero J: Ginibre tuple with the coordinates in J set to 0
//  jointly_nilpotent: strictly upper-triangular tuples
//  user_cloud:        points of level n read from a cloud file
SampleCloud sample(const NcVariety& v, int n, int m, std::uint64_t seed, const SamplerSpec& sampler);

struct Subspace {
  CMatrix basis;  // ambient x dim, orthonormal columns
  double tol_ratio = kDefaultTolRatio;

  int ambient_dim() const { return static_cast<int>(basis.rows()); }
  int dim() const { return static_cast<int>(basis.cols()); }
};

// Coefficients of the degree-k part of p in enumerate_words(d, k) order.
CVector coefficient_vector(const FreePoly& p, int k);
FreePoly coefficient_poly(int d, int k, const CVector& coeffs);

// Degree-k homogeneous polynomials vanishing on every cloud point: the
// nullspace of the (m n^2) x d^k matrix of vectorized X^a.
Subspace ideal_slice(const SampleCloud& cloud, int k, double tol_ratio = kDefaultTolRatio);
Subspace ideal_slice(const std::vector<MatTuple>& points, int d, int k, double tol_ratio = kDefaultTolRatio);

// span{Z^b g Z^c : |b| + deg g + |c| = k} over homogeneous generators.
Subspace generated_slice(int d, const std::vector<FreePoly>& generators, int k,
                         double tol_ratio = kDefaultTolRatio);

// sin of the largest principal angle by which a leaves b.
double subspace_containment(const Subspace& a, const Subspace& b);

struct NullstellensatzReport {
  std::vector<int> levels;
  std::vector<int> ideal_dims;
  int generated_dim = 0;
  std::vector<double> containment;  // generated slice leaving the ideal slice, per level
  bool contained = false;           // all containment values <= 1e-6
  bool dims_match = false;          // at the largest level
};

NullstellensatzReport nullstellensatz_check(const NcVariety& v, int k, const std::vector<int>& levels,
                                            int m, std::uint64_t seed, const SamplerSpec& sampler);

struct TrivialNullstellensatzReport {
  int slice_dim = 0;
  int recomputed_dim = 0;
  double sine_forward = 0.0;   // original slice leaving the recomputed one
  double sine_backward = 0.0;  // recomputed slice leaving the original
  std::size_t pool_size = 0;
  std::size_t kept = 0;
  bool unchanged = false;
};

// Takes the slice I_k of the cloud, keeps the points of an enlarged pool
// (the cloud, `extra` fresh sampler points and `extra` Ginibre tuples inside
// the ball) on which every slice polynomial vanishes, and recomputes the
// slice from the kept points.
TrivialNullstellensatzReport trivial_nullstellensatz_check(const SampleCloud& cloud, int k,
                                                           const SamplerSpec& sampler, int extra,
                                                           std::uint64_t seed);

// span of the entry vectors ((X_1)_{ij}, ..., (X_d)_{ij}) over all points.
Subspace mat_span(const SampleCloud& cloud, double tol_ratio = kDefaultTolRatio);

// dim mat_span == d. Throws NumericalError when the k = 1 ideal slice
// disagrees (dim slice != d - dim mat_span).
bool is_matrix_spanning(const SampleCloud& cloud);

struct SubBall {
  OperatorBall ball;
  CMatrix embedding;  // d x e, orthonormal columns spanning the mat-span
};

// P_k = sum_j (v_k)_j Q_j over an orthonormal basis {v_k} of the mat-span.
SubBall minimal_subball(const OperatorBall& ball, const SampleCloud& cloud);

// Coordinates of X in the basis: X'_k = sum_j conj((v_k)_j) X_j.
MatTuple pull_back(const CMatrix& embedding, const MatTuple& x);

struct HomogeneityReport {
  std::vector<Complex> lambdas;
  bool scaled_points_member = false;
  double max_residual = 0.0;
  // per generator: scale_arg(g, r) lies in the span of the generators
  std::vector<bool> scale_closed;
  bool pass() const;
};

std::vector<Complex> default_lambda_grid();

HomogeneityReport homogeneity_check(const NcVariety& v, const SampleCloud& cloud,
                                    const std::vector<Complex>& lambdas = default_lambda_grid(),
                                    double r = 0.5);

}  // namespace ncball
