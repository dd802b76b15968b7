#pragma once

// NC operator balls D_Q = { X : ||Q(X)|| < 1 } for a linear pencil Q.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ncball/ncpoly.hpp"

namespace ncball {

inline constexpr double kBoundaryTol = 1e-9;

// Metadata only: injectivity of the coefficient operator space is never
// computed, it is recorded for the balls whose status is known.
enum class Injectivity { kKnownInjective, kKnownNonInjective, kUnknown };

std::string to_string(Injectivity flag);

class OperatorBall {
 public:
  explicit OperatorBall(LinearPencil pencil, std::string name = "custom",
                        Injectivity flag = Injectivity::kUnknown)
      : pencil_(std::move(pencil)), name_(std::move(name)), flag_(flag) {}

  const LinearPencil& pencil() const { return pencil_; }
  int num_vars() const { return pencil_.num_vars(); }
  const std::string& name() const { return name_; }
  Injectivity injectivity() const { return flag_; }

 private:
  LinearPencil pencil_;
  std::string name_;
  Injectivity flag_;
};

// ||Q(X)||.
double gauge(const OperatorBall& ball, const MatTuple& x);
bool is_member(const OperatorBall& ball, const MatTuple& x);
bool on_boundary(const OperatorBall& ball, const MatTuple& x, double tol = kBoundaryTol);

// Q(Z) = [Z_1 ... Z_d].
OperatorBall row_ball(int d);
// Q(Z) = diag(Z_1, ..., Z_d).
OperatorBall polydisk(int d);
// Block diagonal of rows [Z_1 .. Z_{b_1}], [Z_{b_1+1} ..], ... with the
// given block lengths (summing to d).
OperatorBall block_rows(const std::vector<int>& block_lengths);
// l x l upper-triangular pencil, d = l(l+1)/2, variables Z_11, Z_12, ...,
// Z_1l, Z_22, ... in row-major order.
OperatorBall upper_triangular(int l);
// All m x m matrices: the upper triangle in row-major order first, then the
// strictly lower triangle in row-major order. For m = 2 this is
// [[Z_1, Z_2], [Z_4, Z_3]].
OperatorBall full_matrix(int m);

struct BallPoint {
  MatTuple x;
  double gauge_value = 0.0;
};

BallPoint make_ball_point(const OperatorBall& ball, MatTuple x);

// delta / (d max_j ||Q_j||) with delta = 1 - gauge(X). Any W with
// ||W||_inf below this radius keeps every ampliation of X plus W inside.
double uniform_radius(const OperatorBall& ball, const MatTuple& x);

// Rescales X onto gauge 1 - margin when gauge(X) >= 1 - margin; otherwise
// returns X unchanged. The zero tuple passes through.
MatTuple project_inside(const OperatorBall& ball, const MatTuple& x, double margin);

struct SupEstimate {
  double lower_bound = 0.0;
  BallPoint witness;
  // (level, best value at that level)
  std::vector<std::pair<int, double>> per_level;
  // Largest value seen among the raw random samples (before hill-climbing).
  double max_sampled = 0.0;
  std::size_t evaluations = 0;
};

// Randomized lower bound for sup ||F(X)|| over the closed ball.
// Per level: ceil(budget/2) Ginibre and floor(budget/2) Haar-unitary tuples
// projected to gauge 1 - 1e-6, the zero tuple, and the coordinatewise
// identity tuple when it lies in the closed ball; then 50 rounds of Gaussian
// hill-climbing from the best point (step 0.05, halved on failure,
// re-projected with margin 1e-6). Deterministic in (seed, level, round).
SupEstimate sup_norm_estimate(const OperatorBall& ball, const PolyMatrix& f,
                              const std::vector<int>& levels, int budget, std::uint64_t seed);

struct UnitaryContractionSup {
  double over_unitaries = 0.0;
  double over_contractions = 0.0;
};

// Sampled sup ||F(X)|| over Haar-unitary tuples and over contraction tuples
// (Ginibre components each scaled into the closed unit ball) at level n.
UnitaryContractionSup unitary_vs_contraction_sup(const OperatorBall& ball, const PolyMatrix& f,
                                                 int n, int budget, std::uint64_t seed);

}  // namespace ncball
