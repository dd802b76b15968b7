#pragma once

// Weighted free Fock spaces: formal series f = sum c_a Z^a with
// ||f||^2 = sum w_a |c_a|^2. Two built-in weights: w = 1 (nc Drury-Arveson)
// and w = |a|!/a! (nc Hardy space of the polydisk).

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ncball/ncpoly.hpp"

namespace ncball {

enum class FockKind { kDruryArveson, kNcHardy, kCustom };

std::string to_string(FockKind kind);

class WeightedFockSpace {
 public:
  using WeightFn = std::function<double(const Word&)>;

  static std::shared_ptr<const WeightedFockSpace> drury_arveson(int d);
  static std::shared_ptr<const WeightedFockSpace> nc_hardy(int d);
  // weight(empty) must be 1; positivity is checked on every lookup.
  static std::shared_ptr<const WeightedFockSpace> custom(int d, WeightFn weight);

  int num_vars() const { return d_; }
  FockKind kind() const { return kind_; }
  double weight(const Word& w) const;
  // Exact weight; throws for custom spaces.
  BigInt exact_weight(const Word& w) const;
  // Analytic tail bounds are available for the built-in weights only.
  bool has_tail_bounds() const { return kind_ != FockKind::kCustom; }

 private:
  WeightedFockSpace(int d, FockKind kind, WeightFn weight);

  int d_;
  FockKind kind_;
  WeightFn weight_;
};

using FockSpacePtr = std::shared_ptr<const WeightedFockSpace>;

bool same_space(const WeightedFockSpace& a, const WeightedFockSpace& b);

class FockVector {
 public:
  FockVector(FockSpacePtr space, CoeffMap coeffs);
  FockVector(FockSpacePtr space, const FreePoly& p);

  const WeightedFockSpace& space() const { return *space_; }
  const FockSpacePtr& space_ptr() const { return space_; }
  const CoeffMap& coeffs() const { return coeffs_; }
  FreePoly polynomial() const { return FreePoly(space_->num_vars(), coeffs_); }

 private:
  FockSpacePtr space_;
  CoeffMap coeffs_;
};

// <f, g> = sum_a w_a conj(g_a) f_a. Throws std::invalid_argument when the
// spaces differ.
Complex fock_inner(const FockVector& f, const FockVector& g);
double fock_norm(const FockVector& f);

struct EvalWithBound {
  CMatrix value;
  // a-priori bound on ||f(X)||; +inf when no bound applies
  double bound = 0.0;
  bool bound_holds = true;
};

// f(X) together with the bound from the Cauchy-Schwarz estimate at radius r:
// Hardy: (1/(1-r))^d ||f||; Drury-Arveson: ||f|| / sqrt(1 - d r^2) when
// d r^2 < 1. r defaults to max_j ||X_j||; r >= 1 disables the bound.
EvalWithBound eval_vector(const FockVector& f, const MatTuple& x, double r = -1.0);

// sum_{k > N} c_k x^k with c_k = C(k+d-1, d-1) (Hardy) or d^k (DA), i.e.
// the number of multi-indices (resp. words) of length k weighted by 1/w.
// Computed as an explicit sum followed by a geometric majorant of the rest.
// +inf when the series diverges or the space has no tail bound.
double kernel_tail_sum(const WeightedFockSpace& space, int truncation, double x);

struct KernelResult {
  CMatrix value;
  double tail_bound = 0.0;
};

// sum_{|a| <= N} X^a T (W^a)^* / w_a, with the tail bound
// ||T|| * kernel_tail_sum(N, r_X r_W), r = max_j ||.||.
KernelResult kernel_apply(const WeightedFockSpace& space, const MatTuple& x, const MatTuple& w,
                          const CMatrix& t, int truncation);

// Coefficients conj(<X^a v, y>) / w_a for |a| <= N, so that
// <f(X) v, y> = fock_inner(f, K) whenever deg f <= N.
FockVector kernel_vector(const FockSpacePtr& space, const MatTuple& x, const CVector& v,
                         const CVector& y, int truncation);

// Bound on |<f(X)v, y> - <f, K_{X,v,y}>| for the degree-N kernel vector:
// ||f_{>N}|| ||v|| ||y|| sqrt(kernel_tail_sum(N, r^2)).
double reproducing_tail_bound(const FockVector& f, const MatTuple& x, const CVector& v,
                              const CVector& y, int truncation);

struct MultMatrix {
  SparseCMatrix matrix;
  std::vector<Word> domain;
  std::vector<Word> codomain;
  // ||matrix||, a lower bound of ||M_phi||. Exact SVD for small matrices,
  // Lanczos (never an overestimate) otherwise.
  double norm_lower_bound = 0.0;
};

// Matrix of f -> phi f from the orthonormal basis {Z^a / sqrt(w_a)} over the
// given domain words into the orthonormal basis over all products b a. The
// column of Z^a has entry c_b sqrt(w_{ba} / w_a) in row ba.
MultMatrix mult_matrix(const WeightedFockSpace& space, const FreePoly& phi,
                       const std::vector<Word>& domain);
// Domain = all words of length <= N.
MultMatrix mult_matrix(const WeightedFockSpace& space, const FreePoly& phi, int truncation);

// Exact ratios ||Z^{a0} Z_{j0}^k||^2 / ||Z_{j0}^k||^2, k = 0..k_max, in the
// Hardy space. Requires d >= 2, a0 non-empty and not a power of j0.
std::vector<BigRational> multiplier_divergence_table(const Word& alpha0, int j0, int k_max);

// Exact partial sums S_K = sum_{k<=K} ||Z_2 Z_1^k||^2 (1/(k+1))^2, K = 0..K_max,
// in the Hardy space of d = 2: the squared norm of Z_2 f for
// f = sum Z_1^k / (k+1). The sums are the harmonic numbers H_{K+1}.
std::vector<BigRational> shift_partial_sums(int k_max);

// xi_a = (1/|a|!) sum over all |a|! permutations of Z^{sorted(a)}, i.e.
// coefficient a!/|a|! on every distinct rearrangement. Hardy space.
FockVector symmetrize(const FockSpacePtr& hardy, const MultiIndex& alpha);

// Gram matrix of {xi_a : |a| <= D} in the Hardy space of d variables, in
// degree-major multi-index order.
CMatrix sym_gram(int d, int max_degree);

struct SpectralBound {
  double rho = 0.0;
  double bound = 0.0;
};

// rho(phi(X)) and the truncated multiplier norm at truncation N. X must lie
// strictly inside the row ball (DA) or the polydisk (Hardy).
SpectralBound spectral_bound_check(const WeightedFockSpace& space, const FreePoly& phi,
                                   const MatTuple& x, int truncation);

}  // namespace ncball
