#pragma once

// First-order nc derivatives of polynomial maps F = (F_1, ..., F_e) in d
// variables, computed both from block upper-triangular evaluation and from
// the word-level product rule.

#include <vector>

#include "ncball/ncpoly.hpp"

namespace ncball {

class NcMap {
 public:
  // Throws std::invalid_argument when the list is empty or the components
  // disagree on the number of variables.
  explicit NcMap(std::vector<FreePoly> components);

  int num_vars() const { return components_.front().num_vars(); }
  int num_components() const { return static_cast<int>(components_.size()); }
  const std::vector<FreePoly>& components() const { return components_; }
  const FreePoly& operator[](int i) const { return components_[static_cast<std::size_t>(i)]; }

 private:
  std::vector<FreePoly> components_;
};

std::vector<CMatrix> map_eval(const NcMap& f, const MatTuple& x);

// Substitutes inner into outer: (outer o inner)_i = outer_i(inner_1, ...).
// Requires outer.num_vars() == inner.num_components().
NcMap compose(const NcMap& outer, const NcMap& inner);

// (1,2) blocks of F([[Y, X], [0, Y]]). The diagonal blocks are checked
// against F(Y) (relative 1e-10); a mismatch throws NumericalError.
std::vector<CMatrix> delta_block(const NcMap& f, const MatTuple& y, const MatTuple& x);

// sum over words and positions of Y^{a<i} X_{a_i} Y^{a>i}.
std::vector<CMatrix> delta_leibniz(const NcMap& f, const MatTuple& y, const MatTuple& x);

// (1,2) blocks of F([[X, Z], [0, Y]]).
std::vector<CMatrix> delta_two_point(const NcMap& f, const MatTuple& x, const MatTuple& y,
                                     const MatTuple& z);

// A (e x d) with column j = Delta F(0,0)(e_j) at level 1. Cross-checked
// against the degree-one coefficients; disagreement throws NumericalError.
CMatrix linear_part(const NcMap& f);

// Applies A (x) id to a tuple: returns (sum_j A_ij X_j)_i.
MatTuple apply_linear(const CMatrix& a, const MatTuple& x);

// max over the tuples X in the cloud of max_i ||Delta F(0,0)(X)_i - X_i||.
// Zero (up to rounding) when Delta F(0,0) is the identity on the cloud.
double linear_identity_residual(const NcMap& f, const std::vector<MatTuple>& cloud);

}  // namespace ncball
