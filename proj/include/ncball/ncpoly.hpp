#pragma once

// Free nc polynomials C<Z>, truncated power series and linear pencils
// Q(Z) = sum_j Q_j Z_j.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ncball/freewords.hpp"
#include "ncball/matnum.hpp"

namespace ncball {

using CoeffMap = std::map<Word, Complex>;

class FreePoly {
 public:
  explicit FreePoly(int d = 1);
  // Zero coefficients are dropped; every key must have alphabet d.
  FreePoly(int d, const CoeffMap& coeffs);

  static FreePoly constant(int d, Complex c);
  static FreePoly variable(int d, int j);  // Z_j, j is 1-based
  static FreePoly monomial(const Word& w, Complex c = 1.0);

  int num_vars() const { return d_; }
  bool is_zero() const { return coeffs_.empty(); }
  // -1 for the zero polynomial.
  int degree() const;
  bool is_homogeneous() const;
  const CoeffMap& coeffs() const { return coeffs_; }
  Complex coeff(const Word& w) const;

  void add_term(const Word& w, Complex c);

  FreePoly operator-() const;
  FreePoly& operator+=(const FreePoly& o);
  FreePoly& operator-=(const FreePoly& o);
  FreePoly& operator*=(Complex s);

  friend FreePoly operator+(FreePoly a, const FreePoly& b) { return a += b; }
  friend FreePoly operator-(FreePoly a, const FreePoly& b) { return a -= b; }
  friend FreePoly operator*(FreePoly a, Complex s) { return a *= s; }
  friend FreePoly operator*(Complex s, FreePoly a) { return a *= s; }
  friend FreePoly operator*(const FreePoly& a, const FreePoly& b);
  friend bool operator==(const FreePoly&, const FreePoly&) = default;

  // sum |c_alpha|
  double l1_norm() const;

 private:
  int d_;
  CoeffMap coeffs_;
};

FreePoly poly_add(const FreePoly& p, const FreePoly& q);
// Word concatenation convolution.
FreePoly poly_mul(const FreePoly& p, const FreePoly& q);

// Restriction to words of length exactly k.
FreePoly homogeneous_part(const FreePoly& p, int k);

// Coefficients in a (rows x cols) array of polynomials share d.
using PolyMatrix = std::vector<std::vector<FreePoly>>;

// Partial data of a power series: coefficients for words of length <= N.
class TruncatedSeries {
 public:
  TruncatedSeries(int d, int truncation, const CoeffMap& coeffs);
  TruncatedSeries(const FreePoly& p, int truncation);

  int num_vars() const { return d_; }
  int truncation() const { return truncation_; }
  const CoeffMap& coeffs() const { return coeffs_; }
  FreePoly polynomial() const { return FreePoly(d_, coeffs_); }

 private:
  int d_;
  int truncation_;
  CoeffMap coeffs_;
};

// Fejer-weighted partial sum sum_{k<=m} (1 - k/(m+1)) f_k.
FreePoly cesaro_sum(const TruncatedSeries& f, int m);

// c_alpha -> r^{|alpha|} c_alpha, i.e. X -> F(rX).
FreePoly scale_arg(const FreePoly& p, double r);
TruncatedSeries scale_arg(const TruncatedSeries& f, double r);

// sum_alpha c_alpha X^alpha, accumulated in canonical word order with
// compensated summation; prefix products are shared between words.
CMatrix poly_eval(const FreePoly& p, const MatTuple& x);

// Block matrix [p_ij(X)] of size (rows n) x (cols n).
CMatrix poly_matrix_eval(const PolyMatrix& f, const MatTuple& x);

// Text format: terms "coeff*word" joined by '+' or '-', e.g. "1*12-1*21".
// Complex coefficients are written "(re+imi)", the empty word "e", and the
// zero polynomial "0".
std::string to_string(const FreePoly& p);
FreePoly parse_poly(std::string_view text, int d);

class LinearPencil {
 public:
  // Throws std::invalid_argument on shape mismatch or when the coefficients
  // are linearly dependent (sigma_min <= 1e-10 sigma_max of the stacked
  // rs x d coefficient matrix).
  explicit LinearPencil(std::vector<CMatrix> coefficients);

  int num_vars() const { return static_cast<int>(q_.size()); }
  int rows() const { return static_cast<int>(q_.front().rows()); }
  int cols() const { return static_cast<int>(q_.front().cols()); }
  const std::vector<CMatrix>& coefficients() const { return q_; }
  const CMatrix& operator[](int j) const { return q_[static_cast<std::size_t>(j)]; }

 private:
  std::vector<CMatrix> q_;
};

// sum_j Q_j (x) X_j with the Q index major: block (a, b) of the (rn x sn)
// result is sum_j (Q_j)_{ab} X_j.
CMatrix pencil_eval(const LinearPencil& q, const MatTuple& x);

}  // namespace ncball
