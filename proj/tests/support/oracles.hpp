#pragma once

// Shared generators and hand-checkable reference values for the tests.

#include <cmath>
#include <cstdint>

#include "ncball/ncpoly.hpp"

namespace oracles {

using ncball::CMatrix;
using ncball::Complex;
using ncball::FreePoly;
using ncball::Rng;
using ncball::Word;

// Random polynomial in d variables with every word of length <= max_degree
// present with probability `density` and complex Gaussian coefficients.
inline FreePoly random_poly(int d, int max_degree, Rng& rng, double density = 0.5) {
  FreePoly p(d);
  for (const auto& w : ncball::enumerate_words_up_to(d, max_degree))
    if (rng.uniform() < density) p.add_term(w, rng.complex_normal());
  if (p.is_zero()) p.add_term(Word::letter(d, 1), 1.0);
  return p;
}

inline double max_abs(const CMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

// Largest singular value by plain power iteration on A^* A.
inline double power_iteration_norm(const CMatrix& a, int iters = 2000) {
  ncball::CVector v = ncball::CVector::Ones(a.cols());
  double lambda = 0.0;
  for (int i = 0; i < iters; ++i) {
    ncball::CVector w = a.adjoint() * (a * v);
    lambda = w.norm();
    v = w / lambda;
  }
  return std::sqrt(lambda);
}

// Commutator Z_1 Z_2 - Z_2 Z_1 in d variables.
inline FreePoly commutator(int d = 2) {
  return FreePoly::variable(d, 1) * FreePoly::variable(d, 2) - FreePoly::variable(d, 2) * FreePoly::variable(d, 1);
}

}  // namespace oracles
