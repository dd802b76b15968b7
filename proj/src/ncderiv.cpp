#include "ncball/ncderiv.hpp"

#include <algorithm>
#include <stdexcept>

namespace ncball {

NcMap::NcMap(std::vector<FreePoly> components) : components_(std::move(components)) {
  if (components_.empty()) throw std::invalid_argument("NcMap: need at least one component");
  const int d = components_.front().num_vars();
  for (const auto& c : components_)
    if (c.num_vars() != d) throw std::invalid_argument("NcMap: components disagree on d");
}

std::vector<CMatrix> map_eval(const NcMap& f, const MatTuple& x) {
  if (x.size() != f.num_vars()) throw std::invalid_argument("map_eval: tuple size != d");
  std::vector<CMatrix> out;
  out.reserve(f.components().size());
  for (const auto& c : f.components()) out.push_back(poly_eval(c, x));
  return out;
}

NcMap compose(const NcMap& outer, const NcMap& inner) {
  if (outer.num_vars() != inner.num_components())
    throw std::invalid_argument("compose: outer arity does not match inner size");
  const int d = inner.num_vars();
  std::vector<FreePoly> out;
  for (const auto& c : outer.components()) {
    FreePoly acc(d);
    for (const auto& [w, coef] : c.coeffs()) {
      FreePoly term = FreePoly::constant(d, coef);
      for (std::size_t i = 0; i < w.length(); ++i) term = term * inner[w[i] - 1];
      acc += term;
    }
    out.push_back(std::move(acc));
  }
  return NcMap(std::move(out));
}

namespace {

void require_same_shape(const MatTuple& a, const MatTuple& b, int d, const char* who) {
  if (a.size() != d || b.size() != d) throw std::invalid_argument(std::string(who) + ": tuple size != d");
  if (a.level() != b.level()) throw std::invalid_argument(std::string(who) + ": levels differ");
}

MatTuple upper_block(const MatTuple& x, const MatTuple& y, const MatTuple& z) {
  const int n = x.level();
  std::vector<CMatrix> mats;
  for (int j = 0; j < x.size(); ++j) {
    CMatrix b = CMatrix::Zero(2 * n, 2 * n);
    b.topLeftCorner(n, n) = x[j];
    b.topRightCorner(n, n) = z[j];
    b.bottomRightCorner(n, n) = y[j];
    mats.push_back(std::move(b));
  }
  return MatTuple(std::move(mats));
}

void check_diagonal(const CMatrix& full, const CMatrix& top, const CMatrix& bottom, int n,
                    const char* who) {
  const double scale = std::max({1.0, top.norm(), bottom.norm()});
  const double err = std::max((full.topLeftCorner(n, n) - top).norm(),
                              (full.bottomRightCorner(n, n) - bottom).norm());
  const double lower = full.bottomLeftCorner(n, n).norm();
  if (err > 1e-10 * scale || lower > 1e-10 * scale)
    throw NumericalError(std::string(who) + ": block structure violated");
}

}  // namespace

std::vector<CMatrix> delta_two_point(const NcMap& f, const MatTuple& x, const MatTuple& y,
                                     const MatTuple& z) {
  const int d = f.num_vars();
  require_same_shape(x, y, d, "delta_two_point");
  require_same_shape(x, z, d, "delta_two_point");
  const int n = x.level();
  const MatTuple block = upper_block(x, y, z);
  std::vector<CMatrix> out;
  for (const auto& c : f.components()) {
    const CMatrix full = poly_eval(c, block);
    check_diagonal(full, poly_eval(c, x), poly_eval(c, y), n, "delta_two_point");
    out.push_back(full.topRightCorner(n, n));
  }
  return out;
}

std::vector<CMatrix> delta_block(const NcMap& f, const MatTuple& y, const MatTuple& x) {
  return delta_two_point(f, y, y, x);
}

std::vector<CMatrix> delta_leibniz(const NcMap& f, const MatTuple& y, const MatTuple& x) {
  const int d = f.num_vars();
  require_same_shape(y, x, d, "delta_leibniz");
  const int n = y.level();
  std::vector<CMatrix> out;
  for (const auto& c : f.components()) {
    CMatrix acc = CMatrix::Zero(n, n);
    for (const auto& [w, coef] : c.coeffs()) {
      const int len = static_cast<int>(w.length());
      if (len == 0) continue;
      // prefix[i] = Y^{a<i}, suffix[i] = Y^{a>i}
      std::vector<CMatrix> prefix(static_cast<std::size_t>(len) + 1), suffix(static_cast<std::size_t>(len) + 1);
      prefix[0] = CMatrix::Identity(n, n);
      for (int i = 0; i < len; ++i) prefix[i + 1] = prefix[i] * y[w[i] - 1];
      suffix[len] = CMatrix::Identity(n, n);
      for (int i = len - 1; i >= 0; --i) suffix[i] = y[w[i] - 1] * suffix[i + 1];
      for (int i = 0; i < len; ++i) acc += coef * (prefix[i] * x[w[i] - 1] * suffix[i + 1]);
    }
    out.push_back(std::move(acc));
  }
  return out;
}

CMatrix linear_part(const NcMap& f) {
  const int d = f.num_vars();
  const int e = f.num_components();
  CMatrix a(e, d);
  const MatTuple zero = MatTuple::zeros(1, d);
  for (int j = 0; j < d; ++j) {
    std::vector<CMatrix> dir(static_cast<std::size_t>(d), CMatrix::Zero(1, 1));
    dir[static_cast<std::size_t>(j)](0, 0) = 1.0;
    const auto col = delta_block(f, zero, MatTuple(std::move(dir)));
    for (int i = 0; i < e; ++i) a(i, j) = col[static_cast<std::size_t>(i)](0, 0);
  }
  for (int i = 0; i < e; ++i)
    for (int j = 0; j < d; ++j) {
      const Complex c = f[i].coeff(Word::letter(d, j + 1));
      if (std::abs(a(i, j) - c) > 1e-12 * std::max(1.0, std::abs(c)))
        throw NumericalError("linear_part: block derivative disagrees with degree-one coefficients");
    }
  return a;
}

MatTuple apply_linear(const CMatrix& a, const MatTuple& x) {
  if (a.cols() != x.size()) throw std::invalid_argument("apply_linear: A columns != tuple size");
  const int n = x.level();
  std::vector<CMatrix> out;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    CMatrix acc = CMatrix::Zero(n, n);
    for (int j = 0; j < x.size(); ++j) acc += a(i, j) * x[j];
    out.push_back(std::move(acc));
  }
  return MatTuple(std::move(out));
}

double linear_identity_residual(const NcMap& f, const std::vector<MatTuple>& cloud) {
  if (f.num_components() != f.num_vars())
    throw std::invalid_argument("linear_identity_residual: map must be square");
  double worst = 0.0;
  for (const auto& x : cloud) {
    const MatTuple zero = MatTuple::zeros(x.level(), x.size());
    const auto dx = delta_block(f, zero, x);
    for (int i = 0; i < x.size(); ++i)
      worst = std::max(worst, operator_norm(dx[static_cast<std::size_t>(i)] - x[i]));
  }
  return worst;
}

}  // namespace ncball
