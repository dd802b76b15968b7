#include "ncball/ncpoly.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace ncball {

FreePoly::FreePoly(int d) : d_(d) {
  if (d < 1) throw std::invalid_argument("FreePoly: need d >= 1");
}

FreePoly::FreePoly(int d, const CoeffMap& coeffs) : FreePoly(d) {
  for (const auto& [w, c] : coeffs) add_term(w, c);
}

FreePoly FreePoly::constant(int d, Complex c) { return monomial(Word::empty(d), c); }

FreePoly FreePoly::variable(int d, int j) { return monomial(Word::letter(d, j), 1.0); }

FreePoly FreePoly::monomial(const Word& w, Complex c) {
  FreePoly p(w.alphabet_size());
  p.add_term(w, c);
  return p;
}

int FreePoly::degree() const {
  if (coeffs_.empty()) return -1;
  // Canonical order is degree-major, so the last key has maximal length.
  return static_cast<int>(coeffs_.rbegin()->first.length());
}

bool FreePoly::is_homogeneous() const {
  if (coeffs_.empty()) return true;
  return coeffs_.begin()->first.length() == coeffs_.rbegin()->first.length();
}

Complex FreePoly::coeff(const Word& w) const {
  auto it = coeffs_.find(w);
  return it == coeffs_.end() ? Complex(0.0) : it->second;
}

void FreePoly::add_term(const Word& w, Complex c) {
  if (w.alphabet_size() != d_)
    throw std::invalid_argument("FreePoly: word alphabet does not match d");
  if (c == Complex(0.0)) return;
  auto [it, inserted] = coeffs_.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex(0.0)) coeffs_.erase(it);
  }
}

FreePoly FreePoly::operator-() const {
  FreePoly out = *this;
  for (auto& [w, c] : out.coeffs_) c = -c;
  return out;
}

FreePoly& FreePoly::operator+=(const FreePoly& o) {
  if (o.d_ != d_) throw std::invalid_argument("FreePoly: variable count mismatch");
  for (const auto& [w, c] : o.coeffs_) add_term(w, c);
  return *this;
}

FreePoly& FreePoly::operator-=(const FreePoly& o) {
  if (o.d_ != d_) throw std::invalid_argument("FreePoly: variable count mismatch");
  for (const auto& [w, c] : o.coeffs_) add_term(w, -c);
  return *this;
}

FreePoly& FreePoly::operator*=(Complex s) {
  if (s == Complex(0.0)) {
    coeffs_.clear();
    return *this;
  }
  for (auto& [w, c] : coeffs_) c *= s;
  return *this;
}

FreePoly operator*(const FreePoly& a, const FreePoly& b) {
  if (a.d_ != b.d_) throw std::invalid_argument("FreePoly: variable count mismatch");
  FreePoly out(a.d_);
  for (const auto& [wa, ca] : a.coeffs_)
    for (const auto& [wb, cb] : b.coeffs_) out.add_term(wa + wb, ca * cb);
  return out;
}

double FreePoly::l1_norm() const {
  double s = 0.0;
  for (const auto& [w, c] : coeffs_) s += std::abs(c);
  return s;
}

FreePoly poly_add(const FreePoly& p, const FreePoly& q) { return p + q; }

FreePoly poly_mul(const FreePoly& p, const FreePoly& q) { return p * q; }

FreePoly homogeneous_part(const FreePoly& p, int k) {
  if (k < 0) throw std::invalid_argument("homogeneous_part: need k >= 0");
  FreePoly out(p.num_vars());
  for (const auto& [w, c] : p.coeffs())
    if (static_cast<int>(w.length()) == k) out.add_term(w, c);
  return out;
}

TruncatedSeries::TruncatedSeries(int d, int truncation, const CoeffMap& coeffs)
    : d_(d), truncation_(truncation) {
  if (d < 1 || truncation < 0) throw std::invalid_argument("TruncatedSeries: need d >= 1, N >= 0");
  for (const auto& [w, c] : coeffs) {
    if (w.alphabet_size() != d) throw std::invalid_argument("TruncatedSeries: alphabet mismatch");
    if (static_cast<int>(w.length()) > truncation)
      throw std::invalid_argument("TruncatedSeries: word longer than the truncation degree");
    if (c != Complex(0.0)) coeffs_.emplace(w, c);
  }
}

TruncatedSeries::TruncatedSeries(const FreePoly& p, int truncation)
    : TruncatedSeries(p.num_vars(), truncation, p.coeffs()) {}

FreePoly cesaro_sum(const TruncatedSeries& f, int m) {
  if (m < 0 || m > f.truncation())
    throw std::invalid_argument("cesaro_sum: need 0 <= m <= truncation degree");
  FreePoly out(f.num_vars());
  for (const auto& [w, c] : f.coeffs()) {
    const int k = static_cast<int>(w.length());
    if (k > m) break;
    out.add_term(w, c * (1.0 - static_cast<double>(k) / static_cast<double>(m + 1)));
  }
  return out;
}

namespace {

CoeffMap scaled_coeffs(const CoeffMap& coeffs, double r) {
  if (r < 0.0) throw std::invalid_argument("scale_arg: need r >= 0");
  CoeffMap out;
  for (const auto& [w, c] : coeffs) {
    const Complex s = c * std::pow(r, static_cast<double>(w.length()));
    if (s != Complex(0.0)) out.emplace(w, s);
  }
  return out;
}

// Elementwise Kahan accumulator.
class CompensatedSum {
 public:
  CompensatedSum(Eigen::Index rows, Eigen::Index cols)
      : sum_(CMatrix::Zero(rows, cols)), carry_(CMatrix::Zero(rows, cols)) {}

  void add(const CMatrix& term) {
    const CMatrix y = term - carry_;
    const CMatrix t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }

  const CMatrix& value() const { return sum_; }

 private:
  CMatrix sum_;
  CMatrix carry_;
};

}  // namespace

FreePoly scale_arg(const FreePoly& p, double r) {
  return FreePoly(p.num_vars(), scaled_coeffs(p.coeffs(), r));
}

TruncatedSeries scale_arg(const TruncatedSeries& f, double r) {
  return TruncatedSeries(f.num_vars(), f.truncation(), scaled_coeffs(f.coeffs(), r));
}

CMatrix poly_eval(const FreePoly& p, const MatTuple& x) {
  if (p.num_vars() != x.size())
    throw std::invalid_argument("poly_eval: polynomial and tuple have different d");
  const int n = x.level();
  CompensatedSum acc(n, n);
  std::map<Word, CMatrix> products;
  const CMatrix identity = CMatrix::Identity(n, n);

  // Memoized X^w = X^{w without last letter} X_{last}.
  auto product = [&](auto&& self, const Word& w) -> const CMatrix& {
    if (w.is_empty()) return identity;
    if (auto it = products.find(w); it != products.end()) return it->second;
    const CMatrix& head = self(self, w.slice(0, w.length() - 1));
    CMatrix value = ordered_product(head, x[w[w.length() - 1] - 1]);
    return products.emplace(w, std::move(value)).first->second;
  };

  for (const auto& [w, c] : p.coeffs()) acc.add(c * product(product, w));
  return acc.value();
}

CMatrix poly_matrix_eval(const PolyMatrix& f, const MatTuple& x) {
  if (f.empty() || f.front().empty()) throw std::invalid_argument("poly_matrix_eval: empty matrix");
  const int n = x.level();
  const auto rows = static_cast<Eigen::Index>(f.size());
  const auto cols = static_cast<Eigen::Index>(f.front().size());
  CMatrix out(rows * n, cols * n);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (static_cast<Eigen::Index>(f[static_cast<std::size_t>(i)].size()) != cols)
      throw std::invalid_argument("poly_matrix_eval: ragged matrix");
    for (Eigen::Index j = 0; j < cols; ++j)
      out.block(i * n, j * n, n, n) =
          poly_eval(f[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], x);
  }
  return out;
}

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class PolyParser {
 public:
  PolyParser(std::string_view text, int d) : text_(text), d_(d) {}

  FreePoly parse() {
    FreePoly out(d_);
    skip_space();
    if (text_.substr(pos_) == "0") return out;
    bool first = true;
    while (true) {
      skip_space();
      if (at_end()) break;
      double sign = 1.0;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1.0 : 1.0;
        ++pos_;
      } else if (!first) {
        fail("expected '+' or '-' between terms");
      }
      skip_space();
      const Complex c = sign * parse_coeff();
      skip_space();
      expect('*');
      skip_space();
      out.add_term(parse_word(), c);
      first = false;
    }
    if (first) fail("empty polynomial (write \"0\")");
    return out;
  }

 private:
  Complex parse_coeff() {
    if (peek() == '(') {
      ++pos_;
      skip_space();
      const double re = parse_number();
      skip_space();
      double im_sign = 1.0;
      if (peek() == '+' || peek() == '-') {
        im_sign = peek() == '-' ? -1.0 : 1.0;
        ++pos_;
      } else {
        fail("expected sign of imaginary part");
      }
      skip_space();
      const double im = parse_number();
      expect('i');
      skip_space();
      expect(')');
      return {re, im_sign * im};
    }
    const double v = parse_number();
    if (!at_end() && peek() == 'i') {
      ++pos_;
      return {0.0, v};
    }
    return {v, 0.0};
  }

  double parse_number() {
    const std::string rest(text_.substr(pos_));
    char* end = nullptr;
    const double v = std::strtod(rest.c_str(), &end);
    if (end == rest.c_str()) fail("expected a number");
    pos_ += static_cast<std::size_t>(end - rest.c_str());
    return v;
  }

  Word parse_word() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == 'e')) ++pos_;
    if (start == pos_) fail("expected a word");
    return Word::parse(text_.substr(start, pos_ - start), d_);
  }

  void expect(char c) {
    if (at_end() || peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw std::invalid_argument("parse_poly: " + msg + " at offset " + std::to_string(pos_) +
                                " in \"" + std::string(text_) + "\"");
  }

  std::string_view text_;
  int d_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string to_string(const FreePoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [w, c] : p.coeffs()) {
    std::string coeff;
    if (c.imag() == 0.0) {
      const double re = c.real();
      if (re < 0.0 || std::signbit(re)) {
        out += "-";
        coeff = format_double(-re);
      } else {
        if (!first) out += "+";
        coeff = format_double(re);
      }
    } else {
      if (!first) out += "+";
      const double im = c.imag();
      coeff = "(" + format_double(c.real()) + (std::signbit(im) ? "-" : "+") +
              format_double(std::abs(im)) + "i)";
    }
    out += coeff + "*" + w.to_string();
    first = false;
  }
  return out;
}

FreePoly parse_poly(std::string_view text, int d) { return PolyParser(text, d).parse(); }

LinearPencil::LinearPencil(std::vector<CMatrix> coefficients) : q_(std::move(coefficients)) {
  if (q_.empty()) throw std::invalid_argument("LinearPencil: need d >= 1");
  const auto r = q_.front().rows(), s = q_.front().cols();
  if (r < 1 || s < 1) throw std::invalid_argument("LinearPencil: empty coefficient");
  CMatrix stacked(r * s, static_cast<Eigen::Index>(q_.size()));
  for (std::size_t j = 0; j < q_.size(); ++j) {
    if (q_[j].rows() != r || q_[j].cols() != s)
      throw std::invalid_argument("LinearPencil: coefficients must share a shape");
    if (!q_[j].allFinite()) throw std::invalid_argument("LinearPencil: non-finite coefficient");
    stacked.col(static_cast<Eigen::Index>(j)) = q_[j].reshaped();
  }
  if (static_cast<Eigen::Index>(q_.size()) > r * s ||
      numerical_rank(stacked, 1e-10) != static_cast<int>(q_.size()))
    throw std::invalid_argument("LinearPencil: coefficients are linearly dependent");
}

CMatrix pencil_eval(const LinearPencil& q, const MatTuple& x) {
  if (q.num_vars() != x.size())
    throw std::invalid_argument("pencil_eval: pencil and tuple have different d");
  const int n = x.level();
  CMatrix out = CMatrix::Zero(q.rows() * n, q.cols() * n);
  for (int j = 0; j < q.num_vars(); ++j) {
    const CMatrix& c = q[j];
    for (int a = 0; a < q.rows(); ++a)
      for (int b = 0; b < q.cols(); ++b)
        if (c(a, b) != Complex(0.0)) out.block(a * n, b * n, n, n) += c(a, b) * x[j];
  }
  return out;
}

}  // namespace ncball
