#include "ncball/fockspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace ncball {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Dense SVD up to this many entries; Lanczos beyond.
constexpr Eigen::Index kDenseNormEntries = 600 * 600;

}  // namespace

std::string to_string(FockKind kind) {
  switch (kind) {
    case FockKind::kDruryArveson:
      return "drury_arveson";
    case FockKind::kNcHardy:
      return "nc_hardy_polydisk";
    case FockKind::kCustom:
      break;
  }
  return "custom";
}

WeightedFockSpace::WeightedFockSpace(int d, FockKind kind, WeightFn weight)
    : d_(d), kind_(kind), weight_(std::move(weight)) {
  if (d < 1) throw std::invalid_argument("WeightedFockSpace: need d >= 1");
  if (!weight_) throw std::invalid_argument("WeightedFockSpace: missing weight function");
  if (weight_(Word::empty(d)) != 1.0)
    throw std::invalid_argument("WeightedFockSpace: weight of the empty word must be 1");
}

FockSpacePtr WeightedFockSpace::drury_arveson(int d) {
  return FockSpacePtr(new WeightedFockSpace(d, FockKind::kDruryArveson, [](const Word&) { return 1.0; }));
}

FockSpacePtr WeightedFockSpace::nc_hardy(int d) {
  return FockSpacePtr(new WeightedFockSpace(d, FockKind::kNcHardy, [](const Word& w) { return hardy_weight(w); }));
}

FockSpacePtr WeightedFockSpace::custom(int d, WeightFn weight) {
  return FockSpacePtr(new WeightedFockSpace(d, FockKind::kCustom, std::move(weight)));
}

double WeightedFockSpace::weight(const Word& w) const {
  if (w.alphabet_size() != d_) throw std::invalid_argument("weight: word alphabet != d");
  const double v = weight_(w);
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("weight: non-positive weight for " + w.to_string());
  return v;
}

BigInt WeightedFockSpace::exact_weight(const Word& w) const {
  if (w.alphabet_size() != d_) throw std::invalid_argument("exact_weight: word alphabet != d");
  switch (kind_) {
    case FockKind::kDruryArveson:
      return BigInt(1);
    case FockKind::kNcHardy:
      return hardy_weight_exact(w);
    case FockKind::kCustom:
      break;
  }
  throw std::invalid_argument("exact_weight: custom spaces have no exact weights");
}

bool same_space(const WeightedFockSpace& a, const WeightedFockSpace& b) {
  if (&a == &b) return true;
  return a.kind() != FockKind::kCustom && a.kind() == b.kind() && a.num_vars() == b.num_vars();
}

FockVector::FockVector(FockSpacePtr space, CoeffMap coeffs) : space_(std::move(space)) {
  if (!space_) throw std::invalid_argument("FockVector: null space");
  for (auto& [w, c] : coeffs) {
    if (w.alphabet_size() != space_->num_vars())
      throw std::invalid_argument("FockVector: word alphabet != d");
    if (c != Complex(0.0)) coeffs_.emplace(w, c);
  }
}

FockVector::FockVector(FockSpacePtr space, const FreePoly& p) : FockVector(std::move(space), p.coeffs()) {}

Complex fock_inner(const FockVector& f, const FockVector& g) {
  if (!same_space(f.space(), g.space())) throw std::invalid_argument("fock_inner: vectors live in different spaces");
  // Iterate the smaller support; both maps are sorted so the sum order is canonical.
  Complex acc = 0.0;
  const auto& a = f.coeffs();
  const auto& b = g.coeffs();
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      acc += f.space().weight(ia->first) * std::conj(ib->second) * ia->second;
      ++ia;
      ++ib;
    }
  }
  return acc;
}

double fock_norm(const FockVector& f) {
  double acc = 0.0;
  for (const auto& [w, c] : f.coeffs()) acc += f.space().weight(w) * std::norm(c);
  return std::sqrt(acc);
}

EvalWithBound eval_vector(const FockVector& f, const MatTuple& x, double r) {
  const WeightedFockSpace& space = f.space();
  if (x.size() != space.num_vars()) throw std::invalid_argument("eval_vector: tuple size != d");
  const double rx = max_norm(x);
  if (r < 0.0) r = rx;
  if (r < rx * (1.0 - 1e-12)) throw std::invalid_argument("eval_vector: r is below max_j ||X_j||");

  EvalWithBound out;
  out.value = poly_eval(f.polynomial(), x);
  const double d = space.num_vars();
  out.bound = kInf;
  if (r < 1.0) {
    if (space.kind() == FockKind::kNcHardy)
      out.bound = std::pow(1.0 / (1.0 - r), d) * fock_norm(f);
    else if (space.kind() == FockKind::kDruryArveson && d * r * r < 1.0)
      out.bound = fock_norm(f) / std::sqrt(1.0 - d * r * r);
  }
  out.bound_holds = operator_norm(out.value) <= out.bound + 1e-9;
  return out;
}

double kernel_tail_sum(const WeightedFockSpace& space, int truncation, double x) {
  if (truncation < 0) throw std::invalid_argument("kernel_tail_sum: need N >= 0");
  if (!(x >= 0.0)) throw std::invalid_argument("kernel_tail_sum: need x >= 0");
  if (!space.has_tail_bounds()) return kInf;
  if (x == 0.0) return 0.0;
  const int d = space.num_vars();
  const bool hardy = space.kind() == FockKind::kNcHardy;
  if (x >= 1.0 || (!hardy && d * x >= 1.0)) return kInf;

  // term_k = c_k x^k; ratio(k) = term_{k+1} / term_k.
  auto ratio = [&](int k) { return hardy ? x * (k + d) / (k + 1.0) : d * x; };
  const int k0 = truncation + 1;
  double term;
  if (hardy)
    term = std::exp(std::lgamma(k0 + d) - std::lgamma(k0 + 1.0) - std::lgamma(static_cast<double>(d)) +
                    k0 * std::log(x));
  else
    term = std::exp(k0 * std::log(d * x));

  double sum = 0.0;
  for (int k = k0; k < k0 + 1000000; ++k) {
    sum += term;
    const double q = ratio(k);
    // Ratios are non-increasing in k, so the rest is at most term * q / (1 - q).
    if (q < 1.0) {
      const double rest = term * q / (1.0 - q);
      if (rest <= 1e-17 * sum || rest == 0.0) return sum + rest;
    }
    term *= q;
  }
  const double q = ratio(k0 + 1000000);
  return q < 1.0 ? sum + term / (1.0 - q) : kInf;
}

KernelResult kernel_apply(const WeightedFockSpace& space, const MatTuple& x, const MatTuple& w,
                          const CMatrix& t, int truncation) {
  const int d = space.num_vars();
  if (x.size() != d || w.size() != d) throw std::invalid_argument("kernel_apply: tuple size != d");
  if (t.rows() != x.level() || t.cols() != w.level()) throw std::invalid_argument("kernel_apply: T has the wrong shape");
  if (truncation < 0) throw std::invalid_argument("kernel_apply: need N >= 0");

  struct Node {
    Word word;
    CMatrix xp;
    CMatrix wp;
  };
  KernelResult out;
  out.value = t;
  std::vector<Node> level{{Word::empty(d), CMatrix::Identity(x.level(), x.level()),
                           CMatrix::Identity(w.level(), w.level())}};
  for (int k = 1; k <= truncation; ++k) {
    std::vector<Node> next;
    next.reserve(level.size() * static_cast<std::size_t>(d));
    for (const auto& node : level)
      for (int j = 1; j <= d; ++j) {
        Node child{node.word + Word::letter(d, j), node.xp * x[j - 1], node.wp * w[j - 1]};
        out.value += (child.xp * t * child.wp.adjoint()) / space.weight(child.word);
        next.push_back(std::move(child));
      }
    level = std::move(next);
  }
  out.tail_bound = operator_norm(t) * kernel_tail_sum(space, truncation, max_norm(x) * max_norm(w));
  return out;
}

FockVector kernel_vector(const FockSpacePtr& space, const MatTuple& x, const CVector& v,
                         const CVector& y, int truncation) {
  const int d = space->num_vars();
  if (x.size() != d) throw std::invalid_argument("kernel_vector: tuple size != d");
  if (v.size() != x.level() || y.size() != x.level()) throw std::invalid_argument("kernel_vector: vector size != level");
  CoeffMap coeffs;
  // X^{j a} v = X_j (X^a v), so words grow by prepending a letter.
  std::vector<std::pair<Word, CVector>> level{{Word::empty(d), v}};
  for (int k = 0; k <= truncation; ++k) {
    std::vector<std::pair<Word, CVector>> next;
    for (const auto& [word, xv] : level) {
      // <X^a v, y> = y^* X^a v
      coeffs.emplace(word, std::conj(y.dot(xv)) / space->weight(word));
      if (k < truncation)
        for (int j = 1; j <= d; ++j) next.emplace_back(Word::letter(d, j) + word, x[j - 1] * xv);
    }
    level = std::move(next);
  }
  return FockVector(space, std::move(coeffs));
}

double reproducing_tail_bound(const FockVector& f, const MatTuple& x, const CVector& v,
                              const CVector& y, int truncation) {
  double high = 0.0;
  for (const auto& [w, c] : f.coeffs())
    if (static_cast<int>(w.length()) > truncation) high += f.space().weight(w) * std::norm(c);
  if (high == 0.0) return 0.0;
  const double r = max_norm(x);
  return std::sqrt(high) * v.norm() * y.norm() * std::sqrt(kernel_tail_sum(f.space(), truncation, r * r));
}

MultMatrix mult_matrix(const WeightedFockSpace& space, const FreePoly& phi, const std::vector<Word>& domain) {
  const int d = space.num_vars();
  if (phi.num_vars() != d) throw std::invalid_argument("mult_matrix: phi has the wrong number of variables");
  MultMatrix out;
  out.domain = domain;
  std::set<Word> targets;
  for (const auto& a : domain) {
    if (a.alphabet_size() != d) throw std::invalid_argument("mult_matrix: domain word alphabet != d");
    for (const auto& [b, c] : phi.coeffs()) targets.insert(b + a);
  }
  out.codomain.assign(targets.begin(), targets.end());
  std::map<Word, Eigen::Index> row_of;
  for (std::size_t i = 0; i < out.codomain.size(); ++i) row_of.emplace(out.codomain[i], static_cast<Eigen::Index>(i));

  std::vector<Eigen::Triplet<Complex>> triplets;
  for (std::size_t col = 0; col < domain.size(); ++col) {
    const Word& a = domain[col];
    const double wa = space.weight(a);
    for (const auto& [b, c] : phi.coeffs()) {
      const Word ba = b + a;
      triplets.emplace_back(row_of.at(ba), static_cast<Eigen::Index>(col), c * std::sqrt(space.weight(ba) / wa));
    }
  }
  out.matrix.resize(static_cast<Eigen::Index>(out.codomain.size()), static_cast<Eigen::Index>(domain.size()));
  out.matrix.setFromTriplets(triplets.begin(), triplets.end());

  if (out.matrix.rows() * out.matrix.cols() <= kDenseNormEntries)
    out.norm_lower_bound = operator_norm(CMatrix(out.matrix));
  else
    out.norm_lower_bound = largest_singular_value_lanczos(out.matrix);
  return out;
}

MultMatrix mult_matrix(const WeightedFockSpace& space, const FreePoly& phi, int truncation) {
  if (truncation < 0) throw std::invalid_argument("mult_matrix: need N >= 0");
  return mult_matrix(space, phi, enumerate_words_up_to(space.num_vars(), truncation));
}

std::vector<BigRational> multiplier_divergence_table(const Word& alpha0, int j0, int k_max) {
  const int d = alpha0.alphabet_size();
  if (d < 2) throw std::invalid_argument("multiplier_divergence_table: need d >= 2");
  if (alpha0.is_empty()) throw std::invalid_argument("multiplier_divergence_table: alpha0 must be non-empty");
  if (j0 < 1 || j0 > d) throw std::invalid_argument("multiplier_divergence_table: j0 out of range");
  if (k_max < 0) throw std::invalid_argument("multiplier_divergence_table: need k_max >= 0");
  const MultiIndex a = multi_index(alpha0);
  if (a[static_cast<std::size_t>(j0 - 1)] == a.total())
    throw std::invalid_argument("multiplier_divergence_table: alpha0 is a power of Z_j0");

  std::vector<BigRational> out;
  Word power = Word::empty(d);
  for (int k = 0; k <= k_max; ++k) {
    out.emplace_back(hardy_weight_exact(alpha0 + power), hardy_weight_exact(power));
    power = power + Word::letter(d, j0);
  }
  return out;
}

std::vector<BigRational> shift_partial_sums(int k_max) {
  if (k_max < 0) throw std::invalid_argument("shift_partial_sums: need K >= 0");
  std::vector<BigRational> out;
  BigRational sum = 0;
  Word power = Word::empty(2);
  for (int k = 0; k <= k_max; ++k) {
    const BigRational coef(1, k + 1);
    sum += BigRational(hardy_weight_exact(Word::letter(2, 2) + power)) * coef * coef;
    out.push_back(sum);
    power = power + Word::letter(2, 1);
  }
  return out;
}

FockVector symmetrize(const FockSpacePtr& hardy, const MultiIndex& alpha) {
  if (hardy->kind() != FockKind::kNcHardy) throw std::invalid_argument("symmetrize: needs the Hardy space");
  if (alpha.size() != hardy->num_vars()) throw std::invalid_argument("symmetrize: multi-index size != d");
  const double c = 1.0 / to_double(multinomial(alpha));
  CoeffMap coeffs;
  for (const auto& w : permutations_of_word(sorted_word(alpha))) coeffs.emplace(w, c);
  return FockVector(hardy, std::move(coeffs));
}

CMatrix sym_gram(int d, int max_degree) {
  const auto hardy = WeightedFockSpace::nc_hardy(d);
  std::vector<FockVector> xi;
  for (int k = 0; k <= max_degree; ++k)
    for (const auto& a : enumerate_multi_indices(d, k)) xi.push_back(symmetrize(hardy, a));
  const auto m = static_cast<Eigen::Index>(xi.size());
  CMatrix g(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      g(i, j) = fock_inner(xi[static_cast<std::size_t>(j)], xi[static_cast<std::size_t>(i)]);
  return g;
}

SpectralBound spectral_bound_check(const WeightedFockSpace& space, const FreePoly& phi, const MatTuple& x,
                                   int truncation) {
  if (x.size() != space.num_vars()) throw std::invalid_argument("spectral_bound_check: tuple size != d");
  double g = 0.0;
  if (space.kind() == FockKind::kDruryArveson) {
    CMatrix row(x.level(), x.level() * x.size());
    for (int j = 0; j < x.size(); ++j) row.middleCols(j * x.level(), x.level()) = x[j];
    g = operator_norm(row);
  } else if (space.kind() == FockKind::kNcHardy) {
    g = max_norm(x);
  } else {
    throw std::invalid_argument("spectral_bound_check: custom spaces have no natural ball");
  }
  if (!(g < 1.0)) throw std::invalid_argument("spectral_bound_check: point is not inside the ball");
  SpectralBound out;
  out.rho = spectral_radius(poly_eval(phi, x));
  out.bound = mult_matrix(space, phi, truncation).norm_lower_bound;
  return out;
}

}  // namespace ncball
