#include "ncball/opball.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ncball {

std::string to_string(Injectivity flag) {
  switch (flag) {
    case Injectivity::kKnownInjective:
      return "known-injective";
    case Injectivity::kKnownNonInjective:
      return "known-non-injective";
    case Injectivity::kUnknown:
      break;
  }
  return "unknown";
}

double gauge(const OperatorBall& ball, const MatTuple& x) {
  return operator_norm(pencil_eval(ball.pencil(), x));
}

bool is_member(const OperatorBall& ball, const MatTuple& x) { return gauge(ball, x) < 1.0; }

bool on_boundary(const OperatorBall& ball, const MatTuple& x, double tol) {
  return std::abs(gauge(ball, x) - 1.0) <= tol;
}

namespace {

CMatrix unit(int rows, int cols, int i, int j) {
  CMatrix e = CMatrix::Zero(rows, cols);
  e(i, j) = 1.0;
  return e;
}

bool is_polydisk_pencil(const LinearPencil& q) {
  const int d = q.num_vars();
  if (q.rows() != d || q.cols() != d) return false;
  for (int j = 0; j < d; ++j)
    if (q[j] != unit(d, d, j, j)) return false;
  return true;
}

}  // namespace

OperatorBall row_ball(int d) {
  if (d < 1) throw std::invalid_argument("row_ball: need d >= 1");
  std::vector<CMatrix> q;
  for (int j = 0; j < d; ++j) q.push_back(unit(1, d, 0, j));
  return OperatorBall(LinearPencil(std::move(q)), "row", Injectivity::kKnownInjective);
}

OperatorBall polydisk(int d) {
  if (d < 1) throw std::invalid_argument("polydisk: need d >= 1");
  std::vector<CMatrix> q;
  for (int j = 0; j < d; ++j) q.push_back(unit(d, d, j, j));
  return OperatorBall(LinearPencil(std::move(q)), "polydisk", Injectivity::kKnownInjective);
}

OperatorBall block_rows(const std::vector<int>& block_lengths) {
  if (block_lengths.empty()) throw std::invalid_argument("block_rows: need at least one block");
  int d = 0;
  for (int b : block_lengths) {
    if (b < 1) throw std::invalid_argument("block_rows: block lengths must be >= 1");
    d += b;
  }
  const int l = static_cast<int>(block_lengths.size());
  std::vector<CMatrix> q;
  for (int i = 0; i < l; ++i)
    for (int k = 0; k < block_lengths[static_cast<std::size_t>(i)]; ++k)
      q.push_back(unit(l, d, i, static_cast<int>(q.size())));
  return OperatorBall(LinearPencil(std::move(q)), "block_rows", Injectivity::kKnownInjective);
}

OperatorBall upper_triangular(int l) {
  if (l < 1) throw std::invalid_argument("upper_triangular: need l >= 1");
  std::vector<CMatrix> q;
  for (int i = 0; i < l; ++i)
    for (int j = i; j < l; ++j) q.push_back(unit(l, l, i, j));
  // l = 1 is the unit disk.
  const auto flag = l >= 2 ? Injectivity::kKnownNonInjective : Injectivity::kKnownInjective;
  return OperatorBall(LinearPencil(std::move(q)), "upper_triangular", flag);
}

OperatorBall full_matrix(int m) {
  if (m < 1) throw std::invalid_argument("full_matrix: need m >= 1");
  std::vector<CMatrix> q;
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) q.push_back(unit(m, m, i, j));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < i; ++j) q.push_back(unit(m, m, i, j));
  return OperatorBall(LinearPencil(std::move(q)), "full_matrix", Injectivity::kKnownInjective);
}

BallPoint make_ball_point(const OperatorBall& ball, MatTuple x) {
  const double g = gauge(ball, x);
  return BallPoint{std::move(x), g};
}

double uniform_radius(const OperatorBall& ball, const MatTuple& x) {
  const double g = gauge(ball, x);
  if (!(g < 1.0)) throw std::invalid_argument("uniform_radius: point is not strictly inside the ball");
  double qmax = 0.0;
  for (const auto& qj : ball.pencil().coefficients()) qmax = std::max(qmax, operator_norm(qj));
  return (1.0 - g) / (static_cast<double>(ball.num_vars()) * qmax);
}

MatTuple project_inside(const OperatorBall& ball, const MatTuple& x, double margin) {
  if (!(margin >= 0.0 && margin < 1.0))
    throw std::invalid_argument("project_inside: margin must lie in [0, 1)");
  const double g = gauge(ball, x);
  if (g == 0.0 || g < 1.0 - margin) return x;
  return x * ((1.0 - margin) / g);
}

namespace {

constexpr double kSampleMargin = 1e-6;
constexpr int kClimbRounds = 50;
constexpr double kClimbStep = 0.05;

struct Candidate {
  MatTuple x;
  double value = -1.0;
};

double value_at(const PolyMatrix& f, const MatTuple& x) {
  return operator_norm(poly_matrix_eval(f, x));
}

}  // namespace

SupEstimate sup_norm_estimate(const OperatorBall& ball, const PolyMatrix& f,
                              const std::vector<int>& levels, int budget, std::uint64_t seed) {
  if (budget < 1) throw std::invalid_argument("sup_norm_estimate: need budget >= 1");
  if (levels.empty()) throw std::invalid_argument("sup_norm_estimate: need at least one level");
  const int d = ball.num_vars();
  const Rng root(seed);

  SupEstimate out;
  bool have_best = false;
  Candidate best;

  for (int n : levels) {
    if (n < 1) throw std::invalid_argument("sup_norm_estimate: levels must be >= 1");
    Rng level_rng = root.split(static_cast<std::uint64_t>(n));
    Candidate level_best;
    auto consider = [&](const MatTuple& x, bool sampled) {
      const double v = value_at(f, x);
      ++out.evaluations;
      if (sampled) out.max_sampled = std::max(out.max_sampled, v);
      if (v > level_best.value) level_best = Candidate{x, v};
    };

    consider(MatTuple::zeros(n, d), false);
    const MatTuple ident = MatTuple::identities(n, d);
    if (gauge(ball, ident) <= 1.0 + kBoundaryTol) consider(ident, false);

    Rng sample_rng = level_rng.split(0);
    const int ginibre_count = (budget + 1) / 2;
    for (int s = 0; s < budget; ++s) {
      const MatTuple raw = s < ginibre_count ? sample_ginibre_tuple(n, d, 1.0, sample_rng)
                                             : sample_haar_unitary_tuple(n, d, sample_rng);
      const double g = gauge(ball, raw);
      if (g == 0.0) continue;
      consider(raw * ((1.0 - kSampleMargin) / g), true);
    }

    double step = kClimbStep;
    for (int round = 0; round < kClimbRounds; ++round) {
      Rng round_rng = level_rng.split(1000 + static_cast<std::uint64_t>(round));
      const MatTuple trial =
          project_inside(ball, level_best.x + sample_ginibre_tuple(n, d, step, round_rng), kSampleMargin);
      const double before = level_best.value;
      consider(trial, false);
      if (!(level_best.value > before)) step *= 0.5;
    }

    out.per_level.emplace_back(n, level_best.value);
    if (!have_best || level_best.value > best.value) {
      best = level_best;
      have_best = true;
    }
  }

  out.lower_bound = best.value;
  out.witness = make_ball_point(ball, best.x);
  return out;
}

UnitaryContractionSup unitary_vs_contraction_sup(const OperatorBall& ball, const PolyMatrix& f,
                                                 int n, int budget, std::uint64_t seed) {
  if (!is_polydisk_pencil(ball.pencil()))
    throw std::invalid_argument("unitary_vs_contraction_sup: ball must be the polydisk");
  if (budget < 1 || n < 1) throw std::invalid_argument("unitary_vs_contraction_sup: need n, budget >= 1");
  const int d = ball.num_vars();
  const Rng root = Rng(seed).split(static_cast<std::uint64_t>(n));
  Rng unitary_rng = root.split(1);
  Rng contraction_rng = root.split(2);

  UnitaryContractionSup out;
  for (int s = 0; s < budget; ++s) {
    out.over_unitaries = std::max(out.over_unitaries,
                                  value_at(f, sample_haar_unitary_tuple(n, d, unitary_rng)));
    std::vector<CMatrix> mats;
    for (int j = 0; j < d; ++j) {
      CMatrix a = sample_ginibre(n, 1.0, contraction_rng);
      const double norm = operator_norm(a);
      if (norm > 1.0) a /= norm;
      mats.push_back(std::move(a));
    }
    out.over_contractions = std::max(out.over_contractions, value_at(f, MatTuple(std::move(mats))));
  }
  return out;
}

}  // namespace ncball
