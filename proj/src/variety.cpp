#include "ncball/variety.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ncball/io.hpp"

namespace ncball {

NcVariety::NcVariety(OperatorBall ball, std::vector<FreePoly> generators)
    : ball_(std::move(ball)), generators_(std::move(generators)) {
  for (const auto& g : generators_) {
    if (g.num_vars() != ball_.num_vars()) throw std::invalid_argument("NcVariety: generator has the wrong d");
    if (g.is_zero()) throw std::invalid_argument("NcVariety: zero generator");
    homogeneous_ = homogeneous_ && g.is_homogeneous();
  }
}

double NcVariety::residual(const MatTuple& x) const {
  double worst = 0.0;
  for (const auto& g : generators_) worst = std::max(worst, operator_norm(poly_eval(g, x)));
  return worst;
}

Membership membership(const NcVariety& v, const MatTuple& x, double tol) {
  if (x.size() != v.num_vars()) throw std::invalid_argument("membership: tuple size != d");
  Membership out;
  out.gauge = gauge(v.ball(), x);
  out.residual = v.residual(x);
  out.member = out.gauge < 1.0 && out.residual <= tol;
  return out;
}

std::string to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::kCommuting:
      return "commuting";
    case SamplerKind::kQCommuting:
      return "q_commuting";
    case SamplerKind::kCoordinateZero:
      return "coordinate_zero";
    case SamplerKind::kJointlyNilpotent:
      return "jointly_nilpotent";
    case SamplerKind::kUserCloud:
      break;
  }
  return "user_cloud";
}

int root_of_unity_order(Complex q) {
  if (std::abs(std::abs(q) - 1.0) > 1e-12) return 0;
  Complex power = q;
  for (int p = 1; p <= 64; ++p) {
    if (std::abs(power - 1.0) <= 1e-12) return p;
    power *= q;
  }
  return 0;
}

SampleCloud::SampleCloud(NcVariety variety, int level, std::vector<MatTuple> points, std::uint64_t seed,
                         double residual_tol)
    : variety_(std::move(variety)), level_(level), points_(std::move(points)), seed_(seed),
      residual_tol_(residual_tol) {
  if (level_ < 1) throw std::invalid_argument("SampleCloud: need level >= 1");
  for (std::size_t s = 0; s < points_.size(); ++s) {
    const MatTuple& x = points_[s];
    const std::string where = "SampleCloud: point " + std::to_string(s);
    if (x.level() != level_ || x.size() != variety_.num_vars())
      throw std::invalid_argument(where + " has the wrong shape");
    if (!(gauge(variety_.ball(), x) < 1.0)) throw std::invalid_argument(where + " is not inside the ball");
    if (variety_.residual(x) > residual_tol_)
      throw std::invalid_argument(where + " does not satisfy the generators");
  }
}

namespace {

CMatrix random_diagonal(int n, Rng& rng) {
  CMatrix dmat = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) dmat(i, i) = rng.complex_normal();
  return dmat;
}

MatTuple raw_commuting(int n, int d, Rng& rng) {
  const CMatrix s = sample_conditioned(n, 10.0, rng);
  std::vector<CMatrix> mats;
  for (int j = 0; j < d; ++j) mats.push_back(random_diagonal(n, rng));
  return conjugate(MatTuple(std::move(mats)), s);
}

// X_1 X_2 = q X_2 X_1 at level n.
MatTuple raw_q_commuting(int n, Complex q, Rng& rng) {
  const int p = root_of_unity_order(q);
  CMatrix x1 = CMatrix::Zero(n, n), x2 = CMatrix::Zero(n, n);
  if (p > 0 && n % p == 0) {
    // Clock C = diag(q^j) and cyclic shift S e_j = e_{j+1} satisfy C S = q S C.
    for (int b = 0; b < n / p; ++b) {
      const Complex a = rng.complex_normal(), c = rng.complex_normal();
      for (int j = 0; j < p; ++j) {
        x1(b * p + j, b * p + j) = a * std::pow(q, j);
        x2(b * p + (j + 1) % p, b * p + j) += c;
      }
    }
  } else {
    if (n < 2) throw std::invalid_argument("sample: q_commuting weighted shifts need n >= 2");
    const Complex a = rng.complex_normal();
    Complex qj = 1.0;
    for (int j = 0; j < n; ++j) {
      x2(j, j) = a * qj;
      if (j + 1 < n) x1(j, j + 1) = rng.complex_normal();
      qj *= q;
    }
  }
  const CMatrix s = sample_conditioned(n, 10.0, rng);
  return conjugate(MatTuple({x1, x2}), s);
}

MatTuple raw_point(const NcVariety& v, int n, const SamplerSpec& sampler, Rng& rng) {
  const int d = v.num_vars();
  switch (sampler.kind) {
    case SamplerKind::kCommuting:
      return raw_commuting(n, d, rng);
    case SamplerKind::kQCommuting:
      if (d != 2) throw std::invalid_argument("sample: q_commuting needs d = 2");
      return raw_q_commuting(n, sampler.q, rng);
    case SamplerKind::kCoordinateZero: {
      std::vector<CMatrix> mats = sample_ginibre_tuple(n, d, 1.0, rng).mats();
      for (int j : sampler.zero_coords) {
        if (j < 1 || j > d) throw std::invalid_argument("sample: coordinate_zero index out of range");
        mats[static_cast<std::size_t>(j - 1)].setZero();
      }
      if (static_cast<int>(sampler.zero_coords.size()) >= d)
        throw std::invalid_argument("sample: coordinate_zero would zero every coordinate");
      return MatTuple(std::move(mats));
    }
    case SamplerKind::kJointlyNilpotent: {
      if (n < 2) throw std::invalid_argument("sample: jointly_nilpotent needs n >= 2");
      std::vector<CMatrix> mats;
      for (int j = 0; j < d; ++j) {
        CMatrix a = CMatrix::Zero(n, n);
        for (int c = 1; c < n; ++c)
          for (int r = 0; r < c; ++r) a(r, c) = rng.complex_normal();
        mats.push_back(std::move(a));
      }
      return MatTuple(std::move(mats));
    }
    case SamplerKind::kUserCloud:
      break;
  }
  throw std::logic_error("raw_point: user clouds are not generated");
}

}  // namespace

SampleCloud sample(const NcVariety& v, int n, int m, std::uint64_t seed, const SamplerSpec& sampler) {
  if (n < 1 || m < 1) throw std::invalid_argument("sample: need n, m >= 1");
  std::vector<MatTuple> points;
  if (sampler.kind == SamplerKind::kUserCloud) {
    CloudFile file = read_cloud(sampler.path);
    for (auto& x : file.points)
      if (x.level() == n && static_cast<int>(points.size()) < m) points.push_back(std::move(x));
    if (static_cast<int>(points.size()) < m)
      throw std::invalid_argument("sample: user cloud has fewer than m points at level " + std::to_string(n));
    return SampleCloud(v, n, std::move(points), seed);
  }
  const Rng root = Rng(seed).split(static_cast<std::uint64_t>(n));
  for (int s = 0; s < m; ++s) {
    Rng rng = root.split(static_cast<std::uint64_t>(s));
    points.push_back(project_inside(v.ball(), raw_point(v, n, sampler, rng), kCloudMargin));
  }
  return SampleCloud(v, n, std::move(points), seed);
}

CVector coefficient_vector(const FreePoly& p, int k) {
  const int d = p.num_vars();
  const auto words = enumerate_words(d, k);
  CVector v = CVector::Zero(static_cast<Eigen::Index>(words.size()));
  for (const auto& [w, c] : p.coeffs())
    if (static_cast<int>(w.length()) == k) v(static_cast<Eigen::Index>(lex_index(w))) = c;
  return v;
}

FreePoly coefficient_poly(int d, int k, const CVector& coeffs) {
  const auto words = enumerate_words(d, k);
  if (static_cast<std::size_t>(coeffs.size()) != words.size())
    throw std::invalid_argument("coefficient_poly: vector length != d^k");
  CoeffMap m;
  for (std::size_t i = 0; i < words.size(); ++i) m.emplace(words[i], coeffs(static_cast<Eigen::Index>(i)));
  return FreePoly(d, m);
}

Subspace ideal_slice(const std::vector<MatTuple>& points, int d, int k, double tol_ratio) {
  if (points.empty()) throw std::invalid_argument("ideal_slice: empty cloud");
  if (k < 0) throw std::invalid_argument("ideal_slice: need k >= 0");
  const auto words = enumerate_words(d, k);
  const int n = points.front().level();
  const Eigen::Index block = static_cast<Eigen::Index>(n) * n;
  CMatrix e(block * static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(words.size()));
  for (std::size_t s = 0; s < points.size(); ++s) {
    if (points[s].level() != n || points[s].size() != d) throw std::invalid_argument("ideal_slice: mixed shapes");
    for (std::size_t c = 0; c < words.size(); ++c) {
      const CMatrix xw = word_eval(points[s], words[c]);
      e.block(static_cast<Eigen::Index>(s) * block, static_cast<Eigen::Index>(c), block, 1) =
          xw.reshaped(block, 1);
    }
  }
  return Subspace{nullspace(e, tol_ratio), tol_ratio};
}

Subspace ideal_slice(const SampleCloud& cloud, int k, double tol_ratio) {
  return ideal_slice(cloud.points(), cloud.num_vars(), k, tol_ratio);
}

Subspace generated_slice(int d, const std::vector<FreePoly>& generators, int k, double tol_ratio) {
  if (k < 0) throw std::invalid_argument("generated_slice: need k >= 0");
  std::vector<CVector> cols;
  for (const auto& g : generators) {
    if (g.num_vars() != d) throw std::invalid_argument("generated_slice: generator has the wrong d");
    if (!g.is_homogeneous()) throw std::invalid_argument("generated_slice: generator is not homogeneous");
    const int deg = g.degree();
    if (deg < 0 || deg > k) continue;
    for (int left = 0; left <= k - deg; ++left)
      for (const auto& b : enumerate_words(d, left))
        for (const auto& c : enumerate_words(d, k - deg - left))
          cols.push_back(coefficient_vector(FreePoly::monomial(b) * g * FreePoly::monomial(c), k));
  }
  const auto rows = static_cast<Eigen::Index>(std::pow(d, k) + 0.5);
  if (cols.empty()) return Subspace{CMatrix(rows, 0), tol_ratio};
  CMatrix span(rows, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) span.col(static_cast<Eigen::Index>(i)) = cols[i];
  return Subspace{range_basis(span, tol_ratio), tol_ratio};
}

double subspace_containment(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw std::invalid_argument("subspace_containment: ambient dims differ");
  return containment_sine(a.basis, b.basis);
}

NullstellensatzReport nullstellensatz_check(const NcVariety& v, int k, const std::vector<int>& levels, int m,
                                            std::uint64_t seed, const SamplerSpec& sampler) {
  if (!v.is_homogeneous()) throw std::invalid_argument("nullstellensatz_check: variety is not homogeneous");
  if (levels.empty()) throw std::invalid_argument("nullstellensatz_check: need at least one level");
  NullstellensatzReport out;
  const Subspace gen = generated_slice(v.num_vars(), v.generators(), k);
  out.generated_dim = gen.dim();
  out.contained = true;
  std::vector<int> sorted = levels;
  std::sort(sorted.begin(), sorted.end());
  for (int n : sorted) {
    const Subspace slice = ideal_slice(sample(v, n, m, seed, sampler), k);
    out.levels.push_back(n);
    out.ideal_dims.push_back(slice.dim());
    const double sine = subspace_containment(gen, slice);
    out.containment.push_back(sine);
    out.contained = out.contained && sine <= 1e-6;
  }
  out.dims_match = out.ideal_dims.back() == out.generated_dim;
  return out;
}

TrivialNullstellensatzReport trivial_nullstellensatz_check(const SampleCloud& cloud, int k,
                                                           const SamplerSpec& sampler, int extra,
                                                           std::uint64_t seed) {
  const NcVariety& v = cloud.variety();
  const int n = cloud.level();
  const int d = v.num_vars();
  const Subspace slice = ideal_slice(cloud, k);

  std::vector<MatTuple> pool = cloud.points();
  if (extra > 0) {
    const SampleCloud fresh = sample(v, n, extra, Rng::mix(seed, 1), sampler);
    pool.insert(pool.end(), fresh.points().begin(), fresh.points().end());
    Rng rng = Rng(seed).split(2);
    for (int s = 0; s < extra; ++s)
      pool.push_back(project_inside(v.ball(), sample_ginibre_tuple(n, d, 1.0, rng), kCloudMargin));
  }

  std::vector<FreePoly> polys;
  for (int c = 0; c < slice.dim(); ++c) polys.push_back(coefficient_poly(d, k, slice.basis.col(c)));
  std::vector<MatTuple> kept;
  for (const auto& x : pool) {
    double worst = 0.0;
    for (const auto& p : polys) worst = std::max(worst, operator_norm(poly_eval(p, x)));
    if (worst <= kMembershipTol) kept.push_back(x);
  }

  TrivialNullstellensatzReport out;
  out.slice_dim = slice.dim();
  out.pool_size = pool.size();
  out.kept = kept.size();
  if (kept.empty()) return out;
  const Subspace again = ideal_slice(kept, d, k);
  out.recomputed_dim = again.dim();
  out.sine_forward = subspace_containment(slice, again);
  out.sine_backward = subspace_containment(again, slice);
  out.unchanged = out.recomputed_dim == out.slice_dim && out.sine_forward <= 1e-6 && out.sine_backward <= 1e-6;
  return out;
}

Subspace mat_span(const SampleCloud& cloud, double tol_ratio) {
  const auto& pts = cloud.points();
  if (pts.empty()) throw std::invalid_argument("mat_span: empty cloud");
  const int d = cloud.num_vars();
  const int n = cloud.level();
  const Eigen::Index block = static_cast<Eigen::Index>(n) * n;
  CMatrix entries(d, block * static_cast<Eigen::Index>(pts.size()));
  for (std::size_t s = 0; s < pts.size(); ++s)
    for (int j = 0; j < d; ++j)
      entries.block(j, static_cast<Eigen::Index>(s) * block, 1, block) = pts[s][j].reshaped(1, block);
  return Subspace{range_basis(entries, tol_ratio), tol_ratio};
}

bool is_matrix_spanning(const SampleCloud& cloud) {
  const int d = cloud.num_vars();
  const int span_dim = mat_span(cloud).dim();
  const int slice_dim = ideal_slice(cloud, 1).dim();
  if (slice_dim != d - span_dim)
    throw NumericalError("is_matrix_spanning: mat-span dimension " + std::to_string(span_dim) +
                         " disagrees with the linear slice dimension " + std::to_string(slice_dim));
  return span_dim == d;
}

SubBall minimal_subball(const OperatorBall& ball, const SampleCloud& cloud) {
  if (cloud.num_vars() != ball.num_vars()) throw std::invalid_argument("minimal_subball: d mismatch");
  const Subspace span = mat_span(cloud);
  if (span.dim() == 0) throw std::invalid_argument("minimal_subball: the cloud spans nothing");
  const LinearPencil& q = ball.pencil();
  std::vector<CMatrix> p;
  for (int k = 0; k < span.dim(); ++k) {
    CMatrix acc = CMatrix::Zero(q.rows(), q.cols());
    for (int j = 0; j < q.num_vars(); ++j) acc += span.basis(j, k) * q[j];
    p.push_back(std::move(acc));
  }
  return SubBall{OperatorBall(LinearPencil(std::move(p)), ball.name() + "_sub"), span.basis};
}

MatTuple pull_back(const CMatrix& embedding, const MatTuple& x) {
  if (embedding.rows() != x.size()) throw std::invalid_argument("pull_back: embedding rows != d");
  const int n = x.level();
  std::vector<CMatrix> out;
  for (Eigen::Index k = 0; k < embedding.cols(); ++k) {
    CMatrix acc = CMatrix::Zero(n, n);
    for (int j = 0; j < x.size(); ++j) acc += std::conj(embedding(j, k)) * x[j];
    out.push_back(std::move(acc));
  }
  return MatTuple(std::move(out));
}

bool HomogeneityReport::pass() const {
  return scaled_points_member && std::all_of(scale_closed.begin(), scale_closed.end(), [](bool b) { return b; });
}

std::vector<Complex> default_lambda_grid() {
  return {0.0, 0.25, Complex(0.0, 0.5), std::polar(0.75, std::numbers::pi / 4), 0.99};
}

HomogeneityReport homogeneity_check(const NcVariety& v, const SampleCloud& cloud, const std::vector<Complex>& lambdas,
                                    double r) {
  HomogeneityReport out;
  out.lambdas = lambdas;
  out.scaled_points_member = true;
  for (const Complex lambda : lambdas) {
    if (std::abs(lambda) > 1.0) throw std::invalid_argument("homogeneity_check: |lambda| > 1");
    for (const auto& x : cloud.points()) {
      const Membership mem = membership(v, x * lambda);
      out.max_residual = std::max(out.max_residual, mem.residual);
      out.scaled_points_member = out.scaled_points_member && mem.member;
    }
  }

  // Coefficient vectors over all words up to the top degree.
  int top = 0;
  for (const auto& g : v.generators()) top = std::max(top, g.degree());
  const auto words = enumerate_words_up_to(v.num_vars(), top);
  auto as_vector = [&](const FreePoly& p) {
    CVector out_vec = CVector::Zero(static_cast<Eigen::Index>(words.size()));
    for (const auto& [w, c] : p.coeffs()) out_vec(static_cast<Eigen::Index>(canonical_index(w))) = c;
    return out_vec;
  };
  CMatrix gens(static_cast<Eigen::Index>(words.size()), static_cast<Eigen::Index>(v.generators().size()));
  for (std::size_t i = 0; i < v.generators().size(); ++i)
    gens.col(static_cast<Eigen::Index>(i)) = as_vector(v.generators()[i]);
  const CMatrix basis = range_basis(gens);
  for (const auto& g : v.generators()) {
    const CVector s = as_vector(scale_arg(g, r));
    const double miss = (s - basis * (basis.adjoint() * s)).norm();
    out.scale_closed.push_back(miss <= 1e-10 * std::max(1.0, s.norm()));
  }
  return out;
}

}  // namespace ncball
