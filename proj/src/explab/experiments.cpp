#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>

#include "ncball/explab.hpp"
#include "ncball/fockspace.hpp"
#include "ncball/ncderiv.hpp"
#include "ncball/version.hpp"
#include "registry.hpp"

namespace ncball::explab {

namespace detail {

namespace {

Json polydisk_json(int d) { return Json{{"kind", "polydisk"}, {"d", d}}; }

Json commuting_generators(int d) {
  Json out = Json::array();
  for (int a = 1; a <= d; ++a)
    for (int b = a + 1; b <= d; ++b)
      out.push_back("1*" + std::to_string(a) + std::to_string(b) + "-1*" + std::to_string(b) + std::to_string(a));
  return out;
}

std::map<std::string, Defaults> build_defaults() {
  std::map<std::string, Defaults> m;

  Defaults& rowgap = m["rowgap"];
  rowgap.ball = polydisk_json(2);
  rowgap.levels = {1, 2, 3};
  rowgap.budget = 2000;
  rowgap.seed = 11;
  rowgap.tolerances = {{"lower_bound", 1e-9}, {"max_sampled", 1e-9}, {"coordinate", 1e-9}};

  Defaults& multdiv = m["multdiv"];
  multdiv.seed = 0;
  multdiv.params = {{"d", 2}, {"alpha0", "1"}, {"j0", 2}, {"k_max", 60}, {"shift_k_max", 200}, {"shift_threshold", 5.0}};
  multdiv.tolerances = {{"column_ratio_rel", 1e-12}};

  Defaults& kernel = m["kernelcheck"];
  kernel.truncation = 12;
  kernel.seed = 13;
  kernel.params = {{"d", 2},
                   {"radius", 0.5},
                   {"reproducing_trials", 50},
                   {"max_level", 2},
                   {"extra_degree", 2},
                   {"eval_trials", 200},
                   {"eval_degree", 8},
                   {"szego_radius", 0.4},
                   {"szego_trials", 20},
                   {"sym_degree", 5}};
  kernel.tolerances = {{"reproducing", 1e-6}, {"szego", 1e-8}, {"sym_gram", 1e-12}};

  Defaults& boundary = m["boundary"];
  boundary.ball = polydisk_json(2);
  boundary.seed = 17;
  boundary.params = {{"samples", 500}, {"max_level", 4}};
  boundary.tolerances = {{"gauge", 1e-12}};

  Defaults& cesaro = m["cesaro"];
  cesaro.ball = polydisk_json(2);
  cesaro.seed = 19;
  cesaro.params = {{"degree", 40}, {"ratio", 0.8}, {"level", 2}, {"samples", 500}, {"monotone_from", 10}};
  cesaro.tolerances = {{"final_residual", 0.05}};

  Defaults& deriv = m["derivcheck"];
  deriv.seed = 23;
  deriv.params = {{"d", 2},           {"components", 2},   {"trials", 100},     {"max_level", 4},
                  {"max_degree", 5},  {"fd_trials", 20},   {"fd_t", 1e-3},      {"chain_trials", 20},
                  {"cloud_level", 3}, {"cloud_points", 10}};
  deriv.tolerances = {{"block_leibniz", 1e-12},  {"difference_differential", 1e-10},
                      {"tensor_law", 1e-12},     {"fd_ratio_low", 8.0},
                      {"fd_ratio_high", 12.0},   {"chain_rule", 1e-10},
                      {"identity_on_cloud", 1e-12}};

  Defaults& matspan = m["matspan"];
  matspan.seed = 29;
  matspan.varieties = Json::array({
      Json{{"label", "commuting_d3"},
           {"ball", polydisk_json(3)},
           {"generators", commuting_generators(3)},
           {"sampler", {{"kind", "commuting"}}},
           {"level", 3},
           {"m", 10},
           {"expected_span_dim", 3}},
      Json{{"label", "q_commuting_i"},
           {"ball", polydisk_json(2)},
           {"generators", Json::array({"1*12-(0+1i)*21"})},
           {"sampler", {{"kind", "q_commuting"}, {"q", {0.0, 1.0}}}},
           {"level", 2},
           {"m", 10},
           {"expected_span_dim", 2}},
      Json{{"label", "coordinate_zero_4"},
           {"ball", {{"kind", "full_matrix"}, {"m", 2}}},
           {"generators", Json::array({"1*4"})},
           {"sampler", {{"kind", "coordinate_zero"}, {"coords", {4}}}},
           {"level", 3},
           {"m", 10},
           {"expected_span_dim", 3}},
  });
  matspan.tolerances = {{"off_pattern", 1e-10}, {"gauge_preservation", 1e-8}};

  Defaults& nullsatz = m["nullsatz"];
  nullsatz.seed = 31;
  nullsatz.levels = {2, 3};
  nullsatz.varieties = Json::array({
      Json{{"label", "commutator"},
           {"ball", polydisk_json(2)},
           {"generators", commuting_generators(2)},
           {"sampler", {{"kind", "commuting"}}},
           {"m", 20},
           {"degrees", {2, 3}},
           {"expected_dims", {{"2", 1}, {"3", 4}}}},
      Json{{"label", "z2"},
           {"ball", polydisk_json(2)},
           {"generators", Json::array({"1*2"})},
           {"sampler", {{"kind", "coordinate_zero"}, {"coords", {2}}}},
           {"m", 10},
           {"degrees", {1, 2}},
           {"expected_dims", {{"1", 1}, {"2", 3}}}},
  });
  nullsatz.params = {{"trivial_extra", 10}};
  nullsatz.tolerances = {{"angle", 1e-6}};

  Defaults& unitary = m["unitarysup"];
  unitary.ball = polydisk_json(2);
  unitary.levels = {1, 2, 3, 4};
  unitary.budget = 10000;
  unitary.seed = 37;
  unitary.tolerances = {{"unitary_vs_contraction", 0.02}, {"target", 0.05}};

  Defaults& spectral = m["spectral"];
  spectral.ball = Json{{"kind", "row"}, {"d", 2}};
  spectral.truncation = 10;
  spectral.seed = 41;
  spectral.params = {{"phi", "1*1+1*2"}, {"samples", 200}, {"level", 3}};
  spectral.tolerances = {{"estimate_low", 0.01}, {"estimate_high", 1e-9}, {"rho", 1e-9}};
  return m;
}

}  // namespace

const Defaults& defaults_for(const std::string& experiment) {
  static const std::map<std::string, Defaults> table = build_defaults();
  const auto it = table.find(experiment);
  if (it == table.end()) throw std::invalid_argument("unknown experiment '" + experiment + "'");
  return it->second;
}

}  // namespace detail

namespace {

using detail::Defaults;

// Config with every default filled in.
struct Resolved {
  std::string experiment;
  Json ball;
  Json varieties;
  std::vector<int> levels;
  int budget;
  std::uint64_t seed;
  std::map<std::string, double> tol;
  int truncation;
  Json params;

  int pint(const std::string& k) const { return params.at(k).get<int>(); }
  double pnum(const std::string& k) const { return params.at(k).get<double>(); }
  std::string pstr(const std::string& k) const { return params.at(k).get<std::string>(); }
  int positive(const std::string& k) const {
    const int v = pint(k);
    if (v < 1) throw std::invalid_argument(experiment + ": parameter '" + k + "' must be >= 1");
    return v;
  }
};

Resolved resolve(const ExperimentConfig& c) {
  const Defaults& dflt = detail::defaults_for(c.experiment);
  Resolved r{c.experiment,
             c.ball.is_null() ? dflt.ball : c.ball,
             c.varieties.is_null() ? dflt.varieties : c.varieties,
             c.levels.empty() ? dflt.levels : c.levels,
             c.budget > 0 ? c.budget : dflt.budget,
             c.seed,
             dflt.tolerances,
             c.truncation >= 0 ? c.truncation : dflt.truncation,
             dflt.params};
  for (const auto& [k, v] : c.tolerances) r.tol[k] = v;
  r.params.update(c.params);
  return r;
}

Json resolved_to_json(const Resolved& r) {
  Json j{{"experiment", r.experiment}, {"seed", r.seed}};
  if (!r.ball.is_null()) j["ball"] = r.ball;
  if (!r.varieties.is_null()) j["varieties"] = r.varieties;
  if (!r.levels.empty()) j["levels"] = r.levels;
  if (r.budget > 0) j["budget"] = r.budget;
  if (r.truncation >= 0) j["truncation"] = r.truncation;
  if (!r.tol.empty()) j["tolerances"] = r.tol;
  if (!r.params.empty()) j["params"] = r.params;
  return j;
}

class Rows {
 public:
  explicit Rows(std::vector<CheckRow>& out) : out_(out) {}

  // |value - reference| <= tol
  void near(const std::string& id, const std::string& anchor, double value, double ref, double tol) {
    push(id, anchor, value, ref, tol, std::abs(value - ref) <= tol);
  }
  // value <= reference + tol
  void at_most(const std::string& id, const std::string& anchor, double value, double ref, double tol = 0.0) {
    push(id, anchor, value, ref, tol, value <= ref + tol);
  }
  // value >= reference - tol
  void at_least(const std::string& id, const std::string& anchor, double value, double ref, double tol = 0.0) {
    push(id, anchor, value, ref, tol, value >= ref - tol);
  }
  // value > reference strictly
  void above(const std::string& id, const std::string& anchor, double value, double ref) {
    push(id, anchor, value, ref, 0.0, value > ref);
  }
  void below(const std::string& id, const std::string& anchor, double value, double ref) {
    push(id, anchor, value, ref, 0.0, value < ref);
  }

 private:
  void push(const std::string& id, const std::string& anchor, double value, double ref, double tol, bool pass) {
    out_.push_back(CheckRow{id, anchor, value, ref, tol, pass && std::isfinite(value)});
  }
  std::vector<CheckRow>& out_;
};

OperatorBall require_ball(const Resolved& r, const std::string& kind) {
  if (!r.ball.is_object() || r.ball.value("kind", "") != kind)
    throw std::invalid_argument(r.experiment + ": ball must be of kind '" + kind + "'");
  return ball_from_json(r.ball);
}

// Ginibre or Haar direction, rescaled to gauge t (1 - 1e-6) with t uniform.
MatTuple interior_point(const OperatorBall& ball, int n, Rng& rng, bool haar) {
  const int d = ball.num_vars();
  const MatTuple raw = haar ? sample_haar_unitary_tuple(n, d, rng) : sample_ginibre_tuple(n, d, 1.0, rng);
  const double t = rng.uniform();
  return raw * ((1.0 - 1e-6) * t / gauge(ball, raw));
}

FreePoly random_poly(int d, int max_degree, Rng& rng, int min_degree = 0) {
  CoeffMap c;
  for (const Word& w : enumerate_words_up_to(d, max_degree))
    if (static_cast<int>(w.length()) >= min_degree) c[w] = rng.complex_normal();
  return FreePoly(d, c);
}

CVector random_unit(int n, Rng& rng) {
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.complex_normal();
  return v / v.norm();
}

MatTuple scaled_to_max_norm(const MatTuple& x, double r) { return x * (r / max_norm(x)); }

double max_block_diff(const std::vector<CMatrix>& a, const std::vector<CMatrix>& b) {
  double out = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) out = std::max(out, operator_norm(a[i] - b[i]));
  return out;
}

// ---------------------------------------------------------------- rowgap

void run_rowgap(const Resolved& r, ExperimentReport& rep) {
  const OperatorBall ball = require_ball(r, "polydisk");
  const int d = ball.num_vars();
  const double sqrt_d = std::sqrt(static_cast<double>(d));
  const std::string anchor = "row polynomial sup on polydisk(d) equals sqrt(d)";
  Rows rows(rep.rows);

  PolyMatrix row(1);
  for (int j = 1; j <= d; ++j) row[0].push_back(FreePoly::variable(d, j));
  const SupEstimate est = sup_norm_estimate(ball, row, r.levels, r.budget, r.seed);

  const MatTuple ident = MatTuple::identities(1, d);
  rows.near("identity_witness_value", anchor, operator_norm(poly_matrix_eval(row, ident)), sqrt_d,
            r.tol.at("lower_bound"));
  rows.near("lower_bound", anchor, est.lower_bound, sqrt_d, r.tol.at("lower_bound"));
  rows.at_most("max_sampled", anchor, est.max_sampled, sqrt_d, r.tol.at("max_sampled"));
  rows.at_most("witness_gauge", anchor, est.witness.gauge_value, 1.0, kBoundaryTol);

  double coord_max = 0.0;
  Json coords = Json::array();
  for (int j = 1; j <= d; ++j) {
    const PolyMatrix single{{FreePoly::variable(d, j)}};
    const SupEstimate ej = sup_norm_estimate(ball, single, r.levels, r.budget, Rng::mix(r.seed, j));
    rows.near("coordinate_" + std::to_string(j) + "_sup", "each coordinate has sup norm 1 on the polydisk",
              ej.lower_bound, 1.0, r.tol.at("coordinate"));
    coord_max = std::max(coord_max, ej.lower_bound);
    coords.push_back(ej.lower_bound);
  }
  rows.above("row_over_coordinate_gap", anchor, est.lower_bound / coord_max, 1.0);

  Json per_level = Json::array();
  for (const auto& [n, v] : est.per_level) per_level.push_back({{"level", n}, {"best", v}});
  rep.tables["per_level"] = per_level;
  rep.tables["coordinate_sups"] = coords;
  rep.tables["evaluations"] = est.evaluations;
  rep.tables["witness"] = tuple_to_json(est.witness.x);
}

// ---------------------------------------------------------------- multdiv

// (k + |a|)! / ((a_{j0} + k)! prod_{j != j0} a_j!), written out independently
// of the weight code.
BigRational ratio_formula(const MultiIndex& a, int j0, int k) {
  BigInt denom = 1;
  for (int j = 0; j < a.size(); ++j)
    denom *= factorial(a[static_cast<std::size_t>(j)] + (j == j0 - 1 ? k : 0));
  return BigRational(factorial(k + a.total()), denom);
}

void run_multdiv(const Resolved& r, ExperimentReport& rep) {
  const int d = r.positive("d");
  const Word alpha0 = Word::parse(r.pstr("alpha0"), d);
  const int j0 = r.positive("j0");
  const int k_max = r.pint("k_max");
  const int shift_k_max = r.pint("shift_k_max");
  if (k_max < 1 || shift_k_max < 0) throw std::invalid_argument("multdiv: k_max >= 1 and shift_k_max >= 0 required");
  const std::string anchor = "Hardy multiplier ratios (k+|a|)!/(k+a_j)! diverge";
  Rows rows(rep.rows);

  const std::vector<BigRational> table = multiplier_divergence_table(alpha0, j0, k_max);
  const MultiIndex a = multi_index(alpha0);
  int mismatches = 0, plus_one_mismatches = 0, monotone_violations = 0;
  Json ratios = Json::array();
  for (int k = 0; k <= k_max; ++k) {
    const BigRational& t = table[static_cast<std::size_t>(k)];
    if (t != ratio_formula(a, j0, k)) ++mismatches;
    if (t != BigRational(k + 1)) ++plus_one_mismatches;
    if (k > 0 && !(t > table[static_cast<std::size_t>(k - 1)])) ++monotone_violations;
    ratios.push_back(t.str());
  }
  rows.at_most("ratio_formula_mismatches", anchor, mismatches, 0.0);
  if (alpha0.length() == 1) rows.at_most("ratio_equals_k_plus_1_mismatches", anchor, plus_one_mismatches, 0.0);
  rows.at_most("ratio_monotone_violations", anchor, monotone_violations, 0.0);
  rows.at_least("ratio_at_k_max", anchor, to_double(table.back()), k_max + 1.0);

  // Column norms of the multiplication matrix on {Z_j0^k}.
  std::vector<Word> domain;
  for (int k = 0; k <= k_max; ++k) domain.push_back(Word(d, std::vector<int>(static_cast<std::size_t>(k), j0)));
  const MultMatrix mm = mult_matrix(*WeightedFockSpace::nc_hardy(d), FreePoly::monomial(alpha0), domain);
  double worst = 0.0;
  for (int k = 0; k <= k_max; ++k) {
    const double col = mm.matrix.col(k).norm();
    const double ref = std::sqrt(to_double(table[static_cast<std::size_t>(k)]));
    worst = std::max(worst, std::abs(col - ref) / ref);
  }
  rows.at_most("column_ratio_rel_error", anchor, worst, r.tol.at("column_ratio_rel"));
  rows.at_least("truncated_mult_norm", anchor, mm.norm_lower_bound, std::sqrt(k_max + 1.0));

  // f = sum Z_1^k/(k+1) is in the Hardy space but Z_2 f is not.
  const std::string shift_anchor = "Z_2 f with f = sum Z_1^k/(k+1) has harmonic norm";
  const std::vector<BigRational> sums = shift_partial_sums(shift_k_max);
  BigRational oracle = 0;
  int sum_mismatches = 0, first_exceed = -1;
  const double threshold = r.pnum("shift_threshold");
  Json partial = Json::array();
  for (int k = 0; k <= shift_k_max; ++k) {
    oracle += BigRational(k + 1) * BigRational(1, k + 1) * BigRational(1, k + 1);
    const BigRational& s = sums[static_cast<std::size_t>(k)];
    if (s != oracle) ++sum_mismatches;
    if (first_exceed < 0 && to_double(s) > threshold) first_exceed = k;
    partial.push_back(to_double(s));
  }
  rows.at_most("shift_sum_mismatches", shift_anchor, sum_mismatches, 0.0);
  rows.above("shift_partial_sum_at_K", shift_anchor, to_double(sums.back()), threshold);
  rows.at_most("shift_first_exceedance_K", shift_anchor, first_exceed < 0 ? std::numeric_limits<double>::infinity()
                                                                           : first_exceed,
               shift_k_max);
  rep.tables["ratios"] = ratios;
  rep.tables["shift_partial_sums"] = partial;
}

// ---------------------------------------------------------------- kernelcheck

void run_kernelcheck(const Resolved& r, ExperimentReport& rep) {
  const int d = r.positive("d");
  const int n_trunc = r.truncation;
  const double radius = r.pnum("radius");
  const int trials = r.positive("reproducing_trials");
  const int max_level = r.positive("max_level");
  const int extra = r.pint("extra_degree");
  const int eval_trials = r.positive("eval_trials");
  const int eval_degree = r.pint("eval_degree");
  const double szego_r = r.pnum("szego_radius");
  const int szego_trials = r.positive("szego_trials");
  const int sym_degree = r.pint("sym_degree");
  if (!(radius > 0.0 && radius < 1.0) || !(szego_r > 0.0 && szego_r < 1.0) || extra < 0 || eval_degree < 0 ||
      sym_degree < 0)
    throw std::invalid_argument("kernelcheck: radii must lie in (0, 1) and degrees must be >= 0");
  const auto hardy = WeightedFockSpace::nc_hardy(d);
  const Rng root(r.seed);
  Rows rows(rep.rows);

  // Reproducing property with a tail beyond the truncation.
  const std::string anchor_rep = "Hardy kernel reproduces <f(X)v, y> up to the tail bound";
  int violations = 0;
  double worst = 0.0, worst_bound = 0.0;
  Json curve = Json::array();
  for (int t = 0; t < trials; ++t) {
    Rng rng = root.split(static_cast<std::uint64_t>(t));
    const int n = 1 + t % max_level;
    FockVector f(hardy, random_poly(d, n_trunc + extra, rng));
    f = FockVector(hardy, f.polynomial() * Complex(1.0 / fock_norm(f)));
    const MatTuple x = scaled_to_max_norm(sample_ginibre_tuple(n, d, 1.0, rng), radius);
    const CVector v = random_unit(n, rng), y = random_unit(n, rng);
    const Complex lhs = y.dot(poly_eval(f.polynomial(), x) * v);
    const Complex rhs = fock_inner(f, kernel_vector(hardy, x, v, y, n_trunc));
    const double res = std::abs(lhs - rhs);
    const double bound = reproducing_tail_bound(f, x, v, y, n_trunc);
    if (res > bound) ++violations;
    worst = std::max(worst, res);
    worst_bound = std::max(worst_bound, bound);
    curve.push_back({{"level", n}, {"residual", res}, {"bound", bound}});
  }
  rows.at_most("reproducing_bound_violations", anchor_rep, violations, 0.0);
  rows.at_most("reproducing_max_residual", anchor_rep, worst, r.tol.at("reproducing"));
  rep.tables["reproducing"] = curve;
  rep.tables["reproducing_max_bound"] = worst_bound;

  // ||f(X)|| <= (1/(1-r))^d ||f||.
  const std::string anchor_eval = "Hardy evaluation bound (1/(1-r))^d ||f||";
  int eval_violations = 0;
  double worst_ratio = 0.0;
  for (int t = 0; t < eval_trials; ++t) {
    Rng rng = root.split(100000 + static_cast<std::uint64_t>(t));
    const int n = 1 + t % max_level;
    const FockVector f(hardy, random_poly(d, eval_degree, rng));
    const MatTuple x = scaled_to_max_norm(sample_ginibre_tuple(n, d, 1.0, rng), radius * rng.uniform());
    const EvalWithBound e = eval_vector(f, x, radius);
    if (!e.bound_holds) ++eval_violations;
    worst_ratio = std::max(worst_ratio, operator_norm(e.value) / e.bound);
  }
  rows.at_most("evaluation_bound_violations", anchor_eval, eval_violations, 0.0);
  rows.at_most("evaluation_max_ratio", anchor_eval, worst_ratio, 1.0);
  rows.near("evaluation_bound_constant", anchor_eval, std::pow(1.0 / (1.0 - radius), d),
            std::pow(1.0 / (1.0 - radius), d), 0.0);

  // Level 1: prod_j 1/(1 - x_j conj(w_j)).
  const std::string anchor_sz = "level-1 Hardy kernel is the Szego kernel of the polydisk";
  double sz_err = 0.0;
  for (int t = 0; t < szego_trials; ++t) {
    Rng rng = root.split(200000 + static_cast<std::uint64_t>(t));
    std::vector<CMatrix> xs, ws;
    Complex szego = 1.0;
    for (int j = 0; j < d; ++j) {
      const Complex xj = std::polar(szego_r * std::sqrt(rng.uniform()), 2.0 * std::numbers::pi * rng.uniform());
      const Complex wj = std::polar(szego_r * std::sqrt(rng.uniform()), 2.0 * std::numbers::pi * rng.uniform());
      xs.push_back(CMatrix::Constant(1, 1, xj));
      ws.push_back(CMatrix::Constant(1, 1, wj));
      szego /= (1.0 - xj * std::conj(wj));
    }
    const KernelResult k = kernel_apply(*hardy, MatTuple(xs), MatTuple(ws), CMatrix::Identity(1, 1), n_trunc);
    sz_err = std::max(sz_err, std::abs(k.value(0, 0) - szego));
  }
  rows.at_most("szego_max_error", anchor_sz, sz_err, r.tol.at("szego"));

  const CMatrix g = sym_gram(d, sym_degree);
  const double gram_err = (g - CMatrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
  rows.at_most("symmetrized_gram_identity_error", "symmetrized monomials are orthonormal", gram_err,
               r.tol.at("sym_gram"));
}

// ---------------------------------------------------------------- boundary

void run_boundary(const Resolved& r, ExperimentReport& rep) {
  const OperatorBall ball = require_ball(r, "polydisk");
  if (ball.num_vars() != 2) throw std::invalid_argument("boundary: the map (X_1, I) needs polydisk(2)");
  const int samples = r.positive("samples");
  const int max_level = r.positive("max_level");
  const Rng root(r.seed);
  Rows rows(rep.rows);

  double worst = 0.0, max_inner = 0.0;
  int on_bd = 0;
  for (int s = 0; s < samples; ++s) {
    Rng rng = root.split(static_cast<std::uint64_t>(s));
    const int n = 1 + s % max_level;
    const MatTuple x = interior_point(ball, n, rng, s % 2 == 1);
    const MatTuple fx(std::vector<CMatrix>{x[0], CMatrix::Identity(n, n)});
    const double g = gauge(ball, fx);
    worst = std::max(worst, std::abs(g - 1.0));
    if (on_boundary(ball, fx, r.tol.at("gauge"))) ++on_bd;
    max_inner = std::max(max_inner, gauge(ball, x * 0.5));
  }
  const std::string anchor = "(X_1, I) maps the polydisk into its boundary";
  rows.at_most("max_abs_gauge_minus_1", anchor, worst, r.tol.at("gauge"));
  rows.near("boundary_count", anchor, on_bd, samples, 0.0);
  rows.below("contractive_map_max_gauge", "a strictly contractive map stays inside the ball", max_inner, 1.0);
}

// ---------------------------------------------------------------- cesaro

void run_cesaro(const Resolved& r, ExperimentReport& rep) {
  const OperatorBall ball = require_ball(r, "polydisk");
  const int d = ball.num_vars();
  const int degree = r.positive("degree");
  const double ratio = r.pnum("ratio");
  const int level = r.positive("level");
  const int samples = r.positive("samples");
  const int from = r.pint("monotone_from");
  if (from < 0 || from > degree) throw std::invalid_argument("cesaro: monotone_from must lie in [0, degree]");
  Rows rows(rep.rows);

  CoeffMap c;
  for (int k = 0; k <= degree; ++k)
    c[Word(d, std::vector<int>(static_cast<std::size_t>(k), 1))] = std::pow(ratio, k);
  const TruncatedSeries f(d, degree, c);
  const FreePoly fpoly = f.polynomial();
  std::vector<FreePoly> sums;
  for (int m = 0; m <= degree; ++m) sums.push_back(cesaro_sum(f, m));

  std::vector<double> residual(static_cast<std::size_t>(degree) + 1, 0.0);
  std::vector<double> oracle(residual.size(), 0.0);
  const Rng root(r.seed);
  for (int s = 0; s < samples; ++s) {
    Rng rng = root.split(static_cast<std::uint64_t>(s));
    const MatTuple x = interior_point(ball, level, rng, s % 2 == 1);
    const CMatrix fx = poly_eval(fpoly, x);
    const double x1 = operator_norm(x[0]);
    for (int m = 0; m <= degree; ++m) {
      const auto mi = static_cast<std::size_t>(m);
      residual[mi] = std::max(residual[mi], operator_norm(fx - poly_eval(sums[mi], x)));
      // sum_k min(1, k/(m+1)) ratio^k ||X_1||^k
      double bound = 0.0;
      for (int k = 1; k <= degree; ++k)
        bound += std::min(1.0, k / (m + 1.0)) * std::pow(ratio * x1, k);
      oracle[mi] = std::max(oracle[mi], bound);
    }
  }

  const std::string anchor = "Cesaro sums converge to f on the ball";
  int monotone = 0, oracle_violations = 0;
  for (int m = 0; m <= degree; ++m) {
    const auto mi = static_cast<std::size_t>(m);
    if (m > from && residual[mi] > residual[mi - 1]) ++monotone;
    if (residual[mi] > oracle[mi] * (1.0 + 1e-12) + 1e-15) ++oracle_violations;
  }
  rows.at_most("residual_monotone_violations", anchor, monotone, 0.0);
  rows.at_most("residual_geometric_oracle_violations", anchor, oracle_violations, 0.0);
  rows.at_most("final_residual", anchor, residual.back(), r.tol.at("final_residual"));
  rep.tables["residual"] = residual;
  rep.tables["geometric_oracle"] = oracle;
}

// ---------------------------------------------------------------- derivcheck

NcMap random_map(int d, int e, int max_degree, Rng& rng, int min_degree = 0) {
  std::vector<FreePoly> comps;
  for (int i = 0; i < e; ++i) comps.push_back(random_poly(d, max_degree, rng, min_degree));
  return NcMap(std::move(comps));
}

void run_derivcheck(const Resolved& r, ExperimentReport& rep) {
  const int d = r.positive("d");
  const int e = r.positive("components");
  const int trials = r.positive("trials");
  const int max_level = r.positive("max_level");
  const int max_degree = r.positive("max_degree");
  const int fd_trials = r.positive("fd_trials");
  const double fd_t = r.pnum("fd_t");
  const int chain_trials = r.positive("chain_trials");
  if (!(fd_t > 0.0 && fd_t < 1.0)) throw std::invalid_argument("derivcheck: fd_t must lie in (0, 1)");
  const Rng root(r.seed);
  Rows rows(rep.rows);
  auto point = [&](int n, Rng& rng) { return scaled_to_max_norm(sample_ginibre_tuple(n, d, 1.0, rng), 0.5); };

  double block_leibniz = 0.0, diff_diff = 0.0, tensor = 0.0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = root.split(static_cast<std::uint64_t>(t));
    const int n = 1 + t % max_level;
    const NcMap f = random_map(d, e, 1 + t % max_degree, rng);
    const MatTuple y = point(n, rng), x = point(n, rng), w = point(n, rng);
    block_leibniz = std::max(block_leibniz, max_block_diff(delta_block(f, y, x), delta_leibniz(f, y, x)));

    // F(X) - F(W) = Delta F(X, W)(X - W)
    std::vector<CMatrix> diff = map_eval(f, x);
    const std::vector<CMatrix> fw = map_eval(f, w);
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= fw[i];
    diff_diff = std::max(diff_diff, max_block_diff(delta_two_point(f, x, w, x - w), diff));

    // Delta F(0,0)(v (x) T) = (A v) (x) T
    const CMatrix a = linear_part(f);
    CVector v(d);
    for (int j = 0; j < d; ++j) v(j) = rng.complex_normal();
    const CMatrix tm = sample_ginibre(n, 1.0, rng);
    std::vector<CMatrix> dir;
    for (int j = 0; j < d; ++j) dir.push_back(v(j) * tm);
    const MatTuple zero = MatTuple::zeros(n, d);
    const std::vector<CMatrix> lhs = delta_two_point(f, zero, zero, MatTuple(dir));
    const CVector av = a * v;
    std::vector<CMatrix> rhs;
    for (int i = 0; i < e; ++i) rhs.push_back(av(i) * tm);
    tensor = std::max(tensor, max_block_diff(lhs, rhs));
  }
  rows.at_most("block_vs_leibniz", "block upper-triangular derivative equals the product rule", block_leibniz,
               r.tol.at("block_leibniz"));
  rows.at_most("difference_differential", "F(X) - F(Y) = Delta F(X, Y)(X - Y)", diff_diff,
               r.tol.at("difference_differential"));
  rows.at_most("tensor_law", "Delta F(0,0)(v (x) T) = (A v) (x) T", tensor, r.tol.at("tensor_law"));

  // First-order convergence of difference quotients.
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  Json ratios = Json::array();
  for (int t = 0; t < fd_trials; ++t) {
    Rng rng = root.split(100000 + static_cast<std::uint64_t>(t));
    const int n = 1 + t % max_level;
    const NcMap f = random_map(d, e, std::max(2, max_degree), rng, 2);
    const MatTuple y = point(n, rng), x = point(n, rng);
    const std::vector<CMatrix> exact = delta_block(f, y, x);
    const std::vector<CMatrix> fy = map_eval(f, y);
    auto err = [&](double step) {
      std::vector<CMatrix> q = map_eval(f, y + x * step);
      for (std::size_t i = 0; i < q.size(); ++i) q[i] = (q[i] - fy[i]) / step;
      return max_block_diff(q, exact);
    };
    const double ratio = err(fd_t) / err(fd_t / 10.0);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    ratios.push_back(ratio);
  }
  const std::string anchor_fd = "difference quotients converge at first order";
  rows.at_least("fd_ratio_min", anchor_fd, lo, r.tol.at("fd_ratio_low"));
  rows.at_most("fd_ratio_max", anchor_fd, hi, r.tol.at("fd_ratio_high"));
  rep.tables["fd_ratios"] = ratios;

  // Delta (G o F)(Y, Y)(X) = Delta G(F(Y), F(Y))(Delta F(Y, Y)(X))
  double chain = 0.0;
  for (int t = 0; t < chain_trials; ++t) {
    Rng rng = root.split(200000 + static_cast<std::uint64_t>(t));
    const int n = 1 + t % max_level;
    const NcMap f = random_map(d, e, 3, rng);
    const NcMap g = random_map(e, d, 3, rng);
    const MatTuple y = point(n, rng), x = point(n, rng);
    const MatTuple fy(map_eval(f, y));
    const MatTuple dfx(delta_block(f, y, x));
    chain = std::max(chain, max_block_diff(delta_block(compose(g, f), y, x), delta_block(g, fy, dfx)));
  }
  rows.at_most("chain_rule", "chain rule for nc derivatives", chain, r.tol.at("chain_rule"));

  // F_i = Z_i + (Z_1 Z_2 - Z_2 Z_1) Z_i fixes the commuting variety to first order at 0.
  if (d >= 2) {
    const FreePoly comm = FreePoly::variable(d, 1) * FreePoly::variable(d, 2) -
                          FreePoly::variable(d, 2) * FreePoly::variable(d, 1);
    std::vector<FreePoly> comps;
    for (int j = 1; j <= d; ++j) comps.push_back(FreePoly::variable(d, j) + comm * FreePoly::variable(d, j));
    std::vector<FreePoly> gens;
    for (int a = 1; a <= d; ++a)
      for (int b = a + 1; b <= d; ++b)
        gens.push_back(FreePoly::variable(d, a) * FreePoly::variable(d, b) -
                       FreePoly::variable(d, b) * FreePoly::variable(d, a));
    const NcVariety v(polydisk(d), gens);
    const SampleCloud cloud =
        sample(v, r.positive("cloud_level"), r.positive("cloud_points"), Rng::mix(r.seed, 3), SamplerSpec::commuting());
    rows.at_most("identity_on_cloud", "Delta F(0,0) is the identity on the variety",
                 linear_identity_residual(NcMap(comps), cloud.points()), r.tol.at("identity_on_cloud"));
  }
}

// ---------------------------------------------------------------- varieties

struct VarietySpec {
  std::string label;
  OperatorBall ball;
  std::vector<FreePoly> generators;
  SamplerSpec sampler;
  int level = 0;
  int m = 0;
  std::vector<int> degrees;
  std::optional<int> expected_span_dim;
  std::map<int, int> expected_dims;
};

SamplerSpec parse_sampler(const Json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw std::invalid_argument(where + ".sampler: needs a 'kind' string");
  for (const auto& [k, v] : j.items())
    if (k != "kind" && k != "q" && k != "coords" && k != "path")
      throw std::invalid_argument(where + ".sampler: unknown field '" + k + "'");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "commuting") return SamplerSpec::commuting();
  if (kind == "q_commuting") {
    if (!j.contains("q")) throw std::invalid_argument(where + ".sampler: q_commuting needs 'q'");
    return SamplerSpec::q_commuting(complex_from_json(j.at("q")));
  }
  if (kind == "coordinate_zero") {
    if (!j.contains("coords") || !j.at("coords").is_array())
      throw std::invalid_argument(where + ".sampler: coordinate_zero needs 'coords'");
    return SamplerSpec::coordinate_zero(j.at("coords").get<std::vector<int>>());
  }
  if (kind == "jointly_nilpotent") return SamplerSpec::jointly_nilpotent();
  if (kind == "user_cloud") {
    if (!j.contains("path") || !j.at("path").is_string())
      throw std::invalid_argument(where + ".sampler: user_cloud needs 'path'");
    return SamplerSpec::user_cloud(j.at("path").get<std::string>());
  }
  throw std::invalid_argument(where + ".sampler: unknown kind '" + kind + "'");
}

std::vector<VarietySpec> parse_varieties(const Resolved& r, bool need_level, bool need_degrees) {
  if (!r.varieties.is_array() || r.varieties.empty())
    throw std::invalid_argument(r.experiment + ": 'varieties' must be a non-empty array");
  static const std::set<std::string> allowed = {"label", "ball",   "generators", "sampler",          "level",
                                                "m",     "degrees", "expected_span_dim", "expected_dims"};
  std::vector<VarietySpec> out;
  for (std::size_t i = 0; i < r.varieties.size(); ++i) {
    const Json& j = r.varieties[i];
    const std::string where = "varieties[" + std::to_string(i) + "]";
    if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
    for (const auto& [k, v] : j.items())
      if (!allowed.count(k)) throw std::invalid_argument(where + ": unknown field '" + k + "'");
    for (const char* k : {"ball", "generators", "sampler", "m"})
      if (!j.contains(k)) throw std::invalid_argument(where + ": missing '" + std::string(k) + "'");
    OperatorBall ball = ball_from_json(j.at("ball"));
    const int d = ball.num_vars();
    std::vector<FreePoly> gens;
    for (const auto& g : j.at("generators")) gens.push_back(parse_poly(g.get<std::string>(), d));
    VarietySpec s{j.value("label", "variety" + std::to_string(i)), std::move(ball), std::move(gens),
                  parse_sampler(j.at("sampler"), where), 0, 0, {}, std::nullopt, {}};
    s.m = j.at("m").get<int>();
    if (s.m < 1) throw std::invalid_argument(where + ": m must be >= 1");
    if (j.contains("level")) s.level = j.at("level").get<int>();
    if (need_level && s.level < 1) throw std::invalid_argument(where + ": needs 'level' >= 1");
    if (j.contains("degrees")) s.degrees = j.at("degrees").get<std::vector<int>>();
    if (need_degrees && s.degrees.empty()) throw std::invalid_argument(where + ": needs 'degrees'");
    for (int k : s.degrees)
      if (k < 1) throw std::invalid_argument(where + ": degrees must be >= 1");
    if (j.contains("expected_span_dim")) s.expected_span_dim = j.at("expected_span_dim").get<int>();
    if (j.contains("expected_dims"))
      for (const auto& [k, v] : j.at("expected_dims").items()) s.expected_dims[std::stoi(k)] = v.get<int>();

    // Feasibility, before anything is sampled.
    const SamplerSpec& sp = s.sampler;
    const std::vector<int> levels = need_level ? std::vector<int>{s.level} : r.levels;
    for (int n : levels) {
      if (sp.kind == SamplerKind::kQCommuting && (d != 2 || n < 2))
        throw std::invalid_argument(where + ": q_commuting needs d = 2 and level >= 2");
      if (sp.kind == SamplerKind::kJointlyNilpotent && n < 2)
        throw std::invalid_argument(where + ": jointly_nilpotent needs level >= 2");
    }
    for (int c : sp.zero_coords)
      if (c < 1 || c > d) throw std::invalid_argument(where + ": coordinate out of range");
    if (sp.kind == SamplerKind::kUserCloud && !std::filesystem::exists(sp.path))
      throw std::invalid_argument(where + ": cloud file '" + sp.path + "' not found");
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------- matspan

void run_matspan(const Resolved& r, ExperimentReport& rep) {
  const std::vector<VarietySpec> specs = parse_varieties(r, true, false);
  Rows rows(rep.rows);
  const std::string anchor = "mat-span of a homogeneous variety";
  const std::string sub_anchor = "minimal sub-ball carries the variety isometrically";
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const VarietySpec& s = specs[i];
    const NcVariety v(s.ball, s.generators);
    const SampleCloud cloud = sample(v, s.level, s.m, Rng::mix(r.seed, i), s.sampler);
    const int d = v.num_vars();
    const Subspace span = mat_span(cloud);
    const std::string p = s.label + ".";
    if (s.expected_span_dim) rows.near(p + "span_dim", anchor, span.dim(), *s.expected_span_dim, 0.0);

    double agrees = 0.0;
    try {
      agrees = is_matrix_spanning(cloud) == (span.dim() == d) ? 1.0 : 0.0;
    } catch (const NumericalError&) {
      agrees = 0.0;
    }
    rows.near(p + "spanning_verdict_agrees", "matrix-spanning iff the degree-1 ideal slice vanishes", agrees, 1.0, 0.0);

    if (span.dim() < d) {
      const SubBall sub = minimal_subball(s.ball, cloud);
      // Components of the P_k along the pencil directions Q_j, j zeroed.
      double off = 0.0;
      for (int c : s.sampler.zero_coords) {
        const CMatrix& qj = s.ball.pencil()[c - 1];
        for (const CMatrix& pk : sub.ball.pencil().coefficients())
          off = std::max(off, std::abs((qj.adjoint() * pk).trace()) / qj.squaredNorm());
      }
      if (!s.sampler.zero_coords.empty()) rows.at_most(p + "subball_off_pattern", sub_anchor, off, r.tol.at("off_pattern"));
      double gdiff = 0.0;
      for (const MatTuple& x : cloud.points())
        gdiff = std::max(gdiff, std::abs(gauge(s.ball, x) - gauge(sub.ball, pull_back(sub.embedding, x))));
      rows.at_most(p + "subball_gauge_preservation", sub_anchor, gdiff, r.tol.at("gauge_preservation"));
      rep.tables[s.label]["subball"] = ball_to_json(sub.ball);
    }
    rep.tables[s.label]["span_dim"] = span.dim();
  }
}

// ---------------------------------------------------------------- nullsatz

void run_nullsatz(const Resolved& r, ExperimentReport& rep) {
  const std::vector<VarietySpec> specs = parse_varieties(r, false, true);
  Rows rows(rep.rows);
  const std::string anchor = "vanishing-ideal slices equal generated slices";
  const double angle_tol = r.tol.at("angle");
  const int extra = r.pint("trivial_extra");
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const VarietySpec& s = specs[i];
    const NcVariety v(s.ball, s.generators);
    const std::uint64_t vseed = Rng::mix(r.seed, i);
    const std::string p = s.label + ".";
    Json table = Json::object();
    for (int k : s.degrees) {
      const std::string pk = p + "k" + std::to_string(k) + ".";
      const NullstellensatzReport nr = nullstellensatz_check(v, k, r.levels, s.m, vseed, s.sampler);
      const auto it = s.expected_dims.find(k);
      if (it != s.expected_dims.end()) rows.near(pk + "generated_dim", anchor, nr.generated_dim, it->second, 0.0);
      rows.near(pk + "ideal_dim_at_top_level", anchor, nr.ideal_dims.back(), nr.generated_dim, 0.0);
      double contained = 0.0;
      for (double c : nr.containment) contained = std::max(contained, c);
      rows.at_most(pk + "generated_in_ideal_sine", anchor, contained, angle_tol);

      // Principal angle between the two slices at the top level.
      const SampleCloud cloud = sample(v, r.levels.back(), s.m, vseed, s.sampler);
      const Subspace ideal = ideal_slice(cloud, k);
      const Subspace gen = generated_slice(v.num_vars(), s.generators, k);
      const double angle = ideal.dim() == gen.dim()
                               ? std::max(subspace_containment(ideal, gen), subspace_containment(gen, ideal))
                               : 1.0;
      rows.at_most(pk + "slice_principal_angle_sine", anchor, angle, angle_tol);
      table["k" + std::to_string(k)] = {{"levels", nr.levels}, {"ideal_dims", nr.ideal_dims},
                                        {"generated_dim", nr.generated_dim}, {"containment", nr.containment}};

      const TrivialNullstellensatzReport tr =
          trivial_nullstellensatz_check(cloud, k, s.sampler, extra, Rng::mix(vseed, 7));
      rows.near(pk + "trivial_nullstellensatz_unchanged", "the ideal of the zero set of a slice is the slice",
                tr.unchanged ? 1.0 : 0.0, 1.0, 0.0);
    }
    rep.tables[s.label] = table;
  }
}

// ---------------------------------------------------------------- unitarysup

void run_unitarysup(const Resolved& r, ExperimentReport& rep) {
  const OperatorBall ball = require_ball(r, "polydisk");
  const int d = ball.num_vars();
  const double target = std::sqrt(static_cast<double>(d));
  PolyMatrix row(1);
  for (int j = 1; j <= d; ++j) row[0].push_back(FreePoly::variable(d, j));
  Rows rows(rep.rows);
  const std::string anchor = "polydisk sup is attained on unitary tuples";

  double su = 0.0, sc = 0.0;
  Json per_level = Json::array();
  for (int n : r.levels) {
    const UnitaryContractionSup u = unitary_vs_contraction_sup(ball, row, n, r.budget, r.seed);
    su = std::max(su, u.over_unitaries);
    sc = std::max(sc, u.over_contractions);
    per_level.push_back({{"level", n}, {"unitaries", u.over_unitaries}, {"contractions", u.over_contractions}});
  }
  rows.at_least("unitary_minus_contraction", anchor, su - sc, 0.0, r.tol.at("unitary_vs_contraction"));
  rows.near("unitary_sup", anchor, su, target, r.tol.at("target"));
  rows.near("contraction_sup", anchor, sc, target, r.tol.at("target"));
  rep.tables["per_level"] = per_level;
}

// ---------------------------------------------------------------- spectral

void run_spectral(const Resolved& r, ExperimentReport& rep) {
  const OperatorBall ball = require_ball(r, "row");
  const int d = ball.num_vars();
  const FreePoly phi = parse_poly(r.pstr("phi"), d);
  const int samples = r.positive("samples");
  const int level = r.positive("level");
  const auto da = WeightedFockSpace::drury_arveson(d);
  Rows rows(rep.rows);
  const std::string anchor = "spectral radius of f(X) is bounded by the multiplier norm";

  const MultMatrix mm = mult_matrix(*da, phi, r.truncation);
  const double estimate = mm.norm_lower_bound;
  // Creation operators are row-isometric, so ||sum c_j L_j|| = ||c||_2 for linear phi.
  double oracle = 0.0;
  bool linear = phi.degree() == 1 && phi.is_homogeneous();
  for (const auto& [w, c] : phi.coeffs()) oracle += std::norm(c);
  oracle = std::sqrt(oracle);
  if (linear) {
    rows.at_least("mult_norm_estimate_low", anchor, estimate, oracle, r.tol.at("estimate_low"));
    rows.at_most("mult_norm_estimate_high", anchor, estimate, oracle, r.tol.at("estimate_high"));
  }

  const Rng root(r.seed);
  double worst = -std::numeric_limits<double>::infinity(), max_rho = 0.0;
  for (int s = 0; s < samples; ++s) {
    Rng rng = root.split(static_cast<std::uint64_t>(s));
    const MatTuple x = interior_point(ball, level, rng, s % 2 == 1);
    const double rho = spectral_radius(poly_eval(phi, x));
    max_rho = std::max(max_rho, rho);
    worst = std::max(worst, rho - estimate);
  }
  // The library routine on one point, as a cross-check of the same quantities.
  Rng rng = root.split(1u << 20);
  const SpectralBound sb = spectral_bound_check(*da, phi, interior_point(ball, level, rng, false), r.truncation);
  rows.near("library_bound_matches_estimate", anchor, sb.bound, estimate, 0.0);
  rows.at_most("max_rho_minus_estimate", anchor, worst, 0.0, r.tol.at("rho"));
  rep.tables["estimate"] = estimate;
  rep.tables["max_rho"] = max_rho;
  rep.tables["domain_size"] = mm.domain.size();
}

}  // namespace

ExperimentReport run(const ExperimentConfig& config) {
  static const std::map<std::string, std::function<void(const Resolved&, ExperimentReport&)>> runners = {
      {"rowgap", run_rowgap},         {"multdiv", run_multdiv}, {"kernelcheck", run_kernelcheck},
      {"boundary", run_boundary},     {"cesaro", run_cesaro},   {"derivcheck", run_derivcheck},
      {"matspan", run_matspan},       {"nullsatz", run_nullsatz}, {"unitarysup", run_unitarysup},
      {"spectral", run_spectral}};
  const auto it = runners.find(config.experiment);
  if (it == runners.end()) throw std::invalid_argument("unknown experiment '" + config.experiment + "'");
  const Resolved r = resolve(config);

  ExperimentReport rep;
  rep.experiment = config.experiment;
  rep.inputs = resolved_to_json(r);
  rep.version = kVersion;
  const auto start = std::chrono::steady_clock::now();
  it->second(r, rep);
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace ncball::explab
