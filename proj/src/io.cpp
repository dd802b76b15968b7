#include "ncball/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <stdexcept>

namespace ncball {

namespace {

void require_fields(const Json& j, const std::set<std::string>& allowed, const char* who) {
  if (!j.is_object()) throw std::invalid_argument(std::string(who) + ": expected an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw std::invalid_argument(std::string(who) + ": unknown field '" + key + "'");
}

int get_int(const Json& j, const char* key, const char* who) {
  if (!j.contains(key) || !j.at(key).is_number_integer())
    throw std::invalid_argument(std::string(who) + ": missing integer field '" + key + "'");
  return j.at(key).get<int>();
}

}  // namespace

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw std::invalid_argument("complex: expected [re, im]");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

Json matrix_to_json(const CMatrix& a) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < a.cols(); ++k) row.push_back(complex_to_json(a(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty())
    throw std::invalid_argument("matrix: expected a non-empty list of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  CMatrix a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw std::invalid_argument("matrix: ragged rows");
    for (Eigen::Index k = 0; k < cols; ++k) a(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
  }
  return a;
}

Json tuple_to_json(const MatTuple& x) {
  Json mats = Json::array();
  for (const auto& m : x.mats()) {
    Json flat = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index k = 0; k < m.cols(); ++k) flat.push_back(complex_to_json(m(i, k)));
    mats.push_back(std::move(flat));
  }
  return Json{{"n", x.level()}, {"d", x.size()}, {"mats", std::move(mats)}};
}

MatTuple tuple_from_json(const Json& j) {
  require_fields(j, {"n", "d", "mats"}, "MatTuple");
  const int n = get_int(j, "n", "MatTuple");
  const int d = get_int(j, "d", "MatTuple");
  if (n < 1 || d < 1) throw std::invalid_argument("MatTuple: need n, d >= 1");
  const Json& mats = j.at("mats");
  if (!mats.is_array() || static_cast<int>(mats.size()) != d)
    throw std::invalid_argument("MatTuple: 'mats' must hold d matrices");
  std::vector<CMatrix> out;
  for (const auto& flat : mats) {
    if (!flat.is_array() || static_cast<int>(flat.size()) != n * n)
      throw std::invalid_argument("MatTuple: each matrix needs n*n entries");
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) m(i, k) = complex_from_json(flat[static_cast<std::size_t>(i * n + k)]);
    out.push_back(std::move(m));
  }
  return MatTuple(std::move(out));
}

Json ball_to_json(const OperatorBall& ball) {
  const LinearPencil& q = ball.pencil();
  const std::string& name = ball.name();
  if (name == "row") return Json{{"kind", "row"}, {"d", q.num_vars()}};
  if (name == "polydisk") return Json{{"kind", "polydisk"}, {"d", q.num_vars()}};
  if (name == "upper_triangular") return Json{{"kind", "upper_triangular"}, {"l", q.rows()}};
  if (name == "full_matrix") return Json{{"kind", "full_matrix"}, {"m", q.rows()}};
  if (name == "block_rows") {
    std::vector<int> blocks(static_cast<std::size_t>(q.rows()), 0);
    for (int j = 0; j < q.num_vars(); ++j) {
      Eigen::Index row = 0, col = 0;
      q[j].cwiseAbs().maxCoeff(&row, &col);
      ++blocks[static_cast<std::size_t>(row)];
    }
    return Json{{"kind", "block_rows"}, {"blocks", blocks}};
  }
  Json coeffs = Json::array();
  for (const auto& m : q.coefficients()) coeffs.push_back(matrix_to_json(m));
  return Json{{"kind", "custom"}, {"coefficients", std::move(coeffs)}};
}

OperatorBall ball_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw std::invalid_argument("ball: missing string field 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "row" || kind == "polydisk") {
    require_fields(j, {"kind", "d"}, "ball");
    const int d = get_int(j, "d", "ball");
    return kind == "row" ? row_ball(d) : polydisk(d);
  }
  if (kind == "block_rows") {
    require_fields(j, {"kind", "blocks"}, "ball");
    if (!j.contains("blocks") || !j.at("blocks").is_array())
      throw std::invalid_argument("ball: block_rows needs a 'blocks' list");
    return block_rows(j.at("blocks").get<std::vector<int>>());
  }
  if (kind == "upper_triangular") {
    require_fields(j, {"kind", "l"}, "ball");
    return upper_triangular(get_int(j, "l", "ball"));
  }
  if (kind == "full_matrix") {
    require_fields(j, {"kind", "m"}, "ball");
    return full_matrix(get_int(j, "m", "ball"));
  }
  if (kind == "custom") {
    require_fields(j, {"kind", "coefficients"}, "ball");
    if (!j.contains("coefficients") || !j.at("coefficients").is_array())
      throw std::invalid_argument("ball: custom needs a 'coefficients' list");
    std::vector<CMatrix> q;
    for (const auto& m : j.at("coefficients")) q.push_back(matrix_from_json(m));
    return OperatorBall(LinearPencil(std::move(q)));
  }
  throw std::invalid_argument("ball: unknown kind '" + kind + "'");
}

Json cloud_to_json(const SampleCloud& cloud) {
  Json gens = Json::array();
  for (const auto& g : cloud.variety().generators()) gens.push_back(to_string(g));
  Json points = Json::array();
  for (const auto& x : cloud.points()) points.push_back(tuple_to_json(x));
  return Json{{"variety", std::move(gens)},
              {"ball", ball_to_json(cloud.variety().ball())},
              {"seed", cloud.seed()},
              {"residual_tol", cloud.residual_tol()},
              {"level", cloud.level()},
              {"points", std::move(points)}};
}

CloudFile cloud_from_json(const Json& j) {
  require_fields(j, {"variety", "ball", "seed", "residual_tol", "level", "points"}, "cloud");
  for (const char* key : {"variety", "ball", "seed", "residual_tol", "level", "points"})
    if (!j.contains(key)) throw std::invalid_argument(std::string("cloud: missing field '") + key + "'");
  CloudFile out{ball_from_json(j.at("ball")), {}, 0, kCloudResidualTol, 0, {}};
  for (const auto& g : j.at("variety")) out.generators.push_back(parse_poly(g.get<std::string>(), out.ball.num_vars()));
  out.seed = j.at("seed").get<std::uint64_t>();
  out.residual_tol = j.at("residual_tol").get<double>();
  out.level = j.at("level").get<int>();
  for (const auto& p : j.at("points")) out.points.push_back(tuple_from_json(p));
  return out;
}

void write_cloud(const std::string& path, const SampleCloud& cloud) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_cloud: cannot open " + path);
  f << cloud_to_json(cloud).dump(1) << '\n';
}

CloudFile read_cloud(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("read_cloud: cannot open " + path);
  return cloud_from_json(Json::parse(f));
}

SampleCloud load_cloud(const std::string& path) {
  CloudFile file = read_cloud(path);
  return SampleCloud(NcVariety(std::move(file.ball), std::move(file.generators)), file.level,
                     std::move(file.points), file.seed, file.residual_tol);
}

void write_slice_csv(std::ostream& out, const Subspace& slice, int d, int k) {
  const auto words = enumerate_words(d, k);
  if (static_cast<std::size_t>(slice.ambient_dim()) != words.size())
    throw std::invalid_argument("write_slice_csv: slice dimension does not match d^k");
  out << "basis,word,re,im\n";
  char buf[64];
  for (int b = 0; b < slice.dim(); ++b)
    for (std::size_t i = 0; i < words.size(); ++i) {
      const Complex c = slice.basis(static_cast<Eigen::Index>(i), b);
      std::snprintf(buf, sizeof buf, "%.17g,%.17g", c.real(), c.imag());
      out << b << ',' << words[i].to_string() << ',' << buf << '\n';
    }
}

}  // namespace ncball
