#pragma once

// JSON and CSV formats for tuples, ball descriptors, sample clouds and
// ideal slices.
//
//   MatTuple: {"n": 2, "d": 2, "mats": [[[re, im], ...], ...]}, each
//             component flattened row-major.
//   Ball:     {"kind": "row" | "polydisk" | "block_rows" | "upper_triangular"
//                      | "full_matrix" | "custom", ...params}
//             row, polydisk: "d"; block_rows: "blocks"; upper_triangular: "l";
//             full_matrix: "m"; custom: "coefficients", a list of r x s
//             matrices given as rows of [re, im] pairs.
//   Cloud:    {"variety": [generator strings], "ball": {...}, "seed": s,
//              "residual_tol": t, "level": n, "points": [MatTuple, ...]}

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ncball/variety.hpp"

namespace ncball {

using Json = nlohmann::json;

Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j);

Json matrix_to_json(const CMatrix& a);
CMatrix matrix_from_json(const Json& j);

Json tuple_to_json(const MatTuple& x);
MatTuple tuple_from_json(const Json& j);

// Standard balls are written by kind and parameters; anything else as a
// custom pencil. Unknown fields are rejected on input.
Json ball_to_json(const OperatorBall& ball);
OperatorBall ball_from_json(const Json& j);

struct CloudFile {
  OperatorBall ball;
  std::vector<FreePoly> generators;
  std::uint64_t seed = 0;
  double residual_tol = kCloudResidualTol;
  int level = 0;
  std::vector<MatTuple> points;
};

Json cloud_to_json(const SampleCloud& cloud);
CloudFile cloud_from_json(const Json& j);
void write_cloud(const std::string& path, const SampleCloud& cloud);
CloudFile read_cloud(const std::string& path);
// read_cloud followed by full validation of every point.
SampleCloud load_cloud(const std::string& path);

// One row per (basis vector, word): basis,word,re,im, words in canonical
// order.
void write_slice_csv(std::ostream& out, const Subspace& slice, int d, int k);

}  // namespace ncball
