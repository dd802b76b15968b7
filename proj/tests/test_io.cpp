#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "ncball/io.hpp"
#include "oracles.hpp"

using namespace ncball;

TEST_CASE("tuples round-trip bitwise") {
  const MatTuple x = sample_ginibre_tuple(3, 2, 1.0, std::uint64_t{9});
  const Json j = tuple_to_json(x);
  CHECK(j["n"] == 3);
  CHECK(j["mats"][0].size() == 9);
  CHECK(tuple_from_json(Json::parse(j.dump())) == x);
  CHECK_THROWS_AS(tuple_from_json(Json{{"n", 1}, {"d", 1}, {"mats", {{{1.0, 0.0}}}}, {"extra", 1}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(tuple_from_json(Json{{"n", 2}, {"d", 1}, {"mats", {{{1.0, 0.0}}}}}), std::invalid_argument);
}

TEST_CASE("balls round-trip") {
  for (const auto& ball : {row_ball(3), polydisk(2), block_rows({2, 1}), upper_triangular(2), full_matrix(2)}) {
    const OperatorBall back = ball_from_json(Json::parse(ball_to_json(ball).dump()));
    CHECK(back.name() == ball.name());
    CHECK(back.pencil().coefficients() == ball.pencil().coefficients());
  }
  const OperatorBall custom(LinearPencil({CMatrix::Identity(2, 2), CMatrix::Constant(2, 2, Complex(0.1, 0.3))}));
  const OperatorBall back = ball_from_json(ball_to_json(custom));
  CHECK(back.pencil().coefficients() == custom.pencil().coefficients());
  CHECK_THROWS_AS(ball_from_json(Json{{"kind", "row"}, {"d", 2}, {"l", 1}}), std::invalid_argument);
  CHECK_THROWS_AS(ball_from_json(Json{{"kind", "torus"}}), std::invalid_argument);
}

TEST_CASE("clouds round-trip through files") {
  const FreePoly g = FreePoly::variable(2, 1) * FreePoly::variable(2, 2) -
                     Complex(0, 1) * (FreePoly::variable(2, 2) * FreePoly::variable(2, 1));
  const NcVariety v(polydisk(2), {g});
  const auto cloud = sample(v, 2, 6, 3, SamplerSpec::q_commuting(Complex(0, 1)));
  const auto path = (std::filesystem::temp_directory_path() / "ncball_cloud_test.json").string();
  write_cloud(path, cloud);
  const auto back = load_cloud(path);
  CHECK(back.level() == 2);
  CHECK(back.seed() == 3);
  REQUIRE(back.points().size() == 6);
  for (std::size_t s = 0; s < 6; ++s) CHECK(back.points()[s] == cloud.points()[s]);
  CHECK(back.variety().generators().front() == g);

  const auto again = sample(v, 2, 4, 0, SamplerSpec::user_cloud(path));
  CHECK(again.points().front() == cloud.points().front());
  CHECK_THROWS_AS(sample(v, 2, 7, 0, SamplerSpec::user_cloud(path)), std::invalid_argument);
  std::remove(path.c_str());
}

TEST_CASE("slice csv") {
  Subspace s{CMatrix::Zero(4, 1)};
  s.basis(1, 0) = std::sqrt(0.5);
  s.basis(2, 0) = -std::sqrt(0.5);
  std::ostringstream out;
  write_slice_csv(out, s, 2, 2);
  const std::string text = out.str();
  CHECK(text.rfind("basis,word,re,im\n0,11,0,0\n0,12,", 0) == 0);
  CHECK(text.find("0,21,-0.70710678118654") != std::string::npos);
}
