#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <set>

#include "ncball/explab.hpp"

using namespace ncball;
using namespace ncball::explab;

namespace {

const std::filesystem::path kRoot = NCBALL_SOURCE_DIR;

Json read_json(const std::filesystem::path& p) {
  std::ifstream f(p);
  return Json::parse(f);
}

std::string type_name(FieldType t) {
  switch (t) {
    case FieldType::kString:
      return "string";
    case FieldType::kInteger:
      return "integer";
    case FieldType::kNumber:
      return "number";
    case FieldType::kObject:
      return "object";
    case FieldType::kArray:
      return "array";
  }
  return "";
}

Json minimal(const std::string& experiment) { return Json{{"experiment", experiment}}; }

}  // namespace

TEST_CASE("published schema matches the config field table") {
  const Json schema = read_json(kRoot / "schemas" / "experiment_config.schema.json");
  CHECK(schema.at("additionalProperties") == false);
  const Json& props = schema.at("properties");
  std::set<std::string> schema_names, table_names, required;
  for (const auto& [k, v] : props.items()) schema_names.insert(k);
  for (const auto& r : schema.at("required")) required.insert(r.get<std::string>());
  for (const auto& f : config_fields()) {
    table_names.insert(f.name);
    INFO(f.name);
    REQUIRE(props.contains(f.name));
    const Json& p = props.at(f.name);
    const std::string t = p.contains("type") ? p.at("type").get<std::string>()
                                             : (f.name == "ball" ? "object" : "");
    CHECK(t == type_name(f.type));
    CHECK(required.count(f.name) == static_cast<std::size_t>(f.required));
  }
  CHECK(schema_names == table_names);

  std::set<std::string> listed, in_schema;
  for (const auto& e : experiments()) listed.insert(e.name);
  for (const auto& e : props.at("experiment").at("enum")) in_schema.insert(e.get<std::string>());
  CHECK(listed == in_schema);
  CHECK(listed.size() == 10);
}

TEST_CASE("shipped configs parse and name their own experiment") {
  for (const auto& e : experiments()) {
    INFO(e.name);
    const ExperimentConfig c = load_config((kRoot / "configs" / (e.name + ".json")).string());
    CHECK(c.experiment == e.name);
    CHECK(c.output == "results/" + e.name);
    CHECK(parse_config(config_to_json(c)).experiment == e.name);
  }
}

TEST_CASE("config validation rejects bad input before running") {
  CHECK_NOTHROW(parse_config(minimal("rowgap")));
  CHECK_THROWS_AS(parse_config(Json::array()), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(Json{{"seed", 1}}), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(minimal("nope")), std::invalid_argument);

  Json j = minimal("rowgap");
  j["colour"] = "blue";
  CHECK_THROWS_AS(parse_config(j), std::invalid_argument);

  j = minimal("rowgap");
  j["budget"] = "many";
  CHECK_THROWS_AS(parse_config(j), std::invalid_argument);
  j["budget"] = 0;
  CHECK_THROWS_AS(parse_config(j), std::invalid_argument);

  j = minimal("rowgap");
  j["seed"] = -3;
  CHECK_THROWS_AS(parse_config(j), std::invalid_argument);

  j = minimal("rowgap");
  j["levels"] = Json::array({1, 0});
  CHECK_THROWS_AS(parse_config(j), std::invalid_argument);

  j = minimal("rowgap");
  j["tolerances"] = {{"lower_bound", 1e-9}, {"made_up", 1.0}};
  CHECK_THROWS_AS(parse_config(j), std::invalid_argument);

  j = minimal("multdiv");
  j["params"] = {{"k_max", 10}};
  CHECK_NOTHROW(parse_config(j));
  j["params"] = {{"k_max", 1.5}};
  CHECK_THROWS_AS(parse_config(j), std::invalid_argument);
  j["params"] = {{"kmax", 10}};
  CHECK_THROWS_AS(parse_config(j), std::invalid_argument);

  // Fields the experiment does not take.
  j = minimal("multdiv");
  j["levels"] = Json::array({1});
  CHECK_THROWS_AS(parse_config(j), std::invalid_argument);
  j = minimal("rowgap");
  j["varieties"] = Json::array();
  CHECK_THROWS_AS(parse_config(j), std::invalid_argument);
  j = minimal("derivcheck");
  j["ball"] = {{"kind", "polydisk"}, {"d", 2}};
  CHECK_THROWS_AS(parse_config(j), std::invalid_argument);
  j = minimal("rowgap");
  j["ball"] = {{"kind", "polydisk"}, {"dim", 2}};
  CHECK_THROWS_AS(parse_config(j), std::invalid_argument);
}

TEST_CASE("infeasible parameters are reported as errors") {
  Json j = minimal("rowgap");
  j["ball"] = {{"kind", "row"}, {"d", 2}};
  CHECK_THROWS_AS(run(parse_config(j)), std::invalid_argument);

  j = minimal("matspan");
  j["varieties"] = Json::array({Json{{"ball", {{"kind", "polydisk"}, {"d", 2}}},
                                     {"generators", {"1*12-(0+1i)*21"}},
                                     {"sampler", {{"kind", "q_commuting"}, {"q", {0.0, 1.0}}}},
                                     {"level", 1},
                                     {"m", 5}}});
  CHECK_THROWS_AS(run(parse_config(j)), std::invalid_argument);
  j["varieties"][0]["level"] = 2;
  j["varieties"][0]["colour"] = "red";
  CHECK_THROWS_AS(run(parse_config(j)), std::invalid_argument);
  j["varieties"][0].erase("colour");
  j["varieties"][0]["sampler"] = {{"kind", "user_cloud"}, {"path", "/nonexistent/cloud.json"}};
  CHECK_THROWS_AS(run(parse_config(j)), std::invalid_argument);
}

TEST_CASE("reports are deterministic given the config") {
  Json j = minimal("rowgap");
  j["budget"] = 100;
  j["seed"] = 5;
  const ExperimentConfig c = parse_config(j);
  const ExperimentReport a = run(c), b = run(c);
  CHECK(report_csv(a) == report_csv(b));
  Json ja = report_json(a), jb = report_json(b);
  ja.erase("wall_seconds");
  jb.erase("wall_seconds");
  CHECK(ja == jb);
  CHECK(a.inputs.at("seed") == 5);
  CHECK(a.inputs.at("budget") == 100);
  CHECK(a.inputs.at("levels") == Json::array({1, 2, 3}));

  j["seed"] = 6;

  // rowgap rows are seed-free (exact witnesses); boundary rows are not.
  Json k = minimal("boundary");
  k["params"] = {{"samples", 40}};
  k["seed"] = 1;
  const std::string c1 = report_csv(run(parse_config(k)));
  k["seed"] = 2;
  CHECK(report_csv(run(parse_config(k))) != c1);
}

TEST_CASE("report formats") {
  const ExperimentReport r = run(parse_config(minimal("multdiv")));
  CHECK(r.all_pass());
  CHECK(r.version == "0.1.0");
  const std::string csv = report_csv(r);
  CHECK(csv.rfind("experiment,check_id,paper_anchor,value,reference,tolerance,pass\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(r.rows.size()) + 1);
  const Json j = report_json(r);
  CHECK(j.at("rows").size() == r.rows.size());
  CHECK(j.at("all_pass") == true);
  CHECK(j.at("tables").at("ratios").at(5) == "6");

  ExperimentReport fake;
  fake.experiment = "x";
  CHECK_FALSE(fake.all_pass());
  fake.rows.push_back(CheckRow{"a,b", "say \"hi\"", 1.0, 2.0, 0.5, false});
  CHECK(report_csv(fake).find("\"a,b\",\"say \"\"hi\"\"\"") != std::string::npos);

  const auto dir = std::filesystem::temp_directory_path() / "ncball_test_explab" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  write_report(r, (dir / "multdiv").string());
  CHECK(std::filesystem::exists(dir / "multdiv.csv"));
  CHECK(read_json(dir / "multdiv.json").at("experiment") == "multdiv");
}

TEST_CASE("small experiment runs") {
  Json j = minimal("boundary");
  j["params"] = {{"samples", 40}};
  const ExperimentReport b = run(parse_config(j));
  CHECK(b.all_pass());

  j = minimal("nullsatz");
  j["levels"] = Json::array({3});
  const ExperimentReport n = run(parse_config(j));
  CHECK(n.all_pass());

  j = minimal("spectral");
  j["truncation"] = 4;
  j["params"] = {{"samples", 20}};
  const ExperimentReport s = run(parse_config(j));
  CHECK(s.all_pass());
}
