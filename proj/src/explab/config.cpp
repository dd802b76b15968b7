#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

#include "ncball/explab.hpp"
#include "registry.hpp"

namespace ncball::explab {

const std::vector<ExperimentInfo>& experiments() {
  static const std::vector<ExperimentInfo> list = {
      {"rowgap", "polydisk row gap: sup of [Z_1 ... Z_d] over the polydisk is sqrt(d)",
       "sampled sup of the row polynomial on polydisk(d) against sqrt(d) and the per-coordinate value 1"},
      {"multdiv", "Hardy-space multiplier divergence and the ill-defined shift",
       "exact ratio tables ||Z^a Z_j^k||^2 / ||Z_j^k||^2, multiplication-matrix columns, harmonic partial sums"},
      {"kernelcheck", "Hardy-space kernel, reproducing property and evaluation bound",
       "reproducing residuals against tail bounds, (1/(1-r))^d evaluation bound, level-1 Szego kernel, symmetrized Gram"},
      {"boundary", "boundary value principle for maps into the closed ball",
       "gauge of (X_1, I_n) is identically 1; a strictly contractive map stays inside"},
      {"cesaro", "Cesaro sums of the homogeneous expansion",
       "sup residual of Fejer sums of a geometric series over sampled polydisk points"},
      {"derivcheck", "first-order nc derivative via block upper-triangular evaluation",
       "block vs Leibniz derivatives, difference-differential identity, tensor law, finite differences, chain rule"},
      {"matspan", "mat-span, matrix-spanning varieties and minimal sub-balls",
       "mat-span dimensions of sampled clouds, spanning verdicts, minimal sub-ball pattern and gauge preservation"},
      {"nullsatz", "homogeneous Nullstellensatz at slice level",
       "dimensions of vanishing-ideal slices against slices of the generated ideal"},
      {"unitarysup", "sup over unitaries equals sup over contractions",
       "sampled sup of [Z_1 Z_2] over Haar unitaries and over contractions"},
      {"spectral", "spectral radius bounded by the multiplier norm",
       "truncated multiplier norm of Z_1 + Z_2 on Drury-Arveson space against rho(X_1 + X_2) on the row ball"},
  };
  return list;
}

const ExperimentInfo& experiment_info(const std::string& name) {
  for (const auto& e : experiments())
    if (e.name == name) return e;
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

const std::vector<FieldSpec>& config_fields() {
  static const std::vector<FieldSpec> fields = {
      {"experiment", FieldType::kString, true},  {"ball", FieldType::kObject, false},
      {"varieties", FieldType::kArray, false},   {"levels", FieldType::kArray, false},
      {"budget", FieldType::kInteger, false},    {"seed", FieldType::kInteger, false},
      {"tolerances", FieldType::kObject, false}, {"truncation", FieldType::kInteger, false},
      {"output", FieldType::kString, false},     {"params", FieldType::kObject, false},
  };
  return fields;
}

namespace {

bool has_type(const Json& v, FieldType t) {
  switch (t) {
    case FieldType::kString:
      return v.is_string();
    case FieldType::kInteger:
      return v.is_number_integer();
    case FieldType::kNumber:
      return v.is_number();
    case FieldType::kObject:
      return v.is_object();
    case FieldType::kArray:
      return v.is_array();
  }
  return false;
}

// A parameter override must match the type of its default; integers are
// accepted where numbers are expected.
bool same_kind(const Json& given, const Json& dflt) {
  if (dflt.is_number_integer()) return given.is_number_integer();
  if (dflt.is_number()) return given.is_number();
  return given.type() == dflt.type();
}

}  // namespace

ExperimentConfig parse_config(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  std::set<std::string> known;
  for (const auto& f : config_fields()) {
    known.insert(f.name);
    if (!j.contains(f.name)) {
      if (f.required) throw std::invalid_argument("config: missing required field '" + f.name + "'");
      continue;
    }
    if (!has_type(j.at(f.name), f.type)) throw std::invalid_argument("config: field '" + f.name + "' has the wrong type");
  }
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw std::invalid_argument("config: unknown field '" + key + "'");

  ExperimentConfig c;
  c.experiment = j.at("experiment").get<std::string>();
  experiment_info(c.experiment);
  const detail::Defaults& dflt = detail::defaults_for(c.experiment);

  if (j.contains("ball")) {
    if (dflt.ball.is_null()) throw std::invalid_argument("config: experiment '" + c.experiment + "' takes no ball");
    ball_from_json(j.at("ball"));
    c.ball = j.at("ball");
  }
  if (j.contains("varieties")) {
    if (dflt.varieties.is_null())
      throw std::invalid_argument("config: experiment '" + c.experiment + "' takes no varieties");
    c.varieties = j.at("varieties");
  }
  auto accepts = [&](const char* field, bool ok) {
    if (j.contains(field) && !ok)
      throw std::invalid_argument("config: experiment '" + c.experiment + "' takes no '" + field + "'");
  };
  accepts("levels", !dflt.levels.empty());
  accepts("budget", dflt.budget > 0);
  accepts("truncation", dflt.truncation >= 0);
  accepts("tolerances", !dflt.tolerances.empty());
  accepts("params", !dflt.params.empty());
  if (j.contains("levels")) {
    for (const auto& l : j.at("levels")) {
      if (!l.is_number_integer() || l.get<int>() < 1) throw std::invalid_argument("config: levels must be integers >= 1");
      c.levels.push_back(l.get<int>());
    }
    if (c.levels.empty()) throw std::invalid_argument("config: levels must not be empty");
  }
  if (j.contains("budget")) {
    c.budget = j.at("budget").get<int>();
    if (c.budget < 1) throw std::invalid_argument("config: budget must be >= 1");
  }
  if (j.contains("seed")) {
    const Json& s = j.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) throw std::invalid_argument("config: seed must be a non-negative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  } else {
    c.seed = dflt.seed;
  }
  if (j.contains("tolerances")) {
    for (const auto& [key, value] : j.at("tolerances").items()) {
      if (!dflt.tolerances.count(key))
        throw std::invalid_argument("config: unknown tolerance '" + key + "' for " + c.experiment);
      if (!value.is_number() || value.get<double>() < 0.0)
        throw std::invalid_argument("config: tolerance '" + key + "' must be a non-negative number");
      c.tolerances[key] = value.get<double>();
    }
  }
  if (j.contains("truncation")) {
    c.truncation = j.at("truncation").get<int>();
    if (c.truncation < 0) throw std::invalid_argument("config: truncation must be >= 0");
  }
  if (j.contains("output")) c.output = j.at("output").get<std::string>();
  if (j.contains("params")) {
    for (const auto& [key, value] : j.at("params").items()) {
      if (!dflt.params.contains(key))
        throw std::invalid_argument("config: unknown parameter '" + key + "' for " + c.experiment);
      if (!same_kind(value, dflt.params.at(key)))
        throw std::invalid_argument("config: parameter '" + key + "' has the wrong type");
    }
    c.params = j.at("params");
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("config: cannot open " + path);
  Json j;
  try {
    j = Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument("config: " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

Json config_to_json(const ExperimentConfig& c) {
  Json j{{"experiment", c.experiment}, {"seed", c.seed}};
  if (!c.params.empty()) j["params"] = c.params;
  if (!c.ball.is_null()) j["ball"] = c.ball;
  if (!c.varieties.is_null()) j["varieties"] = c.varieties;
  if (!c.levels.empty()) j["levels"] = c.levels;
  if (c.budget > 0) j["budget"] = c.budget;
  if (!c.tolerances.empty()) j["tolerances"] = c.tolerances;
  if (c.truncation >= 0) j["truncation"] = c.truncation;
  if (!c.output.empty()) j["output"] = c.output;
  return j;
}

}  // namespace ncball::explab
