#pragma once

// Seeded experiment runner behind the ncball CLI: JSON configs in, check
// tables out.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ncball/io.hpp"

namespace ncball::explab {

struct ExperimentInfo {
  std::string name;
  std::string anchor;
  std::string summary;
};

// In the order printed by `ncball --list`.
const std::vector<ExperimentInfo>& experiments();
const ExperimentInfo& experiment_info(const std::string& name);

enum class FieldType { kString, kInteger, kNumber, kObject, kArray };

struct FieldSpec {
  std::string name;
  FieldType type;
  bool required;
};

// Top-level config fields, mirrored by schemas/experiment_config.schema.json.
const std::vector<FieldSpec>& config_fields();

struct ExperimentConfig {
  std::string experiment;
  Json ball;                 // null when absent
  Json varieties;            // null when absent
  std::vector<int> levels;   // empty = experiment default
  int budget = 0;            // 0 = experiment default
  std::uint64_t seed = 0;
  std::map<std::string, double> tolerances;
  int truncation = -1;       // -1 = experiment default
  std::string output;
  Json params = Json::object();
};

// Validates against the field table and the experiment's parameter and
// tolerance names; throws std::invalid_argument with the offending path.
ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::string& path);
Json config_to_json(const ExperimentConfig& c);

struct CheckRow {
  std::string check_id;
  std::string anchor;
  double value = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ExperimentReport {
  std::string experiment;
  Json inputs;
  std::vector<CheckRow> rows;
  Json tables = Json::object();  // auxiliary data (ratio tables, residual curves)
  double wall_seconds = 0.0;
  std::string version;

  bool all_pass() const;
};

// Runs one experiment. Infeasible parameters throw std::invalid_argument
// before any computation.
ExperimentReport run(const ExperimentConfig& config);

// experiment,check_id,paper_anchor,value,reference,tolerance,pass
std::string report_csv(const ExperimentReport& report);
Json report_json(const ExperimentReport& report);
// Writes <prefix>.csv and <prefix>.json, creating parent directories.
void write_report(const ExperimentReport& report, const std::string& prefix);

}  // namespace ncball::explab
