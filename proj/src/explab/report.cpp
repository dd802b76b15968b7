#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "ncball/explab.hpp"

namespace ncball::explab {

bool ExperimentReport::all_pass() const {
  return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string report_csv(const ExperimentReport& report) {
  std::string out = "experiment,check_id,paper_anchor,value,reference,tolerance,pass\n";
  for (const auto& r : report.rows) {
    out += csv_field(report.experiment) + ',' + csv_field(r.check_id) + ',' + csv_field(r.anchor) + ',' +
           num(r.value) + ',' + num(r.reference) + ',' + num(r.tolerance) + ',' + (r.pass ? "true" : "false") + '\n';
  }
  return out;
}

Json report_json(const ExperimentReport& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows)
    rows.push_back(Json{{"check_id", r.check_id},
                        {"paper_anchor", r.anchor},
                        {"value", r.value},
                        {"reference", r.reference},
                        {"tolerance", r.tolerance},
                        {"pass", r.pass}});
  return Json{{"experiment", report.experiment}, {"inputs", report.inputs},   {"rows", std::move(rows)},
              {"tables", report.tables},         {"all_pass", report.all_pass()},
              {"wall_seconds", report.wall_seconds}, {"version", report.version}};
}

void write_report(const ExperimentReport& report, const std::string& prefix) {
  const std::filesystem::path base(prefix);
  if (base.has_parent_path()) std::filesystem::create_directories(base.parent_path());
  std::ofstream csv(prefix + ".csv");
  std::ofstream json(prefix + ".json");
  if (!csv || !json) throw std::runtime_error("write_report: cannot write " + prefix + ".{csv,json}");
  csv << report_csv(report);
  json << report_json(report).dump(2) << '\n';
}

}  // namespace ncball::explab
