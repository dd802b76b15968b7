#pragma once

// Per-experiment defaults shared by config validation and the runners.

#include <map>
#include <string>
#include <vector>

#include "ncball/explab.hpp"

namespace ncball::explab::detail {

struct Defaults {
  Json ball;       // null when the experiment fixes its own balls
  Json varieties;  // null when the experiment takes none
  std::vector<int> levels;
  int budget = 0;
  int truncation = -1;
  std::uint64_t seed = 0;
  Json params = Json::object();
  std::map<std::string, double> tolerances;
};

const Defaults& defaults_for(const std::string& experiment);

}  // namespace ncball::explab::detail
