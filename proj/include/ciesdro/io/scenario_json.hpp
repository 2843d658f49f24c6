// Copyright 2026 The ciesdro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "ciesdro/io/csv.hpp"
#include "ciesdro/scenario/scenario_set.hpp"
#include "json.hpp"

namespace ciesdro::io {

inline nlohmann::json index_table_json(const std::vector<scenario::ClusterIndexRow>& table) {
  auto arr = nlohmann::json::array();
  for (const auto& r : table) arr.push_back({{"k", r.k}, {"dbi", r.dbi}, {"sc", r.sc}});
  return arr;
}

inline nlohmann::json scenario_json(const scenario::ScenarioSet& s,
                                    nlohmann::json meta = nlohmann::json::object()) {
  return {{"n_s", s.n_s()}, {"p0", s.p0}, {"pv", s.pv}, {"wt", s.wt}, {"meta", std::move(meta)}};
}

inline scenario::ScenarioSet scenario_from_json(const nlohmann::json& j) {
  scenario::ScenarioSet s;
  try {
    s.p0 = j.at("p0").get<std::vector<double>>();
    s.pv = j.at("pv").get<std::vector<std::vector<double>>>();
    s.wt = j.at("wt").get<std::vector<std::vector<double>>>();
    if (j.at("n_s").get<int>() != s.n_s()) throw InputError("scenario file: n_s does not match p0");
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("scenario file: ") + e.what());
  }
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("scenario file: ") + e.what());
  }
  return s;
}

inline scenario::ScenarioSet read_scenarios(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw InputError("cannot open " + path.string());
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("scenario file " + path.string() + ": " + e.what());
  }
  return scenario_from_json(j);
}

}  // namespace ciesdro::io
