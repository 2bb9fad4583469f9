// Copyright 2025 The tgq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TGQ_CODEFILE_H
#define TGQ_CODEFILE_H

#include <optional>
#include <string>

#include "json.hpp"
#include "tgq/analysis.h"
#include "tgq/stiefel.h"

namespace tgq {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr int kCodeFileVersion = 1;
constexpr double kLoadTol = 1e-6;

struct CodeFile {
    CodeSubspace code;
    nlohmann::ordered_json metadata = nlohmann::ordered_json::object();
};

struct LayerFile {
    std::string name;
    LocalUnitaryLayer layer;
    std::optional<MatC> target;
};

/// Decimal text with 17 significant digits; parses back to the same double.
std::string format_double(double x);
double parse_double(const std::string &s);

nlohmann::ordered_json code_to_json(const CodeFile &f, double dropBelow = 0);
CodeFile code_from_json(const nlohmann::ordered_json &j, bool renormalize = false);
nlohmann::ordered_json layer_to_json(const LayerFile &f);
LayerFile layer_from_json(const nlohmann::ordered_json &j);

CodeFile load_code_file(const std::string &path, bool renormalize = false);
LayerFile load_layer_file(const std::string &path);
nlohmann::ordered_json load_json(const std::string &path);
void save_json(const std::string &path, const nlohmann::ordered_json &j);

/// Search config ("tgq-search"). Relative code-file paths resolve against baseDir.
SearchConfig search_config_from_json(const nlohmann::ordered_json &j, const std::string &baseDir = "");
void apply_hyper_json(Hyper &h, const nlohmann::ordered_json &j);
nlohmann::ordered_json search_result_to_json(const SearchConfig &cfg, const SearchResult &r);

}  // namespace tgq

#endif
