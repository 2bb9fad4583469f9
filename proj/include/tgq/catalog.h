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

#ifndef TGQ_CATALOG_H
#define TGQ_CATALOG_H

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "tgq/analysis.h"
#include "tgq/expr.h"
#include "tgq/groups.h"

namespace tgq {

using ojson = nlohmann::ordered_json;

struct CatalogError : std::runtime_error {
    enum Kind { UnknownEntry, ParamOutOfDomain, ConstraintResidual, SelfVerifyFailed, NoPrintedExpectation, BadData };
    Kind kind;
    CatalogError(Kind k, const std::string &msg) : std::runtime_error(msg), kind(k) {}
};

struct ParamSpec {
    std::string name;
    std::string kind;  // real | sign | choice | angle | so5
    std::string min, max;
    std::vector<double> values;
    ojson defaultValue;
};

struct CatalogEntry {
    std::string id;
    int n = 0, K = 0, d = 0;
    std::string group;
    std::vector<ParamSpec> params;
    std::string notes;
    ojson raw;
};

struct NamedLayer {
    std::string name;
    LocalUnitaryLayer layer;
    Mat2 logical;
    std::string logicalText;
};

struct Instance {
    std::string id;
    ojson params;
    Env env;
    CodeSubspace code;
    std::vector<NamedLayer> layers;
    GroupId group;
    int claimedDistance = 0;
};

struct ExpectedProperties {
    std::optional<double> lambdaSq;
    std::optional<std::vector<double>> A, B;
    GroupId group;
};

struct LayerCheck {
    std::string name;
    double leakage = 0;
    double error = 0;  // phase-insensitive distance to the printed logical
};

struct EntryCheck {
    std::string id;
    bool ok = false;
    std::string failure;
    double orthonormality = 0;
    double klResidual = 0;
    DistanceResult distance;
    std::vector<LayerCheck> layers;
    EnumeratorPair enumerators;
    double lambdaStar = 0;
    std::optional<double> lambdaSqDiff, aDiff, bDiff;
    GroupId groupFound, groupClaimed;
    double seconds = 0;
};

class Catalog {
   public:
    /// The catalog bundled into the library.
    static const Catalog &builtin();
    explicit Catalog(const std::string &jsonText);

    const std::vector<CatalogEntry> &entries() const { return entries_; }
    const CatalogEntry &entry(const std::string &id) const;
    int version() const { return version_; }

    ojson default_params(const std::string &id) const;
    /// Random point in the parameter domain that satisfies the entry constraints;
    /// entries with pinned constraint systems return their defaults.
    ojson random_params(const std::string &id, std::mt19937_64 &rng) const;

    /// Builds the code and layers. Checks domains and constraints, not KL.
    Instance build(const std::string &id, const ojson &params = ojson::object()) const;
    /// build() plus self-verification; throws SelfVerifyFailed.
    Instance instantiate(const std::string &id, const ojson &params = ojson::object()) const;

    ExpectedProperties expected_properties(const Instance &inst) const;

    /// Full verification matrix for one entry.
    EntryCheck check(const std::string &id, const ojson &params = ojson::object()) const;

   private:
    int version_ = 0;
    std::vector<CatalogEntry> entries_;
};

/// Tolerances used by self-verification.
constexpr double kCatalogKlTol = 1e-9;
constexpr double kCatalogGateTol = 1e-8;

}  // namespace tgq

#endif
