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

#ifndef TGQ_GROUPS_H
#define TGQ_GROUPS_H

#include <string>
#include <unordered_map>
#include <vector>

#include "tgq/analysis.h"
#include "tgq/core.h"

namespace tgq {

struct GroupId {
    enum Family { Cyclic, BinaryDihedral, TwoT, TwoO, TwoI, Unknown };
    Family family = Unknown;
    // 2m for Cyclic / BinaryDihedral.
    int index = 0;
    // Only meaningful for Unknown.
    int order = 0;
    int classes = 0;

    static GroupId cyclic(int two_m) { return {Cyclic, two_m, 0, 0}; }
    static GroupId binary_dihedral(int two_m) { return {BinaryDihedral, two_m, 0, 0}; }
    static GroupId two_t() { return {TwoT, 0, 0, 0}; }
    static GroupId two_o() { return {TwoO, 0, 0, 0}; }
    static GroupId two_i() { return {TwoI, 0, 0, 0}; }
    static GroupId unknown(int order, int classes) { return {Unknown, 0, order, classes}; }
    /// Accepts "C10", "BD16", "2T", "2O", "2I".
    static GroupId parse(const std::string &text);

    int expected_order() const;
    std::string str() const;
    bool operator==(const GroupId &o) const;
    bool operator!=(const GroupId &o) const { return !(*this == o); }
};

struct FiniteSu2Group {
    std::vector<Mat2> elements;
    int classCount = 0;
    bool abelian = true;

    int order() const { return (int)elements.size(); }
    /// Index of the stored element equal to g within tol, or -1.
    int find(const Mat2 &g, double tol = 1e-8) const;

    // Rounded-key buckets; rebuilt by closure.
    std::unordered_multimap<uint64_t, int> index_;
};

struct OrderExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SubspaceNotPreserved : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<Mat2> standard_generators(const GroupId &id);

/// Breadth-first closure; fills classCount and abelian as well.
FiniteSu2Group closure(const std::vector<Mat2> &gens, int maxOrder = 1000, double tol = 1e-8);

int conjugacy_class_count(const FiniteSu2Group &g, double tol = 1e-8);
std::vector<int> conjugacy_class_sizes(const FiniteSu2Group &g, double tol = 1e-8);

GroupId identify(const FiniteSu2Group &g);

/// Rescales a unitary to determinant one (principal square root of det).
Mat2 to_su2(const Mat2 &u, cplx *phase = nullptr);

/// Short name of an SU(2) element up to sign: "Sh", "-F", "Z(-2pi/5)"; empty if none fits.
std::string describe_su2(const Mat2 &u, double tol = 1e-8);

struct TransversalGroup {
    GroupId id;
    FiniteSu2Group group;
    std::vector<Mat2> logical;   // raw logical actions
    std::vector<cplx> phases;    // removed global phases
};

TransversalGroup transversal_group_of_code(const CodeSubspace &code,
                                           const std::vector<LocalUnitaryLayer> &layers,
                                           bool adjoinMinusIdentity = true, double tol = 1e-8);

struct ClassData {
    std::string family;
    int order = 0;
    std::vector<int> sizes;
    std::vector<int> dims;
    std::vector<std::vector<cplx>> characters;
};

/// Tables for 2T, 2O, 2I parsed from the bundled data file.
const std::vector<ClassData> &exceptional_class_data();
ClassData class_data(const GroupId &id);

}  // namespace tgq

#endif
