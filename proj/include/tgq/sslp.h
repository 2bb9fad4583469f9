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

#ifndef TGQ_SSLP_H
#define TGQ_SSLP_H

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tgq/analysis.h"
#include "tgq/lp.h"
#include "tgq/stiefel.h"

namespace tgq {

enum class SslpMode { BD, General };

/// Sum selectors for enumeration. Any: the whole congruence class.
/// Partition: sum exactly 2m - 1 (BD only).
constexpr int kSumAny = -1;
constexpr int kSumPartition = -2;

struct AngleVector {
    int m = 0;
    std::vector<int> a;

    int n() const { return (int)a.size(); }
    int sum() const;
    std::string str() const;  // "(1,2,2,2,2,3,3)"
    bool operator==(const AngleVector &o) const { return m == o.m && a == o.a; }
    bool operator<(const AngleVector &o) const { return a < o.a; }
};

/// Sorted vectors in lexicographic order. BD: sum = -1 mod m; General: no
/// congruence. sumTarget >= 0 restricts to that exact sum.
std::vector<AngleVector> enumerate_angle_vectors(int n, int m, SslpMode mode, int sumTarget = kSumAny);

struct EmptySupport : std::runtime_error {
    int k;
    explicit EmptySupport(int k) : std::runtime_error("empty support for logical " + std::to_string(k)), k(k) {}
};

/// S_k = { s : sum_j a_j s_j = b_k mod m }, qubit j carries a_j.
struct SupportSets {
    int n = 0;
    std::vector<std::vector<uint32_t>> sets;
};
SupportSets support_sets(const AngleVector &a, const std::vector<int> &b);

/// Bitstring of s in ket order.
std::string bits_of(uint32_t s, int n);

struct LpWitness {
    bool feasible = false;
    std::vector<std::vector<double>> x;  // aligned with SupportSets::sets
    std::vector<double> alpha;
    std::vector<double> beta;  // i<j, row-major
    double residual = 0;
};

LpWitness lp_filter(const AngleVector &a, const SupportSets &s, SslpMode mode);
/// Rational re-solve of the same system.
bool lp_filter_exact(const AngleVector &a, const SupportSets &s, SslpMode mode);

struct NonConverged : std::runtime_error {
    double residual;
    explicit NonConverged(double r)
        : std::runtime_error("block optimization did not converge"), residual(r) {}
};

struct SslpCandidate {
    AngleVector a;
    std::vector<int> b;
    SupportSets supports;
    LpWitness witness;
    std::optional<CodeSubspace> code;
    double klResidual = -1;
};

Hyper default_block_hyper();

/// Step 3. Throws std::invalid_argument when the witness is infeasible and
/// NonConverged when no restart reaches hyper.threshold.
CodeSubspace block_optimize(const SslpCandidate &c, SslpMode mode, const Hyper &hyper,
                            const std::vector<std::vector<cplx>> *init = nullptr);

/// Z-rotation layer whose logical action is Z(-2 pi / m) (up to phase) on a BD code.
LocalUnitaryLayer diagonal_layer(const AngleVector &a);

struct StageRecord {
    std::string stage;
    AngleVector a;
    std::string verdict;
    std::string detail;
};

struct SslpOptions {
    SslpMode mode = SslpMode::BD;
    std::vector<int> b;  // empty: (0, m-1)
    int sumTarget = kSumPartition;
    bool filterOnly = false;
    Hyper hyper = default_block_hyper();
    std::function<void(const StageRecord &)> sink;
};

std::vector<SslpCandidate> sslp_pipeline(int n, int K, int m, const SslpOptions &opt);

}  // namespace tgq

#endif
