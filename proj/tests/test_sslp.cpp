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

#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"
#include "tgq/catalog.h"
#include "tgq/groups.h"
#include "tgq/sslp.h"

using namespace tgq;

namespace {

// Brute force over all m^n tuples, sorted and deduplicated.
std::set<std::vector<int>> brute_force(int n, int m, SslpMode mode, int exactSum = -1) {
    std::set<std::vector<int>> out;
    std::vector<int> a(n, 0);
    while (true) {
        int s = 0;
        for (int v : a) s += v;
        bool ok = mode == SslpMode::General || (s + 1) % m == 0;
        if (exactSum >= 0) ok = ok && s == exactSum;
        if (ok) {
            auto sorted = a;
            std::sort(sorted.begin(), sorted.end());
            out.insert(sorted);
        }
        int q = 0;
        while (q < n && ++a[q] == m) a[q++] = 0;
        if (q == n) break;
    }
    return out;
}

std::set<std::vector<int>> as_set(const std::vector<AngleVector> &v) {
    std::set<std::vector<int>> s;
    for (const auto &a : v) s.insert(a.a);
    return s;
}

SslpCandidate candidate(const std::vector<int> &a, int m, SslpMode mode = SslpMode::BD,
                        std::vector<int> b = {}) {
    SslpCandidate c;
    c.a = {m, a};
    c.b = b.empty() ? std::vector<int>{0, m - 1} : b;
    c.supports = support_sets(c.a, c.b);
    c.witness = lp_filter(c.a, c.supports, mode);
    return c;
}

const std::set<std::vector<int>> kPrintedM8 = {
    {1, 2, 2, 2, 2, 3, 3}, {1, 1, 2, 2, 3, 3, 3}, {1, 1, 2, 2, 2, 3, 4}, {1, 1, 2, 2, 2, 2, 5},
    {1, 1, 1, 2, 3, 3, 4}, {1, 1, 1, 2, 2, 4, 4}, {1, 1, 1, 2, 2, 3, 5}, {1, 1, 1, 2, 2, 2, 6},
    {1, 1, 1, 1, 3, 4, 4}, {1, 1, 1, 1, 3, 3, 5}, {0, 1, 2, 2, 3, 3, 4}, {0, 1, 1, 2, 3, 3, 5}};

std::set<std::vector<int>> survivors(int n, int m, int sum) {
    SslpOptions o;
    o.filterOnly = true;
    o.sumTarget = sum;
    std::set<std::vector<int>> s;
    for (const auto &c : sslp_pipeline(n, 2, m, o)) s.insert(c.a.a);
    return s;
}

}  // namespace

TEST_CASE("angle vector enumeration") {
    auto one = enumerate_angle_vectors(1, 2, SslpMode::BD);
    REQUIRE(one.size() == 1);
    CHECK(one[0].a == std::vector<int>{1});
    CHECK(one[0].str() == "(1)");

    auto m8 = enumerate_angle_vectors(7, 8, SslpMode::BD);
    CHECK(as_set(m8).count({1, 2, 2, 2, 2, 3, 3}) == 1);
    CHECK(as_set(m8) == brute_force(7, 8, SslpMode::BD));
    CHECK(m8.size() == brute_force(7, 8, SslpMode::BD).size());
    CHECK(std::is_sorted(m8.begin(), m8.end()));
    for (const auto &a : m8) {
        CHECK(std::is_sorted(a.a.begin(), a.a.end()));
        CHECK((a.sum() + 1) % 8 == 0);
        for (int v : a.a) CHECK((v >= 0 && v < 8));
    }

    CHECK(as_set(enumerate_angle_vectors(7, 8, SslpMode::BD, kSumPartition)) == brute_force(7, 8, SslpMode::BD, 15));
    CHECK(as_set(enumerate_angle_vectors(7, 8, SslpMode::BD, 23)) == brute_force(7, 8, SslpMode::BD, 23));
    for (int n = 1; n <= 5; n++)
        for (int m = 2; m <= 6; m++) {
            CHECK(as_set(enumerate_angle_vectors(n, m, SslpMode::General)) == brute_force(n, m, SslpMode::General));
            CHECK(as_set(enumerate_angle_vectors(n, m, SslpMode::BD)) == brute_force(n, m, SslpMode::BD));
        }
}

TEST_CASE("support sets") {
    AngleVector a{8, {1, 2, 2, 2, 2, 3, 3}};
    SupportSets s = support_sets(a, {0, 7});
    REQUIRE(s.sets.size() == 2);
    CHECK(s.sets[0].front() == 0);
    CHECK(s.sets[0].size() == s.sets[1].size());
    std::set<uint32_t> s1(s.sets[1].begin(), s.sets[1].end());
    for (uint32_t x : s.sets[0]) CHECK(s1.count(x ^ 0x7fu) == 1);
    // 0111100: qubits 1..4 carry 2 each
    uint32_t t = std::stoul("0111100", nullptr, 2);
    CHECK(std::count(s.sets[0].begin(), s.sets[0].end(), t) == 1);
    CHECK(bits_of(t, 7) == "0111100");

    CHECK_THROWS_AS(support_sets({4, {2, 2}}, {0, 3}), EmptySupport);
    try {
        support_sets({4, {2, 2}}, {0, 3});
    } catch (const EmptySupport &e) {
        CHECK(e.k == 1);
    }
    CHECK_THROWS_AS(support_sets(a, {0, 8}), std::invalid_argument);
}

TEST_CASE("supports are disjoint and satisfy their congruence") {
    for (int n = 1; n <= 5; n++) {
        for (int m = 2; m <= 7; m++) {
            for (const auto &a : enumerate_angle_vectors(n, m, SslpMode::General)) {
                SupportSets s;
                try {
                    s = support_sets(a, {0, m - 1});
                } catch (const EmptySupport &) {
                    continue;
                }
                std::set<uint32_t> seen;
                for (size_t k = 0; k < 2; k++) {
                    int want = k == 0 ? 0 : m - 1;
                    for (uint32_t x : s.sets[k]) {
                        CHECK(seen.insert(x).second);
                        int w = 0;
                        for (int q = 0; q < n; q++)
                            if (x & qubit_bit(n, q)) w += a.a[q];
                        CHECK(w % m == want);
                    }
                }
            }
        }
    }
}

TEST_CASE("lp filter agrees with the rational oracle") {
    int checked = 0;
    for (SslpMode mode : {SslpMode::BD, SslpMode::General}) {
        for (int n = 1; n <= 4; n++) {
            for (int m = 2; m <= 6; m++) {
                for (const auto &a : enumerate_angle_vectors(n, m, mode)) {
                    SupportSets s;
                    try {
                        s = support_sets(a, {0, m - 1});
                    } catch (const EmptySupport &) {
                        continue;
                    }
                    LpWitness w = lp_filter(a, s, mode);
                    CHECK_MESSAGE(w.feasible == lp_filter_exact(a, s, mode), a.str() << " m=" << m);
                    checked++;
                    if (!w.feasible) continue;
                    CHECK(w.residual < 1e-9);
                    // Single-qubit Z balance and normalization, per block.
                    for (size_t k = 0; k < s.sets.size(); k++) {
                        double total = 0;
                        std::vector<double> z(n, 0);
                        for (size_t i = 0; i < s.sets[k].size(); i++) {
                            double x = w.x[k][i];
                            CHECK(x >= -1e-12);
                            total += x;
                            for (int q = 0; q < n; q++) z[q] += (s.sets[k][i] & qubit_bit(n, q)) ? -x : x;
                        }
                        CHECK(std::abs(total - 1) < 1e-9);
                        for (int q = 0; q < n; q++) CHECK(std::abs(z[q] - w.alpha[q]) < 1e-9);
                    }
                    if (mode == SslpMode::BD)
                        for (int q = 0; q < n; q++) CHECK(std::abs(w.alpha[q]) < 1e-9);
                }
            }
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("lp filter examples") {
    // S_0 = {0}: the Z balance cannot hold.
    SslpCandidate c = candidate({1}, 2);
    CHECK(c.supports.sets[0].size() == 1);
    CHECK_FALSE(c.witness.feasible);
    CHECK_FALSE(lp_filter_exact(c.a, c.supports, SslpMode::BD));

    // The uniform vector only reaches weight 0 and 8 in S_0, so 0000000 alone.
    SslpCandidate u = candidate({1, 1, 1, 1, 1, 1, 1}, 8);
    CHECK(u.supports.sets[0].size() == 1);
    CHECK_FALSE(u.witness.feasible);
}

TEST_CASE("n = 7 survivor sets") {
    CHECK(survivors(7, 8, kSumPartition) == kPrintedM8);
    CHECK(survivors(7, 19, kSumAny).empty());
    CHECK(survivors(7, 20, kSumAny).empty());
    // The printed list is the partition level of the full class.
    auto full = survivors(7, 8, kSumAny);
    for (const auto &a : kPrintedM8) CHECK(full.count(a) == 1);
    for (const auto &a : full) {
        int s = 0;
        for (int v : a) s += v;
        if (s == 15) CHECK(kPrintedM8.count(a) == 1);
    }
}

TEST_CASE("block optimization reproduces the catalog BD16 code from its amplitudes") {
    Instance in = Catalog::builtin().instantiate("seven23-bd16");
    SslpCandidate c = candidate({1, 2, 2, 2, 2, 3, 3}, 8);
    REQUIRE(c.witness.feasible);
    std::vector<std::vector<cplx>> init(1);
    for (uint32_t s : c.supports.sets[0]) init[0].push_back(in.code.basis(s, 0));
    // Nothing of the catalog code lies outside S_0.
    double inside = 0;
    for (const auto &v : init[0]) inside += std::norm(v);
    CHECK(std::abs(inside - 1) < 1e-12);
    Hyper h = default_block_hyper();
    h.restarts = 1;
    CodeSubspace code = block_optimize(c, SslpMode::BD, h, &init);
    CHECK(kl_residual(code, paulis_up_to(7, 2)) < 1e-9);
    CHECK((code.projector() - in.code.projector()).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("block optimization from (1,2,2,2,2,3,3)") {
    SslpCandidate c = candidate({1, 2, 2, 2, 2, 3, 3}, 8);
    REQUIRE(c.witness.feasible);
    CodeSubspace code = block_optimize(c, SslpMode::BD, default_block_hyper());
    CHECK(kl_residual(code, paulis_up_to(7, 2)) < 1e-6);
    double lam = signature(code, 3).lambdaStar;
    CHECK(lam >= 0.77);
    CHECK(lam <= 2.2);

    std::set<uint32_t> s0(c.supports.sets[0].begin(), c.supports.sets[0].end());
    for (uint32_t x = 0; x < 128; x++) {
        if (!s0.count(x)) CHECK(std::abs(code.basis(x, 0)) < 1e-10);
        CHECK(std::abs(code.basis(x, 1) - code.basis(x ^ 0x7f, 0)) < 1e-15);
    }
    for (int q = 0; q < 7; q++) {
        PauliString z(7, 0, qubit_bit(7, q));
        CHECK(std::abs(kl_matrix(code, z)(0, 0)) < 1e-6);
    }
    LocalUnitaryLayer zl = diagonal_layer(c.a);
    LogicalAction az = logical_action(code, zl);
    CHECK(az.leakage < 1e-8);
    CHECK(phase_insensitive_error(az.matrix, gate_z(-2 * kPi / 8)) < 1e-8);
    LocalUnitaryLayer xl = LocalUnitaryLayer::uniform(7, named_gate("X"));
    LogicalAction ax = logical_action(code, xl);
    CHECK(phase_insensitive_error(ax.matrix, named_gate("X")) < 1e-12);
    CHECK(transversal_group_of_code(code, {xl, zl}).id == GroupId::binary_dihedral(16));
}

TEST_CASE("general mode finds a C10 code") {
    // Z(2pi/5)^4 Z(4pi/5) Z(6pi/5) on six qubits, logical diag(1, e^{2 pi i 4/5}).
    SslpCandidate c = candidate({1, 1, 1, 1, 2, 3}, 5, SslpMode::General, {0, 4});
    REQUIRE(c.witness.feasible);
    CodeSubspace code = block_optimize(c, SslpMode::General, default_block_hyper());
    CHECK(kl_residual(code, paulis_up_to(6, 2)) < 1e-8);
    LogicalAction a = logical_action(code, diagonal_layer(c.a));
    CHECK(a.leakage < 1e-8);
    CHECK(phase_insensitive_error(a.matrix, gate_z(-2 * kPi / 5)) < 1e-8);
    CHECK(transversal_group_of_code(code, {diagonal_layer(c.a)}).id == GroupId::cyclic(10));
}

TEST_CASE("block optimization preconditions and failures") {
    SslpCandidate bad = candidate({1}, 2);
    CHECK_THROWS_AS(block_optimize(bad, SslpMode::BD, default_block_hyper()), std::invalid_argument);

    // Two qubits cannot host a distance-3 code: nothing converges.
    SslpOptions o;
    o.hyper.restarts = 3;
    o.hyper.iterations = 2000;
    std::vector<StageRecord> log;
    o.sink = [&](const StageRecord &r) { log.push_back(r); };
    auto out = sslp_pipeline(2, 2, 2, o);
    for (const auto &c : out) CHECK_FALSE(c.code.has_value());
    for (const auto &r : log) CHECK(r.verdict != "converged");
    o.sumTarget = kSumAny;
    for (const auto &c : sslp_pipeline(2, 2, 2, o)) CHECK_FALSE(c.code.has_value());
    CHECK(sslp_pipeline(1, 2, 2, o).size() <= 1);
    CHECK_THROWS_AS(sslp_pipeline(7, 3, 8, o), std::invalid_argument);
}

TEST_CASE("pipeline ledger is deterministic and complete") {
    SslpOptions o;
    o.filterOnly = true;
    std::vector<StageRecord> first, second;
    o.sink = [&](const StageRecord &r) { first.push_back(r); };
    sslp_pipeline(7, 2, 8, o);
    o.sink = [&](const StageRecord &r) { second.push_back(r); };
    sslp_pipeline(7, 2, 8, o);
    REQUIRE(first.size() == second.size());
    for (size_t i = 0; i < first.size(); i++) {
        CHECK(first[i].a == second[i].a);
        CHECK(first[i].verdict == second[i].verdict);
    }
    // Every enumerated vector gets exactly one terminal record in filter-only mode.
    CHECK(first.size() == enumerate_angle_vectors(7, 8, SslpMode::BD, kSumPartition).size());
    int feasible = 0;
    for (const auto &r : first) feasible += r.verdict == "feasible";
    CHECK(feasible == 12);
}
