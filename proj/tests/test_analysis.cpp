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

#include <cmath>
#include <random>

#include "doctest.h"
#include "tgq/analysis.h"
#include "tgq/catalog.h"

using namespace tgq;

namespace {

CodeSubspace cat_code(const std::string &id, const ojson &p = ojson::object()) {
    return Catalog::builtin().instantiate(id, p).code;
}

Ket from_terms(int n, const std::vector<std::pair<std::string, double>> &terms) {
    Ket k(n);
    for (const auto &[bits, c] : terms) k.amps += c * Ket::from_bits(bits).amps;
    k.amps /= k.amps.norm();
    return k;
}

MatC dense_pauli(const PauliString &p) {
    MatC out = MatC::Identity(1, 1);
    for (int q = 0; q < p.n; q++) {
        char c = p.symbol(q);
        Mat2 f = named_gate(c == 'X' || c == 'Y' || c == 'Z' ? std::string(1, c) : "I");
        MatC next(out.rows() * 2, out.cols() * 2);
        for (int i = 0; i < out.rows(); i++)
            for (int j = 0; j < out.cols(); j++) next.block(2 * i, 2 * j, 2, 2) = out(i, j) * f;
        out = next;
    }
    return out;
}

// Trace formulas on the dense projector.
EnumeratorPair dense_enumerators(const CodeSubspace &c) {
    MatC proj = c.projector();
    double K = c.K();
    EnumeratorPair e{std::vector<double>(c.n + 1, 0), std::vector<double>(c.n + 1, 0)};
    for (uint32_t xs = 0; xs < (1u << c.n); xs++) {
        for (uint32_t zs = 0; zs < (1u << c.n); zs++) {
            PauliString p(c.n, xs, zs);
            MatC E = dense_pauli(p);
            cplx t = (E * proj).trace();
            e.A[p.weight()] += std::norm(t) / (K * K);
            e.B[p.weight()] += (E * proj * E.adjoint() * proj).trace().real() / K;
        }
    }
    return e;
}

Mat2 random_su2(std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Eigen::Vector4d q(g(rng), g(rng), g(rng), g(rng));
    q.normalize();
    Mat2 u;
    u << cplx(q(0), q(3)), cplx(q(2), q(1)), cplx(-q(2), q(1)), cplx(q(0), -q(3));
    return u;
}

LocalUnitaryLayer random_layer(int n, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> ph(0, 2 * kPi);
    std::vector<Mat2> f;
    for (int q = 0; q < n; q++) f.push_back(std::exp(cplx(0, ph(rng))) * random_su2(rng));
    return LocalUnitaryLayer(f);
}

double max_diff(const std::vector<double> &a, const std::vector<double> &b) {
    REQUIRE(a.size() == b.size());
    double m = 0;
    for (size_t i = 0; i < a.size(); i++) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("kl_matrix examples") {
    CodeSubspace five = cat_code("five23");
    MatC id = kl_matrix(five, PauliString::identity(5));
    CHECK((id - MatC::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(kl_matrix(five, PauliString::from_string("ZIIII")).cwiseAbs().maxCoeff() < 1e-12);

    CodeSubspace l34 = cat_code("seven23-2i-l34");
    MatC m = kl_matrix(l34, PauliString::from_string("IIIIIZZ"));
    CHECK((m + 0.5 * MatC::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-9);

    CHECK_THROWS_AS(kl_matrix(five, PauliString::from_string("ZII")), DimensionError);
}

TEST_CASE("kl_residual examples") {
    CodeSubspace c10 = cat_code("six23-c10");
    CHECK(kl_residual(c10, {}) == 0);
    CHECK(kl_residual(c10, paulis_up_to(6, 2)) < 1e-9);

    // span{|S1>+|S2>, X^7(|S1>+|S2>)}: the 2I structure without distance 3.
    Ket s12 = from_terms(7, {{"0010011", -1}, {"0011100", 1}, {"0100101", 1}, {"0101010", -1},
                             {"1000110", 1},  {"1001001", -1}, {"0010101", 1}, {"0011010", -1},
                             {"0100110", 1},  {"0101001", -1}, {"1000011", 1}, {"1001100", -1}});
    Ket flipped = apply_pauli(s12, PauliString::from_string("XXXXXXX"));
    CodeSubspace bad = CodeSubspace::from_kets({s12, flipped});
    REQUIRE(bad.is_orthonormal());
    CHECK(kl_residual(bad, paulis_up_to(7, 2)) > 1e-3);
}

TEST_CASE("kl_residual sums over any partition of the error set") {
    // Rotated so the terms are not all zero.
    CodeSubspace t = cat_code("seven23-bd16").transformed(LocalUnitaryLayer::uniform(7, named_gate("H")));
    auto errs = paulis_up_to(7, 3);
    double whole = kl_residual(t, errs);
    double parts = 0;
    for (size_t s = 0; s < errs.size(); s += 97) {
        std::vector<PauliString> chunk(errs.begin() + s, errs.begin() + std::min(errs.size(), s + 97));
        parts += kl_residual(t, chunk);
    }
    CHECK(std::abs(whole - parts) < 1e-12 * std::max(1.0, whole));
}

TEST_CASE("zero kl_residual means scalar kl matrices") {
    for (const char *id : {"five23", "six23-c10", "seven23-cyclic", "seven23-bd36"}) {
        CodeSubspace c = cat_code(id);
        auto errs = paulis_up_to(c.n, 2);
        REQUIRE(kl_residual(c, errs) < 1e-9);
        for (const auto &e : errs) {
            MatC m = kl_matrix(c, e);
            cplx l = m.trace() / (double)c.K();
            CHECK((m - l * MatC::Identity(c.K(), c.K())).cwiseAbs().maxCoeff() < 1e-8);
        }
    }
}

TEST_CASE("distance examples") {
    CHECK(distance(cat_code("five23"), 4).value == 3);
    CHECK_FALSE(distance(cat_code("five23"), 4).atLeast);
    CHECK(distance(cat_code("seven23-cyclic", {{"lam", 0}}), 4).value == 3);

    CodeSubspace single = CodeSubspace::from_kets({Ket::basis(3, 0)});
    DistanceResult d = distance(single, 1);
    CHECK(d.atLeast);
    CHECK(d.value == 2);

    // |000>, |100>: Z on qubit 0 separates them.
    CodeSubspace pair = CodeSubspace::from_kets({Ket::basis(3, 0), Ket::basis(3, 4)});
    DistanceResult dp = distance(pair, 3);
    CHECK(dp.value == 1);
    REQUIRE(dp.witness.has_value());
    CHECK(dp.witness->weight() == 1);
}

TEST_CASE("distance agrees with the Shor-Laflamme criterion") {
    for (const auto &e : Catalog::builtin().entries()) {
        if (e.n > 7) continue;
        CodeSubspace c = cat_code(e.id);
        EnumeratorPair en = enumerators(c);
        DistanceResult d = distance(c, 3);
        CHECK_MESSAGE(d.value == 3, e.id);
        for (int j = 1; j < 3; j++) CHECK_MESSAGE(std::abs(en.A[j] - en.B[j]) < 1e-9, e.id);
        // A weight-3 violation is witnessed directly.
        REQUIRE(d.witness.has_value());
        CHECK(kl_residual(c, {*d.witness}) > 1e-9);
    }
}

TEST_CASE("enumerators match the dense trace formulas") {
    std::mt19937_64 rng(7);
    std::vector<CodeSubspace> codes = {cat_code("five23"), cat_code("six23-c10"),
                                       cat_code("six23-so5-c4")};
    // A random K=2 subspace on 4 qubits.
    std::normal_distribution<double> g;
    MatC th(16, 2);
    for (int i = 0; i < 16; i++)
        for (int j = 0; j < 2; j++) th(i, j) = cplx(g(rng), g(rng));
    Eigen::HouseholderQR<MatC> qr(th);
    codes.push_back(CodeSubspace(4, qr.householderQ() * MatC::Identity(16, 2)));
    for (const auto &c : codes) {
        EnumeratorPair fast = enumerators(c);
        EnumeratorPair ref = dense_enumerators(c);
        CHECK(max_diff(fast.A, ref.A) < 1e-9);
        CHECK(max_diff(fast.B, ref.B) < 1e-9);
        CHECK(std::abs(fast.A[0] - 1) < 1e-12);
        CHECK(std::abs(fast.B[0] - 1) < 1e-12);
        for (int j = 0; j <= c.n; j++) {
            CHECK(fast.A[j] >= -1e-9);
            CHECK(fast.B[j] >= fast.A[j] - 1e-9);
        }
    }
}

TEST_CASE("enumerator examples") {
    EnumeratorPair c10 = enumerators(cat_code("six23-c10"));
    CHECK(max_diff(c10.A, {1, 0, 0.84, 0, 11.64, 15.36, 3.16}) < 1e-6);
    EnumeratorPair st = enumerators(cat_code("seven23-cyclic", {{"lam", 0}}));
    CHECK(max_diff(st.A, {1, 0, 0, 0, 21, 0, 42, 0}) < 1e-6);
    CodeSubspace prod = CodeSubspace::from_kets({Ket::basis(4, 0)});
    EnumeratorPair p = enumerators(prod);
    CHECK(max_diff(p.A, p.B) < 1e-12);
}

TEST_CASE("cyclic family sits on the 21 - 2 lambda^2 line") {
    for (double lam : {0.0, 0.4, 1.0, 1.9, std::sqrt(7.0)}) {
        CodeSubspace c = cat_code("seven23-cyclic", {{"lam", lam}});
        Signature s = signature(c, 3);
        double l2 = s.lambdaStar * s.lambdaStar;
        CHECK(std::abs(l2 - lam * lam) < 1e-9);
        EnumeratorPair e = enumerators(c);
        CHECK(max_diff(e.A, {1, 0, l2, 0, 21 - 2 * l2, 0, 42 + l2, 0}) < 1e-6);
    }
}

TEST_CASE("signature examples and the second computation path") {
    CHECK(signature(cat_code("seven23-cyclic", {{"lam", 0}}), 3).lambdaStar < 1e-9);
    CHECK(std::abs(signature(cat_code("seven23-bd16"), 3).lambdaStar - std::sqrt(21.0 / 8)) < 1e-9);
    CHECK(std::abs(signature(cat_code("six23-c10"), 3).lambdaStar - std::sqrt(0.84)) < 1e-9);
    CHECK(std::abs(std::pow(signature(cat_code("six23-from-523"), 3).lambdaStar, 2) - 1) < 1e-9);
    CHECK(signature(cat_code("five23"), 3).lambdaStar < 1e-9);

    for (const auto &e : Catalog::builtin().entries()) {
        if (e.n > 7) continue;
        CodeSubspace c = cat_code(e.id);
        Signature s = signature(c, 3);
        EnumeratorPair en = enumerators(c);
        CHECK_MESSAGE(std::abs(s.lambdaStar * s.lambdaStar - (en.A[1] + en.A[2])) < 1e-9, e.id);
        double norm = 0;
        for (cplx l : s.lambdaVector) norm += std::norm(l);
        CHECK(std::abs(std::sqrt(norm) - s.lambdaStar) < 1e-12);
    }
}

TEST_CASE("degeneracy rank") {
    CHECK(degeneracy_rank(cat_code("five23"), paulis_up_to(5, 1)) == 16);
    CodeSubspace dfs = CodeSubspace::from_kets({Ket::from_bits("01"), Ket::from_bits("10")});
    CHECK(degeneracy_rank(dfs, {PauliString::from_string("ZZ")}) == 1);
    CHECK(degeneracy_rank(dfs, {}) == 1);
    CHECK_THROWS_AS(degeneracy_rank(dfs, {PauliString::from_string("ZI")}), KLViolated);
}

TEST_CASE("logical action examples") {
    CodeSubspace c10 = cat_code("six23-c10");
    LogicalAction id = logical_action(c10, LocalUnitaryLayer::identity(6));
    CHECK((id.matrix - MatC::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(id.leakage < 1e-12);

    double t = 2 * kPi / 5;
    LocalUnitaryLayer zl({gate_z(t), gate_z(t), gate_z(t), gate_z(t), gate_z(2 * t), gate_z(3 * t)});
    LogicalAction a = logical_action(c10, zl);
    CHECK(a.leakage < 1e-9);
    CHECK(phase_insensitive_error(a.matrix, gate_z(-t)) < 1e-9);

    Instance bd36 = Catalog::builtin().instantiate("seven23-bd36");
    for (const auto &l : bd36.layers) {
        if (l.name != "Z") continue;
        LogicalAction z = logical_action(bd36.code, l.layer);
        CHECK(z.leakage < 1e-9);
        CHECK(phase_insensitive_error(z.matrix, gate_z(-kPi / 9)) < 1e-9);
    }

    // A layer that moves the code off itself.
    LogicalAction leak = logical_action(c10, LocalUnitaryLayer::uniform(6, named_gate("H")));
    CHECK(leak.leakage > 1e-3);
}

TEST_CASE("enumerators are local-unitary invariant") {
    std::mt19937_64 rng(2025);
    for (const char *id : {"six23-c10", "seven23-bd16", "seven23-2i-l34"}) {
        CodeSubspace c = cat_code(id);
        EnumeratorPair base = enumerators(c);
        for (int r = 0; r < 3; r++) {
            CodeSubspace t = c.transformed(random_layer(c.n, rng));
            EnumeratorPair e = enumerators(t);
            CHECK(max_diff(base.A, e.A) < 1e-8);
            CHECK(max_diff(base.B, e.B) < 1e-8);
        }
    }
}

TEST_CASE("code subspace basics") {
    CodeSubspace c = cat_code("five23");
    CHECK(c.orthonormality_error() < 1e-12);
    CHECK((c.projector() * c.projector() - c.projector()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(paulis_up_to(5, 2).size() == 15 + 90);
    CHECK(paulis_up_to(5, 2, 2).size() == 90);
    CHECK_THROWS(CodeSubspace(3, MatC::Identity(4, 2)));
}
