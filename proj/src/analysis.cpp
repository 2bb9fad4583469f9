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

#include "tgq/analysis.h"

#include <cmath>

namespace tgq {

CodeSubspace::CodeSubspace(int n, MatC b) : n(n), basis(std::move(b)) {
    if (n < 1 || n > kMaxQubits || (size_t)basis.rows() != (size_t{1} << n)) {
        throw DimensionError("code basis has wrong row count");
    }
    if (basis.cols() < 1) {
        throw DimensionError("code needs at least one basis vector");
    }
}

CodeSubspace CodeSubspace::from_kets(const std::vector<Ket> &kets) {
    if (kets.empty()) throw DimensionError("no kets");
    MatC b(kets[0].dim(), kets.size());
    for (size_t i = 0; i < kets.size(); i++) {
        if (kets[i].n != kets[0].n) throw DimensionError("kets have different qubit counts");
        b.col(i) = kets[i].amps;
    }
    return CodeSubspace(kets[0].n, std::move(b));
}

double CodeSubspace::orthonormality_error() const {
    MatC g = basis.adjoint() * basis;
    return (g - MatC::Identity(K(), K())).cwiseAbs().maxCoeff();
}

CodeSubspace CodeSubspace::transformed(const LocalUnitaryLayer &layer) const {
    MatC b = basis;
    for (int j = 0; j < K(); j++) {
        VecC v = b.col(j);
        apply_layer_inplace(v, n, layer);
        b.col(j) = v;
    }
    return CodeSubspace(n, std::move(b));
}

std::vector<PauliString> paulis_up_to(int n, int hi, int lo) {
    std::vector<PauliString> out;
    for (int w = std::max(lo, 0); w <= std::min(hi, n); w++) {
        auto ps = enumerate_paulis(n, w);
        out.insert(out.end(), ps.begin(), ps.end());
    }
    return out;
}

namespace {

void check_n(const CodeSubspace &code, const PauliString &e) {
    if (e.n != code.n) throw DimensionError("Pauli string does not match code size");
}

// m_ij = <psi_i|E|psi_j>, using a scratch buffer for E psi_j.
void fill_kl(const CodeSubspace &code, const PauliString &e, VecC &scratch, MatC &m) {
    int K = code.K();
    size_t dim = code.dim();
    m.resize(K, K);
    scratch.resize(dim);
    for (int j = 0; j < K; j++) {
        apply_pauli_into(e, code.basis.col(j).data(), scratch.data(), dim);
        for (int i = 0; i < K; i++) m(i, j) = code.basis.col(i).dot(scratch);
    }
}

}  // namespace

MatC kl_matrix(const CodeSubspace &code, const PauliString &e) {
    check_n(code, e);
    VecC scratch;
    MatC m;
    fill_kl(code, e, scratch, m);
    return m;
}

double kl_term(const MatC &m) {
    double s = 0;
    int K = (int)m.rows();
    for (int i = 0; i < K; i++) {
        for (int j = 0; j < K; j++) {
            if (i != j) s += std::norm(m(i, j)) + std::norm(m(i, i) - m(j, j));
        }
    }
    return s;
}

double kl_residual(const CodeSubspace &code, const std::vector<PauliString> &errors) {
    VecC scratch;
    MatC m;
    double total = 0;
    for (const auto &e : errors) {
        check_n(code, e);
        fill_kl(code, e, scratch, m);
        total += kl_term(m);
    }
    return total;
}

KlReport kl_report(const CodeSubspace &code, const std::vector<PauliString> &errors) {
    KlReport r;
    r.errors = errors;
    VecC scratch;
    MatC m;
    double worst = 0;
    double ls = 0;
    int K = code.K();
    for (size_t k = 0; k < errors.size(); k++) {
        check_n(code, errors[k]);
        fill_kl(code, errors[k], scratch, m);
        double t = kl_term(m);
        r.residual += t;
        if (t > worst) {
            worst = t;
            r.worst = (int)k;
        }
        cplx tr = 0;
        for (int i = 0; i < K; i++) {
            tr += m(i, i);
            for (int j = 0; j < K; j++) {
                if (i == j) continue;
                r.maxOffDiagonal = std::max(r.maxOffDiagonal, std::abs(m(i, j)));
                r.maxDiagonalSpread = std::max(r.maxDiagonalSpread, std::abs(m(i, i) - m(j, j)));
            }
        }
        r.lambdaVector.push_back(tr / (double)K);
        ls += std::norm(tr / (double)K);
        r.matrices.push_back(m);
    }
    r.lambdaStar = std::sqrt(ls);
    return r;
}

std::string DistanceResult::str() const {
    return atLeast ? ">=" + std::to_string(value) : std::to_string(value);
}

DistanceResult distance(const CodeSubspace &code, int maxW, double tol) {
    DistanceResult r;
    maxW = std::min(maxW, code.n);
    if (code.K() > 1) {
        VecC scratch;
        MatC m;
        for (int w = 1; w <= maxW; w++) {
            for (const auto &e : enumerate_paulis(code.n, w)) {
                fill_kl(code, e, scratch, m);
                if (kl_term(m) > tol) {
                    r.value = w;
                    r.witness = e;
                    return r;
                }
            }
        }
    }
    r.value = maxW + 1;
    r.atLeast = true;
    return r;
}

EnumeratorPair enumerators(const CodeSubspace &code) {
    int n = code.n, K = code.K();
    uint32_t dim = (uint32_t)code.dim();
    EnumeratorPair out;
    out.A.assign(n + 1, 0.0);
    out.B.assign(n + 1, 0.0);
    VecC scratch(dim);
    MatC m(K, K);
    for (uint32_t xs = 0; xs < dim; xs++) {
        for (uint32_t zs = 0; zs < dim; zs++) {
            PauliString e(n, xs, zs);
            fill_kl(code, e, scratch, m);
            int w = e.weight();
            out.A[w] += std::norm(m.trace());
            out.B[w] += m.squaredNorm();
        }
    }
    for (int w = 0; w <= n; w++) {
        out.A[w] /= (double)K * K;
        out.B[w] /= (double)K;
    }
    return out;
}

Signature signature(const CodeSubspace &code, int d) {
    Signature s;
    s.errors = paulis_up_to(code.n, d - 1, 1);
    VecC scratch;
    MatC m;
    double t = 0;
    for (const auto &e : s.errors) {
        fill_kl(code, e, scratch, m);
        cplx l = m.trace() / (double)code.K();
        s.lambdaVector.push_back(l);
        t += std::norm(l);
    }
    s.lambdaStar = std::sqrt(t);
    return s;
}

int degeneracy_rank(const CodeSubspace &code, const std::vector<PauliString> &errors,
                    double klTol, double rankTol) {
    std::vector<PauliString> set{PauliString::identity(code.n)};
    for (const auto &e : errors) {
        check_n(code, e);
        if (e != set[0]) set.push_back(e);
    }
    int K = code.K();
    size_t dim = code.dim();
    // images[a] holds E_a psi_k as column k.
    std::vector<MatC> images(set.size(), MatC(dim, K));
    for (size_t a = 0; a < set.size(); a++) {
        for (int k = 0; k < K; k++) {
            apply_pauli_into(set[a], code.basis.col(k).data(), images[a].col(k).data(), dim);
        }
    }
    size_t N = set.size();
    MatC lam(N, N);
    for (size_t a = 0; a < N; a++) {
        for (size_t b = 0; b < N; b++) {
            MatC g = images[a].adjoint() * images[b];
            cplx l = g.trace() / (double)K;
            if ((g - l * MatC::Identity(K, K)).cwiseAbs().maxCoeff() > klTol) {
                throw KLViolated("KL condition fails for " + set[a].str() + " / " + set[b].str());
            }
            lam(a, b) = l;
        }
    }
    Eigen::SelfAdjointEigenSolver<MatC> es(lam);
    int rank = 0;
    for (int i = 0; i < es.eigenvalues().size(); i++) {
        if (std::abs(es.eigenvalues()[i]) > rankTol) rank++;
    }
    return rank;
}

LogicalAction logical_action(const CodeSubspace &code, const LocalUnitaryLayer &layer) {
    int K = code.K();
    LogicalAction out;
    out.matrix.resize(K, K);
    for (int j = 0; j < K; j++) {
        VecC v = code.basis.col(j);
        apply_layer_inplace(v, code.n, layer);
        VecC r = v;
        for (int i = 0; i < K; i++) {
            out.matrix(i, j) = code.basis.col(i).dot(v);
            r -= out.matrix(i, j) * code.basis.col(i);
        }
        out.leakage = std::max(out.leakage, r.norm());
    }
    return out;
}

double phase_insensitive_error(const MatC &m, const MatC &v) {
    cplx t = (v.adjoint() * m).trace();
    cplx ph = std::abs(t) > 1e-12 ? t / std::abs(t) : cplx(1);
    return (m - ph * v).cwiseAbs().maxCoeff();
}

}  // namespace tgq
