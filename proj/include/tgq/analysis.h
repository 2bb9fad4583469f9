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

#ifndef TGQ_ANALYSIS_H
#define TGQ_ANALYSIS_H

#include <optional>
#include <string>
#include <vector>

#include "tgq/core.h"

namespace tgq {

/// K orthonormal kets on n qubits, stored as the columns of a 2^n x K matrix.
struct CodeSubspace {
    int n = 0;
    MatC basis;

    CodeSubspace() = default;
    CodeSubspace(int n, MatC basis);
    static CodeSubspace from_kets(const std::vector<Ket> &kets);

    int K() const { return (int)basis.cols(); }
    size_t dim() const { return basis.rows(); }
    Ket ket(int i) const { return Ket(n, basis.col(i)); }
    double orthonormality_error() const;
    bool is_orthonormal(double tol = 1e-9) const { return orthonormality_error() < tol; }
    CodeSubspace transformed(const LocalUnitaryLayer &layer) const;
    MatC projector() const { return basis * basis.adjoint(); }
};

struct KLViolated : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// All Paulis with weight in [lo, hi], in enumerate_paulis order.
std::vector<PauliString> paulis_up_to(int n, int hi, int lo = 1);

MatC kl_matrix(const CodeSubspace &code, const PauliString &e);

double kl_term(const MatC &m);
double kl_residual(const CodeSubspace &code, const std::vector<PauliString> &errors);

struct KlReport {
    std::vector<PauliString> errors;
    std::vector<MatC> matrices;
    double maxOffDiagonal = 0;
    double maxDiagonalSpread = 0;
    double residual = 0;
    std::vector<cplx> lambdaVector;
    double lambdaStar = 0;
    /// Index of the error with the largest violation, or -1.
    int worst = -1;
};
KlReport kl_report(const CodeSubspace &code, const std::vector<PauliString> &errors);

struct DistanceResult {
    int value = 0;
    bool atLeast = false;
    std::optional<PauliString> witness;
    std::string str() const;
};
/// Smallest weight w <= maxW carrying an undetectable Pauli.
DistanceResult distance(const CodeSubspace &code, int maxW, double tol = 1e-9);

struct EnumeratorPair {
    std::vector<double> A;
    std::vector<double> B;
};
EnumeratorPair enumerators(const CodeSubspace &code);

struct Signature {
    std::vector<PauliString> errors;
    std::vector<cplx> lambdaVector;
    double lambdaStar = 0;
};
Signature signature(const CodeSubspace &code, int d);

/// Rank of the lambda matrix over {I} plus the given errors.
int degeneracy_rank(const CodeSubspace &code, const std::vector<PauliString> &errors,
                    double klTol = 1e-8, double rankTol = 1e-8);

struct LogicalAction {
    MatC matrix;
    double leakage = 0;
};
LogicalAction logical_action(const CodeSubspace &code, const LocalUnitaryLayer &layer);

/// max |M - phase * V| with the phase chosen from tr(V^dag M).
double phase_insensitive_error(const MatC &m, const MatC &v);

}  // namespace tgq

#endif
