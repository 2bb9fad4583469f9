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

#ifndef TGQ_CORE_H
#define TGQ_CORE_H

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tgq {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using VecC = Eigen::VectorXcd;
using MatC = Eigen::MatrixXcd;

constexpr int kMaxQubits = 10;
constexpr double kPi = 3.14159265358979323846;

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Dense n-qubit state. Qubit 0 is the leftmost ket symbol and the most
/// significant bit of the basis index.
struct Ket {
    int n = 0;
    VecC amps;

    Ket() = default;
    explicit Ket(int n);
    Ket(int n, VecC amps);

    static Ket basis(int n, uint32_t index);
    static Ket from_bits(const std::string &bits);

    size_t dim() const { return amps.size(); }
    double norm() const { return amps.norm(); }
    bool is_normalized(double tol = 1e-9) const { return std::abs(norm() - 1) < tol; }
};

inline uint32_t qubit_bit(int n, int q) { return uint32_t{1} << (n - 1 - q); }

/// Pauli string stored as X and Z bitmasks in the same big-endian layout as Ket.
/// Y on a qubit sets both bits.
struct PauliString {
    int n = 0;
    uint32_t xs = 0;
    uint32_t zs = 0;

    PauliString() = default;
    PauliString(int n, uint32_t xs, uint32_t zs) : n(n), xs(xs), zs(zs) {}
    static PauliString identity(int n) { return {n, 0, 0}; }
    static PauliString from_string(const std::string &text);

    int weight() const;
    int num_y() const;
    char symbol(int q) const;
    std::string str() const;
    bool operator==(const PauliString &o) const { return n == o.n && xs == o.xs && zs == o.zs; }
    bool operator!=(const PauliString &o) const { return !(*this == o); }

    // E|b> = phase(b) |b ^ xs>.
    cplx phase(uint32_t b) const;
    cplx y_phase() const;
};

struct LocalUnitaryLayer {
    std::vector<Mat2> factors;

    LocalUnitaryLayer() = default;
    explicit LocalUnitaryLayer(std::vector<Mat2> f) : factors(std::move(f)) {}
    static LocalUnitaryLayer identity(int n);
    static LocalUnitaryLayer uniform(int n, const Mat2 &u);
    int n() const { return (int)factors.size(); }
    bool is_unitary(double tol = 1e-9) const;
};

bool is_unitary(const Mat2 &u, double tol = 1e-9);
bool is_su2(const Mat2 &u, double tol = 1e-9);

Ket apply_pauli(const Ket &state, const PauliString &p);
// Raw vector variants, used in hot loops.
void apply_pauli_into(const PauliString &p, const cplx *in, cplx *out, size_t dim);
// <a|E|b> without materializing E|b>.
cplx pauli_expectation(const PauliString &p, const cplx *a, const cplx *b, size_t dim);

Ket apply_layer(const Ket &state, const LocalUnitaryLayer &layer);
void apply_1q_inplace(cplx *amps, int n, int q, const Mat2 &u);
void apply_layer_inplace(VecC &amps, int n, const LocalUnitaryLayer &layer);

cplx inner(const Ket &a, const Ket &b);

Ket dicke(int n, int k);

std::vector<PauliString> enumerate_paulis(int n, int w);
uint64_t binomial(int n, int k);

Mat2 gate_z(double theta);
Mat2 gate_ry(double theta);
Mat2 gate_rx(double theta);
Mat2 gate_r(int p, int q);
/// Builds a named single-qubit gate. Det-1 names: Xh Yh Zh Hh Sh F Phi Phistar Z Ry Rx R.
/// Plain X Y Z H S I are the literal matrices.
Mat2 named_gate(const std::string &name, const std::vector<double> &args = {});

}  // namespace tgq

#endif
