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

#include "tgq/core.h"

#include <bit>
#include <cmath>

namespace tgq {

Ket::Ket(int n) : n(n) {
    if (n < 1 || n > kMaxQubits) {
        throw DimensionError("qubit count out of range: " + std::to_string(n));
    }
    amps = VecC::Zero(size_t{1} << n);
}

Ket::Ket(int n, VecC a) : Ket(n) {
    if ((size_t)a.size() != dim()) {
        throw DimensionError("amplitude vector has wrong length");
    }
    amps = std::move(a);
}

Ket Ket::basis(int n, uint32_t index) {
    Ket k(n);
    k.amps[index] = 1;
    return k;
}

Ket Ket::from_bits(const std::string &bits) {
    uint32_t v = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("bad bitstring: " + bits);
        }
        v = (v << 1) | (c == '1');
    }
    return basis((int)bits.size(), v);
}

PauliString PauliString::from_string(const std::string &text) {
    int n = (int)text.size();
    if (n < 1 || n > kMaxQubits) {
        throw DimensionError("bad Pauli string length");
    }
    PauliString p(n, 0, 0);
    for (int q = 0; q < n; q++) {
        uint32_t b = qubit_bit(n, q);
        switch (text[q]) {
            case 'I': case '_': break;
            case 'X': p.xs |= b; break;
            case 'Y': p.xs |= b; p.zs |= b; break;
            case 'Z': p.zs |= b; break;
            default: throw std::invalid_argument("bad Pauli symbol in " + text);
        }
    }
    return p;
}

int PauliString::weight() const { return std::popcount(xs | zs); }
int PauliString::num_y() const { return std::popcount(xs & zs); }

char PauliString::symbol(int q) const {
    uint32_t b = qubit_bit(n, q);
    bool x = xs & b, z = zs & b;
    return x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
}

std::string PauliString::str() const {
    std::string s;
    for (int q = 0; q < n; q++) s += symbol(q);
    return s;
}

cplx PauliString::y_phase() const {
    static const cplx pows[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return pows[num_y() & 3];
}

cplx PauliString::phase(uint32_t b) const {
    cplx p = y_phase();
    return (std::popcount(b & zs) & 1) ? -p : p;
}

LocalUnitaryLayer LocalUnitaryLayer::identity(int n) { return uniform(n, Mat2::Identity()); }

LocalUnitaryLayer LocalUnitaryLayer::uniform(int n, const Mat2 &u) {
    return LocalUnitaryLayer(std::vector<Mat2>(n, u));
}

bool LocalUnitaryLayer::is_unitary(double tol) const {
    for (const auto &f : factors) {
        if (!tgq::is_unitary(f, tol)) return false;
    }
    return true;
}

bool is_unitary(const Mat2 &u, double tol) {
    return (u.adjoint() * u - Mat2::Identity()).cwiseAbs().maxCoeff() < tol;
}

bool is_su2(const Mat2 &u, double tol) {
    return is_unitary(u, tol) && std::abs(u.determinant() - 1.0) < tol;
}

void apply_pauli_into(const PauliString &p, const cplx *in, cplx *out, size_t dim) {
    cplx ph = p.y_phase();
    for (uint32_t b = 0; b < dim; b++) {
        cplx v = in[b] * ph;
        out[b ^ p.xs] = (std::popcount(b & p.zs) & 1) ? -v : v;
    }
}

cplx pauli_expectation(const PauliString &p, const cplx *a, const cplx *b, size_t dim) {
    cplx plus = 0, minus = 0;
    for (uint32_t k = 0; k < dim; k++) {
        cplx t = std::conj(a[k ^ p.xs]) * b[k];
        if (std::popcount(k & p.zs) & 1) {
            minus += t;
        } else {
            plus += t;
        }
    }
    return p.y_phase() * (plus - minus);
}

Ket apply_pauli(const Ket &state, const PauliString &p) {
    if (p.n != state.n) {
        throw DimensionError("Pauli string and ket have different qubit counts");
    }
    Ket out(state.n);
    apply_pauli_into(p, state.amps.data(), out.amps.data(), state.dim());
    return out;
}

void apply_1q_inplace(cplx *amps, int n, int q, const Mat2 &u) {
    size_t dim = size_t{1} << n;
    size_t stride = qubit_bit(n, q);
    cplx u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
    for (size_t base = 0; base < dim; base += 2 * stride) {
        for (size_t k = base; k < base + stride; k++) {
            cplx a0 = amps[k], a1 = amps[k + stride];
            amps[k] = u00 * a0 + u01 * a1;
            amps[k + stride] = u10 * a0 + u11 * a1;
        }
    }
}

void apply_layer_inplace(VecC &amps, int n, const LocalUnitaryLayer &layer) {
    if (layer.n() != n || (size_t)amps.size() != (size_t{1} << n)) {
        throw DimensionError("layer and state have different qubit counts");
    }
    for (int q = 0; q < n; q++) {
        const Mat2 &u = layer.factors[q];
        if (u.isIdentity(0)) continue;
        apply_1q_inplace(amps.data(), n, q, u);
    }
}

Ket apply_layer(const Ket &state, const LocalUnitaryLayer &layer) {
    Ket out = state;
    apply_layer_inplace(out.amps, out.n, layer);
    return out;
}

cplx inner(const Ket &a, const Ket &b) {
    if (a.n != b.n) {
        throw DimensionError("inner product of kets with different qubit counts");
    }
    return a.amps.dot(b.amps);
}

uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    uint64_t r = 1;
    for (int i = 1; i <= k; i++) r = r * (n - k + i) / i;
    return r;
}

Ket dicke(int n, int k) {
    if (k < 0 || k > n) {
        throw std::invalid_argument("dicke: k out of range");
    }
    Ket out(n);
    double a = 1 / std::sqrt((double)binomial(n, k));
    for (uint32_t b = 0; b < out.dim(); b++) {
        if (std::popcount(b) == k) out.amps[b] = a;
    }
    return out;
}

std::vector<PauliString> enumerate_paulis(int n, int w) {
    std::vector<PauliString> out;
    if (w < 0 || w > n) return out;
    out.reserve(binomial(n, w) * (uint64_t)std::pow(3, w));
    std::vector<int> pos(w);
    for (int i = 0; i < w; i++) pos[i] = i;
    while (true) {
        // Letters X<Y<Z over the chosen positions, leftmost position slowest.
        std::vector<int> letter(w, 0);
        while (true) {
            PauliString p(n, 0, 0);
            for (int i = 0; i < w; i++) {
                uint32_t b = qubit_bit(n, pos[i]);
                if (letter[i] != 2) p.xs |= b;
                if (letter[i] != 0) p.zs |= b;
            }
            out.push_back(p);
            int i = w - 1;
            while (i >= 0 && letter[i] == 2) letter[i--] = 0;
            if (i < 0) break;
            letter[i]++;
        }
        int i = w - 1;
        while (i >= 0 && pos[i] == n - w + i) i--;
        if (i < 0) break;
        pos[i]++;
        for (int j = i + 1; j < w; j++) pos[j] = pos[j - 1] + 1;
    }
    return out;
}

Mat2 gate_z(double theta) {
    Mat2 m;
    m << std::polar(1.0, -theta / 2), 0, 0, std::polar(1.0, theta / 2);
    return m;
}

Mat2 gate_ry(double theta) {
    double c = std::cos(theta / 2), s = std::sin(theta / 2);
    Mat2 m;
    m << c, -s, s, c;
    return m;
}

Mat2 gate_rx(double theta) {
    double c = std::cos(theta / 2), s = std::sin(theta / 2);
    Mat2 m;
    m << c, cplx(0, -s), cplx(0, -s), c;
    return m;
}

Mat2 gate_r(int p, int q) {
    if (p * p + q * q != 5) {
        throw std::invalid_argument("R_{p,q} needs p^2 + q^2 = 5");
    }
    Mat2 y, z;
    y << 0, cplx(0, -1), cplx(0, 1), 0;
    z << 1, 0, 0, -1;
    cplx s(0, std::sin(kPi / 5) / std::sqrt(5.0));
    return std::cos(kPi / 5) * Mat2::Identity() + s * ((double)p * y + (double)q * z);
}

Mat2 named_gate(const std::string &name, const std::vector<double> &args) {
    const cplx I(0, 1);
    auto need = [&](size_t k) {
        if (args.size() != k) {
            throw std::invalid_argument("gate " + name + " expects " + std::to_string(k) + " args");
        }
    };
    Mat2 m;
    if (name == "Z" && args.size() == 1) return gate_z(args[0]);
    if (name == "Ry") { need(1); return gate_ry(args[0]); }
    if (name == "Rx") { need(1); return gate_rx(args[0]); }
    if (name == "R") {
        need(2);
        if (args[0] != std::round(args[0]) || args[1] != std::round(args[1])) {
            throw std::invalid_argument("R_{p,q} needs integer p, q");
        }
        return gate_r((int)args[0], (int)args[1]);
    }
    need(0);
    double a = (std::sqrt(5.0) + 1) / 2, b = (std::sqrt(5.0) - 1) / 2;
    double r2 = 1 / std::sqrt(2.0);
    if (name == "I") return Mat2::Identity();
    if (name == "X") { m << 0, 1, 1, 0; return m; }
    if (name == "Y") { m << 0, -I, I, 0; return m; }
    if (name == "Z") { m << 1, 0, 0, -1; return m; }
    if (name == "H") { m << r2, r2, r2, -r2; return m; }
    if (name == "S") { m << 1, 0, 0, I; return m; }
    if (name == "Xh" || name == "Yh" || name == "Zh" || name == "Hh") {
        return -I * named_gate(name.substr(0, 1));
    }
    if (name == "Sh") return gate_z(kPi / 2);
    if (name == "F") {
        m << cplx(1, -1), cplx(-1, -1), cplx(1, -1), cplx(1, 1);
        return m / 2.0;
    }
    if (name == "Phi") {
        m << cplx(a, b), 1, -1, cplx(a, -b);
        return m / 2.0;
    }
    if (name == "Phistar") {
        m << cplx(-b, a), 1, -1, cplx(-b, -a);
        return m / 2.0;
    }
    throw std::invalid_argument("unknown gate: " + name);
}

}  // namespace tgq
