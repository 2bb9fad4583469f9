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

#include "tgq/sslp.h"

#include <map>
#include <random>
#include <sstream>

namespace tgq {

int AngleVector::sum() const {
    int s = 0;
    for (int v : a) s += v;
    return s;
}

std::string AngleVector::str() const {
    std::ostringstream o;
    o << '(';
    for (size_t i = 0; i < a.size(); i++) o << (i ? "," : "") << a[i];
    o << ')';
    return o.str();
}

namespace {

void enum_rec(int n, int m, SslpMode mode, int sumTarget, std::vector<int> &cur, int sum,
              std::vector<AngleVector> &out) {
    int pos = (int)cur.size();
    if (pos == n) {
        if (mode == SslpMode::BD && (sum + 1) % m != 0) return;
        if (sumTarget >= 0 && sum != sumTarget) return;
        out.push_back({m, cur});
        return;
    }
    int lo = pos ? cur.back() : 0;
    for (int v = lo; v < m; v++) {
        // Remaining entries are at least v.
        if (sumTarget >= 0 && sum + v * (n - pos) > sumTarget) break;
        cur.push_back(v);
        enum_rec(n, m, mode, sumTarget, cur, sum + v, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<AngleVector> enumerate_angle_vectors(int n, int m, SslpMode mode, int sumTarget) {
    if (n < 1 || n > kMaxQubits) throw std::invalid_argument("n out of range");
    if (m < 2) throw std::invalid_argument("m must be at least 2");
    if (sumTarget == kSumPartition) sumTarget = 2 * m - 1;
    std::vector<AngleVector> out;
    std::vector<int> cur;
    enum_rec(n, m, mode, sumTarget, cur, 0, out);
    return out;
}

std::string bits_of(uint32_t s, int n) {
    std::string out(n, '0');
    for (int q = 0; q < n; q++)
        if (s & qubit_bit(n, q)) out[q] = '1';
    return out;
}

SupportSets support_sets(const AngleVector &a, const std::vector<int> &b) {
    int n = a.n(), m = a.m;
    if (n < 1 || n > kMaxQubits) throw std::invalid_argument("angle vector length out of range");
    for (size_t k = 0; k < b.size(); k++)
        for (size_t l = 0; l < k; l++)
            if (((b[k] - b[l]) % m + m) % m == 0) throw std::invalid_argument("b values must be distinct mod m");
    SupportSets s;
    s.n = n;
    s.sets.resize(b.size());
    for (uint32_t x = 0; x < (uint32_t{1} << n); x++) {
        int w = 0;
        for (int q = 0; q < n; q++)
            if (x & qubit_bit(n, q)) w += a.a[q];
        w %= m;
        for (size_t k = 0; k < b.size(); k++) {
            if (w == ((b[k] % m) + m) % m) s.sets[k].push_back(x);
        }
    }
    for (size_t k = 0; k < b.size(); k++)
        if (s.sets[k].empty()) throw EmptySupport((int)k);
    return s;
}

namespace {

int sign_bit(uint32_t s, int n, int q) { return (s & qubit_bit(n, q)) ? -1 : 1; }

struct System {
    std::vector<std::vector<long>> A;
    std::vector<long> b;
    std::vector<std::pair<int, int>> var;  // (k, index in S_k)
};

System build_system(const SupportSets &s, SslpMode mode) {
    int n = s.n;
    System sys;
    int blocks = mode == SslpMode::BD ? 1 : (int)s.sets.size();
    for (int k = 0; k < blocks; k++)
        for (size_t i = 0; i < s.sets[k].size(); i++) sys.var.push_back({k, (int)i});
    size_t nv = sys.var.size();
    auto row = [&](auto coef) {
        std::vector<long> r(nv);
        for (size_t v = 0; v < nv; v++) r[v] = coef(sys.var[v].first, s.sets[sys.var[v].first][sys.var[v].second]);
        sys.A.push_back(std::move(r));
        sys.b.push_back(0);
    };
    if (mode == SslpMode::BD) {
        for (int i = 0; i < n; i++) row([&](int, uint32_t x) { return (long)sign_bit(x, n, i); });
    } else {
        // Block k minus block 0 eliminates alpha_i and beta_ij.
        for (int k = 1; k < blocks; k++) {
            for (int i = 0; i < n; i++)
                row([&](int kk, uint32_t x) {
                    return kk == k ? (long)sign_bit(x, n, i) : kk == 0 ? -(long)sign_bit(x, n, i) : 0L;
                });
            for (int i = 0; i < n; i++)
                for (int j = i + 1; j < n; j++)
                    row([&](int kk, uint32_t x) {
                        long v = sign_bit(x, n, i) * sign_bit(x, n, j);
                        return kk == k ? v : kk == 0 ? -v : 0L;
                    });
        }
    }
    for (int k = 0; k < blocks; k++) {
        row([&](int kk, uint32_t) { return kk == k ? 1L : 0L; });
        sys.b.back() = 1;
    }
    return sys;
}

void check_mode(const SupportSets &s, SslpMode mode) {
    if (s.sets.empty()) throw std::invalid_argument("no support sets");
    for (const auto &set : s.sets)
        if (set.empty()) throw std::invalid_argument("empty support set");
    if (mode == SslpMode::BD && s.sets.size() != 2) throw std::invalid_argument("BD mode needs K = 2");
}

}  // namespace

LpWitness lp_filter(const AngleVector &a, const SupportSets &s, SslpMode mode) {
    (void)a;
    check_mode(s, mode);
    System sys = build_system(s, mode);
    Eigen::MatrixXd A(sys.A.size(), sys.var.size());
    Eigen::VectorXd b(sys.b.size());
    for (size_t i = 0; i < sys.A.size(); i++) {
        b(i) = (double)sys.b[i];
        for (size_t j = 0; j < sys.var.size(); j++) A(i, j) = (double)sys.A[i][j];
    }
    LpResult r = lp_feasible(A, b);
    LpWitness w;
    w.feasible = r.feasible;
    w.residual = r.residual;
    if (!r.feasible) return w;
    int n = s.n;
    w.x.resize(s.sets.size());
    for (size_t k = 0; k < s.sets.size(); k++) w.x[k].assign(s.sets[k].size(), 0.0);
    for (size_t v = 0; v < sys.var.size(); v++) w.x[sys.var[v].first][sys.var[v].second] = r.x[v];
    if (mode == SslpMode::BD) {
        uint32_t all = (uint32_t{1} << n) - 1;
        std::map<uint32_t, int> pos;
        for (size_t i = 0; i < s.sets[1].size(); i++) pos[s.sets[1][i]] = (int)i;
        for (size_t i = 0; i < s.sets[0].size(); i++) {
            auto it = pos.find(s.sets[0][i] ^ all);
            if (it == pos.end()) throw std::logic_error("BD supports are not complementary");
            w.x[1][it->second] = w.x[0][i];
        }
    }
    w.alpha.assign(n, 0.0);
    for (int i = 0; i < n; i++) {
        for (size_t t = 0; t < s.sets[0].size(); t++) w.alpha[i] += sign_bit(s.sets[0][t], n, i) * w.x[0][t];
        for (int j = i + 1; j < n; j++) {
            double acc = 0;
            for (size_t t = 0; t < s.sets[0].size(); t++)
                acc += sign_bit(s.sets[0][t], n, i) * sign_bit(s.sets[0][t], n, j) * w.x[0][t];
            w.beta.push_back(acc);
        }
    }
    return w;
}

bool lp_filter_exact(const AngleVector &a, const SupportSets &s, SslpMode mode) {
    (void)a;
    check_mode(s, mode);
    System sys = build_system(s, mode);
    return lp_feasible_exact(sys.A, sys.b).feasible;
}

Hyper default_block_hyper() {
    Hyper h;
    h.restarts = 50;
    h.threshold = 1e-8;
    h.seed = 1;
    return h;
}

LocalUnitaryLayer diagonal_layer(const AngleVector &a) {
    std::vector<Mat2> f;
    for (int v : a.a) f.push_back(gate_z(2 * kPi * v / a.m));
    return LocalUnitaryLayer(std::move(f));
}

CodeSubspace block_optimize(const SslpCandidate &c, SslpMode mode, const Hyper &hyper,
                            const std::vector<std::vector<cplx>> *init) {
    if (!c.witness.feasible) throw std::invalid_argument("block_optimize needs a feasible LP witness");
    const SupportSets &s = c.supports;
    check_mode(s, mode);
    int n = s.n;
    size_t dim = size_t{1} << n;
    int K = (int)s.sets.size();
    uint32_t all = (uint32_t)dim - 1;
    int blocks = mode == SslpMode::BD ? 1 : K;
    std::vector<int> offset(blocks + 1, 0);
    for (int k = 0; k < blocks; k++) offset[k + 1] = offset[k] + (int)s.sets[k].size();
    int nc = offset[blocks];
    auto errors = paulis_up_to(n, 2, 1);

    auto to_basis = [&](const Eigen::VectorXd &x, std::vector<double> &norms) {
        MatC b = MatC::Zero(dim, K);
        norms.assign(blocks, 0.0);
        for (int k = 0; k < blocks; k++) {
            double nn = 0;
            for (int i = offset[k]; i < offset[k + 1]; i++) nn += x(i) * x(i) + x(nc + i) * x(nc + i);
            norms[k] = std::sqrt(nn);
            for (int i = offset[k]; i < offset[k + 1]; i++) {
                cplx u = cplx(x(i), x(nc + i)) / norms[k];
                uint32_t st = s.sets[k][i - offset[k]];
                b(st, k) = u;
                if (mode == SslpMode::BD) b(st ^ all, 1) = u;
            }
        }
        return b;
    };

    auto fg = [&](const Eigen::VectorXd &x, Eigen::VectorXd &g) {
        std::vector<double> norms;
        MatC b = to_basis(x, norms);
        for (double nn : norms)
            if (!(nn > 1e-150)) return std::numeric_limits<double>::infinity();
        MatC gb = MatC::Zero(dim, K);
        double loss = loss_kl(b, n, errors, &gb);
        g.setZero(x.size());
        for (int k = 0; k < blocks; k++) {
            int len = offset[k + 1] - offset[k];
            VecC gu(len), u(len);
            for (int i = 0; i < len; i++) {
                uint32_t st = s.sets[k][i];
                gu(i) = gb(st, k);
                if (mode == SslpMode::BD) gu(i) += gb(st ^ all, 1);
                u(i) = b(st, k);
            }
            double proj = u.dot(gu).real();
            VecC gc = (gu - proj * u) / norms[k];
            for (int i = 0; i < len; i++) {
                g(offset[k] + i) = gc(i).real();
                g(nc + offset[k] + i) = gc(i).imag();
            }
        }
        return loss;
    };

    auto start = [&](int r) {
        Eigen::VectorXd x(2 * nc);
        if (r == 0 && init) {
            for (int k = 0; k < blocks; k++)
                for (int i = offset[k]; i < offset[k + 1]; i++) {
                    cplx v = (*init)[k][i - offset[k]];
                    x(i) = v.real();
                    x(nc + i) = v.imag();
                }
            return x;
        }
        std::seed_seq seq{(uint32_t)hyper.seed, (uint32_t)(hyper.seed >> 32), (uint32_t)r, 0x551bu};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> angle(-kPi, kPi);
        for (int k = 0; k < blocks; k++)
            for (int i = offset[k]; i < offset[k + 1]; i++) {
                double amp = std::sqrt(std::max(0.0, c.witness.x[k][i - offset[k]]));
                double ph = angle(rng);
                x(i) = amp * std::cos(ph);
                x(nc + i) = amp * std::sin(ph);
            }
        return x;
    };

    AdamOutcome best = adam_restarts(fg, start, hyper);
    if (best.restart < 0) throw NonConverged(std::numeric_limits<double>::infinity());
    std::vector<double> norms;
    MatC b = to_basis(best.x, norms);
    CodeSubspace code(n, b);
    double res = kl_residual(code, errors);
    if (!(res < hyper.threshold)) throw NonConverged(res);
    return code;
}

namespace {

std::string fmt(double v) {
    std::ostringstream o;
    o.precision(6);
    o << v;
    return o.str();
}

}  // namespace

std::vector<SslpCandidate> sslp_pipeline(int n, int K, int m, const SslpOptions &opt) {
    std::vector<SslpCandidate> out;
    auto emit = [&](const std::string &stage, const AngleVector &a, const std::string &verdict,
                    const std::string &detail) {
        if (opt.sink) opt.sink({stage, a, verdict, detail});
    };
    std::vector<int> b = opt.b;
    if (b.empty()) {
        b = {0};
        if (K >= 2) b.push_back(m - 1);
    }
    if ((int)b.size() != K) throw std::invalid_argument("need one b value per logical state");
    if (opt.mode == SslpMode::BD && (K != 2 || ((b[1] % m) + m) % m != m - 1 || b[0] % m != 0))
        throw std::invalid_argument("BD mode requires K = 2 and b = (0, m-1)");
    int sumTarget = opt.sumTarget;
    if (sumTarget == kSumPartition && opt.mode == SslpMode::General) sumTarget = kSumAny;
    for (const AngleVector &a : enumerate_angle_vectors(n, m, opt.mode, sumTarget)) {
        SslpCandidate c;
        c.a = a;
        c.b = b;
        if (((b[0] % m) + m) % m != 0) {
            emit("support", a, "rejected", "0^n not in S_0");
            continue;
        }
        try {
            c.supports = support_sets(a, b);
        } catch (const EmptySupport &e) {
            emit("support", a, "rejected", e.what());
            continue;
        }
        c.witness = lp_filter(a, c.supports, opt.mode);
        if (!c.witness.feasible) {
            emit("lp", a, "infeasible", "");
            continue;
        }
        emit("lp", a, "feasible", "|S_0| = " + std::to_string(c.supports.sets[0].size()));
        if (!opt.filterOnly) {
            Hyper h = opt.hyper;
            try {
                CodeSubspace code = block_optimize(c, opt.mode, h);
                c.klResidual = kl_residual(code, paulis_up_to(n, 2, 1));
                double lam = signature(code, 3).lambdaStar;
                c.code = std::move(code);
                emit("optimize", a, "converged", "kl " + fmt(c.klResidual) + ", lambda* " + fmt(lam));
            } catch (const NonConverged &e) {
                c.klResidual = e.residual;
                emit("optimize", a, "nonconverged", "best kl " + fmt(e.residual));
            }
        }
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace tgq
