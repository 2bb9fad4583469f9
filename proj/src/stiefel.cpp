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

#include "tgq/stiefel.h"

#include <random>

namespace tgq {

MatC polar_retract(const MatC &theta, double eps) {
    int K = (int)theta.cols();
    if (theta.rows() < K) throw DimensionError("theta has fewer rows than columns");
    Eigen::JacobiSVD<MatC> svd(theta);
    if (K > 0 && svd.singularValues()(K - 1) < 1e-10) throw RankDeficient("theta is rank deficient");
    MatC s = theta.adjoint() * theta + eps * MatC::Identity(K, K);
    Eigen::SelfAdjointEigenSolver<MatC> es(s);
    Eigen::VectorXd isq = es.eigenvalues().cwiseSqrt().cwiseInverse();
    MatC m = es.eigenvectors() * isq.asDiagonal() * es.eigenvectors().adjoint();
    return theta * m;
}

MatC polar_retract_backward(const MatC &theta, const MatC &g, double eps) {
    int K = (int)theta.cols();
    MatC s = theta.adjoint() * theta + eps * MatC::Identity(K, K);
    Eigen::SelfAdjointEigenSolver<MatC> es(s);
    const Eigen::VectorXd &ev = es.eigenvalues();
    const MatC &v = es.eigenvectors();
    Eigen::VectorXd isq = ev.cwiseSqrt().cwiseInverse();
    MatC m = v * isq.asDiagonal() * v.adjoint();
    // Divided differences of s^{-1/2}.
    MatC q = v.adjoint() * (g.adjoint() * theta) * v;
    for (int i = 0; i < K; i++) {
        for (int j = 0; j < K; j++) {
            double gam;
            if (std::abs(ev(i) - ev(j)) < 1e-12 * std::max(1.0, std::abs(ev(i))))
                gam = -0.5 * isq(i) / ev(i);
            else
                gam = (isq(i) - isq(j)) / (ev(i) - ev(j));
            q(i, j) *= gam;
        }
    }
    MatC r = v * q * v.adjoint();
    return g * m + theta * (r + r.adjoint());
}

namespace {

const Mat2 &pauli2(int k) {
    static const Mat2 ps[3] = {
        (Mat2() << 0, 1, 1, 0).finished(),
        (Mat2() << 0, cplx(0, -1), cplx(0, 1), 0).finished(),
        (Mat2() << 1, 0, 0, -1).finished(),
    };
    return ps[k];
}

}  // namespace

Mat2 su2_from_r3(const Eigen::Vector3d &r) {
    double t = r.norm();
    const cplx I(0, 1);
    if (t < 1e-300) return Mat2::Identity();
    Mat2 ns = (r(0) * pauli2(0) + r(1) * pauli2(1) + r(2) * pauli2(2)) / t;
    return std::cos(t) * Mat2::Identity() + I * std::sin(t) * ns;
}

std::array<Mat2, 3> su2_from_r3_jacobian(const Eigen::Vector3d &r) {
    std::array<Mat2, 3> out;
    double t = r.norm();
    const cplx I(0, 1);
    if (t < 1e-8) {
        for (int k = 0; k < 3; k++) out[k] = I * pauli2(k) - r(k) * Mat2::Identity();
        return out;
    }
    Eigen::Vector3d n = r / t;
    Mat2 ns = n(0) * pauli2(0) + n(1) * pauli2(1) + n(2) * pauli2(2);
    double s = std::sin(t), c = std::cos(t);
    for (int k = 0; k < 3; k++) {
        out[k] = -s * n(k) * Mat2::Identity() + I * c * n(k) * ns + I * (s / t) * (pauli2(k) - n(k) * ns);
    }
    return out;
}

namespace {

void check_basis(const MatC &basis, int n) {
    if (n < 1 || n > kMaxQubits || basis.rows() != (Eigen::Index)(size_t{1} << n))
        throw DimensionError("basis does not match qubit count");
}

// <a| A_q |b> for a single-qubit operator on qubit q.
cplx one_qubit_sandwich(const cplx *a, const cplx *b, int n, int q, const Mat2 &u) {
    size_t dim = size_t{1} << n;
    uint32_t bit = qubit_bit(n, q);
    cplx s = 0;
    for (size_t x = 0; x < dim; x++) {
        if (x & bit) continue;
        size_t y = x | bit;
        cplx b0 = b[x], b1 = b[y];
        s += std::conj(a[x]) * (u(0, 0) * b0 + u(0, 1) * b1) + std::conj(a[y]) * (u(1, 0) * b0 + u(1, 1) * b1);
    }
    return s;
}

LocalUnitaryLayer adjoint_layer(const LocalUnitaryLayer &l) {
    LocalUnitaryLayer out = l;
    for (auto &f : out.factors) f = f.adjoint().eval();
    return out;
}

MatC apply_layer_columns(const MatC &basis, int n, const LocalUnitaryLayer &l) {
    MatC out = basis;
    for (int j = 0; j < basis.cols(); j++) {
        VecC v = basis.col(j);
        apply_layer_inplace(v, n, l);
        out.col(j) = v;
    }
    return out;
}

// Gate loss with gradients for both the basis and the r-vectors of each layer.
double gate_loss_full(const MatC &basis, int n, const std::vector<LocalUnitaryLayer> &layers,
                      const std::vector<MatC> &targets, MatC *gBasis,
                      const std::vector<std::vector<std::array<Mat2, 3>>> *jac, double *gR,
                      bool transport = false) {
    int K = (int)basis.cols();
    double total = 0;
    for (size_t t = 0; t < targets.size(); t++) {
        if (targets[t].rows() != K || targets[t].cols() != K) throw DimensionError("target is not K x K");
        MatC phi = apply_layer_columns(basis, n, layers[t]);
        MatC d, chi;
        if (transport) {
            // |U Psi - Psi V|^2, formed directly: the trace form cancels at the 1e-16 level.
            MatC r = phi - basis * targets[t];
            total += r.squaredNorm();
            if (gBasis) {
                *gBasis += 2.0 * apply_layer_columns(r, n, adjoint_layer(layers[t]));
                *gBasis -= 2.0 * r * targets[t].adjoint();
            }
            chi = r;
        } else {
            d = basis.adjoint() * phi - targets[t];
            total += d.squaredNorm();
            if (gBasis) {
                *gBasis += 2.0 * phi * d.adjoint();
                *gBasis += 2.0 * apply_layer_columns(basis, n, adjoint_layer(layers[t])) * d;
            }
            if (jac && gR) chi = basis * d;
        }
        if (jac && gR) {
            for (int s = 0; s < n; s++) {
                Mat2 uinv = layers[t].factors[s].adjoint();
                for (int k = 0; k < 3; k++) {
                    Mat2 a = (*jac)[t][s][k] * uinv;
                    cplx acc = 0;
                    for (int j = 0; j < K; j++) acc += one_qubit_sandwich(chi.col(j).data(), phi.col(j).data(), n, s, a);
                    gR[(t * n + s) * 3 + k] += 2 * acc.real();
                }
            }
        }
    }
    return total;
}

// Shared pass over the error set: fills tau_E (the normalized trace) and,
// when d is given, accumulates 2 E Psi (D^dag + D) for a caller-built D.
template <typename DFun>
void kl_pass(const MatC &basis, int n, const std::vector<PauliString> &errors, DFun &&f) {
    int K = (int)basis.cols();
    size_t dim = basis.rows();
    MatC eb(dim, K);
    MatC m(K, K);
    for (size_t e = 0; e < errors.size(); e++) {
        if (errors[e].n != n) throw DimensionError("error does not match qubit count");
        for (int j = 0; j < K; j++) apply_pauli_into(errors[e], basis.col(j).data(), eb.col(j).data(), dim);
        m.noalias() = basis.adjoint() * eb;
        f(e, m, eb);
    }
}

}  // namespace

double loss_kl(const MatC &basis, int n, const std::vector<PauliString> &errors, MatC *grad) {
    check_basis(basis, n);
    int K = (int)basis.cols();
    double total = 0;
    MatC d(K, K);
    kl_pass(basis, n, errors, [&](size_t, const MatC &m, const MatC &eb) {
        total += kl_term(m);
        if (!grad) return;
        d = m;
        for (int i = 0; i < K; i++) {
            cplx s = 0;
            for (int j = 0; j < K; j++) s += m(i, i) - m(j, j);
            d(i, i) = 2.0 * s;
        }
        *grad += 2.0 * eb * (d.adjoint() + d);
    });
    return total;
}

double loss_gate(const MatC &basis, int n, const std::vector<LocalUnitaryLayer> &layers,
                 const std::vector<MatC> &targets, MatC *grad) {
    check_basis(basis, n);
    if (layers.size() != targets.size()) throw DimensionError("one layer per target required");
    for (const auto &l : layers)
        if (l.n() != n) throw DimensionError("layer does not match qubit count");
    return gate_loss_full(basis, n, layers, targets, grad, nullptr, nullptr);
}

double estimated_lambda_sq(const MatC &basis, int n, const std::vector<PauliString> &errors) {
    check_basis(basis, n);
    double K = (double)basis.cols();
    double l2 = 0;
    kl_pass(basis, n, errors, [&](size_t, const MatC &m, const MatC &) { l2 += std::norm(m.trace() / K); });
    return l2;
}

double loss_signature(const MatC &basis, int n, const std::vector<PauliString> &errors, double target,
                      MatC *grad) {
    if (target < 0) throw std::invalid_argument("signature target must be nonnegative");
    check_basis(basis, n);
    int K = (int)basis.cols();
    std::vector<cplx> tau(errors.size());
    double l2 = 0;
    kl_pass(basis, n, errors, [&](size_t e, const MatC &m, const MatC &) {
        tau[e] = m.trace() / (double)K;
        l2 += std::norm(tau[e]);
    });
    double diff = l2 - target * target;
    if (grad) {
        MatC d = MatC::Zero(K, K);
        kl_pass(basis, n, errors, [&](size_t e, const MatC &, const MatC &eb) {
            for (int i = 0; i < K; i++) d(i, i) = 2.0 * diff * tau[e] / (double)K;
            *grad += 2.0 * eb * (d.adjoint() + d);
        });
    }
    return diff * diff;
}

void SearchConfig::validate() const {
    if (n < 1 || n > kMaxQubits) throw std::invalid_argument("n out of range");
    if (K < 1 || (size_t)K > (size_t{1} << n)) throw std::invalid_argument("K out of range");
    if (!klEnabled && targets.empty() && !lambdaTarget) throw std::invalid_argument("no loss term enabled");
    for (const auto &t : targets)
        if (t.rows() != K || t.cols() != K) throw std::invalid_argument("target gate is not K x K");
    if (lambdaTarget && *lambdaTarget < 0) throw std::invalid_argument("lambda target must be nonnegative");
    if (fixedCode && (fixedCode->n != n || fixedCode->K() != K))
        throw std::invalid_argument("fixed code does not match n, K");
    if (hyper.restarts < 1 || hyper.iterations < 0 || !(hyper.step > 0))
        throw std::invalid_argument("bad optimizer hyperparameters");
}

StiefelProblem::StiefelProblem(const SearchConfig &cfg) : cfg_(cfg) {
    cfg.validate();
    errors_ = paulis_up_to(cfg.n, cfg.maxErrorWeight, 1);
    fixed_ = cfg.fixedCode.has_value();
    thetaSize_ = (int)((size_t{1} << cfg.n) * cfg.K);
    gateParams_ = (int)cfg.targets.size() * cfg.n * 3;
}

MatC StiefelProblem::basis(const Eigen::VectorXd &x) const {
    if (fixed_) return cfg_.fixedCode->basis;
    size_t dim = size_t{1} << cfg_.n;
    MatC theta(dim, cfg_.K);
    for (int i = 0; i < thetaSize_; i++) theta.data()[i] = cplx(x(i), x(thetaSize_ + i));
    return polar_retract(theta);
}

std::vector<LocalUnitaryLayer> StiefelProblem::layers(const Eigen::VectorXd &x) const {
    int off = fixed_ ? 0 : 2 * thetaSize_;
    std::vector<LocalUnitaryLayer> out;
    for (size_t t = 0; t < cfg_.targets.size(); t++) {
        std::vector<Mat2> f;
        for (int s = 0; s < cfg_.n; s++) f.push_back(su2_from_r3(x.segment<3>(off + ((int)t * cfg_.n + s) * 3)));
        out.emplace_back(std::move(f));
    }
    return out;
}

double StiefelProblem::value(const Eigen::VectorXd &x, std::map<std::string, double> *parts) const {
    MatC b = basis(x);
    double total = 0;
    if (cfg_.klEnabled) {
        double v = loss_kl(b, cfg_.n, errors_);
        if (parts) (*parts)["kl"] = v;
        total += cfg_.klWeight * v;
    }
    if (!cfg_.targets.empty()) {
        double v = transport_ ? gate_loss_full(b, cfg_.n, layers(x), cfg_.targets, nullptr, nullptr, nullptr, true)
                              : loss_gate(b, cfg_.n, layers(x), cfg_.targets);
        if (parts) (*parts)["gate"] = v;
        total += cfg_.gateWeight * v;
    }
    if (cfg_.lambdaTarget) {
        double v = loss_signature(b, cfg_.n, errors_, *cfg_.lambdaTarget);
        if (parts) (*parts)["signature"] = v;
        total += cfg_.signatureWeight * v;
    }
    return total;
}

double StiefelProblem::value_and_grad(const Eigen::VectorXd &x, Eigen::VectorXd &g,
                                      std::map<std::string, double> *parts) const {
    g.setZero(num_params());
    size_t dim = size_t{1} << cfg_.n;
    MatC theta;
    MatC b;
    if (fixed_) {
        b = cfg_.fixedCode->basis;
    } else {
        theta.resize(dim, cfg_.K);
        for (int i = 0; i < thetaSize_; i++) theta.data()[i] = cplx(x(i), x(thetaSize_ + i));
        b = polar_retract(theta);
    }
    MatC gb = MatC::Zero(dim, cfg_.K), tmp(dim, cfg_.K);
    double total = 0;
    if (cfg_.klEnabled) {
        tmp.setZero();
        double v = loss_kl(b, cfg_.n, errors_, fixed_ ? nullptr : &tmp);
        if (parts) (*parts)["kl"] = v;
        total += cfg_.klWeight * v;
        if (!fixed_) gb += cfg_.klWeight * tmp;
    }
    if (!cfg_.targets.empty()) {
        int off = fixed_ ? 0 : 2 * thetaSize_;
        std::vector<std::vector<std::array<Mat2, 3>>> jac(cfg_.targets.size());
        for (size_t t = 0; t < cfg_.targets.size(); t++)
            for (int s = 0; s < cfg_.n; s++)
                jac[t].push_back(su2_from_r3_jacobian(x.segment<3>(off + ((int)t * cfg_.n + s) * 3)));
        tmp.setZero();
        Eigen::VectorXd gr = Eigen::VectorXd::Zero(gateParams_);
        double v = gate_loss_full(b, cfg_.n, layers(x), cfg_.targets, fixed_ ? nullptr : &tmp, &jac, gr.data(),
                                  transport_);
        if (parts) (*parts)["gate"] = v;
        total += cfg_.gateWeight * v;
        if (!fixed_) gb += cfg_.gateWeight * tmp;
        g.segment(off, gateParams_) += cfg_.gateWeight * gr;
    }
    if (cfg_.lambdaTarget) {
        tmp.setZero();
        double v = loss_signature(b, cfg_.n, errors_, *cfg_.lambdaTarget, fixed_ ? nullptr : &tmp);
        if (parts) (*parts)["signature"] = v;
        total += cfg_.signatureWeight * v;
        if (!fixed_) gb += cfg_.signatureWeight * tmp;
    }
    if (!fixed_) {
        MatC gt = polar_retract_backward(theta, gb);
        for (int i = 0; i < thetaSize_; i++) {
            g(i) = gt.data()[i].real();
            g(thetaSize_ + i) = gt.data()[i].imag();
        }
    }
    return total;
}

Eigen::VectorXd StiefelProblem::numeric_grad(const Eigen::VectorXd &x, double h) const {
    Eigen::VectorXd g(x.size()), y = x;
    for (int i = 0; i < x.size(); i++) {
        y(i) = x(i) + h;
        double fp = value(y);
        y(i) = x(i) - h;
        double fm = value(y);
        y(i) = x(i);
        g(i) = (fp - fm) / (2 * h);
    }
    return g;
}

Eigen::Vector3d haar_r3(std::mt19937_64 &rng) {
    // Haar point of SU(2) as a unit quaternion, mapped back to r with |r| in [0, pi].
    std::normal_distribution<double> normal;
    Eigen::Vector4d q;
    for (int k = 0; k < 4; k++) q(k) = normal(rng);
    q.normalize();
    double v = q.tail<3>().norm();
    if (v < 1e-300) return Eigen::Vector3d::Zero();
    return std::atan2(v, q(0)) / v * q.tail<3>();
}

Eigen::VectorXd StiefelProblem::random_start(uint64_t seed, int restart) const {
    std::seed_seq seq{(uint32_t)seed, (uint32_t)(seed >> 32), (uint32_t)restart, 0x5eedu};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    Eigen::VectorXd x(num_params());
    int i = 0;
    if (!fixed_)
        for (; i < 2 * thetaSize_; i++) x(i) = normal(rng);
    for (; i < x.size(); i += 3) x.segment<3>(i) = haar_r3(rng);
    return x;
}

SearchResult optimize(const SearchConfig &cfg) {
    if (cfg.fixedCode && !cfg.klEnabled && !cfg.lambdaTarget && cfg.targets.size() > 1) {
        // Gate-only loss on a fixed code separates over targets.
        cfg.validate();
        SearchResult res;
        res.code = *cfg.fixedCode;
        res.seed = cfg.hyper.seed;
        res.success = true;
        for (size_t t = 0; t < cfg.targets.size(); t++) {
            SearchConfig one = cfg;
            one.targets = {cfg.targets[t]};
            if (t < cfg.targetNames.size()) one.targetNames = {cfg.targetNames[t]};
            SearchResult r = optimize(one);
            res.layers.push_back(r.layers.empty() ? LocalUnitaryLayer::identity(cfg.n) : r.layers[0]);
            res.finalLoss += r.finalLoss;
            res.iterations += r.iterations;
            res.restart = std::max(res.restart, r.restart);
        }
        res.lossBreakdown["gate"] = res.finalLoss;
        res.success = res.finalLoss < cfg.hyper.threshold;
        return res;
    }
    StiefelProblem prob(cfg);
    auto fg = [&](const Eigen::VectorXd &x, Eigen::VectorXd &g) {
        try {
            return prob.value_and_grad(x, g);
        } catch (const RankDeficient &) {
            return std::numeric_limits<double>::infinity();
        }
    };
    auto init = [&](int r) { return prob.random_start(cfg.hyper.seed, r); };
    AdamOutcome best = adam_restarts(fg, init, cfg.hyper);

    if (cfg.polish && !cfg.targets.empty() && best.restart >= 0 && best.loss < cfg.hyper.threshold) {
        // The gate loss sees leakage only at fourth order; finish on the transport form.
        StiefelProblem tp(cfg);
        tp.set_transport(true);
        Hyper h = cfg.hyper;
        h.restarts = 1;
        h.step = cfg.hyper.step * 0.1;
        h.threshold = 1e-20;
        h.stopFactor = 1;
        auto tfg = [&](const Eigen::VectorXd &x, Eigen::VectorXd &g) { return tp.value_and_grad(x, g); };
        AdamOutcome pol = adam_restarts(tfg, [&](int) { return best.x; }, h);
        if (pol.restart >= 0 && prob.value(pol.x) <= best.loss) {
            best.x = pol.x;
            best.loss = prob.value(pol.x);
            best.iterations += pol.iterations;
        }
    }

    SearchResult res;
    res.seed = cfg.hyper.seed;
    res.restart = best.restart;
    res.iterations = best.iterations;
    if (best.restart < 0) {
        res.finalLoss = std::numeric_limits<double>::infinity();
        return res;
    }
    res.layers = prob.layers(best.x);
    if (cfg.fixedCode) {
        res.code = *cfg.fixedCode;
        res.finalLoss = prob.value(best.x, &res.lossBreakdown);
    } else {
        // The ridge leaves O(eps / sigma_min^2) non-orthogonality; report on the exact polar factor.
        Eigen::JacobiSVD<MatC> svd(prob.basis(best.x), Eigen::ComputeThinU | Eigen::ComputeThinV);
        res.code = CodeSubspace(cfg.n, svd.matrixU() * svd.matrixV().adjoint());
        SearchConfig at = cfg;
        at.fixedCode = res.code;
        StiefelProblem fp(at);
        res.finalLoss = fp.value(best.x.tail(fp.num_params()), &res.lossBreakdown);
    }
    res.success = res.finalLoss < cfg.hyper.threshold;
    return res;
}

GateSearchResult optimize_gates_for_fixed_code(const CodeSubspace &code, const std::vector<MatC> &targets,
                                               const Hyper &hyper) {
    SearchConfig cfg;
    cfg.n = code.n;
    cfg.K = code.K();
    cfg.klEnabled = false;
    cfg.targets = targets;
    cfg.fixedCode = code;
    cfg.hyper = hyper;
    GateSearchResult out;
    if (targets.empty()) {
        out.success = true;
        return out;
    }
    SearchResult r = optimize(cfg);
    out.layers = r.layers;
    out.finalLoss = r.finalLoss;
    out.success = r.success;
    out.iterations = r.iterations;
    return out;
}

}  // namespace tgq
