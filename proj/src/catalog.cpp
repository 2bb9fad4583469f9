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

#include "tgq/catalog.h"

#include <chrono>
#include <cmath>
#include <sstream>

#include "tgq/embedded.h"

namespace tgq {

namespace {

std::string expr_text(const ojson &j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number()) {
        std::ostringstream ss;
        ss.precision(17);
        ss << j.get<double>();
        return ss.str();
    }
    throw CatalogError(CatalogError::BadData, "expected an expression, got " + j.dump());
}

[[noreturn]] void bad(const std::string &id, const std::string &msg) {
    throw CatalogError(CatalogError::BadData, id + ": " + msg);
}

uint32_t parse_bits(const std::string &id, const std::string &bits, int n) {
    if ((int)bits.size() != n) bad(id, "bitstring '" + bits + "' has wrong length");
    uint32_t v = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') bad(id, "bad bitstring '" + bits + "'");
        v = (v << 1) | (c == '1');
    }
    return v;
}

VecC term_vector(const std::string &id, const std::string &key, int n,
                 const std::map<std::string, VecC> &states) {
    size_t dim = size_t{1} << n;
    VecC v = VecC::Zero(dim);
    if (key[0] == '@') {
        auto it = states.find(key.substr(1));
        if (it == states.end()) bad(id, "unknown state " + key);
        return it->second;
    }
    if (key.rfind("orbit:", 0) == 0) {
        std::string s = key.substr(6);
        std::vector<std::string> seen;
        for (int k = 0; k < n; k++) {
            std::string r = k ? s.substr(n - k) + s.substr(0, n - k) : s;
            bool dup = false;
            for (const auto &x : seen) dup |= x == r;
            if (!dup) seen.push_back(r);
        }
        double a = 1 / std::sqrt((double)seen.size());
        for (const auto &r : seen) v[parse_bits(id, r, n)] = a;
        return v;
    }
    if (key.rfind("dicke:", 0) == 0) return dicke(n, std::stoi(key.substr(6))).amps;
    v[parse_bits(id, key, n)] = 1;
    return v;
}

VecC build_vector(const std::string &id, const ojson &spec, int n, const Env &env,
                  const std::map<std::string, VecC> &states, const std::vector<VecC> &prev) {
    size_t dim = size_t{1} << n;
    if (spec.contains("flip")) {
        uint32_t mask = parse_bits(id, spec["flip"].get<std::string>(), n);
        size_t of = spec.value("of", 0);
        if (of >= prev.size()) bad(id, "flip refers to a later codeword");
        VecC out(dim);
        for (uint32_t x = 0; x < dim; x++) out[x ^ mask] = prev[of][x];
        return out;
    }
    VecC v = VecC::Zero(dim);
    for (const auto &t : spec.at("terms")) {
        cplx c = eval_scalar(expr_text(t.at(1)), env);
        v += c * term_vector(id, t.at(0).get<std::string>(), n, states);
    }
    if (spec.contains("scale")) v *= eval_scalar(expr_text(spec["scale"]), env);
    return v;
}

bool when_matches(const ojson &when, const Env &env) {
    for (const auto &[k, v] : when.items()) {
        auto it = env.find(k);
        if (it == env.end() || it->second.isMatrix) return false;
        if (std::abs(it->second.s - v.get<double>()) > 1e-9) return false;
    }
    return true;
}

double bisect(const std::string &id, const Expr &f, Env env, double lo, double hi) {
    auto val = [&](double x) {
        env["x"] = x;
        return f.eval(env).scalar().real();
    };
    double flo = val(lo), fhi = val(hi);
    if (flo * fhi > 0) bad(id, "root bracket has no sign change");
    for (int k = 0; k < 200; k++) {
        double mid = (lo + hi) / 2;
        if (val(mid) * flo > 0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return (lo + hi) / 2;
}

Eigen::MatrixXd random_so5(std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Eigen::MatrixXd a(5, 5);
    for (int i = 0; i < 25; i++) a(i) = g(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd q = qr.householderQ();
    if (q.determinant() < 0) q.col(0) *= -1;
    return q;
}

}  // namespace

const Catalog &Catalog::builtin() {
    static const Catalog c(embedded::catalog_json());
    return c;
}

Catalog::Catalog(const std::string &text) {
    ojson doc;
    try {
        doc = ojson::parse(text);
    } catch (const std::exception &e) {
        throw CatalogError(CatalogError::BadData, std::string("catalog is not valid JSON: ") + e.what());
    }
    if (doc.value("format", "") != "tgcat") throw CatalogError(CatalogError::BadData, "not a tgcat catalog");
    version_ = doc.value("version", 0);
    if (version_ != 1) throw CatalogError(CatalogError::BadData, "unsupported catalog version");
    for (const auto &e : doc.at("entries")) {
        CatalogEntry c;
        c.id = e.at("id");
        c.n = e.at("n");
        c.K = e.at("K");
        c.d = e.at("d");
        c.group = e.value("group", "");
        c.notes = e.value("notes", "");
        c.raw = e;
        for (const auto &p : e.value("params", ojson::array())) {
            ParamSpec s;
            s.name = p.at("name");
            s.kind = p.at("kind");
            if (p.contains("min")) s.min = expr_text(p["min"]);
            if (p.contains("max")) s.max = expr_text(p["max"]);
            for (const auto &v : p.value("values", ojson::array())) s.values.push_back(v.get<double>());
            s.defaultValue = p.at("default");
            c.params.push_back(s);
        }
        entries_.push_back(std::move(c));
    }
}

const CatalogEntry &Catalog::entry(const std::string &id) const {
    for (const auto &e : entries_) {
        if (e.id == id) return e;
    }
    throw CatalogError(CatalogError::UnknownEntry, "no catalog entry '" + id + "'");
}

ojson Catalog::default_params(const std::string &id) const {
    ojson out = ojson::object();
    for (const auto &p : entry(id).params) out[p.name] = p.defaultValue;
    return out;
}

ojson Catalog::random_params(const std::string &id, std::mt19937_64 &rng) const {
    const auto &e = entry(id);
    std::uniform_real_distribution<double> u(0, 1);
    for (int attempt = 0; attempt < 50; attempt++) {
        ojson out = ojson::object();
        for (const auto &p : e.params) {
            if (p.kind == "real") {
                double lo = eval_real(p.min), hi = eval_real(p.max);
                out[p.name] = lo + (hi - lo) * u(rng);
            } else if (p.kind == "sign") {
                out[p.name] = u(rng) < 0.5 ? -1 : 1;
            } else if (p.kind == "choice") {
                out[p.name] = p.values[std::min(p.values.size() - 1, (size_t)(u(rng) * p.values.size()))];
            } else if (p.kind == "angle") {
                out[p.name] = 2 * kPi * u(rng);
            } else if (p.kind == "so5") {
                Eigen::MatrixXd w = random_so5(rng);
                ojson m = ojson::array();
                for (int r = 0; r < 5; r++) {
                    ojson row = ojson::array();
                    for (int c = 0; c < 5; c++) row.push_back(w(r, c));
                    m.push_back(row);
                }
                out[p.name] = m;
            }
        }
        try {
            build(id, out);
            return out;
        } catch (const CatalogError &err) {
            if (err.kind != CatalogError::ConstraintResidual) throw;
        }
    }
    return default_params(id);
}

Instance Catalog::build(const std::string &id, const ojson &given) const {
    const auto &e = entry(id);
    const ojson &raw = e.raw;
    Instance inst;
    inst.id = id;
    inst.claimedDistance = e.d;
    inst.params = default_params(id);
    for (const auto &[k, v] : given.items()) {
        if (!inst.params.contains(k)) {
            throw CatalogError(CatalogError::ParamOutOfDomain, id + ": unknown parameter '" + k + "'");
        }
        inst.params[k] = v;
    }
    Env &env = inst.env;
    for (const auto &p : e.params) {
        const ojson &v = inst.params[p.name];
        auto out_of_domain = [&](const std::string &why) {
            throw CatalogError(CatalogError::ParamOutOfDomain, id + ": parameter " + p.name + " " + why);
        };
        if (p.kind == "so5") {
            if (!v.is_array() || v.size() != 5) out_of_domain("must be a 5x5 matrix");
            Eigen::MatrixXd w(5, 5);
            for (int r = 0; r < 5; r++) {
                if (!v[r].is_array() || v[r].size() != 5) out_of_domain("must be a 5x5 matrix");
                for (int c = 0; c < 5; c++) w(r, c) = v[r][c].get<double>();
            }
            if ((w.transpose() * w - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() > 1e-9 ||
                std::abs(w.determinant() - 1) > 1e-9) {
                out_of_domain("is not in SO(5)");
            }
            for (int r = 0; r < 5; r++) {
                for (int c = 0; c < 5; c++) {
                    env["w" + std::to_string(r + 1) + std::to_string(c + 1)] = w(r, c);
                }
            }
            continue;
        }
        if (!v.is_number()) out_of_domain("must be a number");
        double x = v.get<double>();
        if (p.kind == "real") {
            double lo = eval_real(p.min), hi = eval_real(p.max);
            if (x < lo - 1e-12 || x > hi + 1e-12) out_of_domain("outside [" + p.min + ", " + p.max + "]");
        } else if (p.kind == "sign") {
            if (x != 1 && x != -1) out_of_domain("must be +1 or -1");
        } else if (p.kind == "choice") {
            bool ok = false;
            for (double c : p.values) ok |= c == x;
            if (!ok) out_of_domain("is not one of the listed choices");
        } else if (p.kind != "angle") {
            bad(id, "unknown parameter kind " + p.kind);
        }
        env[p.name] = x;
    }
    for (const auto &d : raw.value("defs", ojson::array())) {
        std::string name = d.at(0);
        if (d.at(1).is_object()) {
            const auto &r = d[1];
            double lo = eval_real(expr_text(r.at("lo")), env);
            double hi = eval_real(expr_text(r.at("hi")), env);
            env[name] = bisect(id, Expr(expr_text(r.at("root"))), env, lo, hi);
        } else {
            env[name] = eval_expr(expr_text(d[1]), env);
        }
    }
    for (const auto &c : raw.value("constraints", ojson::array())) {
        double r = std::abs(eval_scalar(expr_text(c), env));
        if (r > 1e-9) {
            std::ostringstream ss;
            ss << id << ": constraint " << expr_text(c) << " has residual " << r;
            throw CatalogError(CatalogError::ConstraintResidual, ss.str());
        }
    }
    int n = e.n;
    std::map<std::string, VecC> states;
    const ojson stateSpecs = raw.value("states", ojson::object());
    for (const auto &[name, spec] : stateSpecs.items()) {
        states[name] = build_vector(id, spec, n, env, states, {});
    }
    std::vector<VecC> words;
    for (const auto &spec : raw.at("codewords")) words.push_back(build_vector(id, spec, n, env, states, words));
    if ((int)words.size() != e.K) bad(id, "codeword count differs from K");
    for (const auto &op : raw.value("post", ojson::array())) {
        if (op.contains("gate")) {
            Mat2 g = eval_matrix(expr_text(op["gate"]), env);
            int q = op.at("qubit");
            for (auto &w : words) apply_1q_inplace(w.data(), n, q, g);
        } else if (op.contains("cz")) {
            uint32_t a = qubit_bit(n, op["cz"][0]), b = qubit_bit(n, op["cz"][1]);
            for (auto &w : words) {
                for (uint32_t x = 0; x < (uint32_t)w.size(); x++) {
                    if ((x & a) && (x & b)) w[x] = -w[x];
                }
            }
        } else {
            bad(id, "unknown post operation");
        }
    }
    MatC basis(size_t{1} << n, e.K);
    for (int k = 0; k < e.K; k++) basis.col(k) = words[k];
    inst.code = CodeSubspace(n, basis);

    for (const auto &l : raw.value("layers", ojson::array())) {
        if (l.contains("when") && !when_matches(l["when"], env)) continue;
        NamedLayer nl;
        nl.name = l.at("name");
        std::vector<Mat2> factors;
        if (l.at("factors").is_string()) {
            Mat2 u = eval_matrix(l["factors"].get<std::string>(), env);
            factors.assign(n, u);
        } else {
            for (const auto &f : l["factors"]) factors.push_back(eval_matrix(expr_text(f), env));
        }
        if ((int)factors.size() != n) bad(id, "layer " + nl.name + " has wrong factor count");
        nl.layer = LocalUnitaryLayer(factors);
        nl.logicalText = expr_text(l.at("logical"));
        nl.logical = eval_matrix(nl.logicalText, env);
        inst.layers.push_back(std::move(nl));
    }

    std::string group = e.group;
    for (const auto &gw : raw.value("group_when", ojson::array())) {
        if (when_matches(gw.at("when"), env)) {
            group = gw.at("group");
            break;
        }
    }
    inst.group = GroupId::parse(group);
    return inst;
}

Instance Catalog::instantiate(const std::string &id, const ojson &params) const {
    Instance inst = build(id, params);
    auto fail = [&](const std::string &msg) {
        throw CatalogError(CatalogError::SelfVerifyFailed, id + ": " + msg);
    };
    double on = inst.code.orthonormality_error();
    if (on > kCatalogKlTol) fail("basis is not orthonormal (error " + std::to_string(on) + ")");
    auto rep = kl_report(inst.code, paulis_up_to(inst.code.n, 2));
    if (rep.residual > kCatalogKlTol) {
        std::ostringstream ss;
        ss << "KL residual " << rep.residual << " (worst " << rep.errors[rep.worst].str() << ")";
        fail(ss.str());
    }
    for (const auto &l : inst.layers) {
        if (!l.layer.is_unitary(1e-9)) fail("layer " + l.name + " has a non-unitary factor");
        auto act = logical_action(inst.code, l.layer);
        double err = phase_insensitive_error(act.matrix, l.logical);
        if (act.leakage > kCatalogGateTol || err > kCatalogGateTol) {
            std::ostringstream ss;
            ss << "layer " << l.name << " leakage " << act.leakage << " logical error " << err;
            fail(ss.str());
        }
    }
    return inst;
}

ExpectedProperties Catalog::expected_properties(const Instance &inst) const {
    const ojson &ex = entry(inst.id).raw.value("expected", ojson::object());
    ExpectedProperties out;
    out.group = inst.group;
    if (ex.contains("lambda_sq")) out.lambdaSq = eval_real(expr_text(ex["lambda_sq"]), inst.env);
    for (const char *key : {"A", "B"}) {
        if (!ex.contains(key)) continue;
        std::vector<double> row;
        if (ex[key].is_string() && ex[key] == "line723") {
            if (!out.lambdaSq) bad(inst.id, "line723 needs lambda_sq");
            double L = *out.lambdaSq;
            if (std::string(key) == "A") {
                row = {1, 0, L, 0, 21 - 2 * L, 0, 42 + L, 0};
            } else {
                row = {1, 0, L, 21 + 3 * L, 21 - 2 * L, 126 - 6 * L, 42 + L, 45 + 3 * L};
            }
        } else {
            for (const auto &r : ex[key]) row.push_back(eval_real(expr_text(r), inst.env));
        }
        (std::string(key) == "A" ? out.A : out.B) = row;
    }
    return out;
}

EntryCheck Catalog::check(const std::string &id, const ojson &params) const {
    auto t0 = std::chrono::steady_clock::now();
    EntryCheck c;
    c.id = id;
    auto finish = [&](const std::string &failure) {
        c.failure = failure;
        c.ok = failure.empty();
        c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return c;
    };
    Instance inst;
    try {
        inst = build(id, params);
    } catch (const std::exception &e) {
        return finish(e.what());
    }
    c.groupClaimed = inst.group;
    const auto &code = inst.code;
    c.orthonormality = code.orthonormality_error();
    c.klResidual = kl_residual(code, paulis_up_to(code.n, 2));
    c.distance = distance(code, inst.claimedDistance, kCatalogKlTol);
    std::vector<LocalUnitaryLayer> layers;
    std::string failure;
    auto note = [&](const std::string &msg) {
        if (failure.empty()) failure = msg;
    };
    for (const auto &l : inst.layers) {
        auto act = logical_action(code, l.layer);
        LayerCheck lc{l.name, act.leakage, phase_insensitive_error(act.matrix, l.logical)};
        if (lc.leakage > kCatalogGateTol || lc.error > kCatalogGateTol) {
            note("layer " + l.name + " does not realize " + l.logicalText);
        }
        c.layers.push_back(lc);
        layers.push_back(l.layer);
    }
    c.enumerators = enumerators(code);
    c.lambdaStar = signature(code, inst.claimedDistance).lambdaStar;
    auto ex = expected_properties(inst);
    auto row_diff = [](const std::vector<double> &want, const std::vector<double> &got) {
        double d = want.size() == got.size() ? 0.0 : 1e300;
        for (size_t k = 0; k < std::min(want.size(), got.size()); k++) d = std::max(d, std::abs(want[k] - got[k]));
        return d;
    };
    if (ex.lambdaSq) c.lambdaSqDiff = std::abs(*ex.lambdaSq - c.lambdaStar * c.lambdaStar);
    if (ex.A) c.aDiff = row_diff(*ex.A, c.enumerators.A);
    if (ex.B) c.bDiff = row_diff(*ex.B, c.enumerators.B);

    if (c.orthonormality > kCatalogKlTol) note("basis not orthonormal");
    if (c.klResidual > kCatalogKlTol) note("KL residual above tolerance");
    if (c.distance.atLeast || c.distance.value != inst.claimedDistance) {
        note("distance " + c.distance.str() + " differs from claimed " + std::to_string(inst.claimedDistance));
    }
    for (int j = 1; j < inst.claimedDistance; j++) {
        if (std::abs(c.enumerators.A[j] - c.enumerators.B[j]) > 1e-9) note("A_j != B_j below the distance");
    }
    if (c.lambdaSqDiff && *c.lambdaSqDiff > 1e-6) note("signature differs from the printed value");
    if (c.aDiff && *c.aDiff > 1e-6) note("A enumerator differs from the printed row");
    if (c.bDiff && *c.bDiff > 1e-6) note("B enumerator differs from the printed row");
    try {
        c.groupFound = transversal_group_of_code(code, layers).id;
        if (c.groupFound != c.groupClaimed) note("transversal group " + c.groupFound.str());
    } catch (const std::exception &e) {
        note(std::string("group: ") + e.what());
    }
    return finish(failure);
}

}  // namespace tgq
