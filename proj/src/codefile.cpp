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

#include "tgq/codefile.h"

#include "tgq/catalog.h"
#include "tgq/expr.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

namespace tgq {

using ojson = nlohmann::ordered_json;

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_double(const std::string &s) {
    // from_chars, unlike stod, accepts subnormals
    double v = 0;
    const char *end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end || s.empty() || !std::isfinite(v)) {
        throw InputError("not a finite number: '" + s + "'");
    }
    return v;
}

namespace {

double num(const ojson &j) {
    if (j.is_string()) return parse_double(j.get<std::string>());
    if (j.is_number()) return j.get<double>();
    throw InputError("expected a decimal string, got " + j.dump());
}

ojson mat_to_json(const MatC &m) {
    ojson rows = ojson::array();
    for (int r = 0; r < m.rows(); r++) {
        ojson row = ojson::array();
        for (int c = 0; c < m.cols(); c++) {
            row.push_back({format_double(m(r, c).real()), format_double(m(r, c).imag())});
        }
        rows.push_back(row);
    }
    return rows;
}

MatC mat_from_json(const ojson &j, int size) {
    if (!j.is_array() || (int)j.size() != size) throw InputError("matrix has wrong shape");
    MatC m(size, size);
    for (int r = 0; r < size; r++) {
        if (!j[r].is_array() || (int)j[r].size() != size) throw InputError("matrix has wrong shape");
        for (int c = 0; c < size; c++) {
            const auto &e = j[r][c];
            if (!e.is_array() || e.size() != 2) throw InputError("matrix entry must be [re, im]");
            m(r, c) = cplx(num(e[0]), num(e[1]));
        }
    }
    return m;
}

void check_header(const ojson &j, const std::string &format) {
    if (!j.is_object() || j.value("format", "") != format) throw InputError("not a " + format + " file");
    if (j.value("version", 0) != kCodeFileVersion) throw InputError("unsupported " + format + " version");
}

}  // namespace

ojson code_to_json(const CodeFile &f, double dropBelow) {
    const auto &c = f.code;
    ojson j;
    j["format"] = "tgq-code";
    j["version"] = kCodeFileVersion;
    j["n"] = c.n;
    j["K"] = c.K();
    ojson basis = ojson::array();
    for (int k = 0; k < c.K(); k++) {
        ojson terms = ojson::array();
        for (uint32_t b = 0; b < c.dim(); b++) {
            cplx a = c.basis(b, k);
            if (a == cplx(0) || std::abs(a) <= dropBelow) continue;
            std::string bits;
            for (int q = 0; q < c.n; q++) bits += (b & qubit_bit(c.n, q)) ? '1' : '0';
            terms.push_back({bits, format_double(a.real()), format_double(a.imag())});
        }
        basis.push_back(terms);
    }
    j["basis"] = basis;
    j["metadata"] = f.metadata;
    return j;
}

CodeFile code_from_json(const ojson &j, bool renormalize) {
    check_header(j, "tgq-code");
    int n = j.at("n"), K = j.at("K");
    if (n < 1 || n > kMaxQubits || K < 1) throw InputError("bad n or K");
    const auto &basis = j.at("basis");
    if (!basis.is_array() || (int)basis.size() != K) throw InputError("basis must list K vectors");
    MatC b = MatC::Zero(size_t{1} << n, K);
    for (int k = 0; k < K; k++) {
        std::set<std::string> seen;
        for (const auto &t : basis[k]) {
            if (!t.is_array() || t.size() != 3) throw InputError("amplitude must be [bits, re, im]");
            std::string bits = t[0];
            if ((int)bits.size() != n || bits.find_first_not_of("01") != std::string::npos) {
                throw InputError("bad bitstring '" + bits + "'");
            }
            if (!seen.insert(bits).second) throw InputError("duplicate bitstring '" + bits + "'");
            b(std::stoul(bits, nullptr, 2), k) = cplx(num(t[1]), num(t[2]));
        }
        double nrm = b.col(k).norm();
        if (renormalize) {
            if (nrm == 0) throw InputError("zero basis vector");
            b.col(k) /= nrm;
        } else if (std::abs(nrm - 1) > kLoadTol) {
            throw InputError("basis vector " + std::to_string(k) + " is not normalized (norm " +
                             format_double(nrm) + "); use --renormalize");
        }
    }
    CodeFile f{CodeSubspace(n, b), j.value("metadata", ojson::object())};
    return f;
}

ojson layer_to_json(const LayerFile &f) {
    ojson j;
    j["format"] = "tgq-layer";
    j["version"] = kCodeFileVersion;
    j["n"] = f.layer.n();
    if (!f.name.empty()) j["name"] = f.name;
    ojson fs = ojson::array();
    for (const auto &u : f.layer.factors) fs.push_back(mat_to_json(u));
    j["factors"] = fs;
    if (f.target) j["target"] = mat_to_json(*f.target);
    return j;
}

LayerFile layer_from_json(const ojson &j) {
    check_header(j, "tgq-layer");
    int n = j.at("n");
    const auto &fs = j.at("factors");
    if (!fs.is_array() || (int)fs.size() != n) throw InputError("layer must list n factors");
    LayerFile f;
    f.name = j.value("name", "");
    std::vector<Mat2> factors;
    for (int q = 0; q < n; q++) {
        Mat2 u = mat_from_json(fs[q], 2);
        if (!is_unitary(u, kLoadTol)) throw InputError("factor " + std::to_string(q) + " is not unitary");
        factors.push_back(u);
    }
    f.layer = LocalUnitaryLayer(factors);
    if (j.contains("target")) {
        const auto &t = j["target"];
        f.target = mat_from_json(t, (int)t.size());
    }
    return f;
}

namespace {

}  // namespace

ojson load_json(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return ojson::parse(in);
    } catch (const std::exception &e) {
        throw InputError(path + ": " + e.what());
    }
}

CodeFile load_code_file(const std::string &path, bool renormalize) {
    try {
        return code_from_json(load_json(path), renormalize);
    } catch (const ojson::exception &e) {
        throw InputError(path + ": " + e.what());
    }
}

LayerFile load_layer_file(const std::string &path) {
    try {
        return layer_from_json(load_json(path));
    } catch (const ojson::exception &e) {
        throw InputError(path + ": " + e.what());
    }
}

void save_json(const std::string &path, const ojson &j) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << j.dump(1) << "\n";
}

namespace {

const std::set<std::string> kHyperKeys = {"step", "beta1", "beta2", "adam_eps", "iterations", "restarts",
                                          "seed", "threshold", "stop_factor", "patience", "grad_tol"};
const std::set<std::string> kConfigKeys = {"format", "version", "n", "K", "max_error_weight", "kl", "targets",
                                           "lambda_target", "weights", "fixed_code", "hyper", "notes"};

void only_keys(const ojson &j, const std::set<std::string> &keys, const std::string &where) {
    for (const auto &[k, v] : j.items()) {
        (void)v;
        if (!keys.count(k)) throw InputError(where + ": unknown key '" + k + "'");
    }
}

MatC target_matrix(const ojson &m, int K) {
    if (m.is_string()) {
        Value v = eval_expr(m.get<std::string>(), Env{});
        if (!v.isMatrix || v.m.rows() != K) throw InputError("target '" + m.get<std::string>() + "' is not K x K");
        return v.m;
    }
    return mat_from_json(m, K);
}

}  // namespace

void apply_hyper_json(Hyper &h, const ojson &j) {
    only_keys(j, kHyperKeys, "hyper");
    h.step = j.value("step", h.step);
    h.beta1 = j.value("beta1", h.beta1);
    h.beta2 = j.value("beta2", h.beta2);
    h.adamEps = j.value("adam_eps", h.adamEps);
    h.iterations = j.value("iterations", h.iterations);
    h.restarts = j.value("restarts", h.restarts);
    h.seed = j.value("seed", h.seed);
    h.threshold = j.value("threshold", h.threshold);
    h.stopFactor = j.value("stop_factor", h.stopFactor);
    h.patience = j.value("patience", h.patience);
    h.gradTol = j.value("grad_tol", h.gradTol);
}

SearchConfig search_config_from_json(const ojson &j, const std::string &baseDir) {
    try {
        check_header(j, "tgq-search");
        only_keys(j, kConfigKeys, "search config");
        SearchConfig c;
        c.n = j.at("n");
        c.K = j.value("K", 2);
        c.maxErrorWeight = j.value("max_error_weight", 2);
        c.klEnabled = j.value("kl", true);
        for (const auto &t : j.value("targets", ojson::array())) {
            c.targetNames.push_back(t.value("name", "t" + std::to_string(c.targets.size())));
            c.targets.push_back(target_matrix(t.at("matrix"), c.K));
        }
        if (j.contains("lambda_target") && !j["lambda_target"].is_null())
            c.lambdaTarget = j["lambda_target"].is_string() ? eval_real(j["lambda_target"].get<std::string>(), Env{})
                                                            : j["lambda_target"].get<double>();
        if (j.contains("weights")) {
            const auto &w = j["weights"];
            only_keys(w, {"kl", "gate", "signature"}, "weights");
            c.klWeight = w.value("kl", 1.0);
            c.gateWeight = w.value("gate", 1.0);
            c.signatureWeight = w.value("signature", 1.0);
        }
        if (j.contains("fixed_code")) {
            const auto &f = j["fixed_code"];
            only_keys(f, {"catalog", "params", "file"}, "fixed_code");
            if (f.contains("catalog")) {
                c.fixedCode = Catalog::builtin().instantiate(f["catalog"], f.value("params", ojson::object())).code;
            } else {
                std::string path = f.at("file");
                if (!path.empty() && path[0] != '/' && !baseDir.empty()) path = baseDir + "/" + path;
                c.fixedCode = load_code_file(path).code;
            }
        }
        if (j.contains("hyper")) apply_hyper_json(c.hyper, j["hyper"]);
        c.validate();
        return c;
    } catch (const ojson::exception &e) {
        throw InputError(std::string("search config: ") + e.what());
    } catch (const CatalogError &e) {
        throw InputError(std::string("search config: ") + e.what());
    } catch (const ExprError &e) {
        throw InputError(std::string("search config: ") + e.what());
    } catch (const std::invalid_argument &e) {
        throw InputError(std::string("search config: ") + e.what());
    }
}

ojson search_result_to_json(const SearchConfig &cfg, const SearchResult &r) {
    ojson j;
    j["format"] = "tgq-search-result";
    j["version"] = kCodeFileVersion;
    j["success"] = r.success;
    j["final_loss"] = r.finalLoss;
    ojson parts = ojson::object();
    for (const auto &[k, v] : r.lossBreakdown) parts[k] = v;
    j["loss_breakdown"] = parts;
    j["iterations"] = r.iterations;
    j["restart"] = r.restart;
    j["seed"] = r.seed;
    j["threshold"] = cfg.hyper.threshold;
    return j;
}

}  // namespace tgq
