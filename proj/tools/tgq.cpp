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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tgq/catalog.h"
#include "tgq/codefile.h"
#include "tgq/groups.h"
#include "tgq/sslp.h"
#include "tgq/stiefel.h"

#ifndef TGQ_CONFIG_DIR
#define TGQ_CONFIG_DIR "configs"
#endif

using namespace tgq;
using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kInputError = 2, kNonConverged = 3 };

std::string cstr(cplx z) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g%+.6gi", std::abs(z.real()) < 5e-16 ? 0.0 : z.real(),
                  std::abs(z.imag()) < 5e-16 ? 0.0 : z.imag());
    return buf;
}

ojson cjson(cplx z) { return ojson::array({z.real(), z.imag()}); }

ojson mjson(const MatC &m) {
    ojson rows = ojson::array();
    for (int r = 0; r < m.rows(); r++) {
        ojson row = ojson::array();
        for (int c = 0; c < m.cols(); c++) row.push_back(cjson(m(r, c)));
        rows.push_back(row);
    }
    return rows;
}

void print_matrix(const MatC &m, const std::string &indent) {
    for (int r = 0; r < m.rows(); r++) {
        std::cout << indent << "[";
        for (int c = 0; c < m.cols(); c++) std::cout << (c ? ", " : "") << cstr(m(r, c));
        std::cout << "]\n";
    }
}

ojson report_header(const std::string &kind) {
    ojson j;
    j["format"] = "tgq-report";
    j["version"] = 1;
    j["kind"] = kind;
    return j;
}

void print_json(const ojson &j) { std::cout << j.dump(2) << std::endl; }

// ---------------------------------------------------------------- verify

struct VerifyOpts {
    std::string file;
    int maxWeight = -1;
    double tol = 1e-9;
    bool json = false;
    bool renormalize = false;
};

int cmd_verify(const VerifyOpts &o) {
    CodeFile f = load_code_file(o.file, o.renormalize);
    const CodeSubspace &code = f.code;
    std::optional<int> claimed;
    if (f.metadata.contains("distance")) claimed = f.metadata["distance"].get<int>();
    int maxW = o.maxWeight > 0 ? o.maxWeight : std::min(code.n, claimed ? *claimed : 4);

    double orth = code.orthonormality_error();
    DistanceResult dist = distance(code, maxW, o.tol);
    int d = dist.atLeast ? maxW + 1 : dist.value;
    auto detectable = paulis_up_to(code.n, d - 1, 1);
    KlReport kl = kl_report(code, detectable);
    EnumeratorPair en = enumerators(code);
    int t = (d - 1) / 2;
    int rank = -1;
    try {
        rank = degeneracy_rank(code, paulis_up_to(code.n, t, 1), std::max(o.tol, 1e-8));
    } catch (const KLViolated &) {
    }

    bool ok = orth <= kLoadTol;
    std::string failure;
    if (!ok) failure = "basis is not orthonormal";
    if (ok && claimed) {
        if (dist.atLeast && *claimed > maxW) {
            ok = false;
            failure = "max weight " + std::to_string(maxW) + " below the claimed distance";
        } else if (dist.atLeast || dist.value != *claimed) {
            ok = false;
            failure = "distance " + dist.str() + " differs from claimed " + std::to_string(*claimed);
        }
    }

    if (o.json) {
        ojson j = report_header("verify");
        j["file"] = o.file;
        j["n"] = code.n;
        j["K"] = code.K();
        j["orthonormality_error"] = orth;
        j["distance"] = dist.value;
        j["distance_at_least"] = dist.atLeast;
        j["max_weight"] = maxW;
        if (dist.witness) j["failing_pauli"] = dist.witness->str();
        j["kl_residual"] = kl.residual;
        j["A"] = en.A;
        j["B"] = en.B;
        j["lambda_star"] = kl.lambdaStar;
        j["degeneracy_rank"] = rank;
        j["degeneracy_errors"] = 1 + (int)paulis_up_to(code.n, t, 1).size();
        if (claimed) j["claimed_distance"] = *claimed;
        j["ok"] = ok;
        if (!ok) j["failure"] = failure;
        print_json(j);
    } else {
        std::printf("code          ((%d,%d)) from %s\n", code.n, code.K(), o.file.c_str());
        std::printf("orthonormal   %.3g\n", orth);
        std::printf("distance      %s (checked up to weight %d)\n", dist.str().c_str(), maxW);
        if (dist.witness) std::printf("failing Pauli %s\n", dist.witness->str().c_str());
        std::printf("KL residual   %.3g over weight 1..%d\n", kl.residual, d - 1);
        std::printf("lambda*       %.12g\n", kl.lambdaStar);
        std::printf("degeneracy    rank %d over I + weight <= %d\n", rank, t);
        std::printf("A             ");
        for (double a : en.A) std::printf(" %.10g", std::abs(a) < 1e-12 ? 0.0 : a);
        std::printf("\nB             ");
        for (double b : en.B) std::printf(" %.10g", std::abs(b) < 1e-12 ? 0.0 : b);
        std::printf("\n%s\n", ok ? "OK" : ("FAIL: " + failure).c_str());
    }
    return ok ? kOk : kVerifyFailed;
}

// ---------------------------------------------------------------- gates

struct GatesOpts {
    std::string code;
    std::vector<std::string> layers;
    bool identify = false;
    bool json = false;
    double tol = kCatalogGateTol;
};

int cmd_gates(const GatesOpts &o) {
    CodeFile f = load_code_file(o.code);
    std::vector<LayerFile> lfs;
    for (const auto &p : o.layers) {
        lfs.push_back(load_layer_file(p));
        if (lfs.back().layer.n() != f.code.n) throw InputError(p + ": layer size differs from code");
    }
    bool ok = true;
    ojson out = report_header("gates");
    ojson arr = ojson::array();
    for (size_t i = 0; i < lfs.size(); i++) {
        LogicalAction la = logical_action(f.code, lfs[i].layer);
        std::string name = lfs[i].name.empty() ? fs::path(o.layers[i]).stem().string() : lfs[i].name;
        std::string desc;
        if (la.matrix.rows() == 2 && la.leakage < o.tol) desc = describe_su2(to_su2(la.matrix));
        std::optional<double> err;
        if (lfs[i].target) err = phase_insensitive_error(la.matrix, *lfs[i].target);
        bool good = la.leakage < o.tol && (!err || *err < o.tol);
        ok = ok && good;
        if (o.json) {
            ojson j;
            j["layer"] = name;
            j["logical"] = mjson(la.matrix);
            if (!desc.empty()) j["logical_su2"] = desc;
            j["leakage"] = la.leakage;
            if (err) j["target_error"] = *err;
            j["ok"] = good;
            arr.push_back(j);
        } else {
            std::printf("layer %s: logical %s, leakage %.3g", name.c_str(), desc.empty() ? "(matrix below)" : desc.c_str(),
                        la.leakage);
            if (err) std::printf(", target error %.3g", *err);
            std::printf("%s\n", good ? "" : "  FAIL");
            print_matrix(la.matrix, "    ");
        }
    }
    if (o.json) out["layers"] = arr;
    if (o.identify) {
        std::vector<LocalUnitaryLayer> ls;
        for (const auto &l : lfs) ls.push_back(l.layer);
        try {
            TransversalGroup g = transversal_group_of_code(f.code, ls);
            if (o.json) {
                out["group"] = g.id.str();
                out["group_order"] = g.group.order();
                out["group_classes"] = g.group.classCount;
            } else {
                std::printf("group %s (order %d, %d classes)\n", g.id.str().c_str(), g.group.order(), g.group.classCount);
            }
        } catch (const std::exception &e) {
            ok = false;
            if (o.json)
                out["group_error"] = e.what();
            else
                std::printf("group: %s\n", e.what());
        }
    }
    if (o.json) {
        out["ok"] = ok;
        print_json(out);
    }
    return ok ? kOk : kVerifyFailed;
}

// ---------------------------------------------------------------- search

struct SearchOpts {
    std::string config;
    std::optional<uint64_t> seed;
    std::optional<double> threshold;
    std::optional<int> restarts, iterations;
    std::string out;
};

std::string resolve_config(const std::string &name) {
    if (fs::exists(name)) return name;
    std::string bundled = std::string(TGQ_CONFIG_DIR) + "/" + name + ".json";
    if (fs::exists(bundled)) return bundled;
    throw InputError("no config file or bundled config named '" + name + "'");
}

int cmd_search(const SearchOpts &o) {
    std::string path = resolve_config(o.config);
    SearchConfig cfg = search_config_from_json(load_json(path), fs::path(path).parent_path().string());
    if (o.seed) cfg.hyper.seed = *o.seed;
    if (o.threshold) cfg.hyper.threshold = *o.threshold;
    if (o.restarts) cfg.hyper.restarts = *o.restarts;
    if (o.iterations) cfg.hyper.iterations = *o.iterations;
    if (cfg.hyper.threshold < 0) throw InputError("threshold must be nonnegative");
    cfg.validate();
    SearchResult r = optimize(cfg);
    ojson j = search_result_to_json(cfg, r);
    j["config"] = path;
    if (r.success) {
        std::string dir = o.out.empty() ? "tgq-search-" + fs::path(path).stem().string() : o.out;
        fs::create_directories(dir);
        CodeFile cf{r.code, ojson::object()};
        cf.metadata["source"] = "search";
        cf.metadata["config"] = fs::path(path).filename().string();
        cf.metadata["final_loss"] = r.finalLoss;
        if (cfg.klEnabled && !cfg.fixedCode) cf.metadata["distance"] = cfg.maxErrorWeight + 1;
        save_json(dir + "/code.json", code_to_json(cf));
        ojson written = ojson::array({dir + "/code.json"});
        for (size_t t = 0; t < r.layers.size(); t++) {
            LayerFile lf;
            lf.name = t < cfg.targetNames.size() ? cfg.targetNames[t] : "t" + std::to_string(t);
            lf.layer = r.layers[t];
            lf.target = cfg.targets[t];
            std::string p = dir + "/" + lf.name + ".json";
            save_json(p, layer_to_json(lf));
            written.push_back(p);
        }
        j["written"] = written;
    }
    print_json(j);
    return r.success ? kOk : kNonConverged;
}

// ---------------------------------------------------------------- sslp

struct SslpOpts {
    int n = 0, K = 2, m = 0;
    std::string mode = "bd";
    std::string b;
    std::string sum = "partition";
    bool filterOnly = false;
    bool json = false;
    std::optional<uint64_t> seed;
    std::optional<int> restarts, iterations;
    std::optional<double> threshold;
    std::string out;
};

std::vector<int> parse_int_list(const std::string &s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            size_t used;
            out.push_back(std::stoi(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception &) {
            throw InputError("bad integer list '" + s + "'");
        }
    }
    return out;
}

int cmd_sslp(const SslpOpts &o) {
    SslpOptions opt;
    if (o.mode == "bd")
        opt.mode = SslpMode::BD;
    else if (o.mode == "general")
        opt.mode = SslpMode::General;
    else
        throw InputError("mode must be bd or general");
    if (o.n < 1 || o.n > kMaxQubits || o.K < 1 || o.m < 2) throw InputError("need 1 <= n <= 10, K >= 1, m >= 2");
    if (!o.b.empty()) opt.b = parse_int_list(o.b);
    if (o.sum == "any")
        opt.sumTarget = kSumAny;
    else if (o.sum == "partition")
        opt.sumTarget = kSumPartition;
    else
        opt.sumTarget = parse_int_list(o.sum).at(0);
    opt.filterOnly = o.filterOnly;
    if (o.seed) opt.hyper.seed = *o.seed;
    if (o.restarts) opt.hyper.restarts = *o.restarts;
    if (o.iterations) opt.hyper.iterations = *o.iterations;
    if (o.threshold) opt.hyper.threshold = *o.threshold;
    opt.sink = [&](const StageRecord &r) {
        if (o.json) {
            ojson j;
            j["stage"] = r.stage;
            j["angle_vector"] = r.a.a;
            j["verdict"] = r.verdict;
            j["detail"] = r.detail;
            std::cout << j.dump() << "\n";
        } else {
            std::printf("%-8s %-24s %-12s %s\n", r.stage.c_str(), r.a.str().c_str(), r.verdict.c_str(), r.detail.c_str());
        }
        std::cout.flush();
    };
    std::vector<SslpCandidate> cands;
    try {
        cands = sslp_pipeline(o.n, o.K, o.m, opt);
    } catch (const std::invalid_argument &e) {
        throw InputError(e.what());
    }
    int optimized = 0;
    ojson vecs = ojson::array();
    for (const auto &c : cands) {
        vecs.push_back(c.a.a);
        if (!c.code) continue;
        optimized++;
        if (!o.out.empty()) {
            fs::create_directories(o.out);
            std::string tag;
            for (int v : c.a.a) tag += std::to_string(v);
            CodeFile cf{*c.code, ojson::object()};
            cf.metadata["source"] = "sslp";
            cf.metadata["angle_vector"] = c.a.a;
            cf.metadata["m"] = o.m;
            cf.metadata["distance"] = 3;
            save_json(o.out + "/sslp-" + std::to_string(o.m) + "-" + tag + ".json", code_to_json(cf, 1e-13));
            if (opt.mode == SslpMode::BD) {
                LayerFile lz{"Zm", diagonal_layer(c.a), std::nullopt};
                save_json(o.out + "/sslp-" + std::to_string(o.m) + "-" + tag + "-Z.json", layer_to_json(lz));
            }
        }
    }
    if (o.json) {
        ojson j;
        j["survivors"] = (int)cands.size();
        j["optimized"] = optimized;
        j["angle_vectors"] = vecs;
        std::cout << j.dump() << "\n";
    } else {
        std::printf("survivors: %d, optimized codes: %d\n", (int)cands.size(), optimized);
    }
    // Survivors that all failed to converge are a non-convergence, not a negative result.
    if (!o.filterOnly && !cands.empty() && optimized == 0) return kNonConverged;
    return kOk;
}

// ---------------------------------------------------------------- catalog

ojson parse_params(const std::vector<std::string> &kvs) {
    ojson p = ojson::object();
    for (const auto &kv : kvs) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw InputError("parameter must be key=value: " + kv);
        std::string k = kv.substr(0, eq), v = kv.substr(eq + 1);
        try {
            p[k] = ojson::parse(v);
        } catch (const std::exception &) {
            p[k] = eval_real(v);
        }
    }
    return p;
}

CodeFile instance_file(const Catalog &cat, const Instance &inst) {
    CodeFile cf{inst.code, ojson::object()};
    cf.metadata["source"] = "catalog";
    cf.metadata["catalog_id"] = inst.id;
    cf.metadata["params"] = inst.params;
    cf.metadata["distance"] = inst.claimedDistance;
    cf.metadata["group"] = inst.group.str();
    (void)cat;
    return cf;
}

int cmd_catalog_list(bool json) {
    const Catalog &cat = Catalog::builtin();
    if (json) {
        ojson arr = ojson::array();
        for (const auto &e : cat.entries())
            arr.push_back({{"id", e.id}, {"n", e.n}, {"K", e.K}, {"d", e.d}, {"group", e.group}});
        ojson j = report_header("catalog-list");
        j["entries"] = arr;
        print_json(j);
    } else {
        for (const auto &e : cat.entries())
            std::printf("%-18s ((%d,%d,%d))  %s\n", e.id.c_str(), e.n, e.K, e.d, e.group.c_str());
        std::printf("%zu entries\n", cat.entries().size());
    }
    return kOk;
}

int cmd_catalog_emit(const std::string &id, const std::string &out, const std::string &layerDir,
                     const std::vector<std::string> &params) {
    const Catalog &cat = Catalog::builtin();
    Instance inst = cat.instantiate(id, parse_params(params));
    ojson j = code_to_json(instance_file(cat, inst));
    if (out.empty())
        std::cout << j.dump(1) << "\n";
    else
        save_json(out, j);
    if (!layerDir.empty()) {
        fs::create_directories(layerDir);
        for (const auto &nl : inst.layers) {
            LayerFile lf{nl.name, nl.layer, MatC(nl.logical)};
            save_json(layerDir + "/" + nl.name + ".json", layer_to_json(lf));
        }
    }
    return kOk;
}

int cmd_catalog_check(const std::string &which, bool json) {
    const Catalog &cat = Catalog::builtin();
    std::vector<std::string> ids;
    if (which == "all") {
        for (const auto &e : cat.entries()) ids.push_back(e.id);
    } else {
        cat.entry(which);
        ids.push_back(which);
    }
    bool ok = true;
    ojson arr = ojson::array();
    double total = 0;
    for (const auto &id : ids) {
        EntryCheck c = cat.check(id);
        ok = ok && c.ok;
        total += c.seconds;
        double maxLeak = 0, maxErr = 0;
        for (const auto &l : c.layers) {
            maxLeak = std::max(maxLeak, l.leakage);
            maxErr = std::max(maxErr, l.error);
        }
        if (json) {
            ojson j;
            j["id"] = id;
            j["ok"] = c.ok;
            if (!c.ok) j["failure"] = c.failure;
            j["kl_residual"] = c.klResidual;
            j["distance"] = c.distance.str();
            j["layers"] = (int)c.layers.size();
            j["max_leakage"] = maxLeak;
            j["max_layer_error"] = maxErr;
            j["lambda_star"] = c.lambdaStar;
            j["group"] = c.groupFound.str();
            j["seconds"] = c.seconds;
            arr.push_back(j);
        } else {
            std::printf("%-18s %s  kl %.1e  d %s  layers %zu (leak %.1e, err %.1e)  lambda* %.9f  %s  %.2fs%s%s\n",
                        id.c_str(), c.ok ? "PASS" : "FAIL", c.klResidual, c.distance.str().c_str(), c.layers.size(),
                        maxLeak, maxErr, c.lambdaStar, c.groupFound.str().c_str(), c.seconds, c.ok ? "" : "  ",
                        c.failure.c_str());
        }
    }
    if (json) {
        ojson j = report_header("catalog-check");
        j["entries"] = arr;
        j["ok"] = ok;
        j["seconds"] = total;
        print_json(j);
    } else {
        std::printf("%zu entries, %s, %.2fs\n", ids.size(), ok ? "all pass" : "FAILURES", total);
    }
    return ok ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"tgq: verify and search small quantum codes with transversal gates"};
    app.require_subcommand(1);

    VerifyOpts vo;
    auto *verify = app.add_subcommand("verify", "distance, KL residual, enumerators and signature of a code file");
    verify->add_option("code", vo.file, "code file")->required();
    verify->add_option("--max-weight", vo.maxWeight, "largest Pauli weight to check");
    verify->add_option("--tol", vo.tol, "KL tolerance")->capture_default_str();
    verify->add_flag("--json", vo.json, "machine-readable report");
    verify->add_flag("--renormalize", vo.renormalize, "normalize basis vectors on load");

    GatesOpts go;
    auto *gates = app.add_subcommand("gates", "logical action of transversal layers");
    gates->add_option("code", go.code, "code file")->required();
    gates->add_option("layers", go.layers, "layer files")->required();
    gates->add_flag("--identify", go.identify, "identify the group generated by the layers");
    gates->add_flag("--json", go.json, "machine-readable report");
    gates->add_option("--tol", go.tol, "leakage tolerance")->capture_default_str();

    SearchOpts so;
    auto *search = app.add_subcommand("search", "Stiefel-manifold code and gate search");
    search->add_option("config", so.config, "config file or bundled config name")->required();
    search->add_option("--seed", so.seed, "RNG seed");
    search->add_option("--threshold", so.threshold, "success threshold");
    search->add_option("--restarts", so.restarts, "restart count");
    search->add_option("--iterations", so.iterations, "iteration cap per restart");
    search->add_option("-o,--out", so.out, "output directory for found code and layers");

    SslpOpts po;
    auto *sslp = app.add_subcommand("sslp", "subset-sum / LP pipeline");
    sslp->add_option("n", po.n, "qubits")->required();
    sslp->add_option("K", po.K, "logical dimension")->required();
    sslp->add_option("m", po.m, "modulus")->required();
    sslp->add_option("--mode", po.mode, "bd or general")->capture_default_str();
    sslp->add_option("--b", po.b, "comma-separated b_k values (general mode)");
    sslp->add_option("--sum", po.sum, "angle-vector sum: partition (2m-1), any, or an integer")->capture_default_str();
    sslp->add_flag("--filter-only", po.filterOnly, "stop after the LP filter");
    sslp->add_flag("--json", po.json, "JSON-lines stage ledger");
    sslp->add_option("--seed", po.seed, "RNG seed for block optimization");
    sslp->add_option("--restarts", po.restarts, "restarts per candidate");
    sslp->add_option("--iterations", po.iterations, "iteration cap per restart");
    sslp->add_option("--threshold", po.threshold, "KL threshold for block optimization");
    sslp->add_option("-o,--out", po.out, "directory for optimized codes");

    auto *catalog = app.add_subcommand("catalog", "bundled code catalog");
    catalog->require_subcommand(1);
    bool listJson = false;
    auto *clist = catalog->add_subcommand("list", "list entries");
    clist->add_flag("--json", listJson);
    std::string emitId, emitOut, emitLayers;
    std::vector<std::string> emitParams;
    auto *cemit = catalog->add_subcommand("emit", "write a code file for an entry");
    cemit->add_option("id", emitId)->required();
    cemit->add_option("-o,--out", emitOut, "code file (stdout if omitted)");
    cemit->add_option("--layers", emitLayers, "directory for layer files");
    cemit->add_option("--param", emitParams, "parameter override key=value");
    std::string checkId = "all";
    bool checkJson = false;
    auto *ccheck = catalog->add_subcommand("check", "self-verify entries");
    ccheck->add_option("id", checkId, "entry id or all")->capture_default_str();
    ccheck->add_flag("--json", checkJson);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kInputError;
    }

    try {
        if (*verify) return cmd_verify(vo);
        if (*gates) return cmd_gates(go);
        if (*search) return cmd_search(so);
        if (*sslp) return cmd_sslp(po);
        if (*clist) return cmd_catalog_list(listJson);
        if (*cemit) return cmd_catalog_emit(emitId, emitOut, emitLayers, emitParams);
        if (*ccheck) return cmd_catalog_check(checkId, checkJson);
    } catch (const InputError &e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kInputError;
    } catch (const CatalogError &e) {
        std::fprintf(stderr, "catalog: %s\n", e.what());
        return e.kind == CatalogError::SelfVerifyFailed ? kVerifyFailed : kInputError;
    } catch (const ExprError &e) {
        std::fprintf(stderr, "expression: %s\n", e.what());
        return kInputError;
    } catch (const fs::filesystem_error &e) {
        std::fprintf(stderr, "filesystem: %s\n", e.what());
        return kInputError;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kInputError;
    }
    return kOk;
}
