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

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "tgq/catalog.h"
#include "tgq/codefile.h"

using namespace tgq;
using ojson = nlohmann::ordered_json;

namespace {

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

std::string tmp_path(const std::string &name) {
    return (std::filesystem::temp_directory_path() / ("tgq_test_" + name)).string();
}

CodeSubspace random_code(int n, int K, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    MatC th(size_t{1} << n, K);
    for (int i = 0; i < th.rows(); i++)
        for (int j = 0; j < K; j++) th(i, j) = cplx(g(rng), g(rng));
    Eigen::HouseholderQR<MatC> qr(th);
    return CodeSubspace(n, qr.householderQ() * MatC::Identity(th.rows(), K));
}

ojson minimal_code() {
    return ojson::parse(R"({"format": "tgq-code", "version": 1, "n": 2, "K": 1,
                            "basis": [[["00", "1", "0"]]]})");
}

}  // namespace

TEST_CASE("decimal serialization round trips every double") {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<uint64_t> bits;
    int checked = 0;
    while (checked < 20000) {
        uint64_t u = bits(rng);
        double x;
        std::memcpy(&x, &u, sizeof x);
        if (!std::isfinite(x)) continue;
        CHECK(bit_equal(parse_double(format_double(x)), x));
        checked++;
    }
    for (double x : {0.0, -0.0, 1.0, 0.1, 1e-300, 5e-324, 1.7976931348623157e308})
        CHECK(bit_equal(parse_double(format_double(x)), x));
    CHECK_THROWS_AS(parse_double("abc"), InputError);
    CHECK_THROWS_AS(parse_double("1.0x"), InputError);
    CHECK_THROWS_AS(parse_double("inf"), InputError);
    CHECK_THROWS_AS(parse_double("nan"), InputError);
}

TEST_CASE("code file round trip is bit exact") {
    std::mt19937_64 rng(2);
    std::vector<CodeSubspace> codes = {random_code(3, 2, rng), random_code(6, 3, rng),
                                       Catalog::builtin().instantiate("seven23-bd36").code};
    for (const auto &c : codes) {
        CodeFile f{c, ojson{{"distance", 3}, {"note", "x"}}};
        std::string path = tmp_path("rt.json");
        save_json(path, code_to_json(f));
        CodeFile g = load_code_file(path);
        REQUIRE(g.code.n == c.n);
        REQUIRE(g.code.K() == c.K());
        for (int i = 0; i < c.basis.rows(); i++) {
            for (int k = 0; k < c.K(); k++) {
                CHECK(bit_equal(g.code.basis(i, k).real(), c.basis(i, k).real()));
                CHECK(bit_equal(g.code.basis(i, k).imag(), c.basis(i, k).imag()));
            }
        }
        CHECK(g.metadata["distance"] == 3);
        std::filesystem::remove(path);
    }
}

TEST_CASE("code file ket order follows the written bitstring") {
    ojson j = ojson::parse(R"({"format": "tgq-code", "version": 1, "n": 3, "K": 1,
                               "basis": [[["100", "0.6", "0"], ["001", "0", "0.8"]]]})");
    CodeFile f = code_from_json(j);
    CHECK(std::abs(f.code.basis(4, 0) - 0.6) < 1e-15);
    CHECK(std::abs(f.code.basis(1, 0) - cplx(0, 0.8)) < 1e-15);
    // Zero amplitudes are omitted on write.
    ojson back = code_to_json(f);
    CHECK(back["basis"][0].size() == 2);
    CHECK(back["basis"][0][0][0] == "001");
}

TEST_CASE("code file input errors") {
    auto bad = [](auto edit) {
        ojson j = minimal_code();
        edit(j);
        return j;
    };
    CHECK_NOTHROW(code_from_json(minimal_code()));
    CHECK_THROWS_AS(code_from_json(bad([](ojson &j) { j["format"] = "other"; })), InputError);
    CHECK_THROWS_AS(code_from_json(bad([](ojson &j) { j["version"] = 2; })), InputError);
    CHECK_THROWS_AS(code_from_json(bad([](ojson &j) { j["K"] = 2; })), InputError);
    CHECK_THROWS_AS(code_from_json(bad([](ojson &j) { j["basis"][0][0][0] = "0"; })), InputError);
    CHECK_THROWS_AS(code_from_json(bad([](ojson &j) { j["basis"][0][0][0] = "0a"; })), InputError);
    CHECK_THROWS_AS(code_from_json(bad([](ojson &j) { j["basis"][0][0][1] = "nan"; })), InputError);
    CHECK_THROWS_AS(code_from_json(bad([](ojson &j) { j["basis"][0][0] = ojson::array({"00", "1"}); })),
                    InputError);
    CHECK_THROWS_AS(code_from_json(bad([](ojson &j) { j["basis"][0].push_back({"00", "0", "0"}); })), InputError);

    ojson half = bad([](ojson &j) { j["basis"][0][0][1] = "0.5"; });
    CHECK_THROWS_AS(code_from_json(half), InputError);
    CodeFile f = code_from_json(half, true);
    CHECK(std::abs(f.code.basis(0, 0) - 1.0) < 1e-15);
    // Within the load tolerance no flag is needed.
    CHECK_NOTHROW(code_from_json(bad([](ojson &j) { j["basis"][0][0][1] = "1.0000001"; })));

    CHECK_THROWS_AS(load_code_file(tmp_path("missing.json")), InputError);
    std::string path = tmp_path("garbage.json");
    {
        std::ofstream out(path);
        out << "{ not json";
    }
    CHECK_THROWS_AS(load_code_file(path), InputError);
    std::filesystem::remove(path);
}

TEST_CASE("layer file round trip and checks") {
    LayerFile f;
    f.name = "Zm";
    f.layer = LocalUnitaryLayer({gate_z(0.3), named_gate("F"), named_gate("Hh")});
    f.target = MatC(gate_z(-0.3));
    LayerFile g = layer_from_json(layer_to_json(f));
    CHECK(g.name == "Zm");
    REQUIRE(g.layer.n() == 3);
    for (int q = 0; q < 3; q++) CHECK((g.layer.factors[q] - f.layer.factors[q]).cwiseAbs().maxCoeff() == 0);
    REQUIRE(g.target.has_value());
    CHECK((*g.target - *f.target).cwiseAbs().maxCoeff() == 0);

    ojson j = layer_to_json(f);
    j["factors"][1][0][0] = {"2", "0"};
    CHECK_THROWS_AS(layer_from_json(j), InputError);
    ojson k = layer_to_json(f);
    k["n"] = 4;
    CHECK_THROWS_AS(layer_from_json(k), InputError);
}

TEST_CASE("search config parsing") {
    ojson j = ojson::parse(R"js({"format": "tgq-search", "version": 1, "n": 7, "K": 2, "kl": false,
        "fixed_code": {"catalog": "seven23-cyclic", "params": {"lam": 0}},
        "targets": [{"name": "S", "matrix": "Sh"},
                    {"name": "M", "matrix": [[["0", "1"], ["0", "0"]], [["0", "0"], ["0", "-1"]]]}],
        "lambda_target": "sqrt(2)", "weights": {"gate": 2},
        "hyper": {"restarts": 3, "seed": 9, "threshold": 1e-7, "grad_tol": 0}})js");
    SearchConfig c = search_config_from_json(j);
    CHECK(c.n == 7);
    CHECK_FALSE(c.klEnabled);
    REQUIRE(c.targets.size() == 2);
    CHECK(c.targetNames[0] == "S");
    CHECK((c.targets[0] - MatC(named_gate("Sh"))).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(std::abs(c.targets[1](0, 0) - cplx(0, 1)) < 1e-15);
    REQUIRE(c.lambdaTarget.has_value());
    CHECK(std::abs(*c.lambdaTarget - std::sqrt(2.0)) < 1e-15);
    CHECK(c.gateWeight == 2);
    CHECK(c.klWeight == 1);
    CHECK(c.hyper.restarts == 3);
    CHECK(c.hyper.seed == 9);
    CHECK(c.hyper.gradTol == 0);
    CHECK(c.hyper.iterations == Hyper{}.iterations);
    REQUIRE(c.fixedCode.has_value());
    CHECK(c.fixedCode->n == 7);

    auto bad = [&](auto edit) {
        ojson b = j;
        edit(b);
        return b;
    };
    CHECK_THROWS_AS(search_config_from_json(bad([](ojson &b) { b["typo"] = 1; })), InputError);
    CHECK_THROWS_AS(search_config_from_json(bad([](ojson &b) { b["hyper"]["stepsize"] = 1; })), InputError);
    CHECK_THROWS_AS(search_config_from_json(bad([](ojson &b) { b["targets"] = ojson::array(); b.erase("lambda_target"); })),
                    InputError);
    CHECK_THROWS_AS(search_config_from_json(bad([](ojson &b) { b["targets"][0]["matrix"] = "Sh +"; })), InputError);
    CHECK_THROWS_AS(search_config_from_json(bad([](ojson &b) { b["n"] = 5; })), InputError);
    CHECK_THROWS_AS(search_config_from_json(bad([](ojson &b) { b["fixed_code"]["catalog"] = "nope"; })), InputError);
    CHECK_THROWS_AS(search_config_from_json(bad([](ojson &b) { b["hyper"]["restarts"] = 0; })), InputError);
    CHECK_THROWS_AS(search_config_from_json(bad([](ojson &b) { b["lambda_target"] = -1.0; })), InputError);
}

TEST_CASE("bundled configs parse") {
    for (const char *name : {"search-523", "gates-for-steane-2o"}) {
        std::string path = std::string(TGQ_CONFIG_DIR) + "/" + name + ".json";
        SearchConfig c = search_config_from_json(load_json(path));
        CHECK(c.K == 2);
    }
}
