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

#include "tgq/groups.h"

#include <cmath>
#include <deque>
#include <sstream>

#include "tgq/embedded.h"
#include "tgq/expr.h"

namespace tgq {

GroupId GroupId::parse(const std::string &t) {
    if (t == "2T") return two_t();
    if (t == "2O") return two_o();
    if (t == "2I") return two_i();
    auto num = [&](size_t from) {
        size_t used = 0;
        int v = std::stoi(t.substr(from), &used);
        if (from + used != t.size() || v < 1) throw std::invalid_argument("bad group id: " + t);
        return v;
    };
    if (t.rfind("BD", 0) == 0) return binary_dihedral(num(2));
    if (t.rfind("C", 0) == 0) return cyclic(num(1));
    throw std::invalid_argument("bad group id: " + t);
}

int GroupId::expected_order() const {
    switch (family) {
        case Cyclic: return index;
        case BinaryDihedral: return 2 * index;
        case TwoT: return 24;
        case TwoO: return 48;
        case TwoI: return 120;
        case Unknown: return order;
    }
    return 0;
}

std::string GroupId::str() const {
    switch (family) {
        case Cyclic: return "C" + std::to_string(index);
        case BinaryDihedral: return "BD" + std::to_string(index);
        case TwoT: return "2T";
        case TwoO: return "2O";
        case TwoI: return "2I";
        case Unknown: break;
    }
    return "Unknown(" + std::to_string(order) + "," + std::to_string(classes) + ")";
}

bool GroupId::operator==(const GroupId &o) const {
    if (family != o.family) return false;
    if (family == Cyclic || family == BinaryDihedral) return index == o.index;
    if (family == Unknown) return order == o.order && classes == o.classes;
    return true;
}

namespace {

// Grid offset keeps common exact values (0, 1/2, 1/sqrt2) away from cell edges.
constexpr double kGrid = 1e-6;
constexpr double kOffset = 0.2718281828;

uint64_t element_key(const Mat2 &g) {
    uint64_t h = 1469598103934665603ull;
    for (int k = 0; k < 4; k++) {
        cplx v = g(k);
        for (double x : {v.real(), v.imag()}) {
            auto q = (int64_t)std::floor(x / kGrid + kOffset);
            h ^= (uint64_t)q + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
    }
    return h;
}

double dist(const Mat2 &a, const Mat2 &b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

int FiniteSu2Group::find(const Mat2 &g, double tol) const {
    auto range = index_.equal_range(element_key(g));
    for (auto it = range.first; it != range.second; ++it) {
        if (dist(elements[it->second], g) < tol) return it->second;
    }
    // Near a cell edge the key can differ; fall back to a scan.
    for (size_t i = 0; i < elements.size(); i++) {
        if (dist(elements[i], g) < tol) return (int)i;
    }
    return -1;
}

std::vector<Mat2> standard_generators(const GroupId &id) {
    switch (id.family) {
        case GroupId::Cyclic:
            if (id.index < 1) break;
            return {gate_z(4 * kPi / id.index)};
        case GroupId::BinaryDihedral:
            if (id.index < 2 || id.index % 2) break;
            return {named_gate("Xh"), gate_z(4 * kPi / id.index)};
        case GroupId::TwoT:
            return {named_gate("Xh"), named_gate("F")};
        case GroupId::TwoO:
            return {named_gate("Sh"), named_gate("Hh")};
        case GroupId::TwoI:
            return {named_gate("Xh"), Mat2(named_gate("Zh") * named_gate("Phi"))};
        case GroupId::Unknown:
            break;
    }
    throw std::invalid_argument("no standard generators for " + id.str());
}

FiniteSu2Group closure(const std::vector<Mat2> &gens, int maxOrder, double tol) {
    FiniteSu2Group g;
    auto add = [&](const Mat2 &m) {
        int idx = -1;
        auto range = g.index_.equal_range(element_key(m));
        for (auto it = range.first; it != range.second; ++it) {
            if (dist(g.elements[it->second], m) < tol) {
                idx = it->second;
                break;
            }
        }
        if (idx >= 0) return false;
        if (g.order() >= maxOrder) {
            throw OrderExceeded("closure exceeded " + std::to_string(maxOrder) + " elements");
        }
        g.index_.emplace(element_key(m), g.order());
        g.elements.push_back(m);
        return true;
    };
    add(Mat2::Identity());
    std::deque<int> todo{0};
    while (!todo.empty()) {
        int k = todo.front();
        todo.pop_front();
        for (const auto &s : gens) {
            Mat2 p = g.elements[k] * s;
            if (add(p)) todo.push_back(g.order() - 1);
        }
    }
    g.abelian = true;
    for (size_t a = 0; a < gens.size() && g.abelian; a++) {
        for (size_t b = a + 1; b < gens.size(); b++) {
            if (dist(gens[a] * gens[b], gens[b] * gens[a]) > tol) {
                g.abelian = false;
                break;
            }
        }
    }
    g.classCount = conjugacy_class_count(g, tol);
    return g;
}

std::vector<int> conjugacy_class_sizes(const FiniteSu2Group &g, double tol) {
    std::vector<int> cls(g.order(), -1);
    std::vector<int> sizes;
    for (int a = 0; a < g.order(); a++) {
        if (cls[a] >= 0) continue;
        int c = (int)sizes.size();
        sizes.push_back(0);
        for (const auto &h : g.elements) {
            // SU(2): h^{-1} = h^dagger.
            int k = g.find(h * g.elements[a] * h.adjoint(), tol);
            if (k < 0) throw std::runtime_error("group is not closed under conjugation");
            if (cls[k] < 0) {
                cls[k] = c;
                sizes[c]++;
            }
        }
    }
    return sizes;
}

int conjugacy_class_count(const FiniteSu2Group &g, double tol) {
    return (int)conjugacy_class_sizes(g, tol).size();
}

GroupId identify(const FiniteSu2Group &g) {
    int n = g.order(), c = g.classCount;
    if (g.abelian) {
        if (n % 2 == 0) return GroupId::cyclic(n);
        return GroupId::unknown(n, c);
    }
    if (n == 24 && c == 7) return GroupId::two_t();
    if (n == 48 && c == 8) return GroupId::two_o();
    if (n == 120 && c == 9) return GroupId::two_i();
    if (n % 4 == 0 && c == n / 4 + 3) return GroupId::binary_dihedral(n / 2);
    return GroupId::unknown(n, c);
}

Mat2 to_su2(const Mat2 &u, cplx *phase) {
    // Polar projection first so the rescaled element is exactly unitary.
    Eigen::JacobiSVD<Mat2> svd(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat2 w = svd.matrixU() * svd.matrixV().adjoint();
    cplx ph = std::sqrt(w.determinant());
    if (phase) *phase = ph;
    return w / ph;
}

TransversalGroup transversal_group_of_code(const CodeSubspace &code,
                                           const std::vector<LocalUnitaryLayer> &layers,
                                           bool adjoinMinusIdentity, double tol) {
    if (code.K() != 2) throw DimensionError("transversal groups need K = 2");
    TransversalGroup out;
    std::vector<Mat2> gens;
    for (const auto &layer : layers) {
        auto act = logical_action(code, layer);
        if (act.leakage > tol) {
            std::ostringstream ss;
            ss << "layer leaks out of the code space (leakage " << act.leakage << ")";
            throw SubspaceNotPreserved(ss.str());
        }
        Mat2 m = act.matrix;
        cplx ph;
        gens.push_back(to_su2(m, &ph));
        out.logical.push_back(m);
        out.phases.push_back(ph);
    }
    if (adjoinMinusIdentity) gens.push_back(-Mat2::Identity());
    out.group = closure(gens, 1000, tol);
    out.id = identify(out.group);
    return out;
}

namespace {

std::vector<ClassData> parse_tables(const std::string &text) {
    std::vector<ClassData> out;
    Env env;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head) || head[0] == '#') continue;
        if (head == "family") {
            out.emplace_back();
            ls >> out.back().family >> out.back().order;
            env.clear();
        } else if (head == "let") {
            std::string name, e;
            ls >> name >> e;
            env[name] = eval_expr(e, env);
        } else if (head == "sizes") {
            int s;
            while (ls >> s) out.back().sizes.push_back(s);
        } else if (head == "row") {
            std::string label, e;
            ls >> label;
            std::vector<cplx> row;
            while (ls >> e) row.push_back(eval_scalar(e, env));
            out.back().dims.push_back((int)std::lround(row.at(0).real()));
            out.back().characters.push_back(row);
        } else {
            throw std::runtime_error("bad character table line: " + line);
        }
    }
    return out;
}

}  // namespace

const std::vector<ClassData> &exceptional_class_data() {
    static const std::vector<ClassData> tables = parse_tables(embedded::character_tables());
    return tables;
}

ClassData class_data(const GroupId &id) {
    ClassData d;
    d.family = id.str();
    d.order = id.expected_order();
    const cplx I(0, 1);
    if (id.family == GroupId::Cyclic) {
        int n = id.index;
        for (int c = 0; c < n; c++) d.sizes.push_back(1);
        for (int r = 0; r < n; r++) {
            d.dims.push_back(1);
            std::vector<cplx> row;
            for (int c = 0; c < n; c++) row.push_back(std::exp(2.0 * kPi * I * (double)(r * c) / (double)n));
            d.characters.push_back(row);
        }
        return d;
    }
    if (id.family == GroupId::BinaryDihedral) {
        // Classes: 1, a^m, {a^k, a^-k} for k = 1..m-1, x a^even, x a^odd.
        int m = id.index / 2;
        d.sizes = {1, 1};
        for (int k = 1; k < m; k++) d.sizes.push_back(2);
        d.sizes.push_back(m);
        d.sizes.push_back(m);
        cplx xs = (m % 2 == 0) ? cplx(1) : I;
        for (int r = 0; r < 4; r++) {
            double ca = r < 2 ? 1.0 : -1.0;
            cplx cx = r < 2 ? cplx(1) : xs;
            if (r % 2) cx = -cx;
            std::vector<cplx> row{1, std::pow(ca, m)};
            for (int k = 1; k < m; k++) row.push_back(std::pow(ca, k));
            row.push_back(cx);
            row.push_back(cx * ca);
            d.dims.push_back(1);
            d.characters.push_back(row);
        }
        for (int h = 1; h < m; h++) {
            std::vector<cplx> row{2, 2 * std::cos(kPi * h)};
            for (int k = 1; k < m; k++) row.push_back(2 * std::cos(kPi * h * k / m));
            row.push_back(0);
            row.push_back(0);
            d.dims.push_back(2);
            d.characters.push_back(row);
        }
        return d;
    }
    for (const auto &t : exceptional_class_data()) {
        if (t.family == id.str()) return t;
    }
    throw std::invalid_argument("no class data for " + id.str());
}

std::string describe_su2(const Mat2 &u, double tol) {
    static const char *names[] = {"I", "Xh", "Yh", "Zh", "Hh", "Sh", "F", "Phi", "Phistar"};
    for (const char *nm : names) {
        Mat2 g = named_gate(nm);
        if ((u - g).cwiseAbs().maxCoeff() < tol) return nm;
        if ((u + g).cwiseAbs().maxCoeff() < tol) return std::string("-") + nm;
    }
    if (std::abs(u(0, 1)) < tol && std::abs(u(1, 0)) < tol) {
        // u = Z(theta) with theta = 2 arg(u11); report theta / pi as a small fraction.
        double t = 2 * std::arg(u(1, 1)) / kPi;
        for (int den = 1; den <= 200; den++) {
            double num = std::round(t * den);
            if (std::abs(num / den - t) < 1e-9) {
                int p = (int)num;
                std::string s = p == 0 ? "0" : (p == 1 ? "" : p == -1 ? "-" : std::to_string(p)) + "pi";
                if (p != 0 && den != 1) s += "/" + std::to_string(den);
                return "Z(" + s + ")";
            }
        }
        return "Z(" + std::to_string(t) + "pi)";
    }
    return "";
}

}  // namespace tgq
