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

#include "tgq/lp.h"

#include <stdexcept>

namespace tgq {

namespace {

template <typename T>
struct Tableau {
    int rows, cols;  // cols counts structural + artificial variables
    std::vector<std::vector<T>> a;  // rows x (cols + 1), last column is rhs
    std::vector<T> cost;            // reduced costs, cols + 1 (last = -objective)
    std::vector<int> basis;
};

template <typename T, typename Less>
int run_phase1(Tableau<T> &t, int nStruct, const T &tol, Less less) {
    int pivots = 0;
    T zero(0);
    while (true) {
        int enter = -1;
        for (int j = 0; j < t.cols; j++) {
            if (less(t.cost[j], zero - tol)) {
                enter = j;
                break;
            }
        }
        if (enter < 0) break;
        int leave = -1;
        T best(0);
        for (int i = 0; i < t.rows; i++) {
            if (!less(tol, t.a[i][enter])) continue;
            T ratio = t.a[i][t.cols] / t.a[i][enter];
            if (leave < 0 || less(ratio, best) || (!less(best, ratio) && t.basis[i] < t.basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave < 0) break;  // unbounded direction; cannot happen in phase 1
        T p = t.a[leave][enter];
        for (auto &v : t.a[leave]) v /= p;
        for (int i = 0; i < t.rows; i++) {
            if (i == leave || t.a[i][enter] == zero) continue;
            T f = t.a[i][enter];
            for (int j = 0; j <= t.cols; j++) t.a[i][j] -= f * t.a[leave][j];
        }
        if (t.cost[enter] != zero) {
            T f = t.cost[enter];
            for (int j = 0; j <= t.cols; j++) t.cost[j] -= f * t.a[leave][j];
        }
        t.basis[leave] = enter;
        pivots++;
    }
    (void)nStruct;
    return pivots;
}

template <typename T>
Tableau<T> build(const std::vector<std::vector<T>> &A, const std::vector<T> &b, int nStruct) {
    Tableau<T> t;
    t.rows = (int)A.size();
    t.cols = nStruct + t.rows;
    t.a.assign(t.rows, std::vector<T>(t.cols + 1, T(0)));
    t.cost.assign(t.cols + 1, T(0));
    t.basis.resize(t.rows);
    for (int i = 0; i < t.rows; i++) {
        bool flip = b[i] < T(0);
        for (int j = 0; j < nStruct; j++) t.a[i][j] = flip ? -A[i][j] : A[i][j];
        t.a[i][nStruct + i] = T(1);
        t.a[i][t.cols] = flip ? -b[i] : b[i];
        t.basis[i] = nStruct + i;
        for (int j = 0; j < nStruct; j++) t.cost[j] -= t.a[i][j];
        t.cost[t.cols] -= t.a[i][t.cols];
    }
    return t;
}

}  // namespace

LpResult lp_feasible(const Eigen::MatrixXd &A, const Eigen::VectorXd &b, double tol) {
    if (A.rows() != b.size()) throw std::invalid_argument("lp: row count mismatch");
    int nStruct = (int)A.cols();
    std::vector<std::vector<double>> rows(A.rows(), std::vector<double>(nStruct));
    std::vector<double> rhs(b.data(), b.data() + b.size());
    for (int i = 0; i < A.rows(); i++)
        for (int j = 0; j < nStruct; j++) rows[i][j] = A(i, j);
    auto t = build(rows, rhs, nStruct);
    LpResult r;
    r.pivots = run_phase1(t, nStruct, tol, [](double x, double y) { return x < y; });
    r.x.assign(nStruct, 0.0);
    r.infeasibility = 0;
    for (int i = 0; i < t.rows; i++) {
        if (t.basis[i] < nStruct)
            r.x[t.basis[i]] = std::max(0.0, t.a[i][t.cols]);
        else
            r.infeasibility += std::abs(t.a[i][t.cols]);
    }
    Eigen::VectorXd xv = Eigen::Map<Eigen::VectorXd>(r.x.data(), nStruct);
    r.residual = A.rows() ? (A * xv - b).cwiseAbs().maxCoeff() : 0.0;
    r.feasible = r.infeasibility <= tol && r.residual <= tol;
    return r;
}

ExactLpResult lp_feasible_exact(const std::vector<std::vector<long>> &A, const std::vector<long> &b) {
    if (A.size() != b.size()) throw std::invalid_argument("lp: row count mismatch");
    int nStruct = A.empty() ? 0 : (int)A[0].size();
    std::vector<std::vector<Rational>> rows(A.size(), std::vector<Rational>(nStruct));
    std::vector<Rational> rhs(b.size());
    for (size_t i = 0; i < A.size(); i++) {
        if ((int)A[i].size() != nStruct) throw std::invalid_argument("lp: ragged matrix");
        for (int j = 0; j < nStruct; j++) rows[i][j] = A[i][j];
        rhs[i] = b[i];
    }
    auto t = build(rows, rhs, nStruct);
    ExactLpResult r;
    r.pivots = run_phase1(t, nStruct, Rational(0), [](const Rational &x, const Rational &y) { return x < y; });
    r.x.assign(nStruct, Rational(0));
    Rational w = 0;
    for (int i = 0; i < t.rows; i++) {
        if (t.basis[i] < nStruct)
            r.x[t.basis[i]] = t.a[i][t.cols];
        else
            w += t.a[i][t.cols];
    }
    r.feasible = w == 0;
    return r;
}

}  // namespace tgq
