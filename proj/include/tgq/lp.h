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

#ifndef TGQ_LP_H
#define TGQ_LP_H

#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

namespace tgq {

using Rational = boost::multiprecision::cpp_rational;

struct LpResult {
    bool feasible = false;
    std::vector<double> x;
    /// Phase-1 optimum: sum of artificial variables.
    double infeasibility = 0;
    /// max |A x - b| of the returned point.
    double residual = 0;
    int pivots = 0;
};

/// Feasibility of {A x = b, x >= 0} by phase-1 simplex with Bland's rule.
LpResult lp_feasible(const Eigen::MatrixXd &A, const Eigen::VectorXd &b, double tol = 1e-9);

struct ExactLpResult {
    bool feasible = false;
    std::vector<Rational> x;
    int pivots = 0;
};
/// Same algorithm over the rationals; integer input.
ExactLpResult lp_feasible_exact(const std::vector<std::vector<long>> &A, const std::vector<long> &b);

}  // namespace tgq

#endif
