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

#ifndef TGQ_STIEFEL_H
#define TGQ_STIEFEL_H

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tgq/analysis.h"

namespace tgq {

struct RankDeficient : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr double kRetractRidge = 1e-12;

/// Theta (Theta^dag Theta + eps I)^{-1/2}.
MatC polar_retract(const MatC &theta, double eps = kRetractRidge);

/// exp(i (r1 X + r2 Y + r3 Z)).
Mat2 su2_from_r3(const Eigen::Vector3d &r);
/// Haar-random r: su2_from_r3 of the result is Haar distributed on SU(2).
Eigen::Vector3d haar_r3(std::mt19937_64 &rng);
/// Partial derivatives of su2_from_r3 with respect to r1, r2, r3.
std::array<Mat2, 3> su2_from_r3_jacobian(const Eigen::Vector3d &r);

// Loss terms on an orthonormal basis (columns). Gradients use the convention
// G = dL/dRe + i dL/dIm, accumulated into *grad when given.
double loss_kl(const MatC &basis, int n, const std::vector<PauliString> &errors, MatC *grad = nullptr);
double loss_gate(const MatC &basis, int n, const std::vector<LocalUnitaryLayer> &layers,
                 const std::vector<MatC> &targets, MatC *grad = nullptr);
double loss_signature(const MatC &basis, int n, const std::vector<PauliString> &errors, double target,
                      MatC *grad = nullptr);
/// Squared estimated signature norm, with the modulus convention.
double estimated_lambda_sq(const MatC &basis, int n, const std::vector<PauliString> &errors);

/// Chain rule through polar_retract: maps a basis gradient to a theta gradient.
MatC polar_retract_backward(const MatC &theta, const MatC &gradBasis, double eps = kRetractRidge);

struct Hyper {
    double step = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adamEps = 1e-12;
    int iterations = 20000;
    int restarts = 20;
    uint64_t seed = 1;
    double threshold = 1e-6;
    // Stop a restart once the loss falls below threshold * stopFactor.
    double stopFactor = 1e-12;
    // Halve the step after this many iterations without a 1% improvement.
    int patience = 500;
    // A restart ends early at a stationary point.
    double gradTol = 1e-9;
};

struct SearchConfig {
    int n = 0;
    int K = 2;
    int maxErrorWeight = 2;
    bool klEnabled = true;
    std::vector<std::string> targetNames;
    std::vector<MatC> targets;
    std::optional<double> lambdaTarget;
    double klWeight = 1, gateWeight = 1, signatureWeight = 1;
    std::optional<CodeSubspace> fixedCode;
    Hyper hyper;
    // After success, refine gate terms on |U Psi - Psi V|^2 (same zero set).
    bool polish = true;

    void validate() const;
};

struct SearchResult {
    CodeSubspace code;
    std::vector<LocalUnitaryLayer> layers;
    double finalLoss = 0;
    std::map<std::string, double> lossBreakdown;
    int iterations = 0;
    int restart = -1;
    uint64_t seed = 0;
    bool success = false;
};

/// Total loss as a function of the real parameter vector
/// [Re theta, Im theta (column-major), r_{t,s,k}].
class StiefelProblem {
   public:
    explicit StiefelProblem(const SearchConfig &cfg);

    int num_params() const { return thetaSize_ * 2 * (fixed_ ? 0 : 1) + gateParams_; }
    double value(const Eigen::VectorXd &x, std::map<std::string, double> *parts = nullptr) const;
    double value_and_grad(const Eigen::VectorXd &x, Eigen::VectorXd &g,
                          std::map<std::string, double> *parts = nullptr) const;
    Eigen::VectorXd numeric_grad(const Eigen::VectorXd &x, double h = 1e-6) const;
    Eigen::VectorXd random_start(uint64_t seed, int restart) const;

    MatC basis(const Eigen::VectorXd &x) const;
    std::vector<LocalUnitaryLayer> layers(const Eigen::VectorXd &x) const;
    const std::vector<PauliString> &errors() const { return errors_; }
    /// Gate terms use |U Psi - Psi V|^2 instead of the exact logical-matrix loss.
    void set_transport(bool on) { transport_ = on; }

   private:
    const SearchConfig &cfg_;
    std::vector<PauliString> errors_;
    bool fixed_;
    int thetaSize_;
    int gateParams_;
    bool transport_ = false;
};

SearchResult optimize(const SearchConfig &cfg);

struct GateSearchResult {
    std::vector<LocalUnitaryLayer> layers;
    double finalLoss = 0;
    bool success = false;
    int iterations = 0;
};
GateSearchResult optimize_gates_for_fixed_code(const CodeSubspace &code, const std::vector<MatC> &targets,
                                               const Hyper &hyper);

/// Generic Adam loop with restarts, shared with the SS-LP block optimizer.
struct AdamOutcome {
    Eigen::VectorXd x;
    double loss = 0;
    int iterations = 0;
    int restart = -1;
};
template <typename F, typename Init>
AdamOutcome adam_restarts(F &&valueAndGrad, Init &&init, const Hyper &h);

}  // namespace tgq

#include "tgq/adam.inl"

#endif
