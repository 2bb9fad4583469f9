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

// Adam with plateau step halving and independent restarts.

namespace tgq {

template <typename F, typename Init>
AdamOutcome adam_restarts(F &&valueAndGrad, Init &&init, const Hyper &h) {
    AdamOutcome best;
    best.loss = std::numeric_limits<double>::infinity();
    for (int r = 0; r < h.restarts; r++) {
        Eigen::VectorXd x = init(r);
        Eigen::VectorXd m = Eigen::VectorXd::Zero(x.size()), v = m, g(x.size());
        Eigen::VectorXd bestX = x;
        double bestLoss = std::numeric_limits<double>::infinity();
        double step = h.step;
        double mark = bestLoss;
        int since = 0;
        int it = 0;
        double b1t = 1, b2t = 1;
        for (; it < h.iterations; it++) {
            double loss = valueAndGrad(x, g);
            if (!std::isfinite(loss)) break;
            if (loss < bestLoss) {
                bestLoss = loss;
                bestX = x;
            }
            if (bestLoss < h.threshold * h.stopFactor) break;
            if (g.norm() < h.gradTol) break;  // stationary above the target
            if (bestLoss < 0.99 * mark) {
                mark = bestLoss;
                since = 0;
            } else if (++since > h.patience) {
                step *= 0.5;
                since = 0;
                mark = bestLoss;
            }
            b1t *= h.beta1;
            b2t *= h.beta2;
            m = h.beta1 * m + (1 - h.beta1) * g;
            v = h.beta2 * v + (1 - h.beta2) * g.cwiseProduct(g);
            Eigen::VectorXd mh = m / (1 - b1t);
            Eigen::VectorXd vh = v / (1 - b2t);
            x -= step * mh.cwiseQuotient((vh.cwiseSqrt().array() + h.adamEps).matrix());
        }
        if (bestLoss < best.loss) {
            best.x = bestX;
            best.loss = bestLoss;
            best.iterations = it;
            best.restart = r;
        }
        if (best.loss < h.threshold) break;
    }
    return best;
}

}  // namespace tgq
