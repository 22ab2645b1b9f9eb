// Copyright 2026 The swipht-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "swipht/optim.hpp"

#include <cmath>
#include <limits>

namespace swipht {

Eigen::MatrixXd finite_difference_jacobian(const ResidualFn& fn, const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& r0) {
  const double eps = std::sqrt(std::numeric_limits<double>::epsilon());
  Eigen::MatrixXd jac(r0.size(), x.size());
  Eigen::VectorXd xp = x, rp;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double h = eps * std::max(1.0, std::abs(x[j]));
    xp[j] = x[j] + h;
    fn(xp, rp, nullptr);
    jac.col(j) = (rp - r0) / h;
    xp[j] = x[j];
  }
  return jac;
}

LmResult levenberg_marquardt(const ResidualFn& fn, const Eigen::VectorXd& x0, const LmOptions& options) {
  LmResult res;
  res.x = x0;
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  fn(res.x, r, &jac);
  res.cost = r.squaredNorm();
  if (!std::isfinite(res.cost)) return res;

  double damping = options.initial_damping;
  Eigen::VectorXd r_trial;
  for (res.iterations = 0; res.iterations < options.max_iterations; ++res.iterations) {
    const Eigen::VectorXd grad = jac.transpose() * r;
    if (grad.cwiseAbs().maxCoeff() < options.gradient_tolerance) {
      res.converged = true;
      return res;
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    bool accepted = false;
    for (int tries = 0; tries < 40 && !accepted; ++tries) {
      Eigen::MatrixXd a = jtj;
      a.diagonal() += damping * (jtj.diagonal().array().max(1e-12)).matrix();
      const Eigen::VectorXd step = a.ldlt().solve(-grad);
      if (!step.allFinite()) {
        damping *= 10.0;
        continue;
      }
      const Eigen::VectorXd x_trial = res.x + step;
      fn(x_trial, r_trial, nullptr);
      const double cost_trial = r_trial.squaredNorm();
      if (std::isfinite(cost_trial) && cost_trial < res.cost) {
        const double improvement = (res.cost - cost_trial) / std::max(res.cost, 1e-300);
        res.x = x_trial;
        res.cost = cost_trial;
        damping = std::max(damping / 3.0, 1e-12);
        accepted = true;
        if (improvement < options.relative_tolerance || res.cost == 0.0) {
          res.converged = true;
          ++res.iterations;
          return res;
        }
        fn(res.x, r, &jac);
      } else {
        damping *= 4.0;
      }
    }
    if (!accepted) {
      // No descent direction at any damping: a stationary point to
      // working precision.
      res.converged = true;
      return res;
    }
  }
  return res;
}

}  // namespace swipht
