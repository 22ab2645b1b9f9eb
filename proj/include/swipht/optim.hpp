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

// Levenberg-Marquardt for small dense least-squares problems.

#pragma once

#include <functional>

#include <Eigen/Dense>

namespace swipht {

/// Fills the residual vector and, when `jacobian` is non-null, its Jacobian.
using ResidualFn = std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& residual, Eigen::MatrixXd* jacobian)>;

struct LmOptions {
  int max_iterations = 500;
  /// Stop when an accepted step improves the cost by less than this fraction.
  double relative_tolerance = 1e-10;
  double initial_damping = 1e-3;
  /// Stop when max |J^T r| falls below this.
  double gradient_tolerance = 1e-14;
};

struct LmResult {
  Eigen::VectorXd x;
  double cost = 0.0;  // sum of squared residuals
  int iterations = 0;
  bool converged = false;
};

LmResult levenberg_marquardt(const ResidualFn& fn, const Eigen::VectorXd& x0, const LmOptions& options = {});

/// Forward-difference Jacobian, step h_j = sqrt(eps) * max(1, |x_j|).
Eigen::MatrixXd finite_difference_jacobian(const ResidualFn& fn, const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& r0);

}  // namespace swipht
