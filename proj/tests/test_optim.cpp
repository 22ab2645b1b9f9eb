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

#include <cmath>

#include "doctest.h"

#include "swipht/optim.hpp"

using namespace swipht;

namespace {

// r = (10 (y - x^2), 1 - x); minimum 0 at (1, 1).
void rosenbrock(const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
  r.resize(2);
  r << 10 * (p(1) - p(0) * p(0)), 1 - p(0);
  if (jac) {
    jac->resize(2, 2);
    *jac << -20 * p(0), 10, -1, 0;
  }
}

void exp_model(const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
  r.resize(20);
  if (jac) jac->resize(20, 2);
  for (int i = 0; i < 20; ++i) {
    const double t = 0.1 * i;
    const double e = std::exp(-p(1) * t);
    r(i) = p(0) * e - 2.0 * std::exp(-0.7 * t);
    if (jac) {
      (*jac)(i, 0) = e;
      (*jac)(i, 1) = -p(0) * t * e;
    }
  }
}

}  // namespace

TEST_CASE("Rosenbrock with an analytic Jacobian") {
  const LmResult r = levenberg_marquardt(rosenbrock, Eigen::Vector2d(-1.2, 1.0));
  CHECK(r.converged);
  CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.x(1) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.cost < 1e-12);
}

TEST_CASE("Jacobian by finite differences") {
  const ResidualFn no_jac = [](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd*) {
    exp_model(p, r, nullptr);
  };
  const Eigen::Vector2d p(1.3, 0.4);
  Eigen::VectorXd r0;
  Eigen::MatrixXd exact;
  exp_model(p, r0, &exact);
  const Eigen::MatrixXd fd = finite_difference_jacobian(no_jac, p, r0);
  CHECK((fd - exact).cwiseAbs().maxCoeff() < 1e-6);

  const ResidualFn numeric = [&](const Eigen::VectorXd& q, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
    exp_model(q, r, nullptr);
    if (jac) *jac = finite_difference_jacobian(no_jac, q, r);
  };
  const LmResult r = levenberg_marquardt(numeric, Eigen::Vector2d(1.0, 2.0));
  CHECK(r.x(0) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(r.x(1) == doctest::Approx(0.7).epsilon(1e-6));
}

TEST_CASE("starting at the minimum") {
  const LmResult r = levenberg_marquardt(rosenbrock, Eigen::Vector2d(1.0, 1.0));
  CHECK(r.converged);
  CHECK(r.cost == 0.0);
  CHECK(r.iterations <= 1);
}
