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

#include "swipht/dynamics.hpp"
#include "swipht/parallel.hpp"
#include "swipht/pulse.hpp"

namespace swipht {

CalibrationGrid calibration_grid(const std::vector<double>& tau_g, const std::vector<double>& omega_max,
                                 const SystemParams& params, unsigned threads) {
  params.validate();
  if (tau_g.empty() || omega_max.empty()) throw ValidationError("calibration_grid: empty axis");
  for (double t : tau_g)
    if (!(t > 0.0) || !std::isfinite(t)) throw ValidationError("calibration_grid: tau_g must be positive");
  for (double w : omega_max)
    if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("calibration_grid: omega_max must be >= 0");

  CalibrationGrid grid;
  grid.tau_g = tau_g;
  grid.omega_max = omega_max;
  const auto rows = static_cast<Eigen::Index>(omega_max.size());
  const auto cols = static_cast<Eigen::Index>(tau_g.size());
  grid.p_flip_control_g.resize(rows, cols);
  grid.p_flip_control_e.resize(rows, cols);
  const double ridge = ridge_constant();
  for (double t : tau_g) grid.ridge_omega_max.push_back(ridge / t);

  const PulseSpec base = PulseSpec::canonical(params);
  parallel_for(static_cast<std::size_t>(rows * cols), threads, [&](std::size_t idx) {
    const auto r = static_cast<Eigen::Index>(idx) / cols;
    const auto c = static_cast<Eigen::Index>(idx) % cols;
    PulseSpec spec = base;
    spec.tau_g = tau_g[static_cast<std::size_t>(c)];
    spec.sample_period = std::min(base.sample_period, spec.tau_g / 100.0);
    spec.omega_max = omega_max[static_cast<std::size_t>(r)];
    const Matrix4cd u = propagate_unitary(synthesize(spec), params);
    grid.p_flip_control_g(r, c) = std::norm(u(kGE, kGG));
    grid.p_flip_control_e(r, c) = std::norm(u(kEE, kEG));
  });
  return grid;
}

}  // namespace swipht
