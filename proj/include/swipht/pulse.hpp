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

// SWIPHT envelope synthesis.
//
//   gamma(s) = A s^4 (1-s)^4 + pi/4,   s = t / tau_g,  A = 138.9
//   Omega(t) = gamma'' / sqrt(chi^2 - gamma'^2) - 2 sqrt(chi^2 - gamma'^2) cot(2 gamma)
//   tau_g    = 5.87 / (2 |chi|)

#pragma once

#include <cmath>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "swipht/common.hpp"
#include "swipht/sysmodel.hpp"

namespace swipht {

inline constexpr double kGammaAmplitude = 138.9;
inline constexpr double kDurationConstant = 5.87;

struct PulseSpec {
  double chi_qq = angular(-0.5147e6);
  double tau_g = 0.0;
  double omega_d = 0.0;
  double phi_d = 0.0;
  double sample_period = 1e-9;
  std::optional<int> vertical_bits;
  /// Target peak amplitude. Unset means the analytic peak for (chi_qq, tau_g).
  std::optional<double> omega_max;
  Qubit target = Qubit::H;

  void validate() const;

  /// The calibrated gate: tau_g from chi_qq, drive resonant with the
  /// target's control-g transition.
  static PulseSpec canonical(const SystemParams& params, double phi_d = 0.0, Qubit target = Qubit::H);
};

template <typename Scalar = double>
struct GammaDerivatives {
  Scalar gamma;
  Scalar gamma_dot;
  Scalar gamma_ddot;
};

double gate_duration(double chi_qq);

template <typename Scalar = double>
GammaDerivatives<Scalar> gamma_and_derivatives(Scalar t, Scalar tau_g) {
  if (!(tau_g > Scalar(0))) throw DomainError("gamma_and_derivatives: tau_g must be positive");
  if (!(t >= Scalar(0) && t <= tau_g))
    throw DomainError("gamma_and_derivatives: t = " + std::to_string(static_cast<double>(t)) +
                      " outside [0, tau_g]");
  const Scalar a(kGammaAmplitude);
  const Scalar s = t / tau_g, u = Scalar(1) - s;
  const Scalar s2 = s * s, s3 = s2 * s, u2 = u * u, u3 = u2 * u;
  const Scalar w = Scalar(1) - Scalar(2) * s;
  GammaDerivatives<Scalar> out;
  out.gamma = a * s3 * s * u3 * u + Scalar(std::numbers::pi / 4);
  out.gamma_dot = a / tau_g * Scalar(4) * s3 * u3 * w;
  out.gamma_ddot = a / (tau_g * tau_g) * Scalar(4) *
                   (Scalar(3) * s2 * u3 * w - Scalar(3) * s3 * u2 * w - Scalar(2) * s3 * u3);
  return out;
}

/// Canonical envelope. Throws NumericalError if chi^2 - gamma'^2 <= 0.
template <typename Scalar = double>
Scalar omega_at(Scalar t, Scalar chi_qq, Scalar tau_g) {
  const auto g = gamma_and_derivatives<Scalar>(t, tau_g);
  const Scalar disc = chi_qq * chi_qq - g.gamma_dot * g.gamma_dot;
  if (!(disc > Scalar(0)))
    throw NumericalError("pulse infeasible at t = " + std::to_string(static_cast<double>(t)) +
                         " s: chi^2 - gamma_dot^2 <= 0");
  const Scalar r = std::sqrt(disc);
  const Scalar two_gamma = Scalar(2) * g.gamma;
  return g.gamma_ddot / r - Scalar(2) * r * std::cos(two_gamma) / std::sin(two_gamma);
}

/// Max of omega_at over [0, tau_g] (dense scan plus golden-section polish).
double analytic_peak(double chi_qq, double tau_g);

struct PulseWaveform {
  std::vector<double> t;
  std::vector<double> omega;
  double tau_g = 0.0;
  /// max |omega| over the samples (after quantization).
  double peak = 0.0;
  double sample_period = 0.0;
  PulseSpec spec;
  /// Signed integer codes when spec.vertical_bits is set; empty otherwise.
  std::vector<long> codes;
  double code_step = 0.0;

  std::size_t size() const { return t.size(); }
  /// Linear interpolation; zero outside [0, tau_g].
  double at(double time) const;
};

/// Samples on n = floor(tau_g / sample_period) equal intervals (n + 1 points,
/// both endpoints included). With vertical_bits = b the amplitude is rounded
/// to the nearest multiple of peak / (2^b - 1) (sign + b magnitude bits),
/// so |error| <= peak / 2^b and zero stays exactly representable.
PulseWaveform synthesize(const PulseSpec& spec);

void write_waveform_csv(std::ostream& os, const PulseWaveform& wf);
void write_codes_csv(std::ostream& os, const PulseWaveform& wf);

struct CalibrationGrid {
  std::vector<double> tau_g;      // s, columns
  std::vector<double> omega_max;  // rad/s, rows
  /// P(target excited) after the pulse, control in g (rows = omega_max).
  Eigen::MatrixXd p_flip_control_g;
  /// P(target excited) after the pulse, control in e.
  Eigen::MatrixXd p_flip_control_e;
  /// Theoretical peak amplitude for each tau_g.
  std::vector<double> ridge_omega_max;
};

/// Decoherence-free scan of stretched and rescaled SWIPHT pulses.
/// Cells are evaluated on `threads` workers (0 = hardware concurrency).
CalibrationGrid calibration_grid(const std::vector<double>& tau_g, const std::vector<double>& omega_max,
                                 const SystemParams& params, unsigned threads = 0);

/// Peak-to-duration ratio of the ridge: Omega_max * tau_g along the curve.
double ridge_constant();

}  // namespace swipht
