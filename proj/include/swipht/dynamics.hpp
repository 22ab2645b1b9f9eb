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

// Open-system dynamics of the two-qubit computational subspace.
//
// Rotating frame: the driven qubit T rotates at the drive frequency w_d, the
// other qubit at its own frequency. With z = sigma_z (excited = +1),
//
//   H(t) = (w_T + chi - w_d)/2 z_T + chi/2 z_other + chi/2 z_L z_H
//        + Omega(t)/2 (sigma^-_T e^{i phi} + sigma^+_T e^{-i phi}),
//
// sigma^- = |g><e|. For T = H and w_d = w_H the static part is
// diag(-chi/2, -chi/2, -chi/2, 3 chi/2): the control-g transition is resonant
// and the control-e transition is detuned by 2 chi.
//
// Dissipators per qubit: sqrt(gamma1) sigma^-, sqrt(gamma_phi/2) sigma_z.
//
// Superoperators act on column-stacked vec(rho) (Eigen's native layout).

#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "swipht/common.hpp"
#include "swipht/gates.hpp"
#include "swipht/pulse.hpp"
#include "swipht/sysmodel.hpp"

namespace swipht {

class DensityMatrix {
 public:
  /// |gg><gg|.
  DensityMatrix();
  /// Throws ValidationError unless Hermitian (1e-10), unit trace (1e-10)
  /// and eigenvalues >= -1e-9.
  explicit DensityMatrix(const Matrix4cd& m);

  static DensityMatrix basis_state(int index);
  static DensityMatrix pure(const Vector4cd& psi);

  const Matrix4cd& matrix() const { return m_; }
  double population(int index) const { return m_(index, index).real(); }
  cd element(int row, int col) const { return m_(row, col); }
  double purity() const { return (m_ * m_).trace().real(); }

 private:
  Matrix4cd m_;
};

struct NoiseModel {
  double gamma1_L = 0.0;
  double gamma1_H = 0.0;
  double gamma_phi_L = 0.0;
  double gamma_phi_H = 0.0;

  void validate() const;
  bool is_zero() const { return gamma1_L == 0 && gamma1_H == 0 && gamma_phi_L == 0 && gamma_phi_H == 0; }

  /// gamma1 = 1/T1, gamma_phi = 1/T2 - 1/(2 T1).
  static NoiseModel from(const SystemParams& params);
};

/// Static (drift) part of the rotating-frame Hamiltonian.
Matrix4cd frame_drift(const SystemParams& params, double omega_d, Qubit target);
/// Drive term for envelope value `omega` and phase `phi`.
Matrix4cd frame_drive(double omega, double phi, Qubit target);

struct TrajectoryPoint {
  double t = 0.0;
  Matrix4cd rho;
};

struct EvolveResult {
  DensityMatrix final_state;
  std::vector<TrajectoryPoint> trajectory;
};

struct EvolveOptions {
  std::optional<NoiseModel> noise;
  /// Record rho every this many seconds (rounded to whole steps); the
  /// initial and final states are always included when set.
  std::optional<double> record_every;
  /// RK4 steps per waveform sample interval.
  int substeps = 1;
};

/// Fixed-step RK4 over the waveform. Throws NumericalError if the trace
/// drifts by more than 1e-6 or an eigenvalue drops below -1e-6.
EvolveResult evolve(const DensityMatrix& rho0, const PulseWaveform& wf, const SystemParams& params,
                    const EvolveOptions& options = {});

/// Propagator of the closed system (no dissipation).
Matrix4cd propagate_unitary(const PulseWaveform& wf, const SystemParams& params, int substeps = 1);

/// 16x16 propagator of the master equation.
Matrix16cd propagate_superoperator(const PulseWaveform& wf, const SystemParams& params,
                                   const std::optional<NoiseModel>& noise, int substeps = 1);

Matrix16cd unitary_superoperator(const Matrix4cd& u);
DensityMatrix apply_superoperator(const Matrix16cd& s, const DensityMatrix& rho);
DensityMatrix apply_gate(const DensityMatrix& rho, const GateMatrix& g);

/// Tr(S_U^dagger S) / d^2.
double process_fidelity(const Matrix16cd& s, const Matrix4cd& u);
/// (d F_pro + 1) / (d + 1).
double average_gate_fidelity(const Matrix16cd& s, const Matrix4cd& u);

struct PhaseExtraction {
  SwiphtPhases phases;
  /// Largest probability of a forbidden transition.
  double leakage = 0.0;
  Matrix4cd unitary;
};

/// Decoherence-free propagator of the canonical pulse at phi_d = 0, phases
/// referenced to arg <gg|U|ge>. Throws NumericalError if leakage > 1e-3.
PhaseExtraction extract_swipht_phases(const SystemParams& params, int substeps = 1);

struct GaussianGateSpec {
  Axis axis = Axis::x;
  double angle = kPi;
  Qubit target = Qubit::H;
  /// Total pulse length; sigma = duration / truncation.
  double duration = 37e-9;
  double truncation = 4.0;
  double sample_period = 0.25e-9;

  /// The single-qubit pulse lengths of the device: 37 ns on H, 72 ns on L.
  static GaussianGateSpec device(Axis axis, double angle, Qubit target);
};

/// Offset-subtracted Gaussian envelope of area `angle`, driven at the
/// control-g transition of `target`.
PulseWaveform gaussian_waveform(const GaussianGateSpec& spec, const SystemParams& params);

/// Superoperator of the pulsed rotation including the 2 chi detuned sibling
/// transition.
Matrix16cd gaussian_pulse_gate(const GaussianGateSpec& spec, const SystemParams& params,
                               const std::optional<NoiseModel>& noise, int substeps = 1);

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryPoint>& trajectory);

}  // namespace swipht
