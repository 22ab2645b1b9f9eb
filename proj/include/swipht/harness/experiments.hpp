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

// The reproduction experiments. Each run_* writes its CSV/JSON files into
// cfg.output_dir and returns the numbers it wrote.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "swipht/dynamics.hpp"
#include "swipht/harness/config.hpp"
#include "swipht/harness/output.hpp"
#include "swipht/pulse.hpp"
#include "swipht/readout.hpp"
#include "swipht/tomography.hpp"

namespace swipht::harness {

struct PulseExportResult {
  PulseWaveform waveform;
  Artifacts artifacts;
};
PulseExportResult run_pulse_export(const ExperimentConfig& cfg);

struct EvolveTrace {
  std::string start;  // "gg" or "eg"
  bool noisy = false;
  std::vector<TrajectoryPoint> points;
  /// Populations reconstructed by QST at each point (evolve_trace.qst only).
  std::vector<Eigen::Vector4d> qst_populations;
};
struct EvolveTraceResult {
  std::vector<EvolveTrace> traces;
  Artifacts artifacts;
};
EvolveTraceResult run_evolve_trace(const ExperimentConfig& cfg);

struct SinusoidFit {
  double amplitude = 0.0;
  double period = 0.0;
  double phase = 0.0;
  double offset = 0.0;
  double rms_residual = 0.0;
};
/// y ~ offset + amplitude sin(2 pi x / period + phase); period searched in
/// [span / 8, 2 span].
SinusoidFit fit_sinusoid(const std::vector<double>& x, const std::vector<double>& y);

struct PhaseCurve {
  std::string label;
  std::vector<double> im_rho_ge_eg;
  SinusoidFit fit;
};
struct PhaseSweepResult {
  std::vector<double> phi_d;
  std::array<PhaseCurve, 4> curves;
  double mean_amplitude = 0.0;
  Artifacts artifacts;
};
PhaseSweepResult run_phase_sweep(const ExperimentConfig& cfg);

/// The 17 gate ids of the battery in table order.
const std::vector<std::string>& battery_gate_ids();

struct BatteryRow {
  std::string gate;
  std::string scenario;  // "device", "decoherence-free" or "long-T1"
  double phi_d = 0.0;
  double tau_gate = 0.0;
  /// From the QPT fit; unset if the fit failed.
  std::optional<GateMetrics> fitted;
  /// From the simulated superoperator, no tomography.
  GateMetrics direct;
  double completeness = 0.0;
  std::optional<ChiMatrix> chi;
  std::string error;
};
struct QptBatteryResult {
  std::vector<BatteryRow> rows;
  Artifacts artifacts;
};
QptBatteryResult run_qpt_battery(const ExperimentConfig& cfg);

struct CalibGridResult {
  CalibrationGrid grid;
  /// Largest |argmax row - ridge row| over the tau columns, in cells.
  int max_ridge_offset_cells = 0;
  /// P(flip | control e) at the canonical (tau_g, peak).
  double p_flip_control_e_at_canonical = 0.0;
  Artifacts artifacts;
};
CalibGridResult run_calib_grid(const ExperimentConfig& cfg);

struct RoundtripResult {
  /// Populations recovered for each prepared eigenstate nu.
  std::array<Eigen::Vector4d, 4> recovered;
  std::array<Eigen::Vector4d, 4> sigma;
  std::array<double, 4> max_error{};
  ReadoutCalibration::Table K_fit;
  double max_K_error = 0.0;
  Artifacts artifacts;
};
RoundtripResult run_readout_roundtrip(const ExperimentConfig& cfg);

/// Dispatches on cfg.experiment.
Artifacts run_experiment(const ExperimentConfig& cfg);

/// Validates, runs, and writes manifest.json (also when the run throws,
/// in which case the exception is rethrown afterwards).
Artifacts run_and_record(const ExperimentConfig& cfg);

}  // namespace swipht::harness
