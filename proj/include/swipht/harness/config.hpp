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

// Experiment configuration. The JSON file stores ordinary frequencies in Hz
// and times in seconds; the structs keep those units so a config written
// to a manifest reads back bit-identical.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "swipht/common.hpp"
#include "swipht/dynamics.hpp"
#include "swipht/pulse.hpp"
#include "swipht/sysmodel.hpp"

namespace swipht::harness {

inline constexpr int kConfigSchemaVersion = 1;

enum class Experiment { pulse_export, evolve_trace, phase_sweep, qpt_battery, calib_grid, readout_roundtrip };

std::string_view to_string(Experiment e);
/// Accepts the CLI spelling, e.g. "phase-sweep".
Experiment parse_experiment(std::string_view name);

struct SystemConfig {
  double f_L = 6.07135e9;
  double f_H = 6.75427e9;
  double chi_qq = -0.5147e6;
  double T1_L = 9.0e-6;
  double T1_H = 3.5e-6;
  double T2_L = 14.6e-6;
  double T2_H = 6.2e-6;
  double kappa_inv = 50e-9;
};

struct FullModelConfig {
  double f_L_bare = 6.10322e9;
  double f_H_bare = 6.79943e9;
  double f_R_bare = 7.66927e9;
  double E_C_L = 206.5e6;
  double E_C_H = 192.6e6;
  double g_L = 224.6e6;
  double g_H = 207.5e6;
  double J = 14.3e6;
  int transmon_levels = 5;
  int cavity_levels = 5;
};

struct PulseConfig {
  std::optional<double> tau_g;      // s; unset = from chi_qq
  std::optional<double> omega_max;  // Hz (Omega / 2 pi); unset = analytic peak
  std::optional<int> vertical_bits;
  double sample_period = 1e-9;
  double phi_d = 0.0;
  Qubit target = Qubit::H;
};

struct NoiseConfig {
  bool enabled = true;
  std::optional<double> T1_L, T1_H, T2_L, T2_H;
};

struct EvolveTraceConfig {
  double cadence = 5e-9;
  /// Reconstruct each recorded state by QST on sampled shots (needs shots > 0).
  bool qst = false;
};

struct PhaseSweepConfig {
  int points = 73;
  double phi_min = -kTwoPi;
  double phi_max = kTwoPi;
  /// Added to every phi_d before the drive is built.
  double offset = 0.0;
};

struct QptBatteryConfig {
  /// Gate ids from battery_gate_ids(); empty = all 17.
  std::vector<std::string> gates;
  bool decoherence_free_rows = true;
  /// Extra SWIPHT rows with T1 = long_t1 and T2 = 2 T1 on both qubits.
  bool long_t1_rows = true;
  double long_t1 = 40e-6;
  double phi_L_alt = 49.0 * kPi / 36.0;
  double phi_H_alt = 7.0 * kPi / 12.0;
};

struct CalibGridConfig {
  /// Unset bounds default to 0.5x and 1.5x the canonical tau_g and peak.
  std::optional<double> tau_min, tau_max;      // s
  std::optional<double> omega_min, omega_max;  // Hz
  int tau_points = 31;
  int omega_points = 31;
};

struct ExperimentConfig {
  int schema_version = kConfigSchemaVersion;
  Experiment experiment = Experiment::evolve_trace;
  SystemConfig system;
  std::optional<FullModelConfig> full_model;
  PulseConfig pulse;
  NoiseConfig noise;
  std::size_t shots = 0;
  std::optional<std::uint64_t> seed;
  std::filesystem::path output_dir = "out";
  unsigned threads = 0;

  EvolveTraceConfig evolve_trace;
  PhaseSweepConfig phase_sweep;
  QptBatteryConfig qpt_battery;
  CalibGridConfig calib_grid;

  /// Throws ValidationError; a seed is required whenever shots > 0.
  void validate() const;

  /// Device parameters with the noise overrides applied. With a full model
  /// the frequencies and chi_qq come from its dressed spectrum.
  SystemParams system_params() const;
  std::optional<NoiseModel> noise_model() const;
  /// Canonical pulse for the configured system with the pulse overrides.
  PulseSpec pulse_spec(double phi_d, Qubit target) const;
  std::uint64_t seed_or_zero() const { return seed.value_or(0); }

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  static ExperimentConfig load(const std::filesystem::path& path);
};

/// Command-line values that take precedence over the file.
struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> output_dir;
  std::optional<std::size_t> shots;
  bool no_noise = false;
};

/// default < file < flags.
ExperimentConfig resolve_config(Experiment experiment, const std::optional<std::filesystem::path>& file,
                                const ConfigOverrides& flags);

}  // namespace swipht::harness
