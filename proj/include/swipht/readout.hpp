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

// Joint high-power readout. Each shot with mapping beta on eigenstate nu is
// drawn from a two-Gaussian mixture: "low" with probability 1 - K, "high"
// with probability K. Mappings are numbered 1..7; eigenstate columns follow
// the library basis order gg, ge, eg, ee.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

#include "swipht/common.hpp"
#include "swipht/dynamics.hpp"

namespace swipht {

inline constexpr int kNumMappings = 7;

/// 99.9th percentile of chi^2 with 3 degrees of freedom.
inline constexpr double kChi2ThreeDof999 = 16.266;

struct MappingPulses {
  std::string map1_L;
  std::string map1_H;
  std::string map2_H;

  bool operator==(const MappingPulses&) const = default;
};

struct ReadoutCalibration {
  using Table = Eigen::Matrix<double, kNumMappings, 4>;

  Table K = Table::Zero();
  Table V_low = Table::Zero();
  Table V_high = Table::Zero();
  Table sigma_low = Table::Constant(1.0);
  Table sigma_high = Table::Constant(1.0);
  std::array<double, kNumMappings> bias_dbm{};
  std::array<MappingPulses, kNumMappings> map_table{};

  /// 0 <= K <= 1, sigmas > 0, V_high > V_low. Throws ValidationError.
  void validate() const;

  /// Mean signal per (beta, nu): (1 - K) V_low + K V_high.
  Table design_matrix() const;

  /// The device calibration, compiled in.
  static const ReadoutCalibration& device();

  static ReadoutCalibration from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  static ReadoutCalibration load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
};

/// Single-shot density of mapping `beta` (1..7) on eigenstate `nu` (0..3).
double shot_distribution_pdf(double v, int beta, int nu, const ReadoutCalibration& cal);

struct ShotRecord {
  int beta = 1;
  /// Prepared eigenstate for calibration histograms; -1 for general states.
  int nu = -1;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

/// Draws N shots; identical (seed, beta) reproduce the record exactly.
ShotRecord sample_shots(const DensityMatrix& rho, int beta, const ReadoutCalibration& cal, std::size_t n,
                        std::uint64_t seed);

double expected_mean(const DensityMatrix& rho, int beta, const ReadoutCalibration& cal);
double expected_mean(const Eigen::Vector4d& populations, int beta, const ReadoutCalibration& cal);

/// Standard error of the N-shot mean (law of total variance over the
/// eight mixture components, divided by sqrt N).
double mean_uncertainty(const DensityMatrix& rho, int beta, std::size_t n, const ReadoutCalibration& cal);
double mean_uncertainty(const Eigen::Vector4d& populations, int beta, std::size_t n, const ReadoutCalibration& cal);

struct PopulationEstimate {
  Eigen::Vector4d p = Eigen::Vector4d::Zero();
  double residual = 0.0;
  /// Covariance of the sum-constrained weighted least-squares solution.
  Eigen::Matrix4d covariance = Eigen::Matrix4d::Zero();
  bool model_mismatch = false;
};

/// Simplex-constrained weighted least squares on the 7 mean signals.
/// Weights come from mean_uncertainty at the sum-constrained linear
/// solution (projected onto the simplex), then the problem is solved
/// exactly by enumerating active sets.
PopulationEstimate invert_populations(const Eigen::Matrix<double, kNumMappings, 1>& means, std::size_t n,
                                      const ReadoutCalibration& cal);

struct CellFitReport {
  int beta = 0;
  int nu = 0;
  bool present = false;
  bool converged = false;
  bool borrowed = false;
  double log_likelihood = 0.0;
};

struct CalibrationFit {
  ReadoutCalibration calibration;
  std::vector<CellFitReport> cells;
};

/// Maximum-likelihood mixture fits, one per (beta, nu) histogram. A
/// component with weight below 2% takes its (mean, sigma) from the most
/// balanced histogram at the same beta. Cells that fail or are missing are
/// NaN. Records with fewer than 1000 shots are rejected.
CalibrationFit fit_calibration(const std::vector<ShotRecord>& histograms);

void write_shots_csv(std::ostream& os, const std::vector<ShotRecord>& records);

}  // namespace swipht
