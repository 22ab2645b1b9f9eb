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

// State and process tomography on the joint readout.
//
// A process is written E(rho) = sum_mn chi_mn A_m rho A_n^dagger over the
// two-qubit Paulis A_m (gates.hpp order). With this unnormalized basis a
// trace-preserving chi has unit trace and F_p = Tr(chi_hat chi_ideal).

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "json.hpp"

#include "swipht/common.hpp"
#include "swipht/dynamics.hpp"
#include "swipht/gates.hpp"
#include "swipht/readout.hpp"

namespace swipht {

inline constexpr int kNumQstGates = 17;
inline constexpr int kNumQptStates = 36;

struct ChiMatrix {
  Matrix16cd matrix = Matrix16cd::Zero();

  /// Hermitian (1e-10 relative) and min eigenvalue >= -1e-9.
  void validate() const;
  double trace() const { return matrix.trace().real(); }
};

struct GateMetrics {
  double F_p = 0.0;
  double F_g = 0.0;
  double purity = 0.0;
};

std::array<cd, 16> pauli_decompose(const Matrix4cd& u);
ChiMatrix chi_of_unitary(const Matrix4cd& u);
ChiMatrix chi_of_superoperator(const Matrix16cd& s);
Matrix16cd superoperator_of_chi(const ChiMatrix& chi);

/// sum_mn chi_mn A_m rho A_n^dagger (no renormalization).
Matrix4cd process_apply(const ChiMatrix& chi, const Matrix4cd& rho);
DensityMatrix process_apply(const ChiMatrix& chi, const DensityMatrix& rho);

/// Z = sum_mn chi_mn A_n^dagger A_m.
Matrix4cd completeness_operator(const ChiMatrix& chi);
/// sum_ij (Re Z_ij - delta_ij)^2 + (Im Z_ij)^2.
double completeness_residual(const ChiMatrix& chi);

GateMetrics metrics(const ChiMatrix& chi_hat, const ChiMatrix& chi_ideal);

/// The six single-qubit preparations I, Rx(pi), Rx(+-pi/2), Ry(+-pi/2).
const std::array<Matrix2c<double>, 6>& preparation_rotations();
/// Index sigma = 6 i_L + i_H, applied to |gg>.
const std::array<DensityMatrix, kNumQptStates>& qpt_input_states();

struct TomographyEntry {
  int state = 0;  // 0-based; 0 for state tomography
  int gate = 0;   // 0..16
  int beta = 1;   // 1..7
  double mean = 0.0;
  std::size_t n = 0;  // shots behind the mean; 0 = analytic
};

struct TomographyDataset {
  int num_states = 1;
  std::vector<TomographyEntry> entries;

  /// Every (state, gate, beta) present exactly once.
  void validate() const;
  /// means[state](gate, beta - 1); requires a validated dataset.
  std::vector<Eigen::Matrix<double, kNumQstGates, kNumMappings>> grid() const;
  std::size_t shots() const;
};

/// Means for rho under each QST gate and mapping. With n = 0 the exact
/// expected means are used; otherwise n shots per cell are sampled from
/// stream (seed, state_index, gate, beta).
TomographyDataset synthesize_qst_data(const DensityMatrix& rho, const ReadoutCalibration& cal, std::size_t n,
                                      std::uint64_t seed, int state_index = 0);
/// QPT data for the channel `s` over qpt_input_states().
TomographyDataset synthesize_qpt_data(const Matrix16cd& s, const ReadoutCalibration& cal, std::size_t n,
                                      std::uint64_t seed);

enum class Weighting {
  /// sigma from the readout model at the current estimate.
  model,
  /// One sigma for every mean; used for simulated data.
  uniform,
};

struct TomographyOptions {
  Weighting weighting = Weighting::model;
  double uniform_sigma = 1e-3;
  int random_starts = 8;
  std::uint64_t seed = 0;
  /// Sigma re-estimation rounds for model weighting in process tomography.
  int reweighting_rounds = 2;
};

struct QstResult {
  DensityMatrix rho;
  double cost = 0.0;
  int best_start = -1;  // -1 = linear-inversion start
  bool converged = false;
};

class FitFailure : public NumericalError {
 public:
  FitFailure(const std::string& what, DensityMatrix best) : NumericalError(what), best_(std::move(best)) {}
  const DensityMatrix& best() const { return best_; }

 private:
  DensityMatrix best_;
};

/// Rho from 16 reals: lower-triangular T (diagonal then strictly lower real,
/// imaginary), rho = T^dagger T / Tr.
DensityMatrix state_from_parameters(const Eigen::Matrix<double, 16, 1>& t);

QstResult qst_fit(const TomographyDataset& data, const ReadoutCalibration& cal, const TomographyOptions& options = {});

struct QptResult {
  ChiMatrix chi;
  double cost = 0.0;
  double completeness = 0.0;
  double final_lambda = 0.0;
};

/// Maximum-likelihood chi with chi = T^dagger T and the completeness
/// penalty lambda * Xi, lambda in {1e2, 1e4, 1e6} until Xi < 1e-6.
/// Throws NumericalError if Xi >= 1e-6 at the largest lambda.
QptResult qpt_fit(const TomographyDataset& data, const ReadoutCalibration& cal,
                  const TomographyOptions& options = {});

nlohmann::json chi_to_json(const ChiMatrix& chi, const std::optional<GateMetrics>& m = std::nullopt);
ChiMatrix chi_from_json(const nlohmann::json& j);
nlohmann::json rho_to_json(const DensityMatrix& rho);
/// Bar heights m,n,label_m,label_n,re,im.
void write_chi_bars_csv(std::ostream& os, const ChiMatrix& chi);

}  // namespace swipht
