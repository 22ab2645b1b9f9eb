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

// Process tomography.
//
// Every predicted mean is linear in chi, so with x the 256 real coordinates
// of a Hermitian chi the objective is the quadratic
//
//   f(x) = (1/K) sum_k w_k (y_k - M_k x)^2 + lambda |C x - c|^2 = x^T H x - 2 g^T x + f0.
//
// The data term is averaged over its K terms so lambda is measured against a
// single normalized residual.
//
// Factoring H = L L^T turns f into |L^T x - L^{-1} g|^2 + const, a 256-term
// least-squares problem in the Cholesky parameters of chi = T^dagger T.

#include <cmath>
#include <limits>

#include "swipht/optim.hpp"
#include "swipht/tomography.hpp"

namespace swipht {

namespace {

constexpr int kDim = 256;
constexpr std::array<double, 3> kLambdas{1e2, 1e4, 1e6};
constexpr double kMaxCompleteness = 1e-6;

using VectorXd = Eigen::VectorXd;
using MatrixXd = Eigen::MatrixXd;

const std::array<Matrix4cd, 16>& paulis() {
  static const auto basis = pauli_basis<double>();
  return basis;
}

// Coordinates: 16 diagonal reals, then (Re, Im) of chi_mn for m < n.
struct PairIndex {
  std::array<std::array<int, 16>, 16> at{};
  PairIndex() {
    int k = 16;
    for (int m = 0; m < 16; ++m)
      for (int n = m + 1; n < 16; ++n) at[m][n] = k, k += 2;
  }
};
const PairIndex& pair_index() {
  static const PairIndex idx;
  return idx;
}

VectorXd x_of_chi(const Matrix16cd& chi) {
  VectorXd x(kDim);
  for (int m = 0; m < 16; ++m) x[m] = chi(m, m).real();
  for (int m = 0; m < 16; ++m)
    for (int n = m + 1; n < 16; ++n) {
      const int k = pair_index().at[m][n];
      x[k] = chi(m, n).real();
      x[k + 1] = chi(m, n).imag();
    }
  return x;
}

Matrix16cd chi_of_x(const VectorXd& x) {
  Matrix16cd chi;
  for (int m = 0; m < 16; ++m) chi(m, m) = x[m];
  for (int m = 0; m < 16; ++m)
    for (int n = m + 1; n < 16; ++n) {
      const int k = pair_index().at[m][n];
      chi(m, n) = cd(x[k], x[k + 1]);
      chi(n, m) = cd(x[k], -x[k + 1]);
    }
  return chi;
}

// Lower-triangular T: 16 real diagonal entries, then (Re, Im) of T_pq for
// p > q in row-major order.
Matrix16cd factor_of_theta(const VectorXd& theta) {
  Matrix16cd t = Matrix16cd::Zero();
  for (int i = 0; i < 16; ++i) t(i, i) = theta[i];
  int k = 16;
  for (int p = 1; p < 16; ++p)
    for (int q = 0; q < p; ++q, k += 2) t(p, q) = cd(theta[k], theta[k + 1]);
  return t;
}

VectorXd theta_of_chi(const Matrix16cd& chi) {
  // T = P L^dagger P with L L^dagger = P chi P makes T lower triangular.
  Matrix16cd rev = Matrix16cd::Zero();
  for (int i = 0; i < 16; ++i) rev(i, 15 - i) = 1.0;
  const double scale = std::max(chi.trace().real(), 1e-12);
  const Matrix16cd shifted = rev * chi * rev + 1e-9 * scale * Matrix16cd::Identity();
  Eigen::LLT<Matrix16cd> llt(shifted);
  if (llt.info() != Eigen::Success) throw NumericalError("qpt_fit: initial chi is not positive definite");
  const Matrix16cd t = rev * Matrix16cd(llt.matrixL()).adjoint() * rev;
  VectorXd theta(kDim);
  for (int i = 0; i < 16; ++i) theta[i] = t(i, i).real();
  int k = 16;
  for (int p = 1; p < 16; ++p)
    for (int q = 0; q < p; ++q, k += 2) theta[k] = t(p, q).real(), theta[k + 1] = t(p, q).imag();
  return theta;
}

// d x(chi(theta)) / d theta, 256 x 256.
MatrixXd chi_jacobian(const VectorXd& theta) {
  const Matrix16cd t = factor_of_theta(theta);
  MatrixXd jac(kDim, kDim);
  Matrix16cd d;
  const auto column = [&](int col, int p, int q, cd unit) {
    // d(T^dagger T) for dT = unit * E_pq.
    d.setZero();
    d.row(q) += std::conj(unit) * t.row(p);
    d.col(q) += unit * t.row(p).adjoint();
    jac.col(col) = x_of_chi(d);
  };
  for (int i = 0; i < 16; ++i) column(i, i, i, 1.0);
  int k = 16;
  for (int p = 1; p < 16; ++p)
    for (int q = 0; q < p; ++q, k += 2) {
      column(k, p, q, 1.0);
      column(k + 1, p, q, cd(0, 1));
    }
  return jac;
}

Matrix16cd nearest_psd(const Matrix16cd& m) {
  Eigen::SelfAdjointEigenSolver<Matrix16cd> es(0.5 * (m + m.adjoint()));
  const Eigen::Matrix<double, 16, 1> ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.cast<cd>().asDiagonal() * es.eigenvectors().adjoint();
}

struct LinearModel {
  MatrixXd pops;   // (state, gate, nu) rows -> populations before readout
  MatrixXd means;  // (state, gate, beta) rows
  VectorXd y;
  MatrixXd completeness;  // 32 x 256
  VectorXd completeness_target;
};

LinearModel build_model(const TomographyDataset& data, const ReadoutCalibration& cal) {
  const auto& inputs = qpt_input_states();
  const auto& gates = qst_gates();
  const auto grid = data.grid();
  const ReadoutCalibration::Table design = cal.design_matrix();
  const int rows = kNumQptStates * kNumQstGates;

  LinearModel lm;
  lm.pops.resize(rows * 4, kDim);
  lm.means.resize(rows * kNumMappings, kDim);
  lm.y.resize(rows * kNumMappings);

  Eigen::Matrix<cd, 16, 4> w;
  for (int s = 0; s < kNumQptStates; ++s) {
    const Matrix4cd& rho = inputs[s].matrix();
    for (int g = 0; g < kNumQstGates; ++g) {
      const int row = s * kNumQstGates + g;
      for (int nu = 0; nu < 4; ++nu) {
        // F_mn = (u_m rho u_n^dagger)_{nu nu} with u_m = G A_m.
        for (int m = 0; m < 16; ++m) w.row(m) = (gates[g].matrix * paulis()[m]).row(nu);
        const Matrix16cd f = w * rho * w.adjoint();
        auto out = lm.pops.row(row * 4 + nu);
        for (int m = 0; m < 16; ++m) out[m] = f(m, m).real();
        for (int m = 0; m < 16; ++m)
          for (int n = m + 1; n < 16; ++n) {
            const int k = pair_index().at[m][n];
            out[k] = 2.0 * f(m, n).real();
            out[k + 1] = -2.0 * f(m, n).imag();
          }
      }
      for (int b = 0; b < kNumMappings; ++b) {
        lm.means.row(row * kNumMappings + b) = design.row(b) * lm.pops.middleRows(row * 4, 4);
        lm.y[row * kNumMappings + b] = grid[s](g, b);
      }
    }
  }

  lm.completeness.resize(32, kDim);
  VectorXd e = VectorXd::Zero(kDim);
  for (int k = 0; k < kDim; ++k) {
    e.setZero();
    e[k] = 1.0;
    ChiMatrix basis{chi_of_x(e)};
    const Matrix4cd z = completeness_operator(basis);
    for (int i = 0; i < 16; ++i) {
      lm.completeness(i, k) = z(i / 4, i % 4).real();
      lm.completeness(16 + i, k) = z(i / 4, i % 4).imag();
    }
  }
  lm.completeness_target = VectorXd::Zero(32);
  for (int i = 0; i < 4; ++i) lm.completeness_target[i * 4 + i] = 1.0;
  return lm;
}

VectorXd model_weights(const LinearModel& lm, const VectorXd& x, std::size_t n, const ReadoutCalibration& cal) {
  VectorXd w(lm.y.size());
  const VectorXd pops = lm.pops * x;
  for (Eigen::Index row = 0; row < lm.pops.rows() / 4; ++row) {
    // Clip tiny negative populations so the variance stays defined.
    Eigen::Vector4d p = pops.segment<4>(row * 4).cwiseMax(0.0);
    if (p.sum() <= 0.0) p.setConstant(0.25);
    p /= p.sum();
    for (int b = 0; b < kNumMappings; ++b) {
      const double s = mean_uncertainty(p, b + 1, n, cal);
      w[row * kNumMappings + b] = 1.0 / (s * s);
    }
  }
  return w;
}

}  // namespace

QptResult qpt_fit(const TomographyDataset& data, const ReadoutCalibration& cal, const TomographyOptions& options) {
  data.validate();
  cal.validate();
  if (data.num_states != kNumQptStates) throw ValidationError("qpt_fit: dataset must hold 36 input states");
  if (!(options.uniform_sigma > 0.0)) throw ValidationError("qpt_fit: uniform_sigma must be positive");
  const std::size_t n = data.shots();
  const bool model = options.weighting == Weighting::model && n > 0;
  const LinearModel lm = build_model(data, cal);
  const MatrixXd& cm = lm.completeness;
  const VectorXd& cy = lm.completeness_target;

  const double inv_count = 1.0 / static_cast<double>(lm.y.size());
  VectorXd w = VectorXd::Constant(lm.y.size(), inv_count / (options.uniform_sigma * options.uniform_sigma));
  const auto normal_equations = [&](double lambda, MatrixXd& h, VectorXd& g) {
    h = lm.means.transpose() * w.asDiagonal() * lm.means + lambda * cm.transpose() * cm;
    g = lm.means.transpose() * (w.array() * lm.y.array()).matrix() + lambda * cm.transpose() * cy;
  };

  // Unconstrained start.
  MatrixXd h;
  VectorXd g;
  normal_equations(kLambdas.front(), h, g);
  VectorXd x = h.ldlt().solve(g);
  if (model) {
    w = inv_count * model_weights(lm, x, n, cal);
    normal_equations(kLambdas.front(), h, g);
    x = h.ldlt().solve(g);
  }
  VectorXd theta = theta_of_chi(nearest_psd(chi_of_x(x)));

  QptResult result;
  const int rounds = model ? std::max(1, options.reweighting_rounds) : 1;
  for (int round = 0; round < rounds; ++round) {
    if (model && round > 0) {
      const Matrix16cd f = factor_of_theta(theta);
      w = inv_count * model_weights(lm, x_of_chi(f.adjoint() * f), n, cal);
    }
    for (double lambda : kLambdas) {
      normal_equations(lambda, h, g);
      Eigen::LLT<MatrixXd> llt(h);
      if (llt.info() != Eigen::Success) throw NumericalError("qpt_fit: normal matrix is not positive definite");
      const MatrixXd r = llt.matrixU();
      const VectorXd d = llt.matrixL().solve(g);
      const double f0 = (w.array() * lm.y.array().square()).sum() + lambda * cy.squaredNorm() - d.squaredNorm();

      const ResidualFn fn = [&](const VectorXd& th, VectorXd& res, MatrixXd* jac) {
        const Matrix16cd t = factor_of_theta(th);
        res = r * x_of_chi(t.adjoint() * t) - d;
        if (jac) *jac = r * chi_jacobian(th);
      };
      LmOptions opts;
      opts.max_iterations = 2000;
      opts.relative_tolerance = 1e-10;
      const LmResult lmr = levenberg_marquardt(fn, theta, opts);
      theta = lmr.x;
      const Matrix16cd t = factor_of_theta(theta);
      result.chi.matrix = t.adjoint() * t;
      result.completeness = completeness_residual(result.chi);
      result.cost = lmr.cost + f0;
      result.final_lambda = lambda;
      if (result.completeness < kMaxCompleteness) break;
    }
  }
  if (!(result.completeness < kMaxCompleteness))
    throw NumericalError("qpt_fit: completeness residual " + std::to_string(result.completeness) +
                         " >= 1e-6 at the largest penalty");
  return result;
}

}  // namespace swipht
