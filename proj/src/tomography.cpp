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

#include "swipht/tomography.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <tuple>

#include "swipht/linalg.hpp"
#include "swipht/optim.hpp"
#include "swipht/rng.hpp"

namespace swipht {

namespace {

const std::array<Matrix4cd, 16>& paulis() {
  static const auto basis = pauli_basis<double>();
  return basis;
}

using Vector16d = Eigen::Matrix<double, 16, 1>;

// Strictly-lower index pairs in parameter order.
constexpr std::array<std::pair<int, int>, 6> kLower{{{1, 0}, {2, 0}, {2, 1}, {3, 0}, {3, 1}, {3, 2}}};

Matrix4cd factor_from_parameters(const Vector16d& t) {
  Matrix4cd f = Matrix4cd::Zero();
  for (int i = 0; i < 4; ++i) f(i, i) = t[i];
  for (int k = 0; k < 6; ++k) f(kLower[k].first, kLower[k].second) = cd(t[4 + 2 * k], t[5 + 2 * k]);
  return f;
}

// Inverse of state_from_parameters up to scale: T = P L^dagger P with
// L L^dagger = P rho P (P reverses the basis), which makes T lower triangular.
Vector16d parameters_from_state(const Matrix4cd& rho) {
  Matrix4cd rev = Matrix4cd::Zero();
  for (int i = 0; i < 4; ++i) rev(i, 3 - i) = 1.0;
  const Matrix4cd shifted = rev * rho * rev + 1e-8 * Matrix4cd::Identity();
  Eigen::LLT<Matrix4cd> llt(shifted);
  const Matrix4cd t_mat = rev * Matrix4cd(llt.matrixL()).adjoint() * rev;
  Vector16d t;
  for (int i = 0; i < 4; ++i) t[i] = t_mat(i, i).real();
  for (int k = 0; k < 6; ++k) {
    const cd v = t_mat(kLower[k].first, kLower[k].second);
    t[4 + 2 * k] = v.real();
    t[5 + 2 * k] = v.imag();
  }
  return t;
}

// Clip negative eigenvalues and renormalize.
Matrix4cd nearest_state(const Matrix4cd& m) {
  Eigen::SelfAdjointEigenSolver<Matrix4cd> es(0.5 * (m + m.adjoint()));
  Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0);
  if (ev.sum() <= 0.0) return Matrix4cd::Identity() / 4.0;
  ev /= ev.sum();
  return es.eigenvectors() * ev.cast<cd>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

void ChiMatrix::validate() const {
  if (!matrix.allFinite()) throw ValidationError("ChiMatrix: non-finite entries");
  if (hermiticity_error(matrix) > 1e-10) throw ValidationError("ChiMatrix: not Hermitian");
  if (min_hermitian_eigenvalue(matrix) < -1e-9) throw ValidationError("ChiMatrix: not positive semidefinite");
}

std::array<cd, 16> pauli_decompose(const Matrix4cd& u) {
  std::array<cd, 16> a;
  for (int m = 0; m < 16; ++m) a[m] = (paulis()[m].adjoint() * u).trace() / 4.0;
  return a;
}

ChiMatrix chi_of_unitary(const Matrix4cd& u) {
  const auto a = pauli_decompose(u);
  ChiMatrix chi;
  for (int m = 0; m < 16; ++m)
    for (int n = 0; n < 16; ++n) chi.matrix(m, n) = a[m] * std::conj(a[n]);
  return chi;
}

// S = sum_mn chi_mn conj(A_n) (x) A_m, and these 256 operators are
// orthogonal with squared norm 16.
ChiMatrix chi_of_superoperator(const Matrix16cd& s) {
  ChiMatrix chi;
  for (int m = 0; m < 16; ++m)
    for (int n = 0; n < 16; ++n) {
      const Matrix16cd basis = kron(paulis()[n].conjugate(), paulis()[m]);
      chi.matrix(m, n) = (basis.adjoint() * s).trace() / 16.0;
    }
  chi.matrix = 0.5 * (chi.matrix + chi.matrix.adjoint()).eval();
  return chi;
}

Matrix16cd superoperator_of_chi(const ChiMatrix& chi) {
  Matrix16cd s = Matrix16cd::Zero();
  for (int m = 0; m < 16; ++m)
    for (int n = 0; n < 16; ++n)
      if (chi.matrix(m, n) != cd(0)) s += chi.matrix(m, n) * Matrix16cd(kron(paulis()[n].conjugate(), paulis()[m]));
  return s;
}

Matrix4cd process_apply(const ChiMatrix& chi, const Matrix4cd& rho) {
  Matrix4cd out = Matrix4cd::Zero();
  for (int m = 0; m < 16; ++m) {
    const Matrix4cd left = paulis()[m] * rho;
    for (int n = 0; n < 16; ++n)
      if (chi.matrix(m, n) != cd(0)) out += chi.matrix(m, n) * left * paulis()[n].adjoint();
  }
  return out;
}

DensityMatrix process_apply(const ChiMatrix& chi, const DensityMatrix& rho) {
  Matrix4cd out = process_apply(chi, rho.matrix());
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix(out);
}

Matrix4cd completeness_operator(const ChiMatrix& chi) {
  Matrix4cd z = Matrix4cd::Zero();
  for (int m = 0; m < 16; ++m)
    for (int n = 0; n < 16; ++n)
      if (chi.matrix(m, n) != cd(0)) z += chi.matrix(m, n) * paulis()[n].adjoint() * paulis()[m];
  return z;
}

double completeness_residual(const ChiMatrix& chi) {
  return (completeness_operator(chi) - Matrix4cd::Identity()).cwiseAbs2().sum();
}

GateMetrics metrics(const ChiMatrix& chi_hat, const ChiMatrix& chi_ideal) {
  GateMetrics g;
  g.F_p = (chi_hat.matrix * chi_ideal.matrix).trace().real();
  g.F_g = (4.0 * g.F_p + 1.0) / 5.0;
  g.purity = (4.0 * (chi_hat.matrix * chi_hat.matrix).trace().real() + 1.0) / 5.0;
  return g;
}

const std::array<Matrix2c<double>, 6>& preparation_rotations() {
  static const std::array<Matrix2c<double>, 6> ops{
      Matrix2c<double>::Identity(),     rotation<double>(Axis::x, kPi),       rotation<double>(Axis::x, kPi / 2),
      rotation<double>(Axis::x, -kPi / 2), rotation<double>(Axis::y, kPi / 2), rotation<double>(Axis::y, -kPi / 2)};
  return ops;
}

const std::array<DensityMatrix, kNumQptStates>& qpt_input_states() {
  static const auto states = [] {
    std::array<DensityMatrix, kNumQptStates> out;
    Vector4cd gg = Vector4cd::Zero();
    gg[kGG] = 1.0;
    const auto& ops = preparation_rotations();
    for (int l = 0; l < 6; ++l)
      for (int h = 0; h < 6; ++h) out[6 * l + h] = DensityMatrix::pure(kron2<double>(ops[l], ops[h]) * gg);
    return out;
  }();
  return states;
}

// ---- datasets ---------------------------------------------------------------

void TomographyDataset::validate() const {
  if (num_states < 1) throw ValidationError("TomographyDataset: num_states must be >= 1");
  std::set<std::tuple<int, int, int>> seen;
  for (const auto& e : entries) {
    if (e.state < 0 || e.state >= num_states || e.gate < 0 || e.gate >= kNumQstGates || e.beta < 1 ||
        e.beta > kNumMappings)
      throw ValidationError("TomographyDataset: index out of range");
    if (!std::isfinite(e.mean)) throw ValidationError("TomographyDataset: non-finite mean");
    if (!seen.insert({e.state, e.gate, e.beta}).second)
      throw ValidationError("TomographyDataset: duplicate (state, gate, beta) entry");
  }
  if (seen.size() != static_cast<std::size_t>(num_states) * kNumQstGates * kNumMappings)
    throw ValidationError("TomographyDataset: incomplete grid");
}

std::vector<Eigen::Matrix<double, kNumQstGates, kNumMappings>> TomographyDataset::grid() const {
  std::vector<Eigen::Matrix<double, kNumQstGates, kNumMappings>> g(static_cast<std::size_t>(num_states));
  for (const auto& e : entries) g[static_cast<std::size_t>(e.state)](e.gate, e.beta - 1) = e.mean;
  return g;
}

std::size_t TomographyDataset::shots() const {
  std::size_t n = entries.empty() ? 0 : entries.front().n;
  for (const auto& e : entries)
    if (e.n != n) throw ValidationError("TomographyDataset: mixed shot counts are not supported");
  return n;
}

TomographyDataset synthesize_qst_data(const DensityMatrix& rho, const ReadoutCalibration& cal, std::size_t n,
                                      std::uint64_t seed, int state_index) {
  TomographyDataset data;
  data.num_states = state_index + 1;
  const auto& gates = qst_gates();
  for (int g = 0; g < kNumQstGates; ++g) {
    const DensityMatrix rotated = apply_gate(rho, gates[g]);
    for (int beta = 1; beta <= kNumMappings; ++beta) {
      double mean;
      if (n == 0) {
        mean = expected_mean(rotated, beta, cal);
      } else {
        const std::uint64_t cell_seed =
            make_stream(seed, {static_cast<std::uint64_t>(state_index), static_cast<std::uint64_t>(g)})();
        const ShotRecord rec = sample_shots(rotated, beta, cal, n, cell_seed);
        mean = std::accumulate(rec.values.begin(), rec.values.end(), 0.0) / static_cast<double>(n);
      }
      data.entries.push_back({state_index, g, beta, mean, n});
    }
  }
  return data;
}

TomographyDataset synthesize_qpt_data(const Matrix16cd& s, const ReadoutCalibration& cal, std::size_t n,
                                      std::uint64_t seed) {
  TomographyDataset data;
  data.num_states = kNumQptStates;
  const auto& inputs = qpt_input_states();
  for (int st = 0; st < kNumQptStates; ++st) {
    const DensityMatrix out = apply_superoperator(s, inputs[st]);
    auto part = synthesize_qst_data(out, cal, n, seed, st);
    data.entries.insert(data.entries.end(), part.entries.begin(), part.entries.end());
  }
  return data;
}

// ---- state tomography -------------------------------------------------------

DensityMatrix state_from_parameters(const Vector16d& t) {
  if (!t.allFinite()) throw ValidationError("state_from_parameters: non-finite parameters");
  const Matrix4cd f = factor_from_parameters(t);
  const double norm = f.squaredNorm();
  if (!(norm > 0.0)) return DensityMatrix(Matrix4cd::Identity() / 4.0);
  Matrix4cd rho = f.adjoint() * f / norm;
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(rho);
}

QstResult qst_fit(const TomographyDataset& data, const ReadoutCalibration& cal, const TomographyOptions& options) {
  data.validate();
  cal.validate();
  if (data.num_states != 1) throw ValidationError("qst_fit: dataset must hold exactly one state");
  if (options.random_starts < 0) throw ValidationError("qst_fit: random_starts must be >= 0");
  const auto means = data.grid().front();
  const std::size_t n = data.shots();
  const bool model = options.weighting == Weighting::model && n > 0;
  const ReadoutCalibration::Table design = cal.design_matrix();
  const auto& gates = qst_gates();

  const auto eval = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r) {
    const Matrix4cd f = factor_from_parameters(x);
    const double norm = f.squaredNorm();
    const Matrix4cd rho = norm > 0.0 ? Matrix4cd(f.adjoint() * f / norm) : Matrix4cd(Matrix4cd::Identity() / 4.0);
    r.resize(kNumQstGates * kNumMappings);
    for (int g = 0; g < kNumQstGates; ++g) {
      const Eigen::Vector4d pops = (gates[g].matrix * rho * gates[g].matrix.adjoint()).diagonal().real();
      for (int b = 0; b < kNumMappings; ++b) {
        const double m = design.row(b).dot(pops);
        const double sigma = model ? mean_uncertainty(pops, b + 1, n, cal) : options.uniform_sigma;
        r[g * kNumMappings + b] = (means(g, b) - m) / sigma;
      }
    }
  };
  const ResidualFn plain = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd*) { eval(x, r); };
  const ResidualFn with_jacobian = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
    eval(x, r);
    if (jac) *jac = finite_difference_jacobian(plain, x, r);
  };

  // Linear inversion over Pauli coefficients, rho = (I + sum_m c_m P_m) / 4.
  Eigen::MatrixXd a(kNumQstGates * kNumMappings, 15);
  Eigen::VectorXd y(kNumQstGates * kNumMappings);
  for (int g = 0; g < kNumQstGates; ++g) {
    const Matrix4cd& u = gates[g].matrix;
    const Eigen::Vector4d base = (u * paulis()[0] * u.adjoint()).diagonal().real() / 4.0;
    for (int b = 0; b < kNumMappings; ++b) {
      const int row = g * kNumMappings + b;
      y[row] = means(g, b) - design.row(b).dot(base);
      for (int m = 1; m < 16; ++m)
        a(row, m - 1) = design.row(b).dot(Eigen::Vector4d((u * paulis()[m] * u.adjoint()).diagonal().real() / 4.0));
    }
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(y);
  Matrix4cd rho_lin = paulis()[0] / 4.0;
  for (int m = 1; m < 16; ++m) rho_lin += c[m - 1] / 4.0 * paulis()[m];

  std::vector<Vector16d> starts{parameters_from_state(nearest_state(rho_lin))};
  for (int k = 0; k < options.random_starts; ++k) {
    auto rng = make_stream(options.seed, {0x515354ULL, static_cast<std::uint64_t>(k)});
    Vector16d t;
    for (int i = 0; i < 16; ++i) t[i] = standard_normal(rng);
    starts.push_back(t);
  }

  LmOptions lm;
  lm.max_iterations = 1000;
  lm.relative_tolerance = 1e-10;
  QstResult best{DensityMatrix(Matrix4cd::Identity() / 4.0), std::numeric_limits<double>::infinity(), -2, false};
  bool any_converged = false;
  for (std::size_t k = 0; k < starts.size(); ++k) {
    const LmResult res = levenberg_marquardt(with_jacobian, starts[k], lm);
    if (!std::isfinite(res.cost)) continue;
    // Converged starts always beat unconverged ones.
    const bool better = (res.converged && !any_converged) ||
                        (res.converged == any_converged && res.cost < best.cost);
    if (better) {
      best.rho = state_from_parameters(res.x);
      best.cost = res.cost;
      best.best_start = static_cast<int>(k) - 1;
      best.converged = res.converged;
      any_converged = any_converged || res.converged;
    }
  }
  if (!any_converged) throw FitFailure("qst_fit: no start converged", best.rho);
  return best;
}

}  // namespace swipht

namespace swipht {

nlohmann::json chi_to_json(const ChiMatrix& chi, const std::optional<GateMetrics>& m) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (int i = 0; i < 16; ++i) {
    nlohmann::json rr = nlohmann::json::array(), ii = nlohmann::json::array();
    for (int j = 0; j < 16; ++j) rr.push_back(chi.matrix(i, j).real()), ii.push_back(chi.matrix(i, j).imag());
    re.push_back(rr);
    im.push_back(ii);
  }
  nlohmann::json j{{"basis_order", std::string(kPauliOrderString)}, {"real", re}, {"imag", im},
                   {"trace", chi.trace()}, {"completeness_residual", completeness_residual(chi)}};
  if (m) j["metrics"] = {{"F_p", m->F_p}, {"F_g", m->F_g}, {"purity", m->purity}};
  return j;
}

ChiMatrix chi_from_json(const nlohmann::json& j) {
  try {
    if (j.at("basis_order").get<std::string>() != kPauliOrderString)
      throw ValidationError("chi_from_json: unexpected basis_order");
    ChiMatrix chi;
    const auto& re = j.at("real");
    const auto& im = j.at("imag");
    if (re.size() != 16 || im.size() != 16) throw ValidationError("chi_from_json: expected 16x16 matrices");
    for (int r = 0; r < 16; ++r) {
      if (re[r].size() != 16 || im[r].size() != 16) throw ValidationError("chi_from_json: expected 16x16 matrices");
      for (int c = 0; c < 16; ++c) chi.matrix(r, c) = cd(re[r][c].get<double>(), im[r][c].get<double>());
    }
    chi.validate();
    return chi;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("chi_from_json: ") + e.what());
  }
}

nlohmann::json rho_to_json(const DensityMatrix& rho) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (int i = 0; i < 4; ++i) {
    nlohmann::json rr = nlohmann::json::array(), ii = nlohmann::json::array();
    for (int j = 0; j < 4; ++j) rr.push_back(rho.element(i, j).real()), ii.push_back(rho.element(i, j).imag());
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"basis_order", "gg,ge,eg,ee"}, {"real", re}, {"imag", im}, {"purity", rho.purity()}};
}

void write_chi_bars_csv(std::ostream& os, const ChiMatrix& chi) {
  os << "m,n,label_m,label_n,re,im\n";
  os.precision(12);
  for (int m = 0; m < 16; ++m)
    for (int n = 0; n < 16; ++n)
      os << m << ',' << n << ',' << kPauliLabels[m] << ',' << kPauliLabels[n] << ',' << chi.matrix(m, n).real()
         << ',' << chi.matrix(m, n).imag() << '\n';
}

}  // namespace swipht
