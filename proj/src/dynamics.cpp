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

#include "swipht/dynamics.hpp"

#include <cmath>
#include <ostream>

#include "swipht/linalg.hpp"

namespace swipht {

namespace {

using Matrix2cd = Matrix2c<double>;

Matrix2cd sigma_minus() {
  Matrix2cd m = Matrix2cd::Zero();
  m(0, 1) = 1.0;
  return m;
}

// Hamiltonian convention: excited = +1.
Matrix2cd sigma_z_excited() {
  Matrix2cd m = Matrix2cd::Zero();
  m(0, 0) = -1.0;
  m(1, 1) = 1.0;
  return m;
}

void check_frame_params(const SystemParams& p) {
  if (!std::isfinite(p.omega_L) || !std::isfinite(p.omega_H) || p.omega_L <= 0 || p.omega_H <= 0)
    throw ValidationError("dynamics: qubit frequencies must be positive");
  if (!std::isfinite(p.chi_qq)) throw ValidationError("dynamics: chi_qq must be finite");
}

void check_waveform(const PulseWaveform& wf) {
  if (wf.t.size() != wf.omega.size()) throw ValidationError("dynamics: waveform t/omega size mismatch");
  if (wf.t.size() == 1) throw ValidationError("dynamics: waveform needs at least two samples");
  if (!wf.t.empty() && !(wf.sample_period > 0.0)) throw ValidationError("dynamics: sample_period must be positive");
}

Matrix16cd to16(const Eigen::MatrixXcd& m) { return m; }

Matrix16cd commutator_super(const Matrix4cd& h) {
  const Matrix4cd id = Matrix4cd::Identity();
  return to16(cd(0, -1) * (kron(id, h) - kron(h.transpose(), id)));
}

Matrix16cd dissipator_super(const std::vector<Matrix4cd>& ops) {
  const Matrix4cd id = Matrix4cd::Identity();
  Matrix16cd out = Matrix16cd::Zero();
  for (const auto& l : ops) {
    const Matrix4cd ldl = l.adjoint() * l;
    out += to16(kron(l.conjugate(), l) - 0.5 * kron(id, ldl) - 0.5 * kron(ldl.transpose(), id));
  }
  return out;
}

std::vector<Matrix4cd> collapse_operators(const NoiseModel& n) {
  std::vector<Matrix4cd> ops;
  const auto add = [&](double rate, const Matrix2cd& op, Qubit q) {
    if (rate > 0.0) ops.push_back(std::sqrt(rate) * embed<double>(op, q));
  };
  add(n.gamma1_L, sigma_minus(), Qubit::L);
  add(n.gamma1_H, sigma_minus(), Qubit::H);
  add(0.5 * n.gamma_phi_L, sigma_z_excited(), Qubit::L);
  add(0.5 * n.gamma_phi_H, sigma_z_excited(), Qubit::H);
  return ops;
}

struct StepGrid {
  std::size_t steps = 0;
  double h = 0.0;
};

StepGrid step_grid(const PulseWaveform& wf, int substeps) {
  if (substeps < 1) throw ValidationError("dynamics: substeps must be >= 1");
  if (wf.t.empty()) return {};
  return {(wf.t.size() - 1) * static_cast<std::size_t>(substeps), wf.sample_period / substeps};
}

// Generic RK4 for dX/dt = A(t) X with A(t) = A0 + Omega(t) A1.
template <typename M>
M rk4_linear(const PulseWaveform& wf, int substeps, const M& a0, const M& a1, M x) {
  const auto grid = step_grid(wf, substeps);
  for (std::size_t k = 0; k < grid.steps; ++k) {
    const double t = grid.h * static_cast<double>(k);
    const M am = a0 + wf.at(t + 0.5 * grid.h) * a1;
    const M k1 = (a0 + wf.at(t) * a1) * x;
    const M k2 = am * (x + 0.5 * grid.h * k1);
    const M k3 = am * (x + 0.5 * grid.h * k2);
    const M k4 = (a0 + wf.at(t + grid.h) * a1) * (x + grid.h * k3);
    x += grid.h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

}  // namespace

DensityMatrix::DensityMatrix() : m_(Matrix4cd::Zero()) { m_(0, 0) = 1.0; }

DensityMatrix::DensityMatrix(const Matrix4cd& m) : m_(m) {
  if (!m.allFinite()) throw ValidationError("DensityMatrix: non-finite entries");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10) throw ValidationError("DensityMatrix: not Hermitian");
  if (std::abs(m.trace() - cd(1.0)) > 1e-10) throw ValidationError("DensityMatrix: trace != 1");
  if (min_hermitian_eigenvalue(m) < -1e-9) throw ValidationError("DensityMatrix: negative eigenvalue");
  m_ = 0.5 * (m + m.adjoint());
}

DensityMatrix DensityMatrix::basis_state(int index) {
  if (index < 0 || index > 3) throw ValidationError("DensityMatrix: basis index out of range");
  Matrix4cd m = Matrix4cd::Zero();
  m(index, index) = 1.0;
  return DensityMatrix(m);
}

DensityMatrix DensityMatrix::pure(const Vector4cd& psi) {
  const double n = psi.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw ValidationError("DensityMatrix: state vector has zero norm");
  const Vector4cd v = psi / n;
  return DensityMatrix(v * v.adjoint());
}

void NoiseModel::validate() const {
  for (double r : {gamma1_L, gamma1_H, gamma_phi_L, gamma_phi_H})
    if (!std::isfinite(r) || r < 0.0) throw ValidationError("NoiseModel: rates must be >= 0");
}

NoiseModel NoiseModel::from(const SystemParams& p) {
  for (double t : {p.T1_L, p.T1_H, p.T2_L, p.T2_H})
    if (!std::isfinite(t) || t <= 0.0) throw ValidationError("NoiseModel: T1/T2 must be positive");
  NoiseModel n;
  n.gamma1_L = 1.0 / p.T1_L;
  n.gamma1_H = 1.0 / p.T1_H;
  n.gamma_phi_L = 1.0 / p.T2_L - 0.5 / p.T1_L;
  n.gamma_phi_H = 1.0 / p.T2_H - 0.5 / p.T1_H;
  // T2 = 2 T1 can round to a tiny negative rate.
  if (n.gamma_phi_L > -1e-9 * n.gamma1_L) n.gamma_phi_L = std::max(0.0, n.gamma_phi_L);
  if (n.gamma_phi_H > -1e-9 * n.gamma1_H) n.gamma_phi_H = std::max(0.0, n.gamma_phi_H);
  n.validate();
  return n;
}

Matrix4cd frame_drift(const SystemParams& params, double omega_d, Qubit target) {
  check_frame_params(params);
  const double chi = params.chi_qq;
  const double delta = params.omega(target) + chi - omega_d;
  Matrix4cd h = Matrix4cd::Zero();
  for (int i = 0; i < 4; ++i) {
    const double zl = (i & 2) ? 1.0 : -1.0;
    const double zh = (i & 1) ? 1.0 : -1.0;
    const double zt = target == Qubit::H ? zh : zl;
    const double zo = target == Qubit::H ? zl : zh;
    h(i, i) = 0.5 * delta * zt + 0.5 * chi * zo + 0.5 * chi * zl * zh;
  }
  return h;
}

Matrix4cd frame_drive(double omega, double phi, Qubit target) {
  const Matrix2cd sm = sigma_minus();
  const cd e = std::polar(1.0, phi);
  const Matrix2cd d = 0.5 * omega * (e * sm + std::conj(e) * sm.adjoint());
  return embed<double>(d, target);
}

EvolveResult evolve(const DensityMatrix& rho0, const PulseWaveform& wf, const SystemParams& params,
                    const EvolveOptions& options) {
  check_waveform(wf);
  if (options.noise) options.noise->validate();
  if (options.record_every && !(*options.record_every > 0.0))
    throw ValidationError("evolve: record_every must be positive");
  const auto grid = step_grid(wf, options.substeps);

  const Matrix4cd h0 = frame_drift(params, wf.spec.omega_d, wf.spec.target);
  const Matrix4cd h1 = frame_drive(1.0, wf.spec.phi_d, wf.spec.target);
  const auto ops = options.noise ? collapse_operators(*options.noise) : std::vector<Matrix4cd>{};
  Matrix4cd sum_ldl = Matrix4cd::Zero();
  for (const auto& l : ops) sum_ldl += l.adjoint() * l;

  const auto rhs = [&](double t, const Matrix4cd& rho) -> Matrix4cd {
    const Matrix4cd h = h0 + wf.at(t) * h1;
    Matrix4cd out = cd(0, -1) * (h * rho - rho * h);
    for (const auto& l : ops) out += l * rho * l.adjoint();
    out -= 0.5 * (sum_ldl * rho + rho * sum_ldl);
    return out;
  };

  EvolveResult result{rho0, {}};
  std::size_t stride = 0;
  if (options.record_every) {
    const auto every = static_cast<std::size_t>(std::llround(*options.record_every / grid.h));
    stride = grid.steps == 0 ? 1 : std::max<std::size_t>(1, every);
    result.trajectory.push_back({0.0, rho0.matrix()});
  }

  Matrix4cd rho = rho0.matrix();
  for (std::size_t k = 0; k < grid.steps; ++k) {
    const double t = grid.h * static_cast<double>(k);
    const Matrix4cd k1 = rhs(t, rho);
    const Matrix4cd k2 = rhs(t + 0.5 * grid.h, rho + 0.5 * grid.h * k1);
    const Matrix4cd k3 = rhs(t + 0.5 * grid.h, rho + 0.5 * grid.h * k2);
    const Matrix4cd k4 = rhs(t + grid.h, rho + grid.h * k3);
    rho += grid.h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double t_next = grid.h * static_cast<double>(k + 1);
    if (std::abs(rho.trace() - cd(1.0)) > 1e-6 || !rho.allFinite())
      throw NumericalError("evolve: trace drift above 1e-6 at t = " + std::to_string(t_next) + " s");
    if (min_hermitian_eigenvalue(rho) < -1e-6)
      throw NumericalError("evolve: negative eigenvalue below -1e-6 at t = " + std::to_string(t_next) + " s");
    if (stride && ((k + 1) % stride == 0 || k + 1 == grid.steps)) result.trajectory.push_back({t_next, rho});
  }

  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace().real();
  result.final_state = DensityMatrix(rho);
  return result;
}

Matrix4cd propagate_unitary(const PulseWaveform& wf, const SystemParams& params, int substeps) {
  check_waveform(wf);
  const Matrix4cd a0 = cd(0, -1) * frame_drift(params, wf.spec.omega_d, wf.spec.target);
  const Matrix4cd a1 = cd(0, -1) * frame_drive(1.0, wf.spec.phi_d, wf.spec.target);
  return rk4_linear<Matrix4cd>(wf, substeps, a0, a1, Matrix4cd::Identity());
}

Matrix16cd propagate_superoperator(const PulseWaveform& wf, const SystemParams& params,
                                   const std::optional<NoiseModel>& noise, int substeps) {
  check_waveform(wf);
  if (noise) noise->validate();
  Matrix16cd a0 = commutator_super(frame_drift(params, wf.spec.omega_d, wf.spec.target));
  if (noise) a0 += dissipator_super(collapse_operators(*noise));
  const Matrix16cd a1 = commutator_super(frame_drive(1.0, wf.spec.phi_d, wf.spec.target));
  return rk4_linear<Matrix16cd>(wf, substeps, a0, a1, Matrix16cd::Identity());
}

Matrix16cd unitary_superoperator(const Matrix4cd& u) { return to16(kron(u.conjugate(), u)); }

DensityMatrix apply_superoperator(const Matrix16cd& s, const DensityMatrix& rho) {
  Matrix4cd out;
  Eigen::Map<Vector16cd>(out.data()) = s * Eigen::Map<const Vector16cd>(rho.matrix().data());
  out = 0.5 * (out + out.adjoint());
  const double tr = out.trace().real();
  if (std::abs(tr - 1.0) > 1e-6) throw NumericalError("apply_superoperator: map is not trace preserving");
  return DensityMatrix(out / tr);
}

DensityMatrix apply_gate(const DensityMatrix& rho, const GateMatrix& g) {
  return DensityMatrix(g.matrix * rho.matrix() * g.matrix.adjoint());
}

double process_fidelity(const Matrix16cd& s, const Matrix4cd& u) {
  return (unitary_superoperator(u).adjoint() * s).trace().real() / 16.0;
}

double average_gate_fidelity(const Matrix16cd& s, const Matrix4cd& u) {
  return (4.0 * process_fidelity(s, u) + 1.0) / 5.0;
}

PhaseExtraction extract_swipht_phases(const SystemParams& params, int substeps) {
  params.validate();
  const PulseWaveform wf = synthesize(PulseSpec::canonical(params, 0.0, Qubit::H));
  PhaseExtraction out;
  out.unitary = propagate_unitary(wf, params, substeps);
  const Matrix4cd& u = out.unitary;

  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      const bool allowed = (r == kGG && c == kGE) || (r == kGE && c == kGG) || (r == kEG && c == kEG) ||
                           (r == kEE && c == kEE);
      if (!allowed) out.leakage = std::max(out.leakage, std::norm(u(r, c)));
    }
  if (out.leakage > 1e-3)
    throw NumericalError("extract_swipht_phases: leakage " + std::to_string(out.leakage) +
                         " exceeds 1e-3; pulse is not calibrated");

  const cd ref = u(kGG, kGE) / std::abs(u(kGG, kGE));
  out.phases.xi = std::arg(u(kEG, kEG) / ref);
  out.phases.zeta = std::arg(u(kEE, kEE) / ref);
  return out;
}

GaussianGateSpec GaussianGateSpec::device(Axis axis, double angle, Qubit target) {
  GaussianGateSpec s;
  s.axis = axis;
  s.angle = angle;
  s.target = target;
  s.duration = target == Qubit::H ? 37e-9 : 72e-9;
  return s;
}

PulseWaveform gaussian_waveform(const GaussianGateSpec& spec, const SystemParams& params) {
  if (!(spec.duration > 0.0) || !(spec.truncation > 0.0) || !(spec.sample_period > 0.0))
    throw ValidationError("gaussian_waveform: duration, truncation and sample_period must be positive");
  if (!std::isfinite(spec.angle)) throw ValidationError("gaussian_waveform: angle must be finite");
  check_frame_params(params);

  const double sigma = spec.duration / spec.truncation;
  const double half = 0.5 * spec.duration;
  const double offset = std::exp(-half * half / (2.0 * sigma * sigma));
  const auto n = static_cast<std::size_t>(std::max(2.0, std::ceil(spec.duration / spec.sample_period - 1e-9)));
  const double dt = spec.duration / static_cast<double>(n);

  PulseWaveform wf;
  wf.tau_g = spec.duration;
  wf.sample_period = dt;
  wf.spec.chi_qq = params.chi_qq;
  wf.spec.tau_g = spec.duration;
  wf.spec.sample_period = dt;
  wf.spec.omega_d = params.omega(spec.target);
  wf.spec.phi_d = spec.axis == Axis::x ? 0.0 : -0.5 * kPi;
  wf.spec.target = spec.target;
  wf.t.resize(n + 1);
  wf.omega.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = dt * static_cast<double>(k);
    wf.t[k] = t;
    wf.omega[k] = std::exp(-(t - half) * (t - half) / (2.0 * sigma * sigma)) - offset;
  }
  // Area of the piecewise-linear envelope the integrator sees.
  double area = 0.0;
  for (std::size_t k = 0; k < n; ++k) area += 0.5 * dt * (wf.omega[k] + wf.omega[k + 1]);
  const double amp = spec.angle / area;
  for (double& v : wf.omega) v *= amp;
  for (double v : wf.omega) wf.peak = std::max(wf.peak, std::abs(v));
  return wf;
}

Matrix16cd gaussian_pulse_gate(const GaussianGateSpec& spec, const SystemParams& params,
                               const std::optional<NoiseModel>& noise, int substeps) {
  return propagate_superoperator(gaussian_waveform(spec, params), params, noise, substeps);
}

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryPoint>& trajectory) {
  os << "t_ns,P_gg,P_ge,P_eg,P_ee,Re_rho_ge_eg,Im_rho_ge_eg\n";
  os.precision(12);
  for (const auto& p : trajectory) {
    os << p.t * 1e9;
    for (int i = 0; i < 4; ++i) os << ',' << p.rho(i, i).real();
    os << ',' << p.rho(kGE, kEG).real() << ',' << p.rho(kGE, kEG).imag() << '\n';
  }
}

}  // namespace swipht
