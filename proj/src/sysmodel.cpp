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

#include "swipht/sysmodel.hpp"

#include <cmath>
#include <sstream>

#include "swipht/linalg.hpp"

namespace swipht {

namespace {

constexpr std::string_view kSigmaZConvention =
    "rad/s, hbar=1; basis {gg,ge,eg,ee} = |L H>; sigma_z|e>=+|e>, sigma_z|g>=-|g>";

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

std::vector<std::string> two_qubit_labels() { return {"gg", "ge", "eg", "ee"}; }

// sigma^- = |g><e| on a single qubit, basis (g, e).
Eigen::Matrix2cd lowering() {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(0, 1) = 1.0;
  return m;
}

Eigen::MatrixXcd annihilation(int levels) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(levels, levels);
  for (int n = 1; n < levels; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

}  // namespace

void SystemParams::validate() const {
  if (!finite_positive(omega_L) || !finite_positive(omega_H))
    throw ValidationError("SystemParams: qubit frequencies must be positive");
  if (omega_L == omega_H) throw ValidationError("SystemParams: omega_L must differ from omega_H");
  if (!std::isfinite(chi_qq) || chi_qq == 0.0) throw ValidationError("SystemParams: chi_qq must be nonzero");
  for (double t : {T1_L, T1_H, T2_L, T2_H})
    if (!finite_positive(t)) throw ValidationError("SystemParams: T1/T2 must be positive");
  if (T2_L > 2.0 * T1_L * (1.0 + 1e-12) || T2_H > 2.0 * T1_H * (1.0 + 1e-12))
    throw ValidationError("SystemParams: T2 must not exceed 2*T1");
  if (!std::isfinite(kappa_inv) || kappa_inv < 0.0) throw ValidationError("SystemParams: kappa_inv must be >= 0");
}

void FullModelParams::validate() const {
  for (double v : {omega_L_bare, omega_H_bare, omega_R_bare, E_C_L, E_C_H})
    if (!finite_positive(v)) throw ValidationError("FullModelParams: frequencies and E_C must be positive");
  // Zero couplings are allowed (decoupled limit).
  for (double v : {g_L, g_H, J})
    if (!std::isfinite(v) || v < 0.0) throw ValidationError("FullModelParams: couplings must be >= 0");
  if (n_transmon_levels < 3) throw ValidationError("FullModelParams: n_transmon_levels must be >= 3");
  if (n_cavity_levels < 2) throw ValidationError("FullModelParams: n_cavity_levels must be >= 2");
  const double dim = static_cast<double>(n_cavity_levels) * n_transmon_levels * n_transmon_levels;
  if (dim > static_cast<double>(kMaxFullDimension))
    throw ValidationError("FullModelParams: Hilbert-space dimension exceeds " + std::to_string(kMaxFullDimension));
}

bool Hamiltonian::is_hermitian(double rel_tol) const { return hermiticity_error(matrix) <= rel_tol; }

Hamiltonian build_h0(const SystemParams& params) {
  params.validate();
  const double wl = params.omega_L, wh = params.omega_H, chi = params.chi_qq;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(4, 4);
  for (int i = 0; i < 4; ++i) {
    const double zl = (i & 2) ? 1.0 : -1.0;
    const double zh = (i & 1) ? 1.0 : -1.0;
    h(i, i) = 0.5 * (wl + chi) * zl + 0.5 * (wh + chi) * zh + 0.5 * chi * zl * zh;
  }
  return {std::move(h), two_qubit_labels(), std::string(kSigmaZConvention)};
}

Hamiltonian build_drive(double omega_amp, double omega_d, double phi_d, double t, Qubit target) {
  const double theta = omega_d * t + phi_d;
  const Eigen::Matrix2cd sm = lowering();
  const Eigen::Matrix2cd local =
      0.5 * omega_amp * (sm * std::polar(1.0, theta) + sm.adjoint() * std::polar(1.0, -theta));
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  Eigen::MatrixXcd h = target == Qubit::H ? kron(id, local) : kron(local, id);
  return {std::move(h), two_qubit_labels(), std::string(kSigmaZConvention)};
}

Hamiltonian build_full_hamiltonian(const FullModelParams& p) {
  p.validate();
  const int nc = p.n_cavity_levels, nt = p.n_transmon_levels;
  const Eigen::MatrixXcd ic = Eigen::MatrixXcd::Identity(nc, nc);
  const Eigen::MatrixXcd it = Eigen::MatrixXcd::Identity(nt, nt);

  const Eigen::MatrixXcd a_r = kron(kron(annihilation(nc), it), it);
  const Eigen::MatrixXcd a_l = kron(kron(ic, annihilation(nt)), it);
  const Eigen::MatrixXcd a_h = kron(kron(ic, it), annihilation(nt));
  const Eigen::Index dim = a_r.rows();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);

  const Eigen::MatrixXcd n_r = a_r.adjoint() * a_r;
  const Eigen::MatrixXcd n_l = a_l.adjoint() * a_l;
  const Eigen::MatrixXcd n_h = a_h.adjoint() * a_h;

  Eigen::MatrixXcd h = p.omega_R_bare * n_r;
  h += p.omega_L_bare * n_l - 0.5 * p.E_C_L * n_l * (n_l - id);
  h += p.omega_H_bare * n_h - 0.5 * p.E_C_H * n_h * (n_h - id);
  h += p.g_L * (a_r.adjoint() * a_l + a_r * a_l.adjoint());
  h += p.g_H * (a_r.adjoint() * a_h + a_r * a_h.adjoint());
  h += p.J * (a_l.adjoint() * a_h + a_l * a_h.adjoint());

  std::vector<std::string> labels;
  labels.reserve(static_cast<size_t>(dim));
  for (int r = 0; r < nc; ++r)
    for (int l = 0; l < nt; ++l)
      for (int q = 0; q < nt; ++q)
        labels.push_back("|" + std::to_string(l) + "," + std::to_string(q) + "," + std::to_string(r) + ">");
  return {std::move(h), std::move(labels), "rad/s, hbar=1; cavity (x) L (x) H; labels |n_L,n_H,n_cavity>"};
}

SystemParams extract_dressed_params(const FullModelParams& params, const SystemParams& coherence) {
  const Hamiltonian h = build_full_hamiltonian(params);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.matrix);
  if (es.info() != Eigen::Success) throw NumericalError("extract_dressed_params: eigensolver failed");
  const Eigen::VectorXd& energies = es.eigenvalues();  // ascending
  const Eigen::MatrixXcd& vecs = es.eigenvectors();
  const int nt = params.n_transmon_levels;

  auto find = [&](int n_l, int n_h, Eigen::Index exclude_a, Eigen::Index exclude_b, Eigen::Index exclude_c) {
    const Eigen::Index bare = static_cast<Eigen::Index>(n_l) * nt + n_h;  // cavity in vacuum
    Eigen::Index best = -1;
    double best_overlap = -1.0;
    for (Eigen::Index k = 0; k < vecs.cols(); ++k) {
      if (k == exclude_a || k == exclude_b || k == exclude_c) continue;
      const double ov = std::norm(vecs(bare, k));
      // Ascending energies: strict '>' keeps the lower-energy state on ties.
      if (ov > best_overlap + 1e-12) {
        best_overlap = ov;
        best = k;
      }
    }
    if (best_overlap < 0.5) {
      std::ostringstream msg;
      msg << "extract_dressed_params: ambiguous dressed state for |" << n_l << n_h
          << ",0> (max overlap " << best_overlap << ")";
      throw NumericalError(msg.str());
    }
    return best;
  };

  const Eigen::Index gg = find(0, 0, -1, -1, -1);
  const Eigen::Index ge = find(0, 1, gg, -1, -1);
  const Eigen::Index eg = find(1, 0, gg, ge, -1);
  const Eigen::Index ee = find(1, 1, gg, ge, eg);

  SystemParams out = coherence;
  out.omega_L = energies(eg) - energies(gg);
  out.omega_H = energies(ge) - energies(gg);
  out.chi_qq = 0.5 * ((energies(ee) - energies(eg)) - (energies(ge) - energies(gg)));
  return out;
}

}  // namespace swipht
