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

// Device parameters and Hamiltonians.
//
// All Hamiltonians are returned with hbar divided out, i.e. in rad/s.
// sigma_z convention: sigma_z|e> = +|e>, sigma_z|g> = -|g>.

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "swipht/common.hpp"

namespace swipht {

/// Dressed two-qubit-subspace parameters. Angular frequencies in rad/s,
/// times in s.
struct SystemParams {
  double omega_L = angular(6.07135e9);
  double omega_H = angular(6.75427e9);
  double chi_qq = angular(-0.5147e6);
  double T1_L = 9.0e-6;
  double T1_H = 3.5e-6;
  double T2_L = 14.6e-6;
  double T2_H = 6.2e-6;
  double kappa_inv = 50e-9;

  void validate() const;

  double omega(Qubit q) const { return q == Qubit::L ? omega_L : omega_H; }
  double T1(Qubit q) const { return q == Qubit::L ? T1_L : T1_H; }
  double T2(Qubit q) const { return q == Qubit::L ? T2_L : T2_H; }

  /// The measured device (dressed frequencies and coherence times).
  static SystemParams device() { return {}; }
};

/// Bare parameters of the cavity + two transmon model.
struct FullModelParams {
  double omega_L_bare = angular(6.10322e9);
  double omega_H_bare = angular(6.79943e9);
  double omega_R_bare = angular(7.66927e9);
  /// Charging energies E_C/hbar (rad/s), positive; enter as -E_C/2 n(n-1).
  double E_C_L = angular(206.5e6);
  double E_C_H = angular(192.6e6);
  double g_L = angular(224.6e6);
  double g_H = angular(207.5e6);
  double J = angular(14.3e6);
  int n_transmon_levels = 5;
  int n_cavity_levels = 5;

  void validate() const;

  static FullModelParams device() { return {}; }
};

struct Hamiltonian {
  Eigen::MatrixXcd matrix;
  std::vector<std::string> basis_labels;
  std::string convention;

  Eigen::Index dimension() const { return matrix.rows(); }
  bool is_hermitian(double rel_tol = 1e-12) const;
};

inline constexpr Eigen::Index kMaxFullDimension = 10000;

Hamiltonian build_h0(const SystemParams& params);

/// Lab-frame drive (Omega/2)(sigma^- e^{i(w t + phi)} + sigma^+ e^{-i(w t + phi)})
/// acting on `target` (H for the L-controlled gate).
Hamiltonian build_drive(double omega_amp, double omega_d, double phi_d, double t, Qubit target = Qubit::H);

/// Cavity (x) transmon L (x) transmon H with Duffing transmons, cavity
/// exchange couplings g_L, g_H and direct exchange J. Basis index is
/// (n_cavity * levels + n_L) * levels + n_H.
Hamiltonian build_full_hamiltonian(const FullModelParams& params);

/// Dressed omega_L, omega_H and chi_qq = ((E_ee - E_eg) - (E_ge - E_gg)) / 2
/// from a dense eigensolve of build_full_hamiltonian. T1/T2/kappa fields are
/// copied from `coherence`.
SystemParams extract_dressed_params(const FullModelParams& params,
                                    const SystemParams& coherence = SystemParams::device());

}  // namespace swipht
