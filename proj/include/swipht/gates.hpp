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

// Ideal gate matrices in the {gg, ge, eg, ee} basis.
//
// Conventions:
//   * Pauli operators are the standard ones with |g> as computational |0>,
//     i.e. Z|g> = +|g>. This is the ordering-and-sign convention in which the
//     generalized-CNOT expansions come out as (1/2)(II + IX - ZI + ZX) etc.
//   * R_a(theta) = exp(-i theta sigma_a / 2).
//   * The Hamiltonian sigma_z (sysmodel) uses the opposite sign: excited = +1.

#pragma once

#include <array>
#include <cmath>
#include <string>

#include "swipht/common.hpp"
#include "swipht/linalg.hpp"

namespace swipht {

enum class Axis { x, y };
enum class Level { g, e };
enum class Pauli1 { I, X, Y, Z };

struct GateMatrix {
  Matrix4cd matrix = Matrix4cd::Identity();
  std::string label = "I(x)I";

  /// Throws ValidationError unless U^dagger U = I to 1e-10.
  void validate() const;
};

template <typename Scalar = double>
Matrix2c<Scalar> pauli1(Pauli1 p) {
  using C = std::complex<Scalar>;
  Matrix2c<Scalar> m;
  switch (p) {
    case Pauli1::I: m << C(1), C(0), C(0), C(1); break;
    case Pauli1::X: m << C(0), C(1), C(1), C(0); break;
    case Pauli1::Y: m << C(0), C(0, -1), C(0, 1), C(0); break;
    case Pauli1::Z: m << C(1), C(0), C(0), C(-1); break;
  }
  return m;
}

/// Two-qubit Pauli basis in the order II, IX, IY, IZ, XI, ..., ZZ
/// (first letter acts on L).
template <typename Scalar = double>
std::array<Matrix4c<Scalar>, 16> pauli_basis() {
  static constexpr std::array<Pauli1, 4> kOrder{Pauli1::I, Pauli1::X, Pauli1::Y, Pauli1::Z};
  std::array<Matrix4c<Scalar>, 16> basis;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      basis[4 * a + b] = kron2<Scalar>(pauli1<Scalar>(kOrder[a]), pauli1<Scalar>(kOrder[b]));
  return basis;
}

inline constexpr std::array<std::string_view, 16> kPauliLabels{
    "II", "IX", "IY", "IZ", "XI", "XX", "XY", "XZ", "YI", "YX", "YY", "YZ", "ZI", "ZX", "ZY", "ZZ"};
inline constexpr std::string_view kPauliOrderString = "II,IX,IY,IZ,XI,XX,XY,XZ,YI,YX,YY,YZ,ZI,ZX,ZY,ZZ";

template <typename Scalar = double>
Matrix2c<Scalar> rotation(Axis axis, Scalar angle) {
  using C = std::complex<Scalar>;
  const Matrix2c<Scalar> sigma = pauli1<Scalar>(axis == Axis::x ? Pauli1::X : Pauli1::Y);
  return C(std::cos(angle / 2)) * Matrix2c<Scalar>::Identity() - C(0, std::sin(angle / 2)) * sigma;
}

/// Embeds a single-qubit operator on `target`, identity on the other qubit.
template <typename Scalar = double>
Matrix4c<Scalar> embed(const Matrix2c<Scalar>& op, Qubit target) {
  const Matrix2c<Scalar> id = Matrix2c<Scalar>::Identity();
  return target == Qubit::L ? kron2<Scalar>(op, id) : kron2<Scalar>(id, op);
}

GateMatrix single_qubit_gate(Axis axis, double angle, Qubit target);

/// Tensor product gate (op_L (x) op_H) with a readable label.
GateMatrix product_gate(const Matrix2c<double>& op_l, const Matrix2c<double>& op_h, std::string label);

/// CNOT that flips `other(control)` when `control` is in `active`.
/// The textbook gate is active = Level::e; active = Level::g is the
/// (1/2)(II + IX - ZI + ZX) form that SWIPHT generalizes.
GateMatrix cnot(Qubit control = Qubit::L, Level active = Level::e);

/// Exchanges the roles of L and H.
Matrix4cd swap_qubits(const Matrix4cd& m);

/// Diagonal control phases of a generalized CNOT.
struct SwiphtPhases {
  double xi = 0.0;
  double zeta = 0.0;
};

/// xi for the canonical SWIPHT pulse, obtained by extract_swipht_phases in
/// the rotating frame documented in dynamics.hpp. Dimensionless, so it holds
/// for every chi_qq.
inline constexpr double kSwiphtXi = 1.1566838648;
/// zeta the same simulation produces. It is not pi - xi.
inline constexpr double kSwiphtZetaSimulated = 1.5717234813;

/// Generalized CNOT with arbitrary control phases:
///   [[0, e^{i phi}, 0, 0], [e^{-i phi}, 0, 0, 0], [0, 0, e^{i xi}, 0], [0, 0, 0, e^{i zeta}]]
/// for control L; the control-H gate is the same matrix with L and H exchanged.
GateMatrix swipht_unitary(double phi_d, Qubit control, SwiphtPhases phases);

/// The generalized CNOT with xi = kSwiphtXi and zeta := pi - xi.
GateMatrix ideal_swipht_unitary(double phi_d, Qubit control = Qubit::L);

/// Generalized CNOT with the phases the decoherence-free simulation yields.
GateMatrix simulated_swipht_unitary(double phi_d, Qubit control = Qubit::L);

/// The 17 pre-measurement rotations G_1..G_17 used for state tomography.
const std::array<GateMatrix, 17>& qst_gates();

}  // namespace swipht
