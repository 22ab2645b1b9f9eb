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

#include "swipht/gates.hpp"

#include <sstream>

namespace swipht {

namespace {

std::string angle_label(double angle) {
  const double ratio = angle / kPi;
  if (std::abs(ratio - 1.0) < 1e-12) return "pi";
  if (std::abs(ratio + 1.0) < 1e-12) return "-pi";
  if (std::abs(ratio - 0.5) < 1e-12) return "pi/2";
  if (std::abs(ratio + 0.5) < 1e-12) return "-pi/2";
  std::ostringstream os;
  os << angle;
  return os.str();
}

}  // namespace

void GateMatrix::validate() const {
  if (unitarity_error(matrix) > 1e-10) throw ValidationError("GateMatrix '" + label + "' is not unitary");
}

GateMatrix single_qubit_gate(Axis axis, double angle, Qubit target) {
  const std::string rot = std::string("R") + (axis == Axis::x ? "x" : "y") + "(" + angle_label(angle) + ")";
  const std::string label = target == Qubit::L ? rot + "(x)I" : "I(x)" + rot;
  return {embed<double>(rotation<double>(axis, angle), target), label};
}

GateMatrix product_gate(const Matrix2c<double>& op_l, const Matrix2c<double>& op_h, std::string label) {
  return {kron2<double>(op_l, op_h), std::move(label)};
}

GateMatrix cnot(Qubit control, Level active) {
  Matrix2c<double> proj_active = Matrix2c<double>::Zero();
  const int k = active == Level::g ? 0 : 1;
  proj_active(k, k) = 1.0;
  const Matrix2c<double> proj_idle = Matrix2c<double>::Identity() - proj_active;
  const Matrix2c<double> x = pauli1<double>(Pauli1::X);
  const Matrix2c<double> id = Matrix2c<double>::Identity();
  Matrix4cd m = control == Qubit::L ? Matrix4cd(kron2<double>(proj_active, x) + kron2<double>(proj_idle, id))
                                    : Matrix4cd(kron2<double>(x, proj_active) + kron2<double>(id, proj_idle));
  std::string label = std::string("CNOT_") + std::string(to_string(control)) + (active == Level::g ? "[g]" : "[e]");
  return {m, std::move(label)};
}

Matrix4cd swap_qubits(const Matrix4cd& m) {
  static const std::array<int, 4> perm{kGG, kEG, kGE, kEE};
  Matrix4cd out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(i, j) = m(perm[i], perm[j]);
  return out;
}

GateMatrix swipht_unitary(double phi_d, Qubit control, SwiphtPhases phases) {
  Matrix4cd m = Matrix4cd::Zero();
  m(kGG, kGE) = std::polar(1.0, phi_d);
  m(kGE, kGG) = std::polar(1.0, -phi_d);
  m(kEG, kEG) = std::polar(1.0, phases.xi);
  m(kEE, kEE) = std::polar(1.0, phases.zeta);
  if (control == Qubit::H) m = swap_qubits(m);
  std::ostringstream label;
  label << "SWIPHT_" << to_string(control) << "^" << phi_d;
  return {m, label.str()};
}

GateMatrix ideal_swipht_unitary(double phi_d, Qubit control) {
  return swipht_unitary(phi_d, control, {kSwiphtXi, kPi - kSwiphtXi});
}

GateMatrix simulated_swipht_unitary(double phi_d, Qubit control) {
  return swipht_unitary(phi_d, control, {kSwiphtXi, kSwiphtZetaSimulated});
}

const std::array<GateMatrix, 17>& qst_gates() {
  static const std::array<GateMatrix, 17> gates = [] {
    const Matrix2c<double> id = Matrix2c<double>::Identity();
    const Matrix2c<double> xp = rotation<double>(Axis::x, kPi / 2), yp = rotation<double>(Axis::y, kPi / 2);
    const Matrix2c<double> xm = rotation<double>(Axis::x, -kPi / 2), ym = rotation<double>(Axis::y, -kPi / 2);
    return std::array<GateMatrix, 17>{
        product_gate(id, id, "G1 I(x)I"),
        product_gate(id, xp, "G2 I(x)Rx(pi/2)"),
        product_gate(id, yp, "G3 I(x)Ry(pi/2)"),
        product_gate(xp, id, "G4 Rx(pi/2)(x)I"),
        product_gate(yp, id, "G5 Ry(pi/2)(x)I"),
        product_gate(xp, xp, "G6 Rx(pi/2)(x)Rx(pi/2)"),
        product_gate(xp, yp, "G7 Rx(pi/2)(x)Ry(pi/2)"),
        product_gate(yp, xp, "G8 Ry(pi/2)(x)Rx(pi/2)"),
        product_gate(yp, yp, "G9 Ry(pi/2)(x)Ry(pi/2)"),
        product_gate(id, xm, "G10 I(x)Rx(-pi/2)"),
        product_gate(id, ym, "G11 I(x)Ry(-pi/2)"),
        product_gate(xm, id, "G12 Rx(-pi/2)(x)I"),
        product_gate(ym, id, "G13 Ry(-pi/2)(x)I"),
        product_gate(xm, xm, "G14 Rx(-pi/2)(x)Rx(-pi/2)"),
        product_gate(xm, ym, "G15 Rx(-pi/2)(x)Ry(-pi/2)"),
        product_gate(ym, xm, "G16 Ry(-pi/2)(x)Rx(-pi/2)"),
        product_gate(ym, ym, "G17 Ry(-pi/2)(x)Ry(-pi/2)"),
    };
  }();
  return gates;
}

}  // namespace swipht
