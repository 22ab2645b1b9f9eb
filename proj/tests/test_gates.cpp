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

#include <random>

#include "doctest.h"

#include "swipht/dynamics.hpp"
#include "swipht/gates.hpp"
#include "swipht/linalg.hpp"

using namespace swipht;

namespace {

Vector4cd random_state(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Vector4cd v;
  for (int i = 0; i < 4; ++i) v(i) = cd(n(rng), n(rng));
  return v.normalized();
}

}  // namespace

TEST_CASE("rotations") {
  const GateMatrix x = single_qubit_gate(Axis::x, kPi, Qubit::H);
  CHECK(x.label == "I(x)Rx(pi)");
  CHECK(std::abs(x.matrix(kGE, kGG) - cd(0, -1)) < 1e-15);
  CHECK(std::abs(x.matrix(kGG, kGG)) < 1e-15);

  const Matrix2c<double> y2 = rotation<double>(Axis::y, kPi / 2);
  CHECK((y2 * y2 - rotation<double>(Axis::y, kPi)).norm() < 1e-15);
  CHECK(unitarity_error(rotation<double>(Axis::x, 0.37)) < 1e-15);
  CHECK(single_qubit_gate(Axis::y, -kPi / 2, Qubit::L).label == "Ry(-pi/2)(x)I");
}

TEST_CASE("tomography gate table") {
  const auto& g = qst_gates();
  CHECK(g[0].matrix.isApprox(Matrix4cd::Identity()));
  const Matrix2c<double> xp = rotation<double>(Axis::x, kPi / 2);
  const Matrix2c<double> yp = rotation<double>(Axis::y, kPi / 2);
  const Matrix2c<double> xm = rotation<double>(Axis::x, -kPi / 2);
  const Matrix2c<double> ym = rotation<double>(Axis::y, -kPi / 2);
  const Matrix2c<double> id = Matrix2c<double>::Identity();
  const std::array<std::pair<Matrix2c<double>, Matrix2c<double>>, 17> expected{{
      {id, id}, {id, xp}, {id, yp}, {xp, id}, {yp, id}, {xp, xp}, {xp, yp}, {yp, xp}, {yp, yp},
      {id, xm}, {id, ym}, {xm, id}, {ym, id}, {xm, xm}, {xm, ym}, {ym, xm}, {ym, ym}}};
  for (std::size_t k = 0; k < 17; ++k) {
    CAPTURE(k);
    CHECK((g[k].matrix - kron2<double>(expected[k].first, expected[k].second)).norm() < 1e-15);
    CHECK(g[k].label.rfind("G" + std::to_string(k + 1) + " ", 0) == 0);
  }
  CHECK(g[5].label == "G6 Rx(pi/2)(x)Rx(pi/2)");
}

TEST_CASE("cnot truth tables") {
  const Matrix4cd c = cnot().matrix;
  CHECK(c(kEE, kEG) == cd(1.0));
  CHECK(c(kEG, kEE) == cd(1.0));
  CHECK(c(kGG, kGG) == cd(1.0));
  const Matrix4cd cg = cnot(Qubit::L, Level::g).matrix;
  CHECK(cg(kGE, kGG) == cd(1.0));
  CHECK(cg(kEG, kEG) == cd(1.0));
  const Matrix4cd ch = cnot(Qubit::H).matrix;
  CHECK(ch(kEE, kGE) == cd(1.0));
  CHECK(swap_qubits(c).isApprox(ch));
}

TEST_CASE("generalized cnot layout") {
  const SwiphtPhases ph{0.3, 1.1};
  const Matrix4cd u = swipht_unitary(0.0, Qubit::L, ph).matrix;
  CHECK(std::abs(u(kGG, kGE) - 1.0) < 1e-15);
  CHECK(std::abs(u(kGE, kGG) - 1.0) < 1e-15);
  CHECK(std::abs(u(kEG, kEG) - std::polar(1.0, 0.3)) < 1e-15);
  CHECK(std::abs(u(kEE, kEE) - std::polar(1.0, 1.1)) < 1e-15);
  CHECK(unitarity_error(swipht_unitary(0.7, Qubit::H, ph).matrix) < 1e-14);
  const Matrix4cd ideal = ideal_swipht_unitary(0.0).matrix;
  CHECK(std::arg(ideal(kEG, kEG)) + std::arg(ideal(kEE, kEE)) == doctest::Approx(kPi));
  CHECK(std::arg(ideal(kEG, kEG)) == doctest::Approx(1.16).epsilon(0.01 / 1.16));
}

TEST_CASE("gate application") {
  std::mt19937_64 rng(3);
  const DensityMatrix rho = DensityMatrix::pure(random_state(rng));
  CHECK(apply_gate(rho, qst_gates()[0]).matrix().isApprox(rho.matrix(), 1e-15));
  for (const auto& g : qst_gates()) CHECK(apply_gate(rho, g).purity() == doctest::Approx(1.0).epsilon(1e-12));

  const DensityMatrix bell = apply_gate(apply_gate(DensityMatrix{}, single_qubit_gate(Axis::x, kPi / 2, Qubit::L)),
                                        cnot(Qubit::L, Level::g));
  CHECK(std::abs(bell.element(kGE, kEG).imag()) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(bell.population(kGE) == doctest::Approx(0.5));
  CHECK(bell.population(kEG) == doctest::Approx(0.5));
}

TEST_CASE("gate matrix validation") {
  GateMatrix bad;
  bad.matrix(0, 0) = 2.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  CHECK_NOTHROW(cnot().validate());
}
