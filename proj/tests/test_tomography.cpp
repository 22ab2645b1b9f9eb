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

#include "swipht/linalg.hpp"
#include "swipht/rng.hpp"
#include "swipht/tomography.hpp"

using namespace swipht;

namespace {

enum : int { II = 0, IX = 1, IZ = 3, XI = 4, ZI = 12, ZX = 13, ZZ = 15 };

Matrix4cd random_unitary(std::mt19937_64& rng) {
  Matrix4cd a;
  for (int i = 0; i < 16; ++i) a(i) = cd(standard_normal(rng), standard_normal(rng));
  return Eigen::HouseholderQR<Matrix4cd>(a).householderQ();
}

Vector4cd random_state(std::mt19937_64& rng) {
  Vector4cd v;
  for (int i = 0; i < 4; ++i) v(i) = cd(standard_normal(rng), standard_normal(rng));
  return v.normalized();
}

ChiMatrix depolarizing() {
  ChiMatrix c;
  c.matrix = Matrix16cd::Identity() / 16.0;
  return c;
}

ChiMatrix mix(const ChiMatrix& a, const ChiMatrix& b, double w) {
  ChiMatrix c;
  c.matrix = (1 - w) * a.matrix + w * b.matrix;
  return c;
}

double state_fidelity(const DensityMatrix& a, const Vector4cd& psi) {
  return (psi.adjoint() * a.matrix() * psi)(0, 0).real();
}

TomographyOptions analytic_options() {
  TomographyOptions o;
  o.weighting = Weighting::uniform;
  return o;
}

const ReadoutCalibration& cal() { return ReadoutCalibration::device(); }

}  // namespace

TEST_CASE("pauli decomposition") {
  const auto id = pauli_decompose(Matrix4cd::Identity());
  CHECK(id[II] == cd(1.0));
  for (int m = 1; m < 16; ++m) CHECK(std::abs(id[m]) == 0.0);

  // Textbook CNOT with the control flip on |g>, the form written in the
  // literature: (II + IX - ZI + ZX) / 2.
  const auto c = pauli_decompose(cnot(Qubit::L, Level::g).matrix);
  CHECK(std::abs(c[II] - 0.5) < 1e-12);
  CHECK(std::abs(c[IX] - 0.5) < 1e-12);
  CHECK(std::abs(c[ZI] + 0.5) < 1e-12);
  CHECK(std::abs(c[ZX] - 0.5) < 1e-12);

  const auto s = pauli_decompose(ideal_swipht_unitary(0.0).matrix);
  CHECK(std::abs(s[II] - cd(0, 0.4577)) < 5e-4);
  CHECK(std::abs(s[ZI] - cd(0, -0.4577)) < 5e-4);
  CHECK(std::abs(s[IX] - 0.5) < 1e-6);
  CHECK(std::abs(s[ZX] - 0.5) < 1e-6);
  CHECK(std::abs(s[IZ] - 0.2012) < 5e-4);
  CHECK(std::abs(s[ZZ] + 0.2012) < 5e-4);
  double rest = 0.0;
  for (int m : {2, 4, 5, 6, 7, 8, 9, 10, 11, 14}) rest += std::norm(s[m]);
  CHECK(rest < 1e-20);

  std::mt19937_64 rng(7);
  for (int k = 0; k < 10; ++k) {
    const auto a = pauli_decompose(random_unitary(rng));
    double sum = 0.0;
    for (const cd& x : a) sum += std::norm(x);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("chi of the SWIPHT unitary") {
  const ChiMatrix chi = chi_of_unitary(ideal_swipht_unitary(0.0).matrix);
  int nonzero = 0, real_dominant = 0, imag_dominant = 0;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      const cd x = chi.matrix(i, j);
      if (std::abs(x) <= 1e-4) continue;
      ++nonzero;
      (std::abs(x.real()) >= std::abs(x.imag()) ? real_dominant : imag_dominant)++;
    }
  CHECK(nonzero == 36);
  CHECK(real_dominant == 20);
  CHECK(imag_dominant == 16);
  CHECK_NOTHROW(chi.validate());
  CHECK(chi.trace() == doctest::Approx(1.0));
}

TEST_CASE("chi and superoperator agree") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 5; ++k) {
    const Matrix4cd u = random_unitary(rng);
    const ChiMatrix chi = chi_of_unitary(u);
    CHECK((superoperator_of_chi(chi) - unitary_superoperator(u)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((chi_of_superoperator(unitary_superoperator(u)).matrix - chi.matrix).cwiseAbs().maxCoeff() < 1e-12);
    const DensityMatrix rho = DensityMatrix::pure(random_state(rng));
    CHECK((process_apply(chi, rho).matrix() - u * rho.matrix() * u.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("process application") {
  ChiMatrix id;
  id.matrix(0, 0) = 1.0;
  std::mt19937_64 rng(3);
  const DensityMatrix rho = DensityMatrix::pure(random_state(rng));
  CHECK((process_apply(id, rho).matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-14);

  const DensityMatrix out = process_apply(chi_of_unitary(cnot().matrix), DensityMatrix::basis_state(kEG));
  CHECK(out.population(kEE) == doctest::Approx(1.0));

  // Any convex mix of unitary channels is trace preserving.
  for (int k = 0; k < 10; ++k) {
    const ChiMatrix c = mix(chi_of_unitary(random_unitary(rng)), chi_of_unitary(random_unitary(rng)), 0.3);
    CHECK(completeness_residual(c) < 1e-12);
    const DensityMatrix r = DensityMatrix::pure(random_state(rng));
    CHECK(process_apply(c, r.matrix()).trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("completeness residual") {
  std::mt19937_64 rng(5);
  const ChiMatrix u = chi_of_unitary(random_unitary(rng));
  CHECK(completeness_residual(u) < 1e-12);
  CHECK(completeness_residual(chi_of_unitary(ideal_swipht_unitary(0.0).matrix)) < 1e-12);

  ChiMatrix scaled = u;
  scaled.matrix *= 0.9;
  CHECK(completeness_residual(scaled) == doctest::Approx(0.04).epsilon(1e-10));
  CHECK((completeness_operator(scaled) - 0.9 * Matrix4cd::Identity()).cwiseAbs().maxCoeff() < 1e-12);

  // Quadratic: equal second differences along a direction from any base point.
  ChiMatrix a = u, b = chi_of_unitary(random_unitary(rng)), d;
  d.matrix = Matrix16cd::Random() * 0.1;
  auto second = [&](const ChiMatrix& base) {
    ChiMatrix p1 = base, p2 = base;
    p1.matrix += d.matrix;
    p2.matrix += 2.0 * d.matrix;
    return completeness_residual(p2) - 2 * completeness_residual(p1) + completeness_residual(base);
  };
  CHECK(second(a) >= 0.0);
  CHECK(second(a) == doctest::Approx(second(b)).epsilon(1e-9));
}

TEST_CASE("gate metrics") {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 10; ++k) {
    const ChiMatrix c = chi_of_unitary(random_unitary(rng));
    const GateMetrics m = metrics(c, c);
    CHECK(m.F_p == doctest::Approx(1.0));
    CHECK(m.F_g == doctest::Approx(1.0));
    CHECK(m.purity == doctest::Approx(1.0));
  }
  CHECK(metrics(depolarizing(), depolarizing()).purity == doctest::Approx(0.25));

  const ChiMatrix ideal = chi_of_unitary(ideal_swipht_unitary(0.0).matrix);
  const double w = (1.0 - 0.79) / (1.0 - 1.0 / 16.0);
  const GateMetrics m = metrics(mix(ideal, depolarizing(), w), ideal);
  CHECK(m.F_p == doctest::Approx(0.79));
  CHECK(m.F_g == doctest::Approx(0.832));
  CHECK(m.F_g == doctest::Approx((4 * m.F_p + 1) / 5));

  double prev_fp = 2.0, prev_purity = 2.0;
  for (double x : {0.0, 0.1, 0.4, 0.7, 1.0}) {
    const GateMetrics g = metrics(mix(ideal, depolarizing(), x), ideal);
    CHECK(g.F_p < prev_fp);
    CHECK(g.purity < prev_purity);
    prev_fp = g.F_p;
    prev_purity = g.purity;
  }
}

TEST_CASE("chi validation") {
  ChiMatrix c = depolarizing();
  CHECK_NOTHROW(c.validate());
  c.matrix(0, 1) = 0.1;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = depolarizing();
  c.matrix(3, 3) = -0.01;
  CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("input states") {
  const auto& states = qpt_input_states();
  CHECK(states[0].population(kGG) == doctest::Approx(1.0));
  // Informationally complete: the 36 states span all 16 operator directions.
  Eigen::Matrix<cd, 16, kNumQptStates> cols;
  for (int s = 0; s < kNumQptStates; ++s) cols.col(s) = states[s].matrix().reshaped();
  CHECK(Eigen::FullPivLU<Eigen::MatrixXcd>(cols).rank() == 16);
}

TEST_CASE("response map of the analysis gates has rank 16") {
  const auto basis = pauli_basis<double>();
  Eigen::Matrix<double, kNumQstGates * kNumMappings, 16> a;
  for (int k = 0; k < 16; ++k)
    for (int t = 0; t < kNumQstGates; ++t) {
      const Matrix4cd& g = qst_gates()[t].matrix;
      const Eigen::Vector4d p = (g * basis[k] * g.adjoint()).diagonal().real();
      for (int b = 1; b <= kNumMappings; ++b) a(t * kNumMappings + b - 1, k) = expected_mean(p, b, cal());
    }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  CHECK(svd.singularValues()(15) / svd.singularValues()(0) > 1e-4);
}

TEST_CASE("tomography dataset checks") {
  TomographyDataset d = synthesize_qst_data(DensityMatrix{}, cal(), 0, 0);
  CHECK(d.entries.size() == std::size_t(kNumQstGates * kNumMappings));
  CHECK_NOTHROW(d.validate());
  d.entries.pop_back();
  CHECK_THROWS_AS(d.validate(), ValidationError);
  d = synthesize_qst_data(DensityMatrix{}, cal(), 0, 0);
  d.entries.back().beta = 8;
  CHECK_THROWS_AS(d.validate(), ValidationError);
}

TEST_CASE("state tomography on exact data") {
  const QstResult gg = qst_fit(synthesize_qst_data(DensityMatrix{}, cal(), 0, 0), cal(), analytic_options());
  CHECK(gg.rho.population(kGG) > 0.9999);

  Vector4cd bell = Vector4cd::Zero();
  bell(kGE) = 1.0 / std::sqrt(2.0);
  bell(kEG) = cd(0, 1.0 / std::sqrt(2.0));
  const QstResult b = qst_fit(synthesize_qst_data(DensityMatrix::pure(bell), cal(), 0, 0), cal(), analytic_options());
  CHECK(std::abs(std::abs(b.rho.element(kGE, kEG).imag()) - 0.5) < 1e-4);

  std::mt19937_64 rng(21);
  for (int k = 0; k < 5; ++k) {
    const Vector4cd psi = random_state(rng);
    const QstResult r = qst_fit(synthesize_qst_data(DensityMatrix::pure(psi), cal(), 0, 0), cal(), analytic_options());
    CHECK(state_fidelity(r.rho, psi) > 0.9999);
  }
}

TEST_CASE("state tomography on sampled shots") {
  std::mt19937_64 rng(33);
  double total = 0.0;
  const int trials = 20;
  for (int k = 0; k < trials; ++k) {
    const Vector4cd psi = random_state(rng);
    TomographyOptions o;
    o.seed = k;
    const QstResult r = qst_fit(synthesize_qst_data(DensityMatrix::pure(psi), cal(), 1000, 100 + k), cal(), o);
    total += state_fidelity(r.rho, psi);
  }
  CHECK(total / trials > 0.98);
}

TEST_CASE("state tomography is deterministic and physical") {
  TomographyDataset d = synthesize_qst_data(DensityMatrix::basis_state(kEE), cal(), 1000, 4);
  TomographyOptions o;
  o.seed = 12;
  const QstResult a = qst_fit(d, cal(), o), b = qst_fit(d, cal(), o);
  CHECK(a.rho.matrix() == b.rho.matrix());
  CHECK(a.best_start == b.best_start);

  // Means nothing could produce still give a valid density matrix.
  std::mt19937_64 rng(1);
  for (auto& e : d.entries) e.mean = uniform01(rng);
  const QstResult junk = qst_fit(d, cal(), o);
  CHECK(min_hermitian_eigenvalue(junk.rho.matrix()) > -1e-9);
  CHECK(junk.rho.matrix().trace().real() == doctest::Approx(1.0));
}

TEST_CASE("physical parameterization") {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 20; ++k) {
    Eigen::Matrix<double, 16, 1> t;
    for (int i = 0; i < 16; ++i) t(i) = 3.0 * standard_normal(rng);
    CHECK_NOTHROW(state_from_parameters(t));
  }
}

TEST_CASE("chi json round trip") {
  const ChiMatrix c = chi_of_unitary(ideal_swipht_unitary(0.0).matrix);
  CHECK(chi_from_json(chi_to_json(c, GateMetrics{1, 1, 1})).matrix == c.matrix);
}

TEST_CASE("process tomography of the identity from sampled shots") {
  // Zero-length gate, N = 1000 shots per mean.
  const TomographyDataset d = synthesize_qpt_data(Matrix16cd::Identity(), cal(), 1000, 77);
  TomographyOptions o;
  o.seed = 1;
  const QptResult r = qpt_fit(d, cal(), o);
  CHECK(r.completeness < 1e-6);
  CHECK_NOTHROW(r.chi.validate());
  CHECK(metrics(r.chi, chi_of_unitary(Matrix4cd::Identity())).F_g >= 0.97);
}
