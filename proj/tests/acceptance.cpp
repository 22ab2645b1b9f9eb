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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "swipht/dynamics.hpp"
#include "swipht/harness/experiments.hpp"
#include "swipht/linalg.hpp"
#include "swipht/pulse.hpp"
#include "swipht/readout.hpp"
#include "swipht/rng.hpp"
#include "swipht/tomography.hpp"

using namespace swipht;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("swipht_acceptance_" + name);
  fs::remove_all(p);
  return p;
}

harness::ExperimentConfig config(harness::Experiment e, const std::string& dir) {
  harness::ExperimentConfig c;
  c.experiment = e;
  c.output_dir = scratch(dir);
  return c;
}

void criterion1(Outcome& o) {
  for (double chi_hz : {0.1e6, 0.5147e6, 2.0e6}) {
    SystemParams p;
    p.chi_qq = angular(-chi_hz);
    const PulseWaveform wf = synthesize(PulseSpec::canonical(p));
    const double ratio = analytic_peak(p.chi_qq, wf.tau_g) / (2 * std::abs(p.chi_qq));
    const double edge = std::max(std::abs(omega_at(0.0, p.chi_qq, wf.tau_g)),
                                 std::abs(omega_at(wf.tau_g, p.chi_qq, wf.tau_g)));
    o.detail << "chi/2pi=" << chi_hz * 1e-6 << "MHz tau_g=" << wf.tau_g * 1e9 << "ns peak/2chi=" << ratio << "; ";
    o.require(std::abs(ratio - 0.887) <= 0.005, "peak ratio");
    o.require(edge <= 1e-6 * wf.peak, "envelope edges");
    o.require(std::max(std::abs(wf.omega.front()), std::abs(wf.omega.back())) <= 1e-6 * wf.peak, "sampled edges");
  }
}

void criterion2(Outcome& o) {
  const SystemParams p = SystemParams::device();
  const PulseWaveform wf = synthesize(PulseSpec::canonical(p));
  const int target[4] = {kGE, kGG, kEG, kEE};
  for (int k = 0; k < 4; ++k) {
    const double pop = evolve(DensityMatrix::basis_state(k), wf, p).final_state.population(target[k]);
    o.detail << kBasisLabels[k] << "->" << kBasisLabels[target[k]] << "=" << pop << "; ";
    o.require(pop >= 0.999, "population");
  }
  const PhaseExtraction ph = extract_swipht_phases(p);
  o.detail << "xi=" << ph.phases.xi << " zeta=" << ph.phases.zeta << " xi+zeta=" << ph.phases.xi + ph.phases.zeta
           << "; ";
  o.require(std::abs(ph.phases.xi - 1.16) <= 0.01, "xi");
  o.require(std::abs(ph.phases.xi + ph.phases.zeta - kPi) <= 1e-3, "xi + zeta = pi");
}

void criterion3(Outcome& o) {
  enum { II = 0, IX = 1, IZ = 3, ZI = 12, ZX = 13, ZZ = 15 };
  const Matrix4cd u = ideal_swipht_unitary(0.0).matrix;
  const auto a = pauli_decompose(u);
  o.detail << "II=" << a[II] << " ZI=" << a[ZI] << " IZ=" << a[IZ] << " ZZ=" << a[ZZ] << "; ";
  o.require(std::abs(std::abs(a[II]) - 0.4577) <= 0.005 && std::abs(a[II].real()) < 1e-12, "II");
  o.require(std::abs(std::abs(a[ZI]) - 0.4577) <= 0.005 && std::abs(a[ZI].real()) < 1e-12, "ZI");
  o.require(std::abs(std::abs(a[IZ]) - 0.2012) <= 0.005, "IZ");
  o.require(std::abs(std::abs(a[ZZ]) - 0.2012) <= 0.005, "ZZ");
  o.require(std::abs(std::abs(a[IX]) - 0.5) <= 0.005 && std::abs(std::abs(a[ZX]) - 0.5) <= 0.005, "IX, ZX");

  const ChiMatrix chi = chi_of_unitary(u);
  int n = 0, re = 0, im = 0;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      const cd x = chi.matrix(i, j);
      if (std::abs(x) <= 1e-4) continue;
      ++n;
      (std::abs(x.real()) >= std::abs(x.imag()) ? re : im)++;
    }
  o.detail << "nonzero=" << n << " real=" << re << " imag=" << im << "; ";
  o.require(n == 36 && re == 20 && im == 16, "element census");
}

void criterion4(Outcome& o) {
  auto c = config(harness::Experiment::qpt_battery, "c4");
  c.qpt_battery.gates = {"SWIPHT_L^0"};
  c.qpt_battery.decoherence_free_rows = false;
  const auto r = harness::run_qpt_battery(c);
  bool device = false, long_t1 = false;
  for (const auto& row : r.rows) {
    if (!row.fitted) {
      o.require(false, row.scenario + " fit: " + row.error);
      continue;
    }
    const GateMetrics& m = *row.fitted;
    o.detail << row.scenario << " F_p=" << m.F_p << " F_g=" << m.F_g << " purity=" << m.purity
             << " Xi=" << row.completeness << "; ";
    if (row.scenario == "device") {
      device = true;
      o.require(std::abs(m.F_p - 0.84) <= 0.02, "F_p");
      o.require(std::abs(m.F_g - 0.87) <= 0.02, "F_g");
      o.require(std::abs(m.purity - 0.77) <= 0.02, "purity");
    } else if (row.scenario == "long-T1") {
      long_t1 = true;
      o.require(std::abs(m.F_g - 0.98) <= 0.01, "long-T1 F_g");
    }
  }
  o.require(device && long_t1, "rows present");
}

void criterion5(Outcome& o) {
  const auto r = harness::run_evolve_trace(config(harness::Experiment::evolve_trace, "c5"));
  for (const auto& t : r.traces) {
    if (!t.noisy) continue;
    const Matrix4cd& last = t.points.back().rho;
    if (t.start == "gg") {
      const double p = last(kGE, kGE).real();
      o.detail << "gg start final P_ge=" << p << "; ";
      o.require(std::abs(p - 0.90) <= 0.03, "final P_ge");
    } else {
      double peak = 0.0;
      for (const auto& pt : t.points) peak = std::max(peak, pt.rho(kEE, kEE).real());
      const double end = last(kEE, kEE).real();
      o.detail << "eg start max P_ee=" << peak << " final P_ee=" << end << "; ";
      o.require(peak > 0.1, "transient P_ee");
      o.require(end < 0.05, "final P_ee");
    }
  }
}

void criterion6(Outcome& o) {
  for (bool noisy : {true, false}) {
    auto c = config(harness::Experiment::phase_sweep, noisy ? "c6n" : "c6i");
    c.noise.enabled = noisy;
    const auto r = harness::run_phase_sweep(c);
    double worst_period = 0.0;
    for (const auto& curve : r.curves)
      worst_period = std::max(worst_period, std::abs(curve.fit.period - kTwoPi) / kTwoPi);
    o.detail << (noisy ? "noisy" : "noise-free") << " amplitude=" << r.mean_amplitude
             << " worst period error=" << worst_period * 100 << "%; ";
    o.require(worst_period <= 0.02, "period");
    o.require(std::abs(r.mean_amplitude - (noisy ? 0.41 : 0.50)) <= (noisy ? 0.03 : 0.01), "amplitude");
  }
}

void criterion7(Outcome& o) {
  const auto& cal = ReadoutCalibration::device();
  double exact = 0.0;
  for (int nu = 0; nu < 4; ++nu) {
    Eigen::Matrix<double, kNumMappings, 1> m;
    for (int b = 1; b <= kNumMappings; ++b) m(b - 1) = expected_mean(Eigen::Vector4d::Unit(nu), b, cal);
    exact = std::max(exact, (invert_populations(m, 1000, cal).p - Eigen::Vector4d::Unit(nu)).cwiseAbs().maxCoeff());
  }
  o.detail << "exact inversion error=" << exact << "; ";
  o.require(exact <= 1e-6, "exact inversion");

  auto c = config(harness::Experiment::readout_roundtrip, "c7a");
  c.shots = 1000;
  c.seed = 2026;
  const auto small = harness::run_readout_roundtrip(c);
  double err = 0.0, three_sigma = 0.0;
  for (int nu = 0; nu < 4; ++nu) {
    err = std::max(err, small.max_error[nu]);
    three_sigma = std::max(three_sigma, 3 * small.sigma[nu].maxCoeff());
  }
  o.detail << "N=1000 max error=" << err << " max 3sigma=" << three_sigma << "; ";
  o.require(err < 0.05 && three_sigma < 0.05, "sampled recovery");

  c = config(harness::Experiment::readout_roundtrip, "c7b");
  c.shots = 50000;
  c.seed = 2026;
  const auto big = harness::run_readout_roundtrip(c);
  o.detail << "N=50000 max K error=" << big.max_K_error << "; ";
  o.require(big.max_K_error <= 0.01, "K recovery");
  o.require(big.artifacts.failures.empty(), "all K cells fitted");
}

void criterion8(Outcome& o) {
  const auto& cal = ReadoutCalibration::device();
  TomographyOptions analytic;
  analytic.weighting = Weighting::uniform;
  std::mt19937_64 rng(8);
  double worst = 1.0;
  for (int k = 0; k < 10; ++k) {
    Vector4cd psi;
    for (int i = 0; i < 4; ++i) psi(i) = cd(standard_normal(rng), standard_normal(rng));
    psi.normalize();
    const QstResult r = qst_fit(synthesize_qst_data(DensityMatrix::pure(psi), cal, 0, 0), cal, analytic);
    worst = std::min(worst, (psi.adjoint() * r.rho.matrix() * psi)(0, 0).real());
    o.require(min_hermitian_eigenvalue(r.rho.matrix()) >= -1e-9, "QST physical");
  }
  o.detail << "QST worst fidelity=" << worst << "; ";
  o.require(worst > 0.9999, "QST fidelity");

  const Matrix4cd u = cnot().matrix;
  const QptResult q = qpt_fit(synthesize_qpt_data(unitary_superoperator(u), cal, 0, 0), cal, analytic);
  const GateMetrics m = metrics(q.chi, chi_of_unitary(u));
  o.detail << "CNOT F_p=" << m.F_p << " Xi=" << q.completeness << "; ";
  o.require(m.F_p > 0.999, "QPT fidelity");
  o.require(q.completeness < 1e-6, "QPT completeness");
  bool physical = true;
  try {
    q.chi.validate();
  } catch (const ValidationError&) {
    physical = false;
  }
  o.require(physical, "QPT physical");
}

void criterion9(Outcome& o) {
  const SystemParams p = SystemParams::device();
  const PulseWaveform wf = synthesize(PulseSpec::canonical(p));
  double halving = 0.0, drift = 0.0;
  for (int k = 0; k < 4; ++k)
    for (bool noisy : {false, true}) {
      EvolveOptions one;
      if (noisy) one.noise = NoiseModel::from(p);
      one.record_every = 5e-9;
      EvolveOptions two = one;
      two.substeps = 2;
      const EvolveResult a = evolve(DensityMatrix::basis_state(k), wf, p, one);
      const EvolveResult b = evolve(DensityMatrix::basis_state(k), wf, p, two);
      halving = std::max(halving, (a.final_state.matrix().diagonal() - b.final_state.matrix().diagonal())
                                      .cwiseAbs()
                                      .maxCoeff());
      for (const auto* r : {&a, &b})
        for (const auto& pt : r->trajectory) drift = std::max(drift, std::abs(pt.rho.trace() - 1.0));
    }
  double fd = 0.0;
  const double tau = wf.tau_g;
  for (int i = 1; i < 100; ++i) {
    const double t = tau * i / 100.0, h = tau * 1e-5;
    const double exact = gamma_and_derivatives(t, tau).gamma_dot;
    const double num = (gamma_and_derivatives(t + h, tau).gamma - gamma_and_derivatives(t - h, tau).gamma) / (2 * h);
    if (std::abs(exact) > 1e-3 / tau) fd = std::max(fd, std::abs(num - exact) / std::abs(exact));
  }
  o.detail << "step halving=" << halving << " trace drift=" << drift << " gamma_dot rel error=" << fd << "; ";
  o.require(halving < 1e-8, "step halving");
  o.require(drift < 1e-8, "trace drift");
  o.require(fd < 1e-6, "gamma_dot");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    double budget_s;  // 0 = no runtime limit
    std::function<void(Outcome&)> run;
  };
  const Criterion criteria[] = {{1, 1.0, criterion1},  {2, 5.0, criterion2},   {3, 0.0, criterion3},
                                {4, 600.0, criterion4}, {5, 0.0, criterion5},  {6, 120.0, criterion6},
                                {7, 0.0, criterion7},  {8, 300.0, criterion8}, {9, 0.0, criterion9}};
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0) o.require(dt < c.budget_s, "runtime");
    o.detail << "(" << dt << " s)";
    std::printf("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", c.id, o.detail.str().c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of 9 criteria passed\n", 9 - failed);
  return failed == 0 ? 0 : 1;
}
