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

#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"

#include "swipht/pulse.hpp"

using namespace swipht;

TEST_CASE("gate duration") {
  CHECK(gate_duration(angular(-0.52e6)) == doctest::Approx(898.3e-9).epsilon(0.05 / 898.3));
  CHECK(gate_duration(angular(-0.5147e6)) == doctest::Approx(907.5e-9).epsilon(0.05 / 907.5));
  CHECK(gate_duration(angular(1.0e6)) == doctest::Approx(2 * gate_duration(angular(2.0e6))));
  CHECK_THROWS_AS(gate_duration(0.0), DomainError);
}

TEST_CASE("gamma and derivatives") {
  const double tau = 907e-9;
  const auto g0 = gamma_and_derivatives(0.0, tau);
  CHECK(g0.gamma == doctest::Approx(kPi / 4));
  CHECK(g0.gamma_dot == 0.0);
  CHECK(g0.gamma_ddot == 0.0);
  const auto gm = gamma_and_derivatives(tau / 2, tau);
  CHECK(gm.gamma == doctest::Approx(kPi / 4 + 138.9 / 256).epsilon(1e-12));
  CHECK(gm.gamma == doctest::Approx(1.3280).epsilon(1e-4));
  CHECK(std::abs(gm.gamma_dot) < 1e-6);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int k = 0; k < 100; ++k) {
    const double t = u(rng) * tau, h = 1e-5 * tau;
    const auto g = gamma_and_derivatives(t, tau);
    const double fd = (gamma_and_derivatives(t + h, tau).gamma - gamma_and_derivatives(t - h, tau).gamma) / (2 * h);
    const double fdd =
        (gamma_and_derivatives(t + h, tau).gamma_dot - gamma_and_derivatives(t - h, tau).gamma_dot) / (2 * h);
    CHECK(std::abs(fd - g.gamma_dot) <= 1e-6 * std::max(std::abs(g.gamma_dot), 1.0 / tau));
    CHECK(std::abs(fdd - g.gamma_ddot) <= 1e-6 * std::max(std::abs(g.gamma_ddot), 1.0 / (tau * tau)));
  }
  CHECK_THROWS_AS(gamma_and_derivatives(-1e-12, tau), DomainError);
  CHECK_THROWS_AS(gamma_and_derivatives(tau * 1.001, tau), DomainError);
  CHECK_THROWS_AS(gamma_and_derivatives(0.0, 0.0), DomainError);
}

TEST_CASE("long double instantiation agrees") {
  const double tau = 907e-9, chi = angular(-0.5147e6);
  for (double s : {0.1, 0.3, 0.5, 0.77}) {
    const long double w = omega_at<long double>(s * tau, chi, tau);
    CHECK(static_cast<double>(w) == doctest::Approx(omega_at(s * tau, chi, tau)).epsilon(1e-12));
  }
}

TEST_CASE("envelope boundary values and peak") {
  for (double f : {0.1e6, 0.5147e6, 2.0e6}) {
    const double chi = angular(-f), tau = gate_duration(chi);
    const double peak = analytic_peak(chi, tau);
    CHECK(peak / (2 * std::abs(chi)) == doctest::Approx(0.887).epsilon(0.005 / 0.887));
    CHECK(std::abs(omega_at(0.0, chi, tau)) < 1e-6 * peak);
    CHECK(std::abs(omega_at(tau, chi, tau)) < 1e-6 * peak);
  }
  const double chi = angular(-0.5147e6);
  CHECK(to_hz(analytic_peak(chi, gate_duration(chi))) == doctest::Approx(913e3).epsilon(5.0 / 913));
  CHECK(ridge_constant() == doctest::Approx(analytic_peak(chi, gate_duration(chi)) * gate_duration(chi)));
}

TEST_CASE("infeasible envelope") {
  // gamma_dot vanishes mid-pulse, so probe a quarter of the way in.
  CHECK_THROWS_AS(omega_at(0.25e-9, angular(-0.5e6), 1e-9), NumericalError);
  CHECK_NOTHROW(omega_at(0.5e-9, angular(-0.5e6), 1e-9));
}

TEST_CASE("canonical waveform sampling") {
  const PulseWaveform wf = synthesize(PulseSpec::canonical(SystemParams::device()));
  CHECK(wf.size() == 908);
  CHECK(wf.t.front() == 0.0);
  CHECK(wf.t.back() == doctest::Approx(wf.tau_g).epsilon(1e-15));
  const std::size_t n = wf.size();
  double asym = 0.0;
  for (std::size_t k = 0; k < n; ++k) asym = std::max(asym, std::abs(wf.omega[k] - wf.omega[n - 1 - k]));
  CHECK(asym < 1e-9 * wf.peak);
  CHECK(*std::min_element(wf.omega.begin(), wf.omega.end()) > -1e-12 * wf.peak);
  double area = 0.0;
  for (std::size_t k = 1; k < n; ++k) area += 0.5 * (wf.omega[k] + wf.omega[k - 1]) * (wf.t[k] - wf.t[k - 1]);
  CHECK(std::isfinite(area));
  CHECK(area > 0.0);
  CHECK(wf.at(-1.0) == 0.0);
  CHECK(wf.at(wf.t[300]) == wf.omega[300]);
  CHECK(wf.omega[300] == doctest::Approx(omega_at(wf.t[300], wf.spec.chi_qq, wf.tau_g)).epsilon(1e-12));
  // Linear interpolation between 1 ns samples of the peaked envelope.
  CHECK(wf.at(wf.tau_g * 0.5) == doctest::Approx(omega_at(wf.tau_g * 0.5, wf.spec.chi_qq, wf.tau_g)).epsilon(1e-4));
}

TEST_CASE("quantization") {
  PulseSpec spec = PulseSpec::canonical(SystemParams::device());
  const PulseWaveform exact = synthesize(spec);
  for (int bits : {1, 4, 8, 12}) {
    spec.vertical_bits = bits;
    const PulseWaveform q = synthesize(spec);
    REQUIRE(q.codes.size() == q.size());
    double err = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
      err = std::max(err, std::abs(q.omega[k] - exact.omega[k]));
      CHECK(q.omega[k] == doctest::Approx(q.codes[k] * q.code_step));
      CHECK(std::abs(q.codes[k]) <= (1L << bits) - 1);
    }
    CHECK(err <= exact.peak / std::pow(2.0, bits) * (1 + 1e-12));
    CHECK(q.omega.front() == 0.0);
    CHECK(q.omega.back() == 0.0);
  }
  std::ostringstream os;
  write_codes_csv(os, synthesize(spec));
  CHECK(os.str().rfind("t_ns,code\n", 0) == 0);
  CHECK_THROWS_AS(write_codes_csv(os, exact), ValidationError);
}

TEST_CASE("stretched and rescaled waveform") {
  PulseSpec spec = PulseSpec::canonical(SystemParams::device());
  spec.omega_max = 0.5 * analytic_peak(spec.chi_qq, spec.tau_g);
  const PulseWaveform wf = synthesize(spec);
  const PulseWaveform canonical = synthesize(PulseSpec::canonical(SystemParams::device()));
  for (std::size_t k = 0; k < wf.size(); k += 50) CHECK(wf.omega[k] == doctest::Approx(0.5 * canonical.omega[k]));
  // The sampled peak can only fall short of the analytic one.
  CHECK(wf.peak <= *spec.omega_max);
  CHECK(wf.peak == doctest::Approx(*spec.omega_max).epsilon(1e-4));
}

TEST_CASE("pulse spec validation") {
  PulseSpec spec = PulseSpec::canonical(SystemParams::device());
  spec.sample_period = spec.tau_g;
  CHECK_THROWS_AS(synthesize(spec), ValidationError);
  spec = PulseSpec::canonical(SystemParams::device());
  spec.vertical_bits = 0;
  CHECK_THROWS_AS(synthesize(spec), ValidationError);
  spec = PulseSpec::canonical(SystemParams::device());
  spec.tau_g = -1.0;
  CHECK_THROWS_AS(synthesize(spec), ValidationError);
}

TEST_CASE("waveform csv") {
  std::ostringstream os;
  write_waveform_csv(os, synthesize(PulseSpec::canonical(SystemParams::device())));
  const std::string s = os.str();
  CHECK(s.rfind("t_ns,omega_over_2pi_MHz\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 909);
}

TEST_CASE("calibration landscape") {
  const SystemParams p = SystemParams::device();
  const double tau = gate_duration(p.chi_qq), peak = analytic_peak(p.chi_qq, tau);
  const CalibrationGrid at = calibration_grid({tau}, {peak}, p, 1);
  CHECK(at.p_flip_control_g(0, 0) > 0.98);
  CHECK(1.0 - at.p_flip_control_e(0, 0) > 0.98);

  const std::vector<double> taus{0.8 * tau, tau, 1.2 * tau};
  const CalibrationGrid g = calibration_grid(taus, {0.0, peak}, p, 2);
  CHECK(g.p_flip_control_g.row(0).maxCoeff() < 1e-20);
  CHECK(g.p_flip_control_e.row(0).maxCoeff() < 1e-20);
  CHECK(g.ridge_omega_max[1] == doctest::Approx(peak));
  const CalibrationGrid h = calibration_grid(taus, {0.0, peak}, p, 1);
  CHECK(g.p_flip_control_g == h.p_flip_control_g);
  CHECK(g.p_flip_control_e == h.p_flip_control_e);

  CHECK_THROWS_AS(calibration_grid({}, {peak}, p), ValidationError);
  CHECK_THROWS_AS(calibration_grid({tau}, {}, p), ValidationError);
}
