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

#include "swipht/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace swipht {

void PulseSpec::validate() const {
  if (!std::isfinite(chi_qq) || chi_qq == 0.0) throw ValidationError("PulseSpec: chi_qq must be nonzero");
  if (!std::isfinite(tau_g) || tau_g <= 0.0) throw ValidationError("PulseSpec: tau_g must be positive");
  if (!std::isfinite(sample_period) || sample_period <= 0.0)
    throw ValidationError("PulseSpec: sample_period must be positive");
  if (sample_period > tau_g / 100.0 * (1.0 + 1e-12))
    throw ValidationError("PulseSpec: sample_period must be <= tau_g / 100");
  if (!std::isfinite(omega_d) || omega_d < 0.0) throw ValidationError("PulseSpec: omega_d must be >= 0");
  if (!std::isfinite(phi_d)) throw ValidationError("PulseSpec: phi_d must be finite");
  if (vertical_bits && (*vertical_bits < 1 || *vertical_bits > 30))
    throw ValidationError("PulseSpec: vertical_bits must be in [1, 30]");
  if (omega_max && (!std::isfinite(*omega_max) || *omega_max < 0.0))
    throw ValidationError("PulseSpec: omega_max must be >= 0");
}

PulseSpec PulseSpec::canonical(const SystemParams& params, double phi_d, Qubit target) {
  PulseSpec spec;
  spec.chi_qq = params.chi_qq;
  spec.tau_g = gate_duration(params.chi_qq);
  spec.omega_d = params.omega(target);
  spec.phi_d = phi_d;
  spec.target = target;
  return spec;
}

double gate_duration(double chi_qq) {
  if (!std::isfinite(chi_qq) || chi_qq == 0.0) throw DomainError("gate_duration: chi_qq must be nonzero");
  return kDurationConstant / (2.0 * std::abs(chi_qq));
}

double analytic_peak(double chi_qq, double tau_g) {
  constexpr int kScan = 4000;
  int best = 0;
  double best_val = -1.0;
  for (int k = 0; k <= kScan; ++k) {
    const double v = std::abs(omega_at(tau_g * k / kScan, chi_qq, tau_g));
    if (v > best_val) best_val = v, best = k;
  }
  double a = tau_g * std::max(0, best - 1) / kScan;
  double b = tau_g * std::min(kScan, best + 1) / kScan;
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  auto f = [&](double t) { return std::abs(omega_at(t, chi_qq, tau_g)); };
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 100 && (b - a) > 1e-15 * tau_g; ++it) {
    if (fc > fd) {
      b = d, d = c, fd = fc;
      c = b - r * (b - a), fc = f(c);
    } else {
      a = c, c = d, fc = fd;
      d = a + r * (b - a), fd = f(d);
    }
  }
  return std::max({best_val, fc, fd});
}

double ridge_constant() {
  const double tau = gate_duration(1.0);
  return analytic_peak(1.0, tau) * tau;
}

double PulseWaveform::at(double time) const {
  if (t.empty() || time < 0.0 || time > tau_g) return 0.0;
  const double dt = tau_g / static_cast<double>(t.size() - 1);
  const double x = time / dt;
  const auto k = std::min(static_cast<std::size_t>(x), t.size() - 2);
  const double frac = x - static_cast<double>(k);
  return omega[k] + frac * (omega[k + 1] - omega[k]);
}

PulseWaveform synthesize(const PulseSpec& spec) {
  spec.validate();
  const double tau_c = gate_duration(spec.chi_qq);
  const double stretch = tau_c / spec.tau_g;
  const double natural_peak = analytic_peak(spec.chi_qq, tau_c);
  const double scale = spec.omega_max ? *spec.omega_max / natural_peak : stretch;
  const double target_peak = natural_peak * scale;

  // The 1e-9 guard keeps an exact multiple from losing its last interval.
  const auto n = static_cast<std::size_t>(std::floor(spec.tau_g / spec.sample_period + 1e-9));
  const double dt = spec.tau_g / static_cast<double>(n);

  PulseWaveform wf;
  wf.tau_g = spec.tau_g;
  wf.sample_period = dt;
  wf.spec = spec;
  wf.t.resize(n + 1);
  wf.omega.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double tk = k == n ? spec.tau_g : dt * static_cast<double>(k);
    const double tc = k == n ? tau_c : std::min(tau_c, tk * stretch);
    wf.t[k] = tk;
    wf.omega[k] = scale * omega_at(tc, spec.chi_qq, tau_c);
  }

  if (spec.vertical_bits) {
    const double levels = std::ldexp(1.0, *spec.vertical_bits) - 1.0;
    wf.code_step = target_peak > 0.0 ? target_peak / levels : 0.0;
    wf.codes.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      long code = 0;
      if (wf.code_step > 0.0)
        code = static_cast<long>(std::clamp(std::round(wf.omega[k] / wf.code_step), -levels, levels));
      wf.codes[k] = code;
      wf.omega[k] = static_cast<double>(code) * wf.code_step;
    }
  }

  for (double v : wf.omega) wf.peak = std::max(wf.peak, std::abs(v));
  return wf;
}

void write_waveform_csv(std::ostream& os, const PulseWaveform& wf) {
  os << "t_ns,omega_over_2pi_MHz\n";
  os.precision(12);
  for (std::size_t k = 0; k < wf.size(); ++k) os << wf.t[k] * 1e9 << ',' << to_hz(wf.omega[k]) * 1e-6 << '\n';
}

void write_codes_csv(std::ostream& os, const PulseWaveform& wf) {
  if (wf.codes.empty()) throw ValidationError("write_codes_csv: waveform is not quantized");
  os << "t_ns,code\n";
  os.precision(12);
  for (std::size_t k = 0; k < wf.size(); ++k) os << wf.t[k] * 1e9 << ',' << wf.codes[k] << '\n';
}

}  // namespace swipht
