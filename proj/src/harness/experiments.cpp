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

#include "swipht/harness/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "swipht/gates.hpp"
#include "swipht/parallel.hpp"
#include "swipht/rng.hpp"

namespace swipht::harness {

using nlohmann::json;

namespace {

// Stream tags, one per experiment that draws random numbers.
constexpr std::uint64_t kTagEvolveQst = 0x45565154;
constexpr std::uint64_t kTagPhaseQst = 0x50485153;
constexpr std::uint64_t kTagQpt = 0x51505442;
constexpr std::uint64_t kTagReadout = 0x524f5554;

constexpr double kNs = 1e9;
constexpr double kMHz = 1e-6;

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return v;
}

json populations_json(const Matrix4cd& rho) {
  json j;
  for (int k = 0; k < 4; ++k) j[std::string(kBasisLabels[static_cast<std::size_t>(k)])] = rho(k, k).real();
  return j;
}

void emit_metrics(const ExperimentConfig& cfg, Artifacts& a) {
  emit(cfg.output_dir, "metrics.json", a, [&](std::ostream& os) { os << a.metrics.dump(2) << '\n'; });
}

DensityMatrix reconstruct(const DensityMatrix& rho, const ExperimentConfig& cfg, std::uint64_t seed) {
  const auto& cal = ReadoutCalibration::device();
  const TomographyDataset data = synthesize_qst_data(rho, cal, cfg.shots, seed);
  TomographyOptions opts;
  opts.seed = seed;
  try {
    return qst_fit(data, cal, opts).rho;
  } catch (const FitFailure& f) {
    return f.best();
  }
}

}  // namespace

// ---------------------------------------------------------------- pulse-export

PulseExportResult run_pulse_export(const ExperimentConfig& cfg) {
  PulseExportResult r;
  const SystemParams params = cfg.system_params();
  r.waveform = synthesize(cfg.pulse_spec(cfg.pulse.phi_d, cfg.pulse.target));
  const PulseWaveform& wf = r.waveform;
  auto& a = r.artifacts;
  emit(cfg.output_dir, "waveform.csv", a, [&](std::ostream& os) { write_waveform_csv(os, wf); });
  if (!wf.codes.empty())
    emit(cfg.output_dir, "codes.csv", a, [&](std::ostream& os) { write_codes_csv(os, wf); });
  a.metrics = {{"tau_g_ns", wf.tau_g * kNs},
               {"peak_over_2pi_MHz", to_hz(wf.peak) * kMHz},
               {"peak_over_2chi", wf.peak / (2.0 * std::abs(params.chi_qq))},
               {"samples", wf.size()},
               {"sample_period_ns", wf.sample_period * kNs},
               {"phi_d_rad", wf.spec.phi_d},
               {"target", std::string(to_string(wf.spec.target))}};
  if (!wf.codes.empty()) {
    a.metrics["vertical_bits"] = *wf.spec.vertical_bits;
    a.metrics["code_step_over_2pi_Hz"] = to_hz(wf.code_step);
  }
  emit_metrics(cfg, a);
  return r;
}

// ---------------------------------------------------------------- evolve-trace

EvolveTraceResult run_evolve_trace(const ExperimentConfig& cfg) {
  EvolveTraceResult r;
  auto& a = r.artifacts;
  const SystemParams params = cfg.system_params();
  const PulseWaveform wf = synthesize(cfg.pulse_spec(cfg.pulse.phi_d, cfg.pulse.target));
  const std::optional<NoiseModel> noise = cfg.noise_model();

  for (const int start : {int(kGG), int(kEG)}) {
    for (const bool noisy : {true, false}) {
      if (noisy && !noise) continue;
      EvolveOptions opts;
      if (noisy) opts.noise = noise;
      opts.record_every = cfg.evolve_trace.cadence;
      EvolveTrace trace;
      trace.start = std::string(kBasisLabels[static_cast<std::size_t>(start)]);
      trace.noisy = noisy;
      trace.points = evolve(DensityMatrix::basis_state(start), wf, params, opts).trajectory;
      r.traces.push_back(std::move(trace));
    }
  }

  if (cfg.evolve_trace.qst) {
    for (std::size_t i = 0; i < r.traces.size(); ++i) {
      auto& tr = r.traces[i];
      tr.qst_populations.resize(tr.points.size());
      parallel_for(tr.points.size(), cfg.threads, [&](std::size_t k) {
        const DensityMatrix rho = reconstruct(DensityMatrix(tr.points[k].rho), cfg,
                                              derive_seed(cfg.seed_or_zero(), {kTagEvolveQst, i, k}));
        for (int b = 0; b < 4; ++b) tr.qst_populations[k](b) = rho.population(b);
      });
    }
    a.seeds["evolve_trace_qst"] = "derive_seed(seed, {0x45565154, trace, point})";
  }

  json traces = json::array();
  for (const auto& tr : r.traces) {
    const std::string stem = "trace_" + tr.start + (tr.noisy ? "_noisy" : "_ideal");
    emit(cfg.output_dir, stem + ".csv", a, [&](std::ostream& os) { write_trajectory_csv(os, tr.points); });
    if (!tr.qst_populations.empty()) {
      emit(cfg.output_dir, stem + "_qst.csv", a, [&](std::ostream& os) {
        os << "t_ns,P_gg,P_ge,P_eg,P_ee\n";
        os.precision(12);
        for (std::size_t k = 0; k < tr.points.size(); ++k) {
          const auto& p = tr.qst_populations[k];
          os << tr.points[k].t * kNs << ',' << p(0) << ',' << p(1) << ',' << p(2) << ',' << p(3) << '\n';
        }
      });
    }
    double max_ee = 0.0, max_drift = 0.0;
    for (const auto& pt : tr.points) {
      max_ee = std::max(max_ee, pt.rho(kEE, kEE).real());
      max_drift = std::max(max_drift, std::abs(pt.rho.trace().real() - 1.0));
    }
    traces.push_back(json{{"start", tr.start},
                      {"noisy", tr.noisy},
                      {"points", tr.points.size()},
                      {"final", populations_json(tr.points.back().rho)},
                      {"max_P_ee", max_ee},
                      {"max_trace_drift", max_drift}});
  }
  a.metrics = {{"tau_g_ns", wf.tau_g * kNs}, {"cadence_ns", cfg.evolve_trace.cadence * kNs}, {"traces", traces}};
  emit_metrics(cfg, a);
  return r;
}

// ---------------------------------------------------------------- phase-sweep

SinusoidFit fit_sinusoid(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 5) throw ValidationError("fit_sinusoid: need at least 5 matching points");
  const auto n = static_cast<Eigen::Index>(x.size());
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  const double span = *hi - *lo;
  if (!(span > 0.0)) throw ValidationError("fit_sinusoid: x range is empty");
  const Eigen::Map<const Eigen::VectorXd> yv(y.data(), n);

  auto solve = [&](double period, Eigen::Vector3d& coef) {
    const double k = kTwoPi / period;
    Eigen::MatrixXd A(n, 3);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double xi = x[static_cast<std::size_t>(i)];
      A(i, 0) = std::sin(k * xi);
      A(i, 1) = std::cos(k * xi);
      A(i, 2) = 1.0;
    }
    coef = A.colPivHouseholderQr().solve(yv);
    return (A * coef - yv).squaredNorm();
  };

  constexpr int kScan = 400;
  const double p_lo = span / 8.0, p_hi = 2.0 * span;
  auto period_at = [&](int i) { return p_lo * std::pow(p_hi / p_lo, double(i) / (kScan - 1)); };
  Eigen::Vector3d coef;
  int best = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kScan; ++i) {
    const double c = solve(period_at(i), coef);
    if (c < best_cost) best_cost = c, best = i;
  }
  // Golden-section polish between the neighbours of the best scan point.
  double a = period_at(std::max(best - 1, 0)), b = period_at(std::min(best + 1, kScan - 1));
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c1 = b - g * (b - a), c2 = a + g * (b - a);
  double f1 = solve(c1, coef), f2 = solve(c2, coef);
  for (int it = 0; it < 100 && (b - a) > 1e-12 * b; ++it) {
    if (f1 < f2) {
      b = c2, c2 = c1, f2 = f1;
      c1 = b - g * (b - a), f1 = solve(c1, coef);
    } else {
      a = c1, c1 = c2, f1 = f2;
      c2 = a + g * (b - a), f2 = solve(c2, coef);
    }
  }
  SinusoidFit fit;
  fit.period = 0.5 * (a + b);
  const double cost = solve(fit.period, coef);
  fit.amplitude = std::hypot(coef(0), coef(1));
  fit.phase = std::atan2(coef(1), coef(0));
  fit.offset = coef(2);
  fit.rms_residual = std::sqrt(cost / static_cast<double>(n));
  return fit;
}

PhaseSweepResult run_phase_sweep(const ExperimentConfig& cfg) {
  PhaseSweepResult r;
  auto& a = r.artifacts;
  const auto& ps = cfg.phase_sweep;
  const SystemParams params = cfg.system_params();
  const Qubit target = cfg.pulse.target, control = other(target);
  const std::optional<NoiseModel> noise = cfg.noise_model();

  struct Prep {
    const char* label;
    Axis axis;
    double angle;
  };
  constexpr std::array<Prep, 4> preps{{{"Rx(pi/2)", Axis::x, kPi / 2},
                                       {"Rx(-pi/2)", Axis::x, -kPi / 2},
                                       {"Ry(pi/2)", Axis::y, kPi / 2},
                                       {"Ry(-pi/2)", Axis::y, -kPi / 2}}};
  std::array<DensityMatrix, 4> rho0;
  for (std::size_t s = 0; s < 4; ++s) {
    rho0[s] = apply_gate(DensityMatrix{}, single_qubit_gate(preps[s].axis, preps[s].angle, control));
    r.curves[s].label = preps[s].label;
    r.curves[s].im_rho_ge_eg.resize(static_cast<std::size_t>(ps.points));
  }
  r.phi_d = linspace(ps.phi_min, ps.phi_max, ps.points);

  parallel_for(r.phi_d.size(), cfg.threads, [&](std::size_t j) {
    const PulseWaveform wf = synthesize(cfg.pulse_spec(r.phi_d[j] + ps.offset, target));
    EvolveOptions opts;
    opts.noise = noise;
    for (std::size_t s = 0; s < 4; ++s) {
      DensityMatrix rho = evolve(rho0[s], wf, params, opts).final_state;
      if (cfg.shots > 0) rho = reconstruct(rho, cfg, derive_seed(cfg.seed_or_zero(), {kTagPhaseQst, j, s}));
      r.curves[s].im_rho_ge_eg[j] = rho.element(kGE, kEG).imag();
    }
  });
  if (cfg.shots > 0) a.seeds["phase_sweep_qst"] = "derive_seed(seed, {0x50485153, phi_index, state})";

  json curves = json::array();
  double amp = 0.0;
  for (auto& c : r.curves) {
    c.fit = fit_sinusoid(r.phi_d, c.im_rho_ge_eg);
    amp += c.fit.amplitude;
    curves.push_back(json{{"state", c.label},
                      {"period_rad", c.fit.period},
                      {"period_over_2pi", c.fit.period / kTwoPi},
                      {"amplitude", c.fit.amplitude},
                      {"phase_rad", c.fit.phase},
                      {"offset", c.fit.offset},
                      {"rms_residual", c.fit.rms_residual}});
  }
  r.mean_amplitude = amp / 4.0;

  emit(cfg.output_dir, "phase_sweep.csv", a, [&](std::ostream& os) {
    os << "phi_d_rad";
    for (const auto& c : r.curves) os << ",im_rho_ge_eg[" << c.label << "]";
    os << '\n';
    os.precision(12);
    for (std::size_t j = 0; j < r.phi_d.size(); ++j) {
      os << r.phi_d[j];
      for (const auto& c : r.curves) os << ',' << c.im_rho_ge_eg[j];
      os << '\n';
    }
  });
  a.metrics = {{"points", ps.points},
               {"offset_rad", ps.offset},
               {"noise", noise.has_value()},
               {"shots", cfg.shots},
               {"curves", curves},
               {"mean_amplitude", r.mean_amplitude}};
  emit_metrics(cfg, a);
  return r;
}

// ---------------------------------------------------------------- qpt-battery

namespace {

enum class GateKind { identity, gaussian, swipht };

struct BatteryGate {
  std::string id;
  GateKind kind = GateKind::identity;
  Axis axis = Axis::x;
  double angle = 0.0;
  Qubit qubit = Qubit::H;  // rotated qubit, or the SWIPHT control
  bool alt_phase = false;
};

const std::vector<BatteryGate>& battery_gates() {
  static const std::vector<BatteryGate> gates = [] {
    std::vector<BatteryGate> g{{"I(x)I", GateKind::identity, Axis::x, 0.0, Qubit::H, false}};
    for (const Qubit q : {Qubit::H, Qubit::L}) {
      for (const auto& [axis, angle] : std::array<std::pair<Axis, double>, 6>{{{Axis::x, kPi},
                                                                               {Axis::y, kPi},
                                                                               {Axis::x, kPi / 2},
                                                                               {Axis::y, kPi / 2},
                                                                               {Axis::x, -kPi / 2},
                                                                               {Axis::y, -kPi / 2}}}) {
        g.push_back({single_qubit_gate(axis, angle, q).label, GateKind::gaussian, axis, angle, q, false});
      }
    }
    g.push_back({"SWIPHT_L^0", GateKind::swipht, Axis::x, 0.0, Qubit::L, false});
    g.push_back({"SWIPHT_H^0", GateKind::swipht, Axis::x, 0.0, Qubit::H, false});
    g.push_back({"SWIPHT_L^alt", GateKind::swipht, Axis::x, 0.0, Qubit::L, true});
    g.push_back({"SWIPHT_H^alt", GateKind::swipht, Axis::x, 0.0, Qubit::H, true});
    return g;
  }();
  return gates;
}

std::string file_slug(std::string s) {
  for (char& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
  return s;
}

struct Channel {
  Matrix16cd s;
  Matrix4cd ideal;
  double tau = 0.0;
  double phi = 0.0;
};

Channel simulate(const BatteryGate& g, const ExperimentConfig& cfg, const SystemParams& params,
                 const std::optional<NoiseModel>& noise) {
  Channel ch;
  switch (g.kind) {
    case GateKind::identity:
      ch.s = Matrix16cd::Identity();
      ch.ideal = Matrix4cd::Identity();
      break;
    case GateKind::gaussian: {
      GaussianGateSpec spec = GaussianGateSpec::device(g.axis, g.angle, g.qubit);
      ch.s = gaussian_pulse_gate(spec, params, noise);
      ch.ideal = single_qubit_gate(g.axis, g.angle, g.qubit).matrix;
      ch.tau = spec.duration;
      break;
    }
    case GateKind::swipht: {
      ch.phi = !g.alt_phase ? 0.0 : (g.qubit == Qubit::L ? cfg.qpt_battery.phi_L_alt : cfg.qpt_battery.phi_H_alt);
      const PulseWaveform wf = synthesize(cfg.pulse_spec(ch.phi, other(g.qubit)));
      ch.s = propagate_superoperator(wf, params, noise);
      ch.ideal = simulated_swipht_unitary(ch.phi, g.qubit).matrix;
      ch.tau = wf.tau_g;
      break;
    }
  }
  return ch;
}

json metrics_json(const GateMetrics& m) { return {{"F_p", m.F_p}, {"F_g", m.F_g}, {"purity", m.purity}}; }

}  // namespace

const std::vector<std::string>& battery_gate_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& g : battery_gates()) v.push_back(g.id);
    return v;
  }();
  return ids;
}

QptBatteryResult run_qpt_battery(const ExperimentConfig& cfg) {
  QptBatteryResult r;
  auto& a = r.artifacts;
  const auto& bc = cfg.qpt_battery;
  const SystemParams params = cfg.system_params();
  const std::optional<NoiseModel> device_noise = cfg.noise_model();
  SystemParams long_params = params;
  long_params.T1_L = long_params.T1_H = bc.long_t1;
  long_params.T2_L = long_params.T2_H = 2.0 * bc.long_t1;

  struct Job {
    const BatteryGate* gate;
    std::string scenario;
    std::optional<NoiseModel> noise;
  };
  std::vector<Job> jobs;
  for (const auto& g : battery_gates()) {
    if (!bc.gates.empty() && std::find(bc.gates.begin(), bc.gates.end(), g.id) == bc.gates.end()) continue;
    if (device_noise) jobs.push_back({&g, "device", device_noise});
    if (bc.decoherence_free_rows || !device_noise) jobs.push_back({&g, "decoherence-free", std::nullopt});
    if (bc.long_t1_rows && g.kind == GateKind::swipht) jobs.push_back({&g, "long-T1", NoiseModel::from(long_params)});
  }

  const auto& cal = ReadoutCalibration::device();
  r.rows.resize(jobs.size());
  parallel_for(jobs.size(), cfg.threads, [&](std::size_t i) {
    const Job& job = jobs[i];
    BatteryRow& row = r.rows[i];
    row.gate = job.gate->id;
    row.scenario = job.scenario;
    const Channel ch = simulate(*job.gate, cfg, params, job.noise);
    row.phi_d = ch.phi;
    row.tau_gate = ch.tau;
    const ChiMatrix chi_ideal = chi_of_unitary(ch.ideal);
    row.direct = metrics(chi_of_superoperator(ch.s), chi_ideal);

    const std::uint64_t seed = derive_seed(cfg.seed_or_zero(), {kTagQpt, i});
    const TomographyDataset data = synthesize_qpt_data(ch.s, cal, cfg.shots, seed);
    TomographyOptions opts;
    opts.weighting = cfg.shots > 0 ? Weighting::model : Weighting::uniform;
    opts.seed = seed;
    try {
      const QptResult fit = qpt_fit(data, cal, opts);
      row.fitted = metrics(fit.chi, chi_ideal);
      row.completeness = fit.completeness;
      row.chi = fit.chi;
    } catch (const NumericalError& e) {
      row.error = e.what();
    }
  });
  if (cfg.shots > 0) a.seeds["qpt_battery"] = "derive_seed(seed, {0x51505442, row})";

  json rows = json::array();
  for (const auto& row : r.rows) {
    json j = {{"gate", row.gate},
              {"scenario", row.scenario},
              {"phi_d_rad", row.phi_d},
              {"tau_gate_ns", row.tau_gate * kNs},
              {"direct", metrics_json(row.direct)}};
    if (row.fitted) {
      j["fitted"] = metrics_json(*row.fitted);
      j["completeness"] = row.completeness;
      const std::string name = "chi/" + file_slug(row.gate + "__" + row.scenario) + ".json";
      emit(cfg.output_dir, name, a, [&](std::ostream& os) { os << chi_to_json(*row.chi, row.fitted).dump(1) << '\n'; });
      j["chi_file"] = name;
    } else {
      j["error"] = row.error;
      a.failures.push_back(row.gate + " [" + row.scenario + "]: " + row.error);
    }
    rows.push_back(j);
  }

  emit(cfg.output_dir, "qpt_battery.csv", a, [&](std::ostream& os) {
    os << "gate,scenario,phi_d_rad,tau_gate_ns,F_p,F_g,purity,"
          "F_p_direct,F_g_direct,purity_direct,completeness,status\n";
    os.precision(10);
    for (const auto& row : r.rows) {
      os << '"' << row.gate << "\"," << row.scenario << ',' << row.phi_d << ',' << row.tau_gate * kNs << ',';
      if (row.fitted)
        os << row.fitted->F_p << ',' << row.fitted->F_g << ',' << row.fitted->purity << ',';
      else
        os << ",,,";
      os << row.direct.F_p << ',' << row.direct.F_g << ',' << row.direct.purity << ',';
      os << (row.fitted ? row.completeness : std::numeric_limits<double>::quiet_NaN()) << ','
         << (row.fitted ? "ok" : "failed") << '\n';
    }
  });
  a.metrics = {{"shots", cfg.shots}, {"rows", rows}, {"failed_rows", a.failures.size()}};
  emit_metrics(cfg, a);
  return r;
}

// ---------------------------------------------------------------- calib-grid

CalibGridResult run_calib_grid(const ExperimentConfig& cfg) {
  CalibGridResult r;
  auto& a = r.artifacts;
  const auto& gc = cfg.calib_grid;
  const SystemParams params = cfg.system_params();
  const double tau_c = gate_duration(params.chi_qq);
  const double peak_c = analytic_peak(params.chi_qq, tau_c);
  const double t0 = gc.tau_min.value_or(0.5 * tau_c), t1 = gc.tau_max.value_or(1.5 * tau_c);
  const double w0 = gc.omega_min ? angular(*gc.omega_min) : 0.5 * peak_c;
  const double w1 = gc.omega_max ? angular(*gc.omega_max) : 1.5 * peak_c;
  if (!(t1 > t0) || !(w1 > w0)) throw ValidationError("calib_grid: empty range");

  r.grid = calibration_grid(linspace(t0, t1, gc.tau_points), linspace(w0, w1, gc.omega_points), params, cfg.threads);
  const auto& grid = r.grid;
  const double dw = (w1 - w0) / (gc.omega_points - 1);
  int checked = 0;
  for (int c = 0; c < gc.tau_points; ++c) {
    const double ridge = grid.ridge_omega_max[static_cast<std::size_t>(c)];
    if (ridge < w0 || ridge > w1) continue;
    Eigen::Index best = 0;
    grid.p_flip_control_g.col(c).maxCoeff(&best);
    const int ridge_row = static_cast<int>(std::lround((ridge - w0) / dw));
    r.max_ridge_offset_cells = std::max(r.max_ridge_offset_cells, std::abs(static_cast<int>(best) - ridge_row));
    ++checked;
  }
  r.p_flip_control_e_at_canonical = calibration_grid({tau_c}, {peak_c}, params, 1).p_flip_control_e(0, 0);

  emit(cfg.output_dir, "calib_grid.csv", a, [&](std::ostream& os) {
    os << "tau_ns,omega_max_over_2pi_MHz,p_flip_control_g,p_flip_control_e\n";
    os.precision(12);
    for (std::size_t c = 0; c < grid.tau_g.size(); ++c)
      for (std::size_t w = 0; w < grid.omega_max.size(); ++w) {
        const auto ri = static_cast<Eigen::Index>(w), ci = static_cast<Eigen::Index>(c);
        os << grid.tau_g[c] * kNs << ',' << to_hz(grid.omega_max[w]) * kMHz << ',' << grid.p_flip_control_g(ri, ci)
           << ',' << grid.p_flip_control_e(ri, ci) << '\n';
      }
  });
  emit(cfg.output_dir, "ridge.csv", a, [&](std::ostream& os) {
    os << "tau_ns,ridge_omega_max_over_2pi_MHz\n";
    os.precision(12);
    for (std::size_t c = 0; c < grid.tau_g.size(); ++c)
      os << grid.tau_g[c] * kNs << ',' << to_hz(grid.ridge_omega_max[c]) * kMHz << '\n';
  });
  a.metrics = {{"tau_points", gc.tau_points},
               {"omega_points", gc.omega_points},
               {"ridge_columns_checked", checked},
               {"max_ridge_offset_cells", r.max_ridge_offset_cells},
               {"canonical_tau_ns", tau_c * kNs},
               {"canonical_peak_over_2pi_MHz", to_hz(peak_c) * kMHz},
               {"p_flip_control_e_at_canonical", r.p_flip_control_e_at_canonical}};
  emit_metrics(cfg, a);
  return r;
}

// ---------------------------------------------------------------- readout-roundtrip

RoundtripResult run_readout_roundtrip(const ExperimentConfig& cfg) {
  if (cfg.shots == 0) throw ValidationError("readout-roundtrip: shots must be positive");
  RoundtripResult r;
  auto& a = r.artifacts;
  const auto& cal = ReadoutCalibration::device();
  const std::uint64_t seed = cfg.seed_or_zero();

  std::vector<ShotRecord> records(4 * kNumMappings);
  parallel_for(records.size(), cfg.threads, [&](std::size_t i) {
    const int nu = static_cast<int>(i) / kNumMappings, beta = static_cast<int>(i) % kNumMappings + 1;
    records[i] = sample_shots(DensityMatrix::basis_state(nu), beta, cal,
                              cfg.shots, derive_seed(seed, {kTagReadout, static_cast<std::uint64_t>(nu),
                                                                 static_cast<std::uint64_t>(beta)}));
    records[i].nu = nu;
  });
  a.seeds["readout_roundtrip"] = "sample_shots(seed = derive_seed(seed, {0x524f5554, nu, beta}))";

  json states = json::array();
  for (int nu = 0; nu < 4; ++nu) {
    Eigen::Matrix<double, kNumMappings, 1> means;
    for (int b = 0; b < kNumMappings; ++b) {
      const auto& v = records[static_cast<std::size_t>(nu * kNumMappings + b)].values;
      means(b) = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    }
    const PopulationEstimate est = invert_populations(means, cfg.shots, cal);
    const auto k = static_cast<std::size_t>(nu);
    r.recovered[k] = est.p;
    r.sigma[k] = est.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
    r.max_error[k] = (est.p - Eigen::Vector4d::Unit(nu)).cwiseAbs().maxCoeff();
    states.push_back(json{{"state", std::string(kBasisLabels[k])},
                      {"recovered", {est.p(0), est.p(1), est.p(2), est.p(3)}},
                      {"sigma", {r.sigma[k](0), r.sigma[k](1), r.sigma[k](2), r.sigma[k](3)}},
                      {"max_abs_error", r.max_error[k]},
                      {"residual", est.residual},
                      {"model_mismatch", est.model_mismatch}});
  }

  const CalibrationFit fit = fit_calibration(records);
  r.K_fit = fit.calibration.K;
  int missing = 0;
  for (int b = 0; b < kNumMappings; ++b)
    for (int nu = 0; nu < 4; ++nu) {
      const double k = r.K_fit(b, nu);
      if (!std::isfinite(k)) {
        ++missing;
        a.failures.push_back("K fit failed at beta " + std::to_string(b + 1) + ", " +
                             std::string(kBasisLabels[static_cast<std::size_t>(nu)]));
        continue;
      }
      r.max_K_error = std::max(r.max_K_error, std::abs(k - cal.K(b, nu)));
    }
  int borrowed = 0;
  for (const auto& c : fit.cells) borrowed += c.borrowed ? 1 : 0;

  emit(cfg.output_dir, "roundtrip.csv", a, [&](std::ostream& os) {
    os << "state,p_gg,p_ge,p_eg,p_ee,sigma_gg,sigma_ge,sigma_eg,sigma_ee,max_abs_error\n";
    os.precision(12);
    for (std::size_t k = 0; k < 4; ++k) {
      os << kBasisLabels[k];
      for (int b = 0; b < 4; ++b) os << ',' << r.recovered[k](b);
      for (int b = 0; b < 4; ++b) os << ',' << r.sigma[k](b);
      os << ',' << r.max_error[k] << '\n';
    }
  });
  emit(cfg.output_dir, "calibration_fit.json", a,
       [&](std::ostream& os) { os << fit.calibration.to_json().dump(2) << '\n'; });
  a.metrics = {{"shots", cfg.shots},
               {"states", states},
               {"max_K_error", r.max_K_error},
               {"K_cells_missing", missing},
               {"K_cells_borrowed", borrowed}};
  emit_metrics(cfg, a);
  return r;
}

// ---------------------------------------------------------------- dispatch

Artifacts run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case Experiment::pulse_export: return run_pulse_export(cfg).artifacts;
    case Experiment::evolve_trace: return run_evolve_trace(cfg).artifacts;
    case Experiment::phase_sweep: return run_phase_sweep(cfg).artifacts;
    case Experiment::qpt_battery: return run_qpt_battery(cfg).artifacts;
    case Experiment::calib_grid: return run_calib_grid(cfg).artifacts;
    case Experiment::readout_roundtrip: return run_readout_roundtrip(cfg).artifacts;
  }
  throw ValidationError("unknown experiment");
}

Artifacts run_and_record(const ExperimentConfig& cfg) {
  cfg.validate();
  RunManifest m;
  m.config = cfg.to_json();
  m.code_version = std::string(code_version());
  {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    m.started_utc = os.str();
  }
  m.seeds = {{"seed", cfg.seed ? json(*cfg.seed) : json(nullptr)}};
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };

  Artifacts a;
  try {
    a = run_experiment(cfg);
  } catch (const std::exception& e) {
    m.status = "error";
    m.error = e.what();
    m.wall_time_s = elapsed();
    m.write(cfg.output_dir);
    throw;
  }
  m.wall_time_s = elapsed();
  m.outputs = a.outputs;
  m.failures = a.failures;
  m.status = a.failures.empty() ? "ok" : "partial";
  for (const auto& [k, v] : a.seeds.items()) m.seeds[k] = v;
  m.write(cfg.output_dir);
  return a;
}

}  // namespace swipht::harness
