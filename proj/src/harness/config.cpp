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

#include "swipht/harness/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <utility>

#include "swipht/harness/experiments.hpp"

namespace swipht::harness {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Experiment, std::string_view>, 6> kExperimentNames{{
    {Experiment::pulse_export, "pulse-export"},
    {Experiment::evolve_trace, "evolve-trace"},
    {Experiment::phase_sweep, "phase-sweep"},
    {Experiment::qpt_battery, "qpt-battery"},
    {Experiment::calib_grid, "calib-grid"},
    {Experiment::readout_roundtrip, "readout-roundtrip"},
}};

// Reads the keys of one JSON object and rejects any it did not consume.
class Section {
 public:
  Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
    if (!j_.is_object()) throw ValidationError("config: '" + name_ + "' must be an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ValidationError("config: " + name_ + "." + key + ": " + e.what());
    }
  }

  template <typename T>
  void get(const char* key, std::optional<T>& out) {
    seen_.insert(key);
    if (!j_.contains(key) || j_.at(key).is_null()) return;
    T v{};
    get(key, v);
    out = v;
  }

  const json* child(const char* key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null() ? &j_.at(key) : nullptr;
  }

  void finish() const {
    for (const auto& [key, _] : j_.items())
      if (!seen_.count(key)) throw ValidationError("config: unknown key '" + name_ + "." + key + "'");
  }

 private:
  const json& j_;
  std::string name_;
  std::set<std::string> seen_;
};

Qubit parse_qubit(const std::string& s) {
  if (s == "L") return Qubit::L;
  if (s == "H") return Qubit::H;
  throw ValidationError("config: qubit must be \"L\" or \"H\", got \"" + s + "\"");
}

template <typename T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError("config: " + what);
}

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

std::string_view to_string(Experiment e) {
  for (const auto& [k, name] : kExperimentNames)
    if (k == e) return name;
  return "unknown";
}

Experiment parse_experiment(std::string_view name) {
  for (const auto& [k, n] : kExperimentNames)
    if (n == name) return k;
  throw ValidationError("unknown experiment '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  require(schema_version == kConfigSchemaVersion,
          "schema_version " + std::to_string(schema_version) + " is not supported (expected " +
              std::to_string(kConfigSchemaVersion) + ")");
  if (shots > 0) require(seed.has_value(), "a seed is required when shots > 0");
  system_params().validate();

  require(positive(pulse.sample_period), "pulse.sample_period_s must be positive");
  if (pulse.tau_g) require(positive(*pulse.tau_g), "pulse.tau_g_s must be positive");
  if (pulse.omega_max) require(positive(*pulse.omega_max), "pulse.omega_max_hz must be positive");
  if (pulse.vertical_bits) require(*pulse.vertical_bits >= 1 && *pulse.vertical_bits <= 30,
                                   "pulse.vertical_bits must be in 1..30");
  require(std::isfinite(pulse.phi_d), "pulse.phi_d_rad must be finite");
  for (const auto& t : {noise.T1_L, noise.T1_H, noise.T2_L, noise.T2_H})
    if (t) require(positive(*t), "noise overrides must be positive");

  switch (experiment) {
    case Experiment::evolve_trace:
      require(positive(evolve_trace.cadence), "evolve_trace.cadence_s must be positive");
      if (evolve_trace.qst) require(shots > 0, "evolve_trace.qst needs shots > 0");
      break;
    case Experiment::phase_sweep:
      require(phase_sweep.points >= 5, "phase_sweep.points must be at least 5");
      require(std::isfinite(phase_sweep.phi_min) && std::isfinite(phase_sweep.phi_max) &&
                  phase_sweep.phi_max > phase_sweep.phi_min,
              "phase_sweep range is empty");
      require(std::isfinite(phase_sweep.offset), "phase_sweep.offset_rad must be finite");
      break;
    case Experiment::qpt_battery: {
      const auto& ids = battery_gate_ids();
      for (const auto& g : qpt_battery.gates)
        require(std::find(ids.begin(), ids.end(), g) != ids.end(), "unknown battery gate '" + g + "'");
      require(positive(qpt_battery.long_t1), "qpt_battery.long_t1_s must be positive");
      break;
    }
    case Experiment::calib_grid: {
      const auto& c = calib_grid;
      require(c.tau_points >= 2 && c.omega_points >= 2, "calib_grid needs at least 2 points per axis");
      if (c.tau_min) require(positive(*c.tau_min), "calib_grid.tau_min_s must be positive");
      if (c.omega_min) require(positive(*c.omega_min), "calib_grid.omega_min_hz must be positive");
      if (c.tau_min && c.tau_max) require(*c.tau_max > *c.tau_min, "calib_grid tau range is empty");
      if (c.omega_min && c.omega_max) require(*c.omega_max > *c.omega_min, "calib_grid omega range is empty");
      break;
    }
    case Experiment::readout_roundtrip:
      require(shots >= 1000, "readout-roundtrip needs shots >= 1000 per histogram");
      break;
    case Experiment::pulse_export:
      break;
  }
}

SystemParams ExperimentConfig::system_params() const {
  SystemParams p;
  p.T1_L = noise.T1_L.value_or(system.T1_L);
  p.T1_H = noise.T1_H.value_or(system.T1_H);
  p.T2_L = noise.T2_L.value_or(system.T2_L);
  p.T2_H = noise.T2_H.value_or(system.T2_H);
  p.kappa_inv = system.kappa_inv;
  if (full_model) {
    FullModelParams f;
    f.omega_L_bare = angular(full_model->f_L_bare);
    f.omega_H_bare = angular(full_model->f_H_bare);
    f.omega_R_bare = angular(full_model->f_R_bare);
    f.E_C_L = angular(full_model->E_C_L);
    f.E_C_H = angular(full_model->E_C_H);
    f.g_L = angular(full_model->g_L);
    f.g_H = angular(full_model->g_H);
    f.J = angular(full_model->J);
    f.n_transmon_levels = full_model->transmon_levels;
    f.n_cavity_levels = full_model->cavity_levels;
    return extract_dressed_params(f, p);
  }
  p.omega_L = angular(system.f_L);
  p.omega_H = angular(system.f_H);
  p.chi_qq = angular(system.chi_qq);
  return p;
}

std::optional<NoiseModel> ExperimentConfig::noise_model() const {
  if (!noise.enabled) return std::nullopt;
  return NoiseModel::from(system_params());
}

PulseSpec ExperimentConfig::pulse_spec(double phi_d, Qubit target) const {
  PulseSpec spec = PulseSpec::canonical(system_params(), phi_d, target);
  if (pulse.tau_g) spec.tau_g = *pulse.tau_g;
  if (pulse.omega_max) spec.omega_max = angular(*pulse.omega_max);
  spec.vertical_bits = pulse.vertical_bits;
  spec.sample_period = pulse.sample_period;
  spec.validate();
  return spec;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  Section top(j, "config");
  top.get("schema_version", c.schema_version);
  if (!j.contains("schema_version")) throw ValidationError("config: schema_version is required");
  if (c.schema_version != kConfigSchemaVersion)
    throw ValidationError("config: schema_version " + std::to_string(c.schema_version) + " is not supported");

  std::string name;
  top.get("experiment", name);
  if (!name.empty()) c.experiment = parse_experiment(name);
  top.get("shots", c.shots);
  top.get("seed", c.seed);
  std::string out;
  top.get("output_dir", out);
  if (!out.empty()) c.output_dir = out;
  top.get("threads", c.threads);

  if (const json* s = top.child("system")) {
    Section sec(*s, "system");
    sec.get("f_L_hz", c.system.f_L);
    sec.get("f_H_hz", c.system.f_H);
    sec.get("chi_qq_hz", c.system.chi_qq);
    sec.get("T1_L_s", c.system.T1_L);
    sec.get("T1_H_s", c.system.T1_H);
    sec.get("T2_L_s", c.system.T2_L);
    sec.get("T2_H_s", c.system.T2_H);
    sec.get("kappa_inv_s", c.system.kappa_inv);
    sec.finish();
  }
  if (const json* s = top.child("full_model")) {
    FullModelConfig f;
    Section sec(*s, "full_model");
    sec.get("f_L_bare_hz", f.f_L_bare);
    sec.get("f_H_bare_hz", f.f_H_bare);
    sec.get("f_R_bare_hz", f.f_R_bare);
    sec.get("E_C_L_hz", f.E_C_L);
    sec.get("E_C_H_hz", f.E_C_H);
    sec.get("g_L_hz", f.g_L);
    sec.get("g_H_hz", f.g_H);
    sec.get("J_hz", f.J);
    sec.get("transmon_levels", f.transmon_levels);
    sec.get("cavity_levels", f.cavity_levels);
    sec.finish();
    c.full_model = f;
  }
  if (const json* s = top.child("pulse")) {
    Section sec(*s, "pulse");
    sec.get("tau_g_s", c.pulse.tau_g);
    sec.get("omega_max_hz", c.pulse.omega_max);
    sec.get("vertical_bits", c.pulse.vertical_bits);
    sec.get("sample_period_s", c.pulse.sample_period);
    sec.get("phi_d_rad", c.pulse.phi_d);
    std::string target = "H";
    sec.get("target", target);
    c.pulse.target = parse_qubit(target);
    sec.finish();
  }
  if (const json* s = top.child("noise")) {
    Section sec(*s, "noise");
    sec.get("enabled", c.noise.enabled);
    sec.get("T1_L_s", c.noise.T1_L);
    sec.get("T1_H_s", c.noise.T1_H);
    sec.get("T2_L_s", c.noise.T2_L);
    sec.get("T2_H_s", c.noise.T2_H);
    sec.finish();
  }
  if (const json* s = top.child("evolve_trace")) {
    Section sec(*s, "evolve_trace");
    sec.get("cadence_s", c.evolve_trace.cadence);
    sec.get("qst", c.evolve_trace.qst);
    sec.finish();
  }
  if (const json* s = top.child("phase_sweep")) {
    Section sec(*s, "phase_sweep");
    sec.get("points", c.phase_sweep.points);
    sec.get("phi_min_rad", c.phase_sweep.phi_min);
    sec.get("phi_max_rad", c.phase_sweep.phi_max);
    sec.get("offset_rad", c.phase_sweep.offset);
    sec.finish();
  }
  if (const json* s = top.child("qpt_battery")) {
    Section sec(*s, "qpt_battery");
    sec.get("gates", c.qpt_battery.gates);
    sec.get("decoherence_free_rows", c.qpt_battery.decoherence_free_rows);
    sec.get("long_t1_rows", c.qpt_battery.long_t1_rows);
    sec.get("long_t1_s", c.qpt_battery.long_t1);
    sec.get("phi_L_alt_rad", c.qpt_battery.phi_L_alt);
    sec.get("phi_H_alt_rad", c.qpt_battery.phi_H_alt);
    sec.finish();
  }
  if (const json* s = top.child("calib_grid")) {
    Section sec(*s, "calib_grid");
    sec.get("tau_min_s", c.calib_grid.tau_min);
    sec.get("tau_max_s", c.calib_grid.tau_max);
    sec.get("omega_min_hz", c.calib_grid.omega_min);
    sec.get("omega_max_hz", c.calib_grid.omega_max);
    sec.get("tau_points", c.calib_grid.tau_points);
    sec.get("omega_points", c.calib_grid.omega_points);
    sec.finish();
  }
  top.finish();
  return c;
}

json ExperimentConfig::to_json() const {
  json j;
  j["schema_version"] = schema_version;
  j["experiment"] = std::string(to_string(experiment));
  j["shots"] = shots;
  if (seed) j["seed"] = *seed;
  j["output_dir"] = output_dir.generic_string();
  j["threads"] = threads;
  j["system"] = {{"f_L_hz", system.f_L},     {"f_H_hz", system.f_H},   {"chi_qq_hz", system.chi_qq},
                 {"T1_L_s", system.T1_L},    {"T1_H_s", system.T1_H},  {"T2_L_s", system.T2_L},
                 {"T2_H_s", system.T2_H},    {"kappa_inv_s", system.kappa_inv}};
  if (full_model) {
    const auto& f = *full_model;
    j["full_model"] = {{"f_L_bare_hz", f.f_L_bare}, {"f_H_bare_hz", f.f_H_bare}, {"f_R_bare_hz", f.f_R_bare},
                       {"E_C_L_hz", f.E_C_L},       {"E_C_H_hz", f.E_C_H},       {"g_L_hz", f.g_L},
                       {"g_H_hz", f.g_H},           {"J_hz", f.J},               {"transmon_levels", f.transmon_levels},
                       {"cavity_levels", f.cavity_levels}};
  }
  json p = {{"sample_period_s", pulse.sample_period},
            {"phi_d_rad", pulse.phi_d},
            {"target", std::string(swipht::to_string(pulse.target))}};
  put_optional(p, "tau_g_s", pulse.tau_g);
  put_optional(p, "omega_max_hz", pulse.omega_max);
  put_optional(p, "vertical_bits", pulse.vertical_bits);
  j["pulse"] = p;
  json n = {{"enabled", noise.enabled}};
  put_optional(n, "T1_L_s", noise.T1_L);
  put_optional(n, "T1_H_s", noise.T1_H);
  put_optional(n, "T2_L_s", noise.T2_L);
  put_optional(n, "T2_H_s", noise.T2_H);
  j["noise"] = n;
  j["evolve_trace"] = {{"cadence_s", evolve_trace.cadence}, {"qst", evolve_trace.qst}};
  j["phase_sweep"] = {{"points", phase_sweep.points},
                      {"phi_min_rad", phase_sweep.phi_min},
                      {"phi_max_rad", phase_sweep.phi_max},
                      {"offset_rad", phase_sweep.offset}};
  j["qpt_battery"] = {{"gates", qpt_battery.gates},
                      {"decoherence_free_rows", qpt_battery.decoherence_free_rows},
                      {"long_t1_rows", qpt_battery.long_t1_rows},
                      {"long_t1_s", qpt_battery.long_t1},
                      {"phi_L_alt_rad", qpt_battery.phi_L_alt},
                      {"phi_H_alt_rad", qpt_battery.phi_H_alt}};
  json g = {{"tau_points", calib_grid.tau_points}, {"omega_points", calib_grid.omega_points}};
  put_optional(g, "tau_min_s", calib_grid.tau_min);
  put_optional(g, "tau_max_s", calib_grid.tau_max);
  put_optional(g, "omega_min_hz", calib_grid.omega_min);
  put_optional(g, "omega_max_hz", calib_grid.omega_max);
  j["calib_grid"] = g;
  return j;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open " + path.string());
  json j;
  try {
    j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ValidationError("config: " + path.string() + ": " + e.what());
  }
  return from_json(j);
}

ExperimentConfig resolve_config(Experiment experiment, const std::optional<std::filesystem::path>& file,
                                const ConfigOverrides& flags) {
  ExperimentConfig c = file ? ExperimentConfig::load(*file) : ExperimentConfig{};
  c.experiment = experiment;
  if (flags.seed) c.seed = flags.seed;
  if (flags.output_dir) c.output_dir = *flags.output_dir;
  if (flags.shots) c.shots = *flags.shots;
  if (flags.no_noise) c.noise.enabled = false;
  c.validate();
  return c;
}

}  // namespace swipht::harness
