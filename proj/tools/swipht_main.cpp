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

// swipht: command-line front end for the reproduction experiments.
//
// Exit codes: 0 success, 2 invalid input, 3 numerical failure (including a
// battery with failed rows).

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "swipht/common.hpp"
#include "swipht/harness/config.hpp"
#include "swipht/harness/experiments.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

}  // namespace

int main(int argc, char** argv) {
  using namespace swipht::harness;

  CLI::App app{"SWIPHT two-transmon gate simulator"};
  app.set_version_flag("--version", std::string(code_version()));
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::filesystem::path> config_path;
  ConfigOverrides flags;
  app.add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
  app.add_option("--seed", flags.seed, "Seed for every random stream");
  app.add_option("--out", flags.output_dir, "Output directory");
  app.add_option("--shots", flags.shots, "Shots per mean (0 = analytic means)");
  app.add_flag("--no-noise", flags.no_noise, "Disable T1/T2 dissipation");

  const std::pair<Experiment, const char*> commands[] = {
      {Experiment::pulse_export, "Write the sampled SWIPHT envelope"},
      {Experiment::evolve_trace, "Population traces for |gg> and |eg> starts"},
      {Experiment::phase_sweep, "Im rho_ge,eg versus drive phase"},
      {Experiment::qpt_battery, "Process tomography of the gate table"},
      {Experiment::calib_grid, "Flip probability over (tau_g, Omega_max)"},
      {Experiment::readout_roundtrip, "Shot sampling, calibration fit and inversion"},
  };
  for (const auto& [e, help] : commands) app.add_subcommand(std::string(to_string(e)), help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    const auto* sub = app.get_subcommands().front();
    const ExperimentConfig cfg = resolve_config(parse_experiment(sub->get_name()), config_path, flags);
    const Artifacts a = run_and_record(cfg);
    std::cout << a.metrics.dump(2) << '\n';
    std::cerr << "wrote " << a.outputs.size() << " files and manifest.json to " << cfg.output_dir.string() << '\n';
    if (!a.failures.empty()) {
      for (const auto& f : a.failures) std::cerr << "failed: " << f << '\n';
      return kExitNumerical;
    }
    return 0;
  } catch (const swipht::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const swipht::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const swipht::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}
