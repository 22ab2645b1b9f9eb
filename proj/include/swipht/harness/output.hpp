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

#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace swipht::harness {

std::string_view code_version();

/// What an experiment produced. Paths are relative to the output directory.
struct Artifacts {
  nlohmann::json metrics = nlohmann::json::object();
  std::vector<std::string> outputs;
  /// Per-item failures that did not abort the run (e.g. one battery gate).
  std::vector<std::string> failures;
  /// How the per-cell random streams were derived from the seed.
  nlohmann::json seeds = nlohmann::json::object();
};

/// Writes through a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body);

/// Creates `dir`, writes `name` atomically and records it in `artifacts`.
void emit(const std::filesystem::path& dir, const std::string& name, Artifacts& artifacts,
          const std::function<void(std::ostream&)>& body);

struct RunManifest {
  nlohmann::json config;
  std::string code_version;
  std::string started_utc;
  double wall_time_s = 0.0;
  std::string status = "ok";
  std::string error;
  std::vector<std::string> outputs;
  std::vector<std::string> failures;
  nlohmann::json seeds;

  nlohmann::json to_json() const;
  /// Atomically writes manifest.json into `dir`.
  void write(const std::filesystem::path& dir) const;
};

}  // namespace swipht::harness
