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

#include "swipht/harness/output.hpp"

#include <fstream>
#include <system_error>

#include "swipht/common.hpp"

#ifndef SWIPHT_VERSION
#define SWIPHT_VERSION "unknown"
#endif

namespace swipht::harness {

namespace fs = std::filesystem;

std::string_view code_version() { return SWIPHT_VERSION; }

void write_file_atomic(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + tmp.string());
    body(out);
    out.flush();
    if (!out) throw NumericalError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw ValidationError("cannot move " + tmp.string() + " into place: " + ec.message());
  }
}

void emit(const fs::path& dir, const std::string& name, Artifacts& artifacts,
          const std::function<void(std::ostream&)>& body) {
  const fs::path target = dir / name;
  std::error_code ec;
  fs::create_directories(target.parent_path(), ec);
  if (ec) throw ValidationError("cannot create " + target.parent_path().string() + ": " + ec.message());
  write_file_atomic(target, body);
  artifacts.outputs.push_back(fs::path(name).generic_string());
}

nlohmann::json RunManifest::to_json() const {
  return {{"schema_version", 1},   {"code_version", code_version},
          {"started_utc", started_utc}, {"wall_time_s", wall_time_s},
          {"status", status},      {"error", error},
          {"config", config},      {"seeds", seeds},
          {"outputs", outputs},    {"failures", failures}};
}

void RunManifest::write(const fs::path& dir) const {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create " + dir.string() + ": " + ec.message());
  write_file_atomic(dir / "manifest.json", [&](std::ostream& os) { os << to_json().dump(2) << '\n'; });
}

}  // namespace swipht::harness
