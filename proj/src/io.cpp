// Copyright 2026 The rotcool Authors
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

#include "rotcool/io.hpp"

#include <cstdio>
#include <fstream>

#include <unistd.h>

#include <json.hpp>

namespace rotcool {

namespace fs = std::filesystem;

void write_file_atomic(const fs::path& path, std::string_view content) {
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw OutputError("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw OutputError("cannot move '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
  }
}

std::string trajectory_csv(const BasisIndex& basis, const SimResult& result) {
  std::vector<std::string> labels;
  std::vector<int> ns;
  for (int i = 0; i < basis.dimension(); ++i) {
    const auto [label, n] = basis.label(i);
    labels.push_back(label.to_string());
    ns.push_back(n);
  }
  std::string out = "time,label,n,population\n";
  char buf[96];
  for (const auto& s : result.samples) {
    for (std::size_t i = 0; i < s.populations.size(); ++i) {
      if (!(s.populations[i] > 1e-12)) continue;
      std::snprintf(buf, sizeof buf, "%.10g,%s,%d,%.12g\n", s.time, labels[i].c_str(), ns[i], s.populations[i]);
      out += buf;
    }
  }
  return out;
}

std::string summary_json(const SimResult& result) {
  nlohmann::json per_cycle = nlohmann::json::array();
  for (std::size_t c = 0; c < result.per_cycle_efficiency.size(); ++c) {
    per_cycle.push_back({{"efficiency", result.per_cycle_efficiency[c]}, {"loss_u", result.per_cycle_loss[c]}});
  }
  const nlohmann::json j = {
      {"efficiency", result.efficiency},
      {"loss_u", result.loss_u},
      {"cycles", result.per_cycle_efficiency.size()},
      {"per_cycle", per_cycle},
      {"truncation_warning", result.truncation_flag},
      {"steps", result.step_count},
      {"wall_time_s", result.wall_time},
  };
  return j.dump(2) + "\n";
}

}  // namespace rotcool
