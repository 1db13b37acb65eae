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

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "rotcool/basis.hpp"
#include "rotcool/integrate.hpp"

namespace rotcool {

/// Thrown when an output file cannot be written.
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes to a temporary sibling and renames it over `path`, so readers see
/// either the old file or the complete new one.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// time,label,n,population with one row per sample and basis element whose
/// population exceeds 1e-12.
std::string trajectory_csv(const BasisIndex& basis, const SimResult& result);

/// {"efficiency", "loss_u", "cycles", "per_cycle", "truncation_warning",
///  "steps", "wall_time_s"}
std::string summary_json(const SimResult& result);

}  // namespace rotcool
