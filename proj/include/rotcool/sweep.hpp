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

// Grids of independent runs over one or two configuration parameters.
//
// A plan file is a run configuration with an extra section:
//
//   [sweep]
//   axis1 = pulses.tau
//   values1 = 0, 160, 320
//   axis2 = pulses.T            # optional
//   values2 = linspace(400, 1200, 21)

#pragma once

#include <atomic>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rotcool/config.hpp"

namespace rotcool {

struct SweepAxis {
  std::string path;  // "section.key" of a numeric field
  std::vector<double> values;

  friend bool operator==(const SweepAxis&, const SweepAxis&) = default;
};

struct SweepPlan {
  RunConfig base;
  SweepAxis axis1;
  std::optional<SweepAxis> axis2;

  friend bool operator==(const SweepPlan&, const SweepPlan&) = default;

  /// |axis1| x |axis2|.
  std::size_t size() const;
  /// Configuration of grid point i; axis2 varies fastest.
  RunConfig point(std::size_t i) const;
  /// Checks the axes and every grid point's configuration.
  void validate() const;
};

struct SweepRow {
  double axis1 = 0.0;
  std::optional<double> axis2;
  double efficiency = 0.0;
  double loss_u = 0.0;
  bool truncation_flag = false;
  long steps = 0;
  double wall_time = 0.0;
  std::string error;  // empty for a completed run

  bool ok() const noexcept { return error.empty(); }
};

/// Called after each finished grid point, from the worker that ran it.
using SweepProgress = std::function<void(std::size_t index, const SweepRow& row)>;

/// Runs every grid point. Rows are returned in grid order whatever the
/// execution order. Runs that abort, or never start because `cancel` was
/// raised, come back as rows with `error` set. workers = 0 uses every core.
std::vector<SweepRow> run_sweep(const SweepPlan& plan, unsigned workers = 0,
                                const std::atomic<bool>* cancel = nullptr, const SweepProgress& progress = {});

/// axis1,axis2,efficiency,loss,flag with flag one of ok, truncation, error.
std::string sweep_csv(const std::vector<SweepRow>& rows);

SweepPlan parse_plan(std::string_view text, const std::string& source = "<plan>");
SweepPlan load_plan(const std::string& path);
std::string format_plan(const SweepPlan& plan);

}  // namespace rotcool
