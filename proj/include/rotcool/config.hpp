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

// Run configuration files.
//
// The format is line based:
//
//   # comment
//   [section]
//   key = value
//
// Keys are addressed as "section.key" (e.g. "pulses.alpha"). Frequencies are
// in units of the trap frequency nu, times in 1/nu and chirp rates in nu^2.

#pragma once

#include <atomic>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rotcool/analysis.hpp"
#include "rotcool/basis.hpp"
#include "rotcool/error.hpp"
#include "rotcool/integrate.hpp"
#include "rotcool/pulses.hpp"

namespace rotcool {

struct InitialState {
  enum class Kind { thermal, lambda_mixture, diagonal };

  Kind kind = Kind::thermal;
  double p_ground = 0.3;
  double p_excited = 0.7;
  std::vector<double> populations;  // P(J, n=0) for J = 0..; used by `diagonal`

  friend bool operator==(const InitialState&, const InitialState&) = default;
};

struct RunConfig {
  Scheme scheme = Scheme::carp;
  SystemSpec system;
  PulseParams pulses;
  IntegratorConfig integrator;
  InitialState initial;
  int cycles = 1;
  std::string output;  // output directory, empty when not given

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  /// Checks every part; throws ValidationError naming the section at fault.
  void validate() const;
};

/// Parse failure with the source line it refers to (0 when not tied to a line).
class ConfigError : public ValidationError {
 public:
  ConfigError(const std::string& source, int line, const std::string& message);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// One "key = value" entry with its section and source line.
struct ConfigEntry {
  int line = 0;
  std::string section;
  std::string key;
  std::string value;
};

struct ConfigText {
  std::vector<ConfigEntry> entries;
  std::vector<std::pair<std::string, int>> sections;  // header name and line
};

/// Splits text into entries; throws ConfigError on a syntax error.
ConfigText tokenize_config(std::string_view text, const std::string& source);

/// Applies entries of the run sections to `cfg`, then validates the result.
/// Errors are anchored to the offending line.
void apply_config(RunConfig& cfg, const ConfigText& text, const std::string& source);

/// Assigns one field from its textual value. Throws ValidationError on an
/// unknown path or a malformed value. "system.gamma" sets both decay rates
/// and "pulses.omega0" both Rabi frequencies.
void set_field(RunConfig& cfg, std::string_view path, std::string_view value);
/// True when `path` names a numeric scalar that a sweep axis can vary.
bool is_numeric_field(std::string_view path);

/// Parses a whole configuration and validates it. Unknown sections and keys,
/// bad values and failed validation raise ConfigError.
RunConfig parse_config(std::string_view text, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

/// Canonical text form; parse_config(format_config(c)) == c.
std::string format_config(const RunConfig& cfg);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double x);

// Building blocks of a run.
PulseSchedule build_schedule(const RunConfig& cfg);
DensityState build_initial_state(const RunConfig& cfg, const BasisIndex& basis);

/// Validates, integrates `cycles` cycles and returns the result.
SimResult simulate(const RunConfig& cfg, const std::atomic<bool>* cancel = nullptr);

}  // namespace rotcool
