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

#include <stdexcept>
#include <string>

namespace rotcool {

/// Bad parameters, malformed configuration, or a violated precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The integrator could not complete a run (step underflow, trace drift).
/// Carries the last time at which the state was still trusted.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double last_good_time)
      : std::runtime_error(what), last_good_time_(last_good_time) {}

  double last_good_time() const noexcept { return last_good_time_; }

 private:
  double last_good_time_;
};

}  // namespace rotcool
