// Copyright 2026 The robdd Authors
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


// Subcommand bodies. Each returns the primary output document and a results
// block for the manifest; nothing is written here.

#ifndef ROBDD_HARNESS_COMMANDS_HPP_
#define ROBDD_HARNESS_COMMANDS_HPP_

#include <string>
#include <utility>

#include "harness/config.hpp"

namespace robdd::harness {

struct CommandOutput {
  std::string data;  // CSV, or pulse JSON for optimize
  Json results = Json::object();
};

// Pulse realizing R_phi(theta) from a source; the bool is true for ideal
// zero-width rotations. Shaped pulses above omega_max throw BoundViolation.
std::pair<ShapedPulse, bool> resolve_pulse(const PulseSource& src, const SpinSystem& sys,
                                           double theta, double phi);

CommandOutput run_optimize(const RunConfig& c);
CommandOutput run_derivs(const SpinSystem& sys, const ShapedPulse& pulse);
CommandOutput run_spectrum(const RunConfig& c);
CommandOutput run_identity_map(const RunConfig& c);
CommandOutput run_dnp_map(const RunConfig& c);
CommandOutput run_pulse_profile(const RunConfig& c);

}  // namespace robdd::harness

#endif  // ROBDD_HARNESS_COMMANDS_HPP_
