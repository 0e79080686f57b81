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


// Run configuration files, unit conversion at the I/O boundary, CSV and
// manifest output. Frequencies are linear (MHz, kHz) in files and rad/s in
// memory; times are ns in files and seconds in memory.

#ifndef ROBDD_HARNESS_CONFIG_HPP_
#define ROBDD_HARNESS_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "robdd/experiments.hpp"
#include "robdd/optimizer.hpp"
#include "robdd/pulse.hpp"
#include "robdd/sequences.hpp"
#include "robdd/system.hpp"

namespace robdd::harness {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSoftwareVersion = "robdd 0.1.0";

struct SystemConfig {
  SpinSystem sys;
  double b_field_gauss = 0.0;
  double gamma_i_khz_per_gauss = 0.0;
  // true when the file gave omega_i_khz instead of deriving it from B
  bool omega_i_given = false;
};

// Where a pulse comes from: a built-in family ("square", "corpse", "bb1",
// "ideal") or a waveform loaded from a file or given inline ("shaped").
struct PulseSource {
  std::string family = "square";
  ShapedPulse pulse;  // used when family == "shaped"
};

struct Resonance {
  int k = 1;
  double omega_i = 0.0;  // rad/s
};

struct SequenceConfig {
  StrategySpec strategy;
  PulseSource pulse;
  std::optional<double> tau;  // s
  std::optional<Resonance> resonance;
  int cycles = 1;
  std::optional<std::uint64_t> seed;
  std::string gaxy8_sigma_mode = "quarter";
};

struct AxisGrid {
  double start = 0.0;
  double stop = 0.0;
  int points = 1;

  std::vector<double> values() const { return linspace(start, stop, points); }
};

struct OptimizerConfig {
  std::string method = "de";  // "de" | "grape"
  std::string target = "pi";  // "pi" | "pi2"
  int slices = 40;
  double dt = 2e-9;
  DeConfig de;
  GrapeConfig grape;
  FitnessWeights weights = FitnessWeights::published();
  // GRAPE runs on phi_weights_from_psi(weights) with every mu scaled by kappa.
  double kappa = 1.0;
  // DE followed by a GRAPE run from the DE optimum.
  bool polish = false;
  std::optional<ShapedPulse> init_pulse;
};

struct PulsePolConfig {
  int l = 5;
  int cycles = 29;
  std::string family = "square";  // "square" | "corpse" | "bb1" | "roc"
  std::optional<ShapedPulse> pi2_pulse;  // required for "roc"
  std::optional<ShapedPulse> pi_pulse;
};

struct ProfileConfig {
  PulseSource pulse;
  RotationTarget target;
};

struct RunConfig {
  SystemConfig system;
  ErrorModel error;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::optional<SequenceConfig> sequence;
  std::optional<AxisGrid> tau_grid;        // s
  std::optional<AxisGrid> detuning_grid;   // rad/s
  std::optional<AxisGrid> rabi_grid;       // fraction
  std::optional<OptimizerConfig> optimizer;
  std::optional<PulsePolConfig> pulsepol;
  std::optional<ProfileConfig> profile;
};

// All loaders throw robdd::Error with kind Io, Parse, UnknownField,
// MissingField or UnitOutOfRange. Relative file references are resolved
// against base_dir.
Json read_json_file(const std::filesystem::path& path);

SystemConfig parse_system(const Json& j);
SystemConfig load_system(const std::filesystem::path& path);
Json to_json(const SystemConfig& s);

ShapedPulse parse_pulse(const Json& j);
ShapedPulse load_pulse(const std::filesystem::path& path);
Json to_json(const ShapedPulse& p);

RunConfig parse_config(const Json& j, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path);
// Fully resolved form: system and pulses inline, no file references.
// parse_config(to_json(c)) reproduces c.
Json to_json(const RunConfig& c);

// Rounds to 15 significant digits; applied to every number written so that
// unit conversion round-trips exactly.
double round_sig15(double v);

// %.9g
std::string format_number(double v);
std::string spectrum_csv(const SpectrumResult& r);
std::string map_csv(const RobustnessMap& m);

// Writes to a sibling temporary file and renames it over path.
void write_atomic(const std::filesystem::path& path, const std::string& data);

std::filesystem::path manifest_path(const std::filesystem::path& out);
Json manifest(const std::string& subcommand, const RunConfig& c, const Json& results);

// {"error": {"kind": ..., "message": ...}}
Json error_report(const std::exception& e);

}  // namespace robdd::harness

#endif  // ROBDD_HARNESS_CONFIG_HPP_
