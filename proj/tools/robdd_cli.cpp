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


// robdd command-line driver.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "harness/commands.hpp"
#include "harness/config.hpp"
#include "robdd/error.hpp"

namespace fs = std::filesystem;
using namespace robdd;
using namespace robdd::harness;

namespace {

struct Options {
  std::string config;
  std::string out;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
  // optimize
  std::string target;
  std::string method;
  std::optional<int> slices;
  std::optional<double> dt_ns;
  // pulse selection
  std::string pulse;
  std::string family;
  std::string pi2_pulse;
  std::string pi_pulse;
  std::string system;
};

void add_common(CLI::App* sub, Options& o, bool out_required) {
  sub->add_option("--config", o.config, "run configuration (JSON)")->check(CLI::ExistingFile);
  auto* out = sub->add_option("--out", o.out, "output file");
  if (out_required) out->required();
  sub->add_option("--threads", o.threads, "worker threads, 0 = all cores");
  sub->add_option("--seed", o.seed, "override the config seed");
}

RunConfig base_config(const Options& o) {
  if (o.config.empty()) throw Error(ErrorKind::MissingField, "--config is required");
  RunConfig c = load_config(o.config);
  if (o.threads) c.threads = *o.threads;
  if (o.seed) c.seed = *o.seed;
  return c;
}

PulseSource pulse_override(const Options& o, const PulseSource& current) {
  if (!o.pulse.empty() && !o.family.empty()) {
    throw Error(ErrorKind::InvalidInput, "give only one of --pulse, --family");
  }
  if (!o.pulse.empty()) return {"shaped", load_pulse(o.pulse)};
  if (!o.family.empty()) {
    if (o.family != "square" && o.family != "corpse" && o.family != "bb1" && o.family != "ideal") {
      throw Error(ErrorKind::UnknownTag, "unknown pulse family '" + o.family + "'");
    }
    return {o.family, {}};
  }
  return current;
}

void emit(const std::string& sub, const RunConfig& c, const CommandOutput& r,
          const std::string& out) {
  write_atomic(out, r.data);
  write_atomic(manifest_path(out), manifest(sub, c, r.results).dump(2) + "\n");
}

int run(const std::string& sub, const Options& o) {
  if (sub == "derivs") {
    SpinSystem sys;
    if (!o.system.empty()) {
      sys = load_system(o.system).sys;
    } else {
      sys = base_config(o).system.sys;
    }
    if (o.pulse.empty()) throw Error(ErrorKind::MissingField, "derivs: --pulse is required");
    const CommandOutput r = run_derivs(sys, load_pulse(o.pulse));
    if (o.out.empty()) {
      std::cout << r.data;
    } else {
      write_atomic(o.out, r.data);
    }
    return 0;
  }

  RunConfig c = base_config(o);
  CommandOutput r;
  if (sub == "optimize") {
    if (!c.optimizer) c.optimizer = OptimizerConfig{};
    OptimizerConfig& opt = *c.optimizer;
    if (!o.target.empty()) opt.target = o.target;
    if (!o.method.empty()) opt.method = o.method;
    if (o.slices) {
      if (*o.slices < 1) throw Error(ErrorKind::UnitOutOfRange, "--slices must be >= 1");
      opt.slices = *o.slices;
      opt.de.chromosome_len_p = 2 * opt.slices;
    }
    if (o.dt_ns) {
      if (!(*o.dt_ns > 0.0)) throw Error(ErrorKind::UnitOutOfRange, "--dt-ns must be > 0");
      opt.dt = *o.dt_ns * 1e-9;
      opt.de.dt = opt.dt;
    }
    r = run_optimize(c);
  } else if (sub == "spectrum" || sub == "identity-map") {
    if (!c.sequence) throw Error(ErrorKind::MissingField, "config: missing 'sequence'");
    c.sequence->pulse = pulse_override(o, c.sequence->pulse);
    r = sub == "spectrum" ? run_spectrum(c) : run_identity_map(c);
  } else if (sub == "dnp-map") {
    if (!c.pulsepol) throw Error(ErrorKind::MissingField, "config: missing 'pulsepol'");
    if (!o.family.empty()) c.pulsepol->family = o.family;
    if (!o.pi2_pulse.empty()) c.pulsepol->pi2_pulse = load_pulse(o.pi2_pulse);
    if (!o.pi_pulse.empty()) c.pulsepol->pi_pulse = load_pulse(o.pi_pulse);
    const std::string& f = c.pulsepol->family;
    if (f != "square" && f != "corpse" && f != "bb1" && f != "roc") {
      throw Error(ErrorKind::UnknownTag, "unknown family '" + f + "'");
    }
    r = run_dnp_map(c);
  } else if (sub == "pulse-profile") {
    if (!c.profile) throw Error(ErrorKind::MissingField, "config: missing 'profile'");
    c.profile->pulse = pulse_override(o, c.profile->pulse);
    if (o.target == "pi") c.profile->target = {kPi, 0.0};
    if (o.target == "pi2") c.profile->target = {kPi / 2.0, kPi / 2.0};
    r = run_pulse_profile(c);
  }
  emit(sub, c, r, o.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust pulse design and dynamical decoupling simulation"};
  app.require_subcommand(1);
  Options o;

  auto* opt = app.add_subcommand("optimize", "search for a robust pulse");
  add_common(opt, o, true);
  opt->add_option("--target", o.target, "rotation target")->check(CLI::IsMember({"pi", "pi2"}));
  opt->add_option("--method", o.method, "optimizer")->check(CLI::IsMember({"de", "grape"}));
  opt->add_option("--slices", o.slices, "number of slices");
  opt->add_option("--dt-ns", o.dt_ns, "slice duration in ns");

  auto* der = app.add_subcommand("derivs", "print derivative norms of a pulse");
  add_common(der, o, false);
  der->add_option("--system", o.system, "system description (JSON)")->check(CLI::ExistingFile);
  der->add_option("--pulse", o.pulse, "pulse file (JSON)");

  for (const char* name : {"spectrum", "identity-map", "pulse-profile"}) {
    auto* s = app.add_subcommand(name, std::string(name) + " sweep");
    add_common(s, o, true);
    s->add_option("--pulse", o.pulse, "pulse file replacing the configured pulse");
    s->add_option("--family", o.family, "built-in pulse family");
    if (std::string(name) == "pulse-profile") {
      s->add_option("--target", o.target, "rotation target")->check(CLI::IsMember({"pi", "pi2"}));
    }
  }

  auto* dnp = app.add_subcommand("dnp-map", "PulsePol transfer map");
  add_common(dnp, o, true);
  dnp->add_option("--family", o.family, "square, corpse, bb1 or roc");
  dnp->add_option("--pi2-pulse", o.pi2_pulse, "pi/2 pulse file for roc");
  dnp->add_option("--pi-pulse", o.pi_pulse, "pi pulse file for roc");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    Json j;
    j["error"] = {{"kind", "usage"}, {"message", e.what()}};
    std::cerr << j.dump() << "\n";
    return 2;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    return run(sub, o);
  } catch (const std::exception& e) {
    std::cerr << error_report(e).dump() << "\n";
    return 1;
  }
}
