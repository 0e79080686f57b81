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


#include "harness/commands.hpp"

#include "robdd/error.hpp"
#include "robdd/rng.hpp"

namespace robdd::harness {

namespace {

template <typename T>
const T& need(const std::optional<T>& v, const char* name) {
  if (!v) throw Error(ErrorKind::MissingField, std::string("config: missing '") + name + "'");
  return *v;
}

Json norms_json(const std::map<std::string, double>& n) {
  Json j = Json::object();
  for (const auto& [k, v] : n) j[k] = v;
  return j;
}

Json pulse_summary(const ShapedPulse& p, const SpinSystem& sys) {
  return {{"slices", p.slices.size()},
          {"duration_ns", to_ns(p.duration())},
          {"peak_mhz", to_mhz(p.peak_amplitude())},
          {"peak_over_omega_max", p.peak_amplitude() / sys.omega_max}};
}

ShapedPulse family_pulse(const std::string& family, double theta, double phi,
                         const SpinSystem& sys) {
  if (family == "square" || family == "ideal") {
    return square_pulse(theta, phi, sys.omega_max, sys.t_min);
  }
  if (family == "corpse") {
    return phase_shift(expand_composite(corpse(theta), sys.omega_max, sys.t_min, theta, 0.0), phi);
  }
  if (family == "bb1") {
    return phase_shift(expand_composite(bb1(theta), sys.omega_max, sys.t_min, theta, 0.0), phi);
  }
  throw Error(ErrorKind::UnknownTag, "unknown pulse family '" + family + "'");
}

SequenceShape sequence_shape(const SequenceConfig& s, const RunConfig& c) {
  auto [pulse, inst] = resolve_pulse(s.pulse, c.system.sys, kPi, 0.0);
  SequenceShape sh{s.strategy, pulse, s.cycles, s.seed ? s.seed : std::optional(c.seed), inst};
  return sh;
}

}  // namespace

std::pair<ShapedPulse, bool> resolve_pulse(const PulseSource& src, const SpinSystem& sys,
                                           double theta, double phi) {
  if (src.family != "shaped") return {family_pulse(src.family, theta, phi, sys), src.family == "ideal"};
  const ShapedPulse& p = src.pulse;
  if (p.peak_amplitude() > sys.omega_max * (1.0 + 1e-9)) {
    throw Error(ErrorKind::BoundViolation,
                "pulse: peak amplitude " + format_number(to_mhz(p.peak_amplitude())) +
                    " MHz exceeds omega_max");
  }
  return {p, false};
}

CommandOutput run_optimize(const RunConfig& c) {
  const OptimizerConfig& o = need(c.optimizer, "optimizer");
  const SpinSystem& sys = c.system.sys;
  const RotationTarget target =
      o.target == "pi" ? RotationTarget{kPi, 0.0} : RotationTarget{kPi / 2.0, kPi / 2.0};
  FitnessWeights phi_w = phi_weights_from_psi(o.weights, c.error, sys);
  for (auto& t : phi_w.terms) t.weight *= o.kappa;

  CommandOutput out;
  OptimizationResult r;
  if (o.method == "de") {
    DeConfig de = o.de;
    de.seed = c.seed;
    de.threads = c.threads;
    r = de_optimize(target, sys, c.error, o.weights, de);
    out.results["de"] = {{"iterations", r.iterations},
                         {"converged", r.converged},
                         {"fitness_history", r.fitness_history}};
    if (o.polish) {
      OptimizationResult g = grape_optimize(r.pulse, target, sys, phi_w, o.grape);
      out.results["polish"] = {{"iterations", g.iterations},
                               {"converged", g.converged},
                               {"fitness_history", g.fitness_history}};
      r.pulse = g.pulse;
    }
  } else {
    const ShapedPulse init = o.init_pulse
                                 ? *o.init_pulse
                                 : smoothed_random_pulse(static_cast<std::size_t>(o.slices), o.dt,
                                                         target, sys.omega_max, c.seed);
    r = grape_optimize(init, target, sys, phi_w, o.grape);
    out.results["grape"] = {{"iterations", r.iterations},
                            {"converged", r.converged},
                            {"fitness_history", r.fitness_history}};
  }
  // Written values are rounded; report fitness for exactly what is saved.
  const ShapedPulse saved = parse_pulse(to_json(r.pulse));
  const PsiBreakdown b = psi_breakdown(saved, target, sys, c.error, o.weights);
  out.results["rng"] = Rng::kName;
  out.results["psi"] = b.psi;
  out.results["f0"] = b.f0;
  Json terms = Json::object();
  for (std::size_t i = 0; i < b.f.size(); ++i) terms[o.weights.terms[i].label()] = b.f[i];
  out.results["f"] = terms;
  out.results["phi"] = fitness_phi(saved, target, sys, phi_w);
  out.results["norms"] = norms_json(standard_norms(saved, sys));
  out.results["pulse"] = pulse_summary(saved, sys);
  out.data = to_json(saved).dump(2) + "\n";
  return out;
}

CommandOutput run_derivs(const SpinSystem& sys, const ShapedPulse& pulse) {
  const std::vector<GeneratorTag> tags{GeneratorTag::Detuning, GeneratorTag::Control,
                                       GeneratorTag::Bath};
  const DerivativeNorms n =
      derivative_norms(directional_derivatives(pulse, sys, tags, false));
  CommandOutput out;
  out.data = "tag,d1_norm_sq,d2_norm_sq\n";
  for (GeneratorTag t : tags) {
    const double d1 = n.first.at(t);
    const double d2 = n.second.at({t, t});
    out.data += std::string(to_string(t)) + "," + format_number(d1) + "," + format_number(d2) + "\n";
    out.results[std::string(to_string(t))] = {{"d1", d1}, {"d2", d2}};
  }
  return out;
}

CommandOutput run_spectrum(const RunConfig& c) {
  const SequenceConfig& s = need(c.sequence, "sequence");
  const AxisGrid& g = need(c.tau_grid, "tau_grid");
  if (s.tau || s.resonance) {
    throw Error(ErrorKind::InvalidInput, "spectrum: delays come from 'tau_grid', not the sequence");
  }
  const SpectrumResult r =
      detection_spectrum(c.system.sys, sequence_shape(s, c), g.values(), c.error, c.threads);
  CommandOutput out;
  out.data = spectrum_csv(r);
  double pmin = 1.0;
  double tmin = 0.0;
  for (const auto& pt : r.grid) {
    if (pt.p < pmin) {
      pmin = pt.p;
      tmin = pt.tau;
    }
  }
  out.results = {{"points", r.grid.size()}, {"p_min", pmin}, {"tau_at_p_min_ns", to_ns(tmin)}};
  return out;
}

CommandOutput run_identity_map(const RunConfig& c) {
  const SequenceConfig& s = need(c.sequence, "sequence");
  const SequenceShape sh = sequence_shape(s, c);
  double tau = 0.0;
  if (s.tau) {
    tau = *s.tau;
  } else if (s.resonance) {
    const double w = sh.instantaneous ? 0.0 : sh.pulse.duration();
    tau = resonance_delay(s.resonance->omega_i, s.resonance->k, w);
  } else {
    throw Error(ErrorKind::MissingField, "sequence: identity-map needs 'tau_ns' or 'resonance'");
  }
  const RobustnessMap m =
      identity_robustness_map(c.system.sys, sh, tau, need(c.detuning_grid, "detuning_grid").values(),
                              need(c.rabi_grid, "rabi_grid").values(), c.threads);
  CommandOutput out;
  out.data = map_csv(m);
  out.results = {{"tau_ns", to_ns(tau)}, {"area_f_ge_0.99", m.area_fraction(0.99)}};
  return out;
}

CommandOutput run_dnp_map(const RunConfig& c) {
  const PulsePolConfig& p = need(c.pulsepol, "pulsepol");
  const SpinSystem& sys = c.system.sys;
  PulsePolSpec spec;
  spec.l = p.l;
  spec.cycles = p.cycles;
  spec.pulse_family = p.family;
  if (p.family == "roc") {
    if (!p.pi2_pulse || !p.pi_pulse) {
      throw Error(ErrorKind::MissingField, "pulsepol: family 'roc' needs pi2 and pi pulses");
    }
    spec.pi2_pulse = resolve_pulse({"shaped", *p.pi2_pulse}, sys, kPi / 2.0, 0.0).first;
    spec.pi_pulse = resolve_pulse({"shaped", *p.pi_pulse}, sys, kPi, 0.0).first;
  } else {
    auto [a, b] = family_pulses(p.family, sys.omega_max, sys.t_min);
    spec.pi2_pulse = a;
    spec.pi_pulse = b;
  }
  const DnpMap m = dnp_transfer_map(spec, sys, need(c.detuning_grid, "detuning_grid").values(),
                                    need(c.rabi_grid, "rabi_grid").values(), c.threads);
  CommandOutput out;
  out.data = map_csv(m.map);
  out.results = {{"tau_ns", to_ns(pulsepol_tau(spec, sys))},
                 {"ideal_polarization", m.ideal_polarization},
                 {"reference_polarization", m.reference_polarization},
                 {"alpha", m.alpha},
                 {"area_f_ge_0.99", m.map.area_fraction(0.99)}};
  return out;
}

CommandOutput run_pulse_profile(const RunConfig& c) {
  const ProfileConfig& p = need(c.profile, "profile");
  const ShapedPulse pulse =
      resolve_pulse(p.pulse, c.system.sys, p.target.theta, p.target.phi).first;
  const RobustnessMap m = pulse_robustness_profile(
      pulse, p.target, c.system.sys, need(c.detuning_grid, "detuning_grid").values(),
      need(c.rabi_grid, "rabi_grid").values(), c.threads);
  CommandOutput out;
  out.data = map_csv(m);
  out.results = {{"pulse", pulse_summary(pulse, c.system.sys)},
                 {"area_f_ge_0.99", m.area_fraction(0.99)}};
  return out;
}

}  // namespace robdd::harness
