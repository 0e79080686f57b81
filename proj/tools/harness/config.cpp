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


#include "harness/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <unistd.h>

#include "robdd/error.hpp"

namespace robdd::harness {

namespace fs = std::filesystem;

namespace {

// Field access over one JSON object; anything not read is rejected.
class Fields {
 public:
  Fields(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) fail(ErrorKind::Parse, "expected an object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  const Json& req(const char* key) {
    if (!j_.contains(key)) fail(ErrorKind::MissingField, std::string("missing '") + key + "'");
    seen_.insert(key);
    return j_.at(key);
  }

  const Json* opt(const char* key) {
    if (!j_.contains(key)) return nullptr;
    seen_.insert(key);
    return &j_.at(key);
  }

  double number(const char* key) { return as_number(req(key), key); }
  double number(const char* key, double dflt) {
    const Json* v = opt(key);
    return v ? as_number(*v, key) : dflt;
  }
  // null stands for +inf
  double number_or_inf(const char* key, double dflt) {
    const Json* v = opt(key);
    if (!v) return dflt;
    if (v->is_null()) return std::numeric_limits<double>::infinity();
    return as_number(*v, key);
  }
  long long integer(const char* key) { return as_integer(req(key), key); }
  long long integer(const char* key, long long dflt) {
    const Json* v = opt(key);
    return v ? as_integer(*v, key) : dflt;
  }
  std::string string(const char* key) { return as_string(req(key), key); }
  std::string string(const char* key, const std::string& dflt) {
    const Json* v = opt(key);
    return v ? as_string(*v, key) : dflt;
  }
  bool boolean(const char* key, bool dflt) {
    const Json* v = opt(key);
    if (!v) return dflt;
    if (!v->is_boolean()) fail(ErrorKind::Parse, std::string("'") + key + "' must be a boolean");
    return v->get<bool>();
  }
  std::uint64_t seed(const char* key) {
    const Json& v = req(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      fail(ErrorKind::Parse, std::string("'") + key + "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) {
        fail(ErrorKind::UnknownField, "unknown field '" + it.key() + "'");
      }
    }
  }

  [[noreturn]] void fail(ErrorKind kind, const std::string& msg) const {
    throw Error(kind, where_ + ": " + msg);
  }

  [[noreturn]] void out_of_range(const char* key, const std::string& req) const {
    fail(ErrorKind::UnitOutOfRange, std::string("'") + key + "' " + req);
  }

  const std::string& where() const { return where_; }

 private:
  double as_number(const Json& v, const char* key) const {
    if (!v.is_number()) fail(ErrorKind::Parse, std::string("'") + key + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) out_of_range(key, "must be finite");
    return d;
  }
  long long as_integer(const Json& v, const char* key) const {
    if (!v.is_number_integer()) {
      fail(ErrorKind::Parse, std::string("'") + key + "' must be an integer");
    }
    return v.get<long long>();
  }
  std::string as_string(const Json& v, const char* key) const {
    if (!v.is_string()) fail(ErrorKind::Parse, std::string("'") + key + "' must be a string");
    return v.get<std::string>();
  }

  const Json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

double r15(double v) { return round_sig15(v); }

Json inf_or(double v) { return std::isinf(v) ? Json(nullptr) : Json(r15(v)); }

fs::path resolve(const fs::path& base, const std::string& f) {
  const fs::path p(f);
  return p.is_absolute() ? p : base / p;
}

// "pulse_file" | "pulse" | "pulse_family" (prefix selects e.g. "pi_").
std::optional<PulseSource> parse_pulse_source(Fields& f, const fs::path& base,
                                              const std::string& prefix, bool allow_family) {
  const std::string kf = prefix + "pulse_file";
  const std::string kp = prefix + "pulse";
  const std::string kfam = prefix + "pulse_family";
  const int given = f.has(kf.c_str()) + f.has(kp.c_str()) + (allow_family && f.has(kfam.c_str()));
  if (given == 0) return std::nullopt;
  if (given > 1) {
    f.fail(ErrorKind::InvalidInput, "give only one of '" + kf + "', '" + kp +
                                        (allow_family ? "', '" + kfam : std::string()) + "'");
  }
  PulseSource s;
  if (const Json* v = f.opt(kf.c_str())) {
    if (!v->is_string()) f.fail(ErrorKind::Parse, "'" + kf + "' must be a string");
    s.family = "shaped";
    s.pulse = load_pulse(resolve(base, v->get<std::string>()));
  } else if (const Json* v = f.opt(kp.c_str())) {
    s.family = "shaped";
    s.pulse = parse_pulse(*v);
  } else {
    s.family = f.string(kfam.c_str());
    if (s.family != "square" && s.family != "corpse" && s.family != "bb1" &&
        s.family != "ideal") {
      f.fail(ErrorKind::UnknownTag, "unknown pulse family '" + s.family + "'");
    }
  }
  return s;
}

void pulse_source_to_json(Json& j, const PulseSource& s, const std::string& prefix) {
  if (s.family == "shaped") {
    j[prefix + "pulse"] = to_json(s.pulse);
  } else {
    j[prefix + "pulse_family"] = s.family;
  }
}

AxisGrid parse_grid(const Json& j, const std::string& where, const char* kstart,
                    const char* kstop, double unit) {
  Fields f(j, where);
  AxisGrid g;
  g.start = f.number(kstart) * unit;
  g.stop = f.number(kstop) * unit;
  const long long n = f.integer("points");
  f.finish();
  if (n < 1 || n > 1000000) f.out_of_range("points", "must be in [1, 1e6]");
  if (g.stop < g.start) f.out_of_range(kstop, "must be >= start");
  g.points = static_cast<int>(n);
  return g;
}

Json grid_to_json(const AxisGrid& g, const char* kstart, const char* kstop, double unit) {
  Json j;
  j[kstart] = r15(g.start / unit);
  j[kstop] = r15(g.stop / unit);
  j["points"] = g.points;
  return j;
}

RotationTarget target_from_name(const std::string& name, const Fields& f) {
  if (name == "pi") return {kPi, 0.0};
  if (name == "pi2") return {kPi / 2.0, kPi / 2.0};
  f.fail(ErrorKind::UnknownTag, "target must be 'pi' or 'pi2'");
}

GrapeConfig parse_grape(const Json& j, const std::string& where) {
  Fields f(j, where);
  GrapeConfig g;
  g.max_iters = static_cast<int>(f.integer("max_iters", g.max_iters));
  g.initial_step = f.number("initial_step", g.initial_step);
  g.step_shrink = f.number("step_shrink", g.step_shrink);
  g.step_grow = f.number("step_grow", g.step_grow);
  g.max_line_search = static_cast<int>(f.integer("max_line_search", g.max_line_search));
  g.grad_tol = f.number("grad_tol", g.grad_tol);
  g.target_fitness = f.number_or_inf("target_fitness", g.target_fitness);
  g.fd_step = f.number("fd_step", g.fd_step);
  const std::string rule = f.string("rule", "exact");
  const std::string dir = f.string("direction", "conjugate_gradient");
  f.finish();
  if (rule == "exact") {
    g.rule = GradientRule::Exact;
  } else if (rule == "first_order") {
    g.rule = GradientRule::FirstOrder;
  } else {
    f.fail(ErrorKind::UnknownTag, "rule must be 'exact' or 'first_order'");
  }
  if (dir == "conjugate_gradient") {
    g.direction = SearchDirection::ConjugateGradient;
  } else if (dir == "steepest") {
    g.direction = SearchDirection::Steepest;
  } else {
    f.fail(ErrorKind::UnknownTag, "direction must be 'conjugate_gradient' or 'steepest'");
  }
  if (g.max_iters < 0) f.out_of_range("max_iters", "must be >= 0");
  if (!(g.initial_step > 0.0)) f.out_of_range("initial_step", "must be > 0");
  if (!(g.step_shrink > 0.0 && g.step_shrink < 1.0)) f.out_of_range("step_shrink", "must be in (0, 1)");
  if (!(g.step_grow >= 1.0)) f.out_of_range("step_grow", "must be >= 1");
  if (!(g.fd_step > 0.0)) f.out_of_range("fd_step", "must be > 0");
  return g;
}

Json grape_to_json(const GrapeConfig& g) {
  Json j;
  j["max_iters"] = g.max_iters;
  j["initial_step"] = r15(g.initial_step);
  j["step_shrink"] = r15(g.step_shrink);
  j["step_grow"] = r15(g.step_grow);
  j["max_line_search"] = g.max_line_search;
  j["grad_tol"] = r15(g.grad_tol);
  j["target_fitness"] = inf_or(g.target_fitness);
  j["fd_step"] = r15(g.fd_step);
  j["rule"] = g.rule == GradientRule::Exact ? "exact" : "first_order";
  j["direction"] =
      g.direction == SearchDirection::ConjugateGradient ? "conjugate_gradient" : "steepest";
  return j;
}

FitnessWeights parse_weights(const Json& j, const std::string& where) {
  Fields f(j, where);
  FitnessWeights w;
  w.p0 = f.number("p0");
  const Json& terms = f.req("terms");
  f.finish();
  if (!terms.is_array()) f.fail(ErrorKind::Parse, "'terms' must be an array");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    Fields t(terms[i], where + ".terms[" + std::to_string(i) + "]");
    FitnessTerm term;
    const Json& gens = t.req("generators");
    if (!gens.is_array()) t.fail(ErrorKind::Parse, "'generators' must be an array");
    for (const auto& g : gens) {
      if (!g.is_string()) t.fail(ErrorKind::Parse, "generator tags are strings");
      term.generators.push_back(parse_generator_tag(g.get<std::string>()));
    }
    term.weight = t.number("weight");
    term.scale = t.number("scale", 1.0);
    t.finish();
    w.terms.push_back(term);
  }
  w.validate();
  return w;
}

Json weights_to_json(const FitnessWeights& w) {
  Json j;
  j["p0"] = r15(w.p0);
  j["terms"] = Json::array();
  for (const auto& t : w.terms) {
    Json tj;
    tj["generators"] = Json::array();
    for (GeneratorTag g : t.generators) tj["generators"].push_back(std::string(to_string(g)));
    tj["weight"] = r15(t.weight);
    tj["scale"] = r15(t.scale);
    j["terms"].push_back(tj);
  }
  return j;
}

OptimizerConfig parse_optimizer(const Json& j, const fs::path& base) {
  Fields f(j, "optimizer");
  OptimizerConfig o;
  o.method = f.string("method", o.method);
  o.target = f.string("target", o.target);
  o.slices = static_cast<int>(f.integer("slices", o.slices));
  o.dt = f.number("dt_ns", to_ns(o.dt)) * 1e-9;
  o.kappa = f.number("kappa", o.kappa);
  o.polish = f.boolean("polish", o.polish);
  if (const Json* d = f.opt("de")) {
    Fields df(*d, "optimizer.de");
    o.de.scale_r = df.number("scale_r", o.de.scale_r);
    o.de.crossover_cr = df.number("crossover_cr", o.de.crossover_cr);
    const long long p = df.integer("chromosome_len_p", 2LL * o.slices);
    o.de.population_ps = static_cast<int>(df.integer("population_ps", o.de.population_ps));
    o.de.max_iters = static_cast<int>(df.integer("max_iters", o.de.max_iters));
    o.de.target_fitness = df.number_or_inf("target_fitness", o.de.target_fitness);
    df.finish();
    if (p != 2LL * o.slices) {
      df.out_of_range("chromosome_len_p", "must equal 2 x slices");
    }
    if (!(o.de.scale_r > 0.0)) df.out_of_range("scale_r", "must be > 0");
    if (!(o.de.crossover_cr >= 0.0 && o.de.crossover_cr <= 1.0)) {
      df.out_of_range("crossover_cr", "must be in [0, 1]");
    }
    if (o.de.population_ps < 5) df.out_of_range("population_ps", "must be >= 5");
    if (o.de.max_iters < 0) df.out_of_range("max_iters", "must be >= 0");
  }
  if (const Json* g = f.opt("grape")) o.grape = parse_grape(*g, "optimizer.grape");
  if (const Json* w = f.opt("weights")) o.weights = parse_weights(*w, "optimizer.weights");
  if (auto s = parse_pulse_source(f, base, "init_", false)) o.init_pulse = s->pulse;
  f.finish();
  if (o.method != "de" && o.method != "grape") {
    f.fail(ErrorKind::UnknownTag, "method must be 'de' or 'grape'");
  }
  target_from_name(o.target, f);
  if (o.slices < 1) f.out_of_range("slices", "must be >= 1");
  if (!(o.dt > 0.0)) f.out_of_range("dt_ns", "must be > 0");
  if (!(o.kappa >= 0.0)) f.out_of_range("kappa", "must be >= 0");
  o.de.chromosome_len_p = 2 * o.slices;
  o.de.dt = o.dt;
  return o;
}

Json optimizer_to_json(const OptimizerConfig& o) {
  Json j;
  j["method"] = o.method;
  j["target"] = o.target;
  j["slices"] = o.slices;
  j["dt_ns"] = r15(to_ns(o.dt));
  j["kappa"] = r15(o.kappa);
  j["polish"] = o.polish;
  Json d;
  d["scale_r"] = r15(o.de.scale_r);
  d["crossover_cr"] = r15(o.de.crossover_cr);
  d["chromosome_len_p"] = o.de.chromosome_len_p;
  d["population_ps"] = o.de.population_ps;
  d["max_iters"] = o.de.max_iters;
  d["target_fitness"] = inf_or(o.de.target_fitness);
  j["de"] = d;
  j["grape"] = grape_to_json(o.grape);
  j["weights"] = weights_to_json(o.weights);
  if (o.init_pulse) j["init_pulse"] = to_json(*o.init_pulse);
  return j;
}

SequenceConfig parse_sequence(const Json& j, const fs::path& base) {
  Fields f(j, "sequence");
  SequenceConfig s;
  s.strategy = parse_strategy(f.string("strategy"));
  auto src = parse_pulse_source(f, base, "", true);
  if (!src) f.fail(ErrorKind::MissingField, "missing 'pulse_file', 'pulse' or 'pulse_family'");
  s.pulse = *src;
  if (f.has("tau_ns") && f.has("resonance")) {
    f.fail(ErrorKind::InvalidInput, "give only one of 'tau_ns', 'resonance'");
  }
  if (const Json* t = f.opt("tau_ns")) {
    if (!t->is_number() || !(t->get<double>() > 0.0)) f.out_of_range("tau_ns", "must be > 0");
    s.tau = t->get<double>() * 1e-9;
  }
  if (const Json* r = f.opt("resonance")) {
    Fields rf(*r, "sequence.resonance");
    Resonance res;
    res.k = static_cast<int>(rf.integer("k"));
    res.omega_i = khz(rf.number("omega_i_khz"));
    rf.finish();
    if (res.k < 1 || res.k % 2 == 0) rf.out_of_range("k", "must be odd and positive");
    if (!(res.omega_i > 0.0)) rf.out_of_range("omega_i_khz", "must be > 0");
    s.resonance = res;
  }
  s.cycles = static_cast<int>(f.integer("cycles"));
  if (s.cycles < 1) f.out_of_range("cycles", "must be >= 1");
  if (const Json* v = f.opt("seed")) {
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0)) {
      f.fail(ErrorKind::Parse, "'seed' must be a non-negative integer");
    }
    s.seed = v->get<std::uint64_t>();
  }
  if (const Json* g = f.opt("gaxy8")) {
    Fields gf(*g, "sequence.gaxy8");
    s.strategy.gaxy8_lambda0 = gf.number("lambda0", s.strategy.gaxy8_lambda0);
    s.gaxy8_sigma_mode = gf.string("sigma_mode", s.gaxy8_sigma_mode);
    const std::string mode = gf.string("mode", "fallback");
    gf.finish();
    if (s.gaxy8_sigma_mode != "quarter") {
      gf.fail(ErrorKind::UnknownTag, "sigma_mode must be 'quarter'");
    }
    if (mode != "fallback") gf.fail(ErrorKind::UnknownTag, "mode must be 'fallback'");
    if (!(s.strategy.gaxy8_lambda0 > 0.0)) gf.out_of_range("lambda0", "must be > 0");
  }
  f.finish();
  return s;
}

Json sequence_to_json(const SequenceConfig& s) {
  Json j;
  j["strategy"] = s.strategy.name();
  pulse_source_to_json(j, s.pulse, "");
  if (s.tau) j["tau_ns"] = r15(to_ns(*s.tau));
  if (s.resonance) {
    j["resonance"] = {{"k", s.resonance->k}, {"omega_i_khz", r15(to_khz(s.resonance->omega_i))}};
  }
  j["cycles"] = s.cycles;
  if (s.seed) j["seed"] = *s.seed;
  if (s.strategy.kind == Strategy::Gaxy8) {
    j["gaxy8"] = {{"lambda0", r15(s.strategy.gaxy8_lambda0)},
                  {"sigma_mode", s.gaxy8_sigma_mode},
                  {"mode", "fallback"}};
  }
  return j;
}

PulsePolConfig parse_pulsepol(const Json& j, const fs::path& base) {
  Fields f(j, "pulsepol");
  PulsePolConfig p;
  p.l = static_cast<int>(f.integer("l", p.l));
  p.cycles = static_cast<int>(f.integer("cycles", p.cycles));
  p.family = f.string("family", p.family);
  if (auto s = parse_pulse_source(f, base, "pi2_", false)) p.pi2_pulse = s->pulse;
  if (auto s = parse_pulse_source(f, base, "pi_", false)) p.pi_pulse = s->pulse;
  f.finish();
  if (p.l < 1 || p.l % 2 == 0) f.out_of_range("l", "must be odd and positive");
  if (p.cycles < 1) f.out_of_range("cycles", "must be >= 1");
  if (p.family != "square" && p.family != "corpse" && p.family != "bb1" && p.family != "roc") {
    f.fail(ErrorKind::UnknownTag, "unknown family '" + p.family + "'");
  }
  return p;
}

Json pulsepol_to_json(const PulsePolConfig& p) {
  Json j;
  j["l"] = p.l;
  j["cycles"] = p.cycles;
  j["family"] = p.family;
  if (p.pi2_pulse) j["pi2_pulse"] = to_json(*p.pi2_pulse);
  if (p.pi_pulse) j["pi_pulse"] = to_json(*p.pi_pulse);
  return j;
}

ProfileConfig parse_profile(const Json& j, const fs::path& base) {
  Fields f(j, "profile");
  ProfileConfig p;
  auto src = parse_pulse_source(f, base, "", true);
  if (!src) f.fail(ErrorKind::MissingField, "missing 'pulse_file', 'pulse' or 'pulse_family'");
  p.pulse = *src;
  p.target.theta = f.number("target_theta_rad");
  p.target.phi = f.number("target_phi_rad", 0.0);
  f.finish();
  if (p.pulse.family == "ideal") f.fail(ErrorKind::InvalidInput, "profiles need a finite pulse");
  return p;
}

Json profile_to_json(const ProfileConfig& p) {
  Json j;
  pulse_source_to_json(j, p.pulse, "");
  j["target_theta_rad"] = r15(p.target.theta);
  j["target_phi_rad"] = r15(p.target.phi);
  return j;
}

}  // namespace

double round_sig15(double v) {
  if (v == 0.0 || !std::isfinite(v)) return v;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return std::strtod(buf, nullptr);
}

Json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
  }
}

SystemConfig parse_system(const Json& j) {
  Fields f(j, "system");
  SystemConfig s;
  s.b_field_gauss = f.number("b_field_gauss");
  s.gamma_i_khz_per_gauss = f.number("gamma_i_khz_per_gauss");
  if (const Json* w = f.opt("omega_i_khz")) {
    if (!w->is_number()) f.fail(ErrorKind::Parse, "'omega_i_khz' must be a number");
    s.omega_i_given = true;
    s.sys.omega_i = khz(w->get<double>());
  } else {
    s.sys.omega_i = larmor_from_field(s.b_field_gauss, s.gamma_i_khz_per_gauss);
  }
  s.sys.omega_max = mhz(f.number("omega_max_mhz"));
  s.sys.delta_max = mhz(f.number("delta_max_mhz"));
  s.sys.t_min = f.number("t_min_ns") * 1e-9;
  const std::string coupling = f.string("coupling", "nv_projector");
  const Json& nuc = f.req("nuclei");
  f.finish();
  if (!(s.sys.omega_max > 0.0)) f.out_of_range("omega_max_mhz", "must be > 0");
  if (!(s.sys.delta_max > 0.0)) f.out_of_range("delta_max_mhz", "must be > 0");
  if (!(s.sys.t_min > 0.0)) f.out_of_range("t_min_ns", "must be > 0");
  if (coupling == "nv_projector") {
    s.sys.coupling = CouplingConvention::NvProjector;
  } else if (coupling == "symmetric") {
    s.sys.coupling = CouplingConvention::Symmetric;
  } else {
    f.fail(ErrorKind::UnknownTag, "coupling must be 'nv_projector' or 'symmetric'");
  }
  if (!nuc.is_array()) f.fail(ErrorKind::Parse, "'nuclei' must be an array");
  if (nuc.size() > 6) f.fail(ErrorKind::InvalidInput, "at most 6 nuclei are supported");
  for (std::size_t i = 0; i < nuc.size(); ++i) {
    Fields n(nuc[i], "system.nuclei[" + std::to_string(i) + "]");
    NuclearSpin spin;
    spin.a_zz = khz(n.number("a_zz_khz"));
    spin.a_zx = khz(n.number("a_zx_khz"));
    n.finish();
    s.sys.nuclei.push_back(spin);
  }
  s.sys.validate();
  return s;
}

SystemConfig load_system(const fs::path& path) { return parse_system(read_json_file(path)); }

Json to_json(const SystemConfig& s) {
  Json j;
  j["b_field_gauss"] = r15(s.b_field_gauss);
  j["gamma_i_khz_per_gauss"] = r15(s.gamma_i_khz_per_gauss);
  if (s.omega_i_given) j["omega_i_khz"] = r15(to_khz(s.sys.omega_i));
  j["omega_max_mhz"] = r15(to_mhz(s.sys.omega_max));
  j["delta_max_mhz"] = r15(to_mhz(s.sys.delta_max));
  j["t_min_ns"] = r15(to_ns(s.sys.t_min));
  j["coupling"] =
      s.sys.coupling == CouplingConvention::NvProjector ? "nv_projector" : "symmetric";
  j["nuclei"] = Json::array();
  for (const auto& n : s.sys.nuclei) {
    j["nuclei"].push_back({{"a_zz_khz", r15(to_khz(n.a_zz))}, {"a_zx_khz", r15(to_khz(n.a_zx))}});
  }
  return j;
}

ShapedPulse parse_pulse(const Json& j) {
  Fields f(j, "pulse");
  ShapedPulse p;
  p.dt = f.number("dt_ns") * 1e-9;
  const Json& sl = f.req("slices_mhz");
  p.target_theta = f.number("target_theta_rad");
  p.target_phi = f.number("target_phi_rad");
  f.finish();
  if (!(p.dt > 0.0)) f.out_of_range("dt_ns", "must be > 0");
  if (!sl.is_array() || sl.empty()) f.fail(ErrorKind::Parse, "'slices_mhz' must be a non-empty array");
  for (const auto& s : sl) {
    if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number()) {
      f.fail(ErrorKind::Parse, "each slice is a [ux, uy] pair in MHz");
    }
    const double ux = s[0].get<double>();
    const double uy = s[1].get<double>();
    if (!std::isfinite(ux) || !std::isfinite(uy)) f.out_of_range("slices_mhz", "must be finite");
    p.slices.push_back({mhz(ux), mhz(uy)});
  }
  return p;
}

ShapedPulse load_pulse(const fs::path& path) {
  try {
    return parse_pulse(read_json_file(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Io) throw;
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

Json to_json(const ShapedPulse& p) {
  Json j;
  j["dt_ns"] = r15(to_ns(p.dt));
  j["slices_mhz"] = Json::array();
  for (const auto& s : p.slices) j["slices_mhz"].push_back({r15(to_mhz(s.ux)), r15(to_mhz(s.uy))});
  j["target_theta_rad"] = r15(p.target_theta);
  j["target_phi_rad"] = r15(p.target_phi);
  return j;
}

RunConfig parse_config(const Json& j, const fs::path& base) {
  Fields f(j, "config");
  RunConfig c;
  f.opt("description");
  if (f.has("system_file") && f.has("system")) {
    f.fail(ErrorKind::InvalidInput, "give only one of 'system_file', 'system'");
  }
  if (const Json* sf = f.opt("system_file")) {
    if (!sf->is_string()) f.fail(ErrorKind::Parse, "'system_file' must be a string");
    c.system = load_system(resolve(base, sf->get<std::string>()));
  } else {
    c.system = parse_system(f.req("system"));
  }
  if (const Json* e = f.opt("error")) {
    Fields ef(*e, "config.error");
    c.error.eps1 = ef.number("eps1", 0.0);
    c.error.eps2 = ef.number("eps2", 0.0);
    ef.finish();
    if (!(c.error.eps2 > -1.0)) ef.out_of_range("eps2", "must be > -1");
  }
  c.seed = f.seed("seed");
  const long long threads = f.integer("threads", 0);
  if (threads < 0 || threads > 4096) f.out_of_range("threads", "must be in [0, 4096]");
  c.threads = static_cast<unsigned>(threads);
  if (const Json* s = f.opt("sequence")) c.sequence = parse_sequence(*s, base);
  if (const Json* g = f.opt("tau_grid")) {
    c.tau_grid = parse_grid(*g, "tau_grid", "start_ns", "stop_ns", 1e-9);
    if (!(c.tau_grid->start > 0.0)) f.out_of_range("tau_grid", "must start above 0");
  }
  if (const Json* g = f.opt("detuning_grid")) {
    c.detuning_grid = parse_grid(*g, "detuning_grid", "start_mhz", "stop_mhz", mhz(1.0));
  }
  if (const Json* g = f.opt("rabi_grid")) {
    c.rabi_grid = parse_grid(*g, "rabi_grid", "start_pct", "stop_pct", 0.01);
    if (!(c.rabi_grid->start > -1.0)) f.out_of_range("rabi_grid", "must stay above -100%");
  }
  if (const Json* o = f.opt("optimizer")) c.optimizer = parse_optimizer(*o, base);
  if (const Json* p = f.opt("pulsepol")) c.pulsepol = parse_pulsepol(*p, base);
  if (const Json* p = f.opt("profile")) c.profile = parse_profile(*p, base);
  f.finish();
  return c;
}

RunConfig load_config(const fs::path& path) {
  const fs::path base = fs::absolute(path).parent_path();
  return parse_config(read_json_file(path), base);
}

Json to_json(const RunConfig& c) {
  Json j;
  j["system"] = to_json(c.system);
  j["error"] = {{"eps1", r15(c.error.eps1)}, {"eps2", r15(c.error.eps2)}};
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  if (c.sequence) j["sequence"] = sequence_to_json(*c.sequence);
  if (c.tau_grid) j["tau_grid"] = grid_to_json(*c.tau_grid, "start_ns", "stop_ns", 1e-9);
  if (c.detuning_grid) {
    j["detuning_grid"] = grid_to_json(*c.detuning_grid, "start_mhz", "stop_mhz", mhz(1.0));
  }
  if (c.rabi_grid) j["rabi_grid"] = grid_to_json(*c.rabi_grid, "start_pct", "stop_pct", 0.01);
  if (c.optimizer) j["optimizer"] = optimizer_to_json(*c.optimizer);
  if (c.pulsepol) j["pulsepol"] = pulsepol_to_json(*c.pulsepol);
  if (c.profile) j["profile"] = profile_to_json(*c.profile);
  return j;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string spectrum_csv(const SpectrumResult& r) {
  std::string out = "tau_ns,omega_det_khz,p\n";
  for (const auto& pt : r.grid) {
    out += format_number(to_ns(pt.tau)) + "," + format_number(to_khz(pt.omega_det)) + "," +
           format_number(pt.p) + "\n";
  }
  return out;
}

std::string map_csv(const RobustnessMap& m) {
  std::string out = "detuning_mhz,rabi_dev_pct,value\n";
  for (std::size_t i = 0; i < m.detuning_axis.size(); ++i) {
    for (std::size_t k = 0; k < m.amplitude_axis.size(); ++k) {
      out += format_number(to_mhz(m.detuning_axis[i])) + "," +
             format_number(100.0 * m.amplitude_axis[k]) + "," + format_number(m.values[i][k]) +
             "\n";
    }
  }
  return out;
}

void write_atomic(const fs::path& path, const std::string& data) {
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::error_code ec;
  fs::create_directories(dir, ec);
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + tmp.string() + "'");
    out << data;
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp, ec);
      throw Error(ErrorKind::Io, "write failed for '" + tmp.string() + "'");
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::Io, "cannot rename onto '" + path.string() + "'");
  }
}

fs::path manifest_path(const fs::path& out) {
  fs::path m = out;
  m += ".manifest.json";
  return m;
}

Json manifest(const std::string& subcommand, const RunConfig& c, const Json& results) {
  Json j;
  j["software"] = kSoftwareVersion;
  j["subcommand"] = subcommand;
  j["seed"] = c.seed;
  j["config"] = to_json(c);
  j["results"] = results;
  return j;
}

Json error_report(const std::exception& e) {
  Json j;
  std::string kind = "internal";
  if (const auto* re = dynamic_cast<const Error*>(&e)) kind = std::string(to_string(re->kind()));
  j["error"] = {{"kind", kind}, {"message", e.what()}};
  return j;
}

}  // namespace robdd::harness
