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

#include "robdd/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "robdd/electron_blocks.hpp"
#include "robdd/error.hpp"
#include "robdd/parallel.hpp"
#include "robdd/rng.hpp"

namespace robdd {

namespace {

// Joint-space norm data that depends only on the bath.
struct NormContext {
  double delta_max = 0.0;
  double bath_dim = 1.0;
  double b2 = 0.0;  // ||B||_F^2
  double b4 = 0.0;  // ||B B||_F^2
  bool with_cross = false;

  NormContext(const SpinSystem& sys, const FitnessWeights& w) {
    delta_max = sys.delta_max;
    bath_dim = static_cast<double>(sys.bath_dim());
    const ComplexMatrix b = bath_coupling_nuclear_factor(sys);
    b2 = frobenius_norm_sq(b);
    b4 = frobenius_norm_sq(b * b);
    for (const auto& t : w.terms) {
      if (t.order() == 2 && kind(t.generators[0]) != kind(t.generators[1])) {
        with_cross = true;
      }
    }
  }

  static int kind(GeneratorTag g) { return g == GeneratorTag::Control ? kHc : kSz; }
  static int bath_power(GeneratorTag g) { return g == GeneratorTag::Bath ? 1 : 0; }
  double coeff_sq(GeneratorTag g) const {
    return g == GeneratorTag::Detuning ? delta_max * delta_max : 1.0;
  }
  double nuclear(int power) const {
    return power == 0 ? bath_dim : (power == 1 ? b2 : b4);
  }

  double raw(const ElectronDerivatives& d, const FitnessTerm& t) const {
    if (t.order() == 1) {
      const GeneratorTag g = t.generators[0];
      return coeff_sq(g) * d.d1[kind(g)].squaredNorm() * nuclear(bath_power(g));
    }
    const GeneratorTag g = t.generators[0];
    const GeneratorTag h = t.generators[1];
    return coeff_sq(g) * coeff_sq(h) * d.d2[kind(g)][kind(h)].squaredNorm() *
           nuclear(bath_power(g) + bath_power(h));
  }
};

double design_error(GeneratorTag g, const ErrorModel& err) {
  switch (g) {
    case GeneratorTag::Detuning: return err.eps1;
    case GeneratorTag::Control: return err.eps2;
    case GeneratorTag::Bath: return 1.0;
  }
  return 1.0;
}

Complex electron_overlap(const ElectronDerivatives& d, const RotationTarget& target) {
  return (d.u * rotation(target.theta, target.phi).adjoint()).trace();
}

double psi_from(const ElectronDerivatives& d, const RotationTarget& target,
                const NormContext& ctx, const ErrorModel& err,
                const FitnessWeights& w, PsiBreakdown* out) {
  const double f0 = std::abs(electron_overlap(d, target)) / 2.0;
  double psi = w.p0 * f0;
  const double dim = 2.0 * ctx.bath_dim;
  for (const auto& t : w.terms) {
    double e = 1.0;
    for (GeneratorTag g : t.generators) e *= design_error(g, err);
    const double f = e * e * ctx.raw(d, t) / dim;
    psi += t.weight * (1.0 - t.scale * f);
    if (out) out->f.push_back(f);
  }
  if (out) {
    out->f0 = f0;
    out->psi = psi;
  }
  return psi;
}

double penalty(const ShapedPulse& p, const NormContext& ctx, const FitnessWeights& w) {
  if (w.terms.empty()) return 0.0;
  const ElectronDerivatives d = electron_derivatives(p, ctx.with_cross);
  double s = 0.0;
  for (const auto& t : w.terms) s += t.weight * ctx.raw(d, t);
  return s;
}

double phi_value(const ShapedPulse& p, const RotationTarget& target,
                 const NormContext& ctx, const FitnessWeights& w) {
  const ElectronDerivatives d = electron_derivatives(p, ctx.with_cross);
  const double tr = std::abs(electron_overlap(d, target)) * ctx.bath_dim;
  double s = tr * tr;
  for (const auto& t : w.terms) s -= t.weight * ctx.raw(d, t);
  return s;
}

std::vector<double> to_genes(const ShapedPulse& p, double omega_max) {
  std::vector<double> x(2 * p.slices.size());
  for (std::size_t l = 0; l < p.slices.size(); ++l) {
    x[2 * l] = p.slices[l].ux / omega_max;
    x[2 * l + 1] = p.slices[l].uy / omega_max;
  }
  return x;
}

ShapedPulse from_genes(const std::vector<double>& x, double dt,
                       const RotationTarget& target, double omega_max) {
  ShapedPulse p;
  p.dt = dt;
  p.target_theta = target.theta;
  p.target_phi = target.phi;
  p.slices.resize(x.size() / 2);
  for (std::size_t l = 0; l < p.slices.size(); ++l) {
    p.slices[l] = {x[2 * l] * omega_max, x[2 * l + 1] * omega_max};
  }
  return clip_amplitudes(p, omega_max);
}

void project_disc(std::vector<double>& x) {
  for (std::size_t l = 0; l + 1 < x.size(); l += 2) {
    const double a = std::hypot(x[l], x[l + 1]);
    if (a > 1.0) {
      x[l] /= a;
      x[l + 1] /= a;
    }
  }
}

void require_finite(double v, const char* where) {
  if (!std::isfinite(v)) {
    throw Error(ErrorKind::NonFinite, std::string(where) + ": non-finite fitness");
  }
}

}  // namespace

std::string FitnessTerm::label() const {
  std::string s = "d" + std::to_string(order()) + ":";
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (i) s += ",";
    s += to_string(generators[i]);
  }
  return s;
}

FitnessWeights FitnessWeights::published() {
  using G = GeneratorTag;
  FitnessWeights w;
  w.p0 = 0.5;
  const double p = 1.0 / 12.0;
  w.terms = {
      {{G::Detuning}, p, 1e2},
      {{G::Control}, p, 1e3},
      {{G::Bath}, p, 1e3},
      {{G::Detuning, G::Detuning}, p, 1e4},
      {{G::Control, G::Control}, p, 1e5},
      {{G::Bath, G::Bath}, p, 1e5},
  };
  return w;
}

void FitnessWeights::validate() const {
  if (!(p0 > 0.0) || !std::isfinite(p0)) {
    throw Error(ErrorKind::InvalidInput, "fitness weights: p0 must be positive");
  }
  for (const auto& t : terms) {
    if (t.order() < 1 || t.order() > 2) {
      throw Error(ErrorKind::InvalidInput, "fitness weights: term order must be 1 or 2");
    }
    if (!(t.weight >= 0.0) || !(t.scale >= 0.0) || !std::isfinite(t.weight) ||
        !std::isfinite(t.scale)) {
      throw Error(ErrorKind::InvalidInput,
                  "fitness weights: weights and scales must be finite and >= 0");
    }
  }
}

std::vector<double> term_norms(const ShapedPulse& p, const SpinSystem& sys,
                               const FitnessWeights& weights) {
  weights.validate();
  const NormContext ctx(sys, weights);
  const ElectronDerivatives d = electron_derivatives(p, ctx.with_cross);
  std::vector<double> out;
  out.reserve(weights.terms.size());
  for (const auto& t : weights.terms) out.push_back(ctx.raw(d, t));
  return out;
}

double fitness_phi(const ShapedPulse& p, const RotationTarget& target,
                   const SpinSystem& sys, const FitnessWeights& weights) {
  weights.validate();
  return phi_value(p, target, NormContext(sys, weights), weights);
}

PsiBreakdown psi_breakdown(const ShapedPulse& p, const RotationTarget& target,
                           const SpinSystem& sys, const ErrorModel& err,
                           const FitnessWeights& weights) {
  weights.validate();
  const NormContext ctx(sys, weights);
  PsiBreakdown out;
  psi_from(electron_derivatives(p, ctx.with_cross), target, ctx, err, weights, &out);
  return out;
}

double fitness_psi(const ShapedPulse& p, const RotationTarget& target,
                   const SpinSystem& sys, const ErrorModel& err,
                   const FitnessWeights& weights) {
  return psi_breakdown(p, target, sys, err, weights).psi;
}

FitnessWeights phi_weights_from_psi(const FitnessWeights& psi, const ErrorModel& err,
                                    const SpinSystem& sys) {
  psi.validate();
  FitnessWeights out;
  out.p0 = 1.0;
  const double d = static_cast<double>(sys.dim());
  for (FitnessTerm t : psi.terms) {
    double e = 1.0;
    for (GeneratorTag g : t.generators) e *= design_error(g, err);
    t.weight = 4.0 * d * t.weight * t.scale * e * e;
    t.scale = 1.0;
    out.terms.push_back(t);
  }
  return out;
}

std::map<std::string, double> standard_norms(const ShapedPulse& p,
                                             const SpinSystem& sys) {
  using G = GeneratorTag;
  FitnessWeights w;
  w.terms = {{{G::Detuning}, 1, 1},           {{G::Control}, 1, 1},
             {{G::Bath}, 1, 1},               {{G::Detuning, G::Detuning}, 1, 1},
             {{G::Control, G::Control}, 1, 1}, {{G::Bath, G::Bath}, 1, 1}};
  const std::vector<double> n = term_norms(p, sys, w);
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < n.size(); ++i) out[w.terms[i].label()] = n[i];
  return out;
}

std::vector<double> fidelity_gradient(const ShapedPulse& p,
                                      const RotationTarget& target,
                                      const SpinSystem& sys, GradientRule rule) {
  const std::size_t n = p.slices.size();
  const Matrix2c r = rotation(target.theta, target.phi);
  const Matrix2c ra = r.adjoint();
  std::vector<std::array<Matrix2c, 2>> jac;
  Matrix2c u = Matrix2c::Identity();
  if (rule == GradientRule::Exact) {
    jac = propagator_jacobian(p);
    for (const auto& sl : p.slices) u = Matrix2c(qubit_step(sl.ux, sl.uy, 0.0, p.dt)) * u;
  } else {
    Matrix2c sx;
    sx << 0.0, 0.5, 0.5, 0.0;
    Matrix2c sy;
    sy << 0.0, Complex(0.0, -0.5), Complex(0.0, 0.5), 0.0;
    std::vector<Matrix2c> step(n);
    for (std::size_t l = 0; l < n; ++l) {
      step[l] = qubit_step(p.slices[l].ux, p.slices[l].uy, 0.0, p.dt);
    }
    std::vector<Matrix2c> before(n, Matrix2c::Identity());
    std::vector<Matrix2c> after(n, Matrix2c::Identity());
    for (std::size_t l = 1; l < n; ++l) before[l] = step[l - 1] * before[l - 1];
    for (std::size_t l = n; l-- > 1;) after[l - 1] = after[l] * step[l];
    jac.resize(n);
    const Complex mi(0.0, -p.dt);
    for (std::size_t l = 0; l < n; ++l) {
      jac[l][0] = after[l] * (mi * sx * step[l]) * before[l];
      jac[l][1] = after[l] * (mi * sy * step[l]) * before[l];
    }
    if (n) u = after[0] * step[0];
  }
  const double bath = static_cast<double>(sys.bath_dim());
  const Complex t = (u * ra).trace();
  std::vector<double> g(2 * n);
  for (std::size_t l = 0; l < n; ++l) {
    for (int c = 0; c < 2; ++c) {
      const Complex dt = (jac[l][c] * ra).trace();
      g[2 * l + c] = 2.0 * bath * bath * (std::conj(t) * dt).real() * sys.omega_max;
    }
  }
  return g;
}

std::vector<double> phi_gradient(const ShapedPulse& p, const RotationTarget& target,
                                 const SpinSystem& sys, const FitnessWeights& weights,
                                 GradientRule rule, double fd_step) {
  std::vector<double> g = fidelity_gradient(p, target, sys, rule);
  if (weights.terms.empty()) return g;
  const NormContext ctx(sys, weights);
  const double h = fd_step * sys.omega_max;
  ShapedPulse q = p;
  for (std::size_t l = 0; l < p.slices.size(); ++l) {
    for (int c = 0; c < 2; ++c) {
      double& v = c == 0 ? q.slices[l].ux : q.slices[l].uy;
      const double v0 = v;
      v = v0 + h;
      const double up = penalty(q, ctx, weights);
      v = v0 - h;
      const double down = penalty(q, ctx, weights);
      v = v0;
      g[2 * l + c] -= (up - down) / (2.0 * fd_step);
    }
  }
  return g;
}

ShapedPulse smoothed_random_pulse(std::size_t slices, double dt,
                                  const RotationTarget& target,
                                  double omega_max, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(2 * slices);
  for (double& v : x) v = rng.uniform(-0.1, 0.1);
  std::vector<double> s(x.size());
  for (std::size_t l = 0; l < slices; ++l) {
    for (int c = 0; c < 2; ++c) {
      double sum = 0.0;
      int count = 0;
      for (std::size_t k = (l ? l - 1 : 0); k <= std::min(slices - 1, l + 1); ++k) {
        sum += x[2 * k + c];
        ++count;
      }
      s[2 * l + c] = sum / count;
    }
  }
  return from_genes(s, dt, target, omega_max);
}

OptimizationResult grape_optimize(const ShapedPulse& init,
                                  const RotationTarget& target,
                                  const SpinSystem& sys,
                                  const FitnessWeights& weights,
                                  const GrapeConfig& cfg) {
  sys.validate();
  weights.validate();
  if (cfg.max_iters <= 0) {
    throw Error(ErrorKind::InvalidInput, "grape: max_iters must be positive");
  }
  if (init.dt < sys.t_min * (1.0 - 1e-12)) {
    throw Error(ErrorKind::BoundViolation, "grape: dt below t_min");
  }
  if (init.peak_amplitude() > sys.omega_max * (1.0 + 1e-9)) {
    throw Error(ErrorKind::BoundViolation, "grape: initial pulse exceeds omega_max");
  }
  const NormContext ctx(sys, weights);
  auto eval = [&](const std::vector<double>& x, ShapedPulse* out) {
    ShapedPulse p = from_genes(x, init.dt, target, sys.omega_max);
    const double f = phi_value(p, target, ctx, weights);
    require_finite(f, "grape");
    if (out) *out = std::move(p);
    return f;
  };
  auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
  };

  OptimizationResult res;
  std::vector<double> x = to_genes(clip_amplitudes(init, sys.omega_max), sys.omega_max);
  ShapedPulse cur;
  double f = eval(x, &cur);
  std::vector<double> g = phi_gradient(cur, target, sys, weights, cfg.rule, cfg.fd_step);
  std::vector<double> d = g;
  double step = cfg.initial_step;
  for (int it = 0; it < cfg.max_iters; ++it) {
    if (std::sqrt(dot(g, g)) < cfg.grad_tol || f >= cfg.target_fitness) {
      res.converged = true;
      break;
    }
    bool accepted = false;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      double a = step;
      for (int ls = 0; ls < cfg.max_line_search; ++ls) {
        std::vector<double> trial(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) trial[k] = x[k] + a * d[k];
        project_disc(trial);
        ShapedPulse p;
        const double ft = eval(trial, &p);
        if (ft > f) {
          x = std::move(trial);
          f = ft;
          cur = std::move(p);
          step = a * cfg.step_grow;
          accepted = true;
          break;
        }
        a *= cfg.step_shrink;
      }
      if (!accepted) {
        // Fall back to plain gradient before giving up.
        d = g;
        step = cfg.initial_step;
      }
    }
    ++res.iterations;
    res.fitness_history.push_back(f);
    if (!accepted) {
      res.converged = true;
      break;
    }
    std::vector<double> gn =
        phi_gradient(cur, target, sys, weights, cfg.rule, cfg.fd_step);
    double beta = 0.0;
    if (cfg.direction == SearchDirection::ConjugateGradient) {
      const double gg = dot(g, g);
      if (gg > 0.0) {
        double num = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) num += gn[k] * (gn[k] - g[k]);
        beta = std::max(0.0, num / gg);
      }
    }
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = gn[k] + beta * d[k];
    if (dot(d, gn) <= 0.0) d = gn;
    g = std::move(gn);
  }
  res.pulse = cur;
  res.final_norms = standard_norms(cur, sys);
  return res;
}

OptimizationResult de_optimize(const RotationTarget& target, const SpinSystem& sys,
                               const ErrorModel& err, const FitnessWeights& weights,
                               const DeConfig& cfg) {
  sys.validate();
  weights.validate();
  if (cfg.population_ps < 5) {
    throw Error(ErrorKind::InvalidInput, "de: population_ps must be at least 5");
  }
  if (cfg.chromosome_len_p <= 0 || cfg.chromosome_len_p % 2 != 0) {
    throw Error(ErrorKind::InvalidInput,
                "de: chromosome_len_p must be a positive even number");
  }
  if (cfg.max_iters < 0 || !(cfg.crossover_cr >= 0.0 && cfg.crossover_cr <= 1.0) ||
      !std::isfinite(cfg.scale_r)) {
    throw Error(ErrorKind::InvalidInput, "de: invalid configuration");
  }
  if (!(cfg.dt >= sys.t_min * (1.0 - 1e-12))) {
    throw Error(ErrorKind::BoundViolation, "de: dt below t_min");
  }
  const NormContext ctx(sys, weights);
  const std::size_t ps = static_cast<std::size_t>(cfg.population_ps);
  const std::size_t len = static_cast<std::size_t>(cfg.chromosome_len_p);
  auto fitness = [&](const std::vector<double>& x) {
    const ShapedPulse p = from_genes(x, cfg.dt, target, sys.omega_max);
    const double f =
        psi_from(electron_derivatives(p, ctx.with_cross), target, ctx, err, weights,
                 nullptr);
    require_finite(f, "de");
    return f;
  };

  Rng rng(cfg.seed);
  std::vector<std::vector<double>> pop(ps, std::vector<double>(len));
  for (auto& ind : pop) {
    for (double& v : ind) v = rng.uniform(-1.0, 1.0);
    project_disc(ind);
  }
  std::vector<double> fit(ps);
  parallel_for(ps, cfg.threads, [&](std::size_t i) { fit[i] = fitness(pop[i]); });
  auto best_index = [&] {
    return static_cast<std::size_t>(std::max_element(fit.begin(), fit.end()) -
                                    fit.begin());
  };
  std::size_t best = best_index();

  OptimizationResult res;
  res.seed = cfg.seed;
  res.rng = std::string(Rng::kName);
  std::vector<std::vector<double>> trials(ps, std::vector<double>(len));
  std::vector<double> trial_fit(ps);
  for (int gen = 0; gen < cfg.max_iters; ++gen) {
    if (fit[best] >= cfg.target_fitness) break;
    for (std::size_t i = 0; i < ps; ++i) {
      std::size_t r[4];
      for (int k = 0; k < 4; ++k) {
        std::size_t c;
        do {
          c = rng.index(ps);
        } while (c == best || std::find(r, r + k, c) != r + k);
        r[k] = c;
      }
      const std::size_t j_rand = rng.index(len);
      auto& t = trials[i];
      for (std::size_t j = 0; j < len; ++j) {
        const double u = rng.uniform();
        if (u <= cfg.crossover_cr || j == j_rand) {
          t[j] = pop[best][j] +
                 cfg.scale_r * (pop[r[0]][j] - pop[r[1]][j] + pop[r[2]][j] - pop[r[3]][j]);
        } else {
          t[j] = pop[i][j];
        }
      }
      project_disc(t);
    }
    parallel_for(ps, cfg.threads, [&](std::size_t i) { trial_fit[i] = fitness(trials[i]); });
    for (std::size_t i = 0; i < ps; ++i) {
      if (trial_fit[i] >= fit[i]) {
        pop[i].swap(trials[i]);
        fit[i] = trial_fit[i];
      }
    }
    best = best_index();
    ++res.iterations;
    res.fitness_history.push_back(fit[best]);
    if (cfg.progress) cfg.progress(gen + 1, fit[best]);
  }
  res.converged = fit[best] >= cfg.target_fitness;
  res.pulse = from_genes(pop[best], cfg.dt, target, sys.omega_max);
  res.final_norms = standard_norms(res.pulse, sys);
  return res;
}

}  // namespace robdd
