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


#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "harness/config.hpp"
#include "oracles.hpp"
#include "robdd/error.hpp"
#include "robdd/optimizer.hpp"

namespace robdd {
namespace {

SpinSystem electron() {
  SpinSystem s;
  s.omega_max = mhz(25);
  s.delta_max = mhz(25);
  s.t_min = 1e-9;
  s.omega_i = khz(428.4);
  return s;
}

SpinSystem bounding() {
  SpinSystem s = electron();
  s.nuclei = {{khz(42.84), khz(42.84)}};
  return s;
}

ShapedPulse square_on_grid(double theta, double dt) {
  return square_pulse(theta, 0.0, mhz(25), dt);
}

TEST(Fitness, PerfectQubitPulse) {
  const SpinSystem s = electron();
  FitnessWeights w;
  w.p0 = 1.0;
  EXPECT_NEAR(fitness_phi(square_on_grid(kPi, 1e-9), {kPi, 0}, s, w), 4.0, 1e-12);
}

TEST(Fitness, ZeroPulseForPiTarget) {
  const SpinSystem s = electron();
  ShapedPulse p;
  p.dt = 2e-9;
  p.slices.assign(10, {0.0, 0.0});
  EXPECT_NEAR(fitness_phi(p, {kPi, 0}, s, FitnessWeights{}), 0.0, 1e-12);
}

TEST(Fitness, PenaltyLowersPhi) {
  const SpinSystem s = electron();
  const ShapedPulse p = square_on_grid(kPi, 1e-9);
  FitnessWeights w;
  const double base = fitness_phi(p, {kPi, 0}, s, w);
  w.terms.push_back({{GeneratorTag::Detuning}, 0.1, 1.0});
  EXPECT_LT(fitness_phi(p, {kPi, 0}, s, w), base);
  EXPECT_NEAR(base - fitness_phi(p, {kPi, 0}, s, w), 0.1 * 2.0, 1e-9);
}

TEST(Fitness, PsiMatchesGenericNorms) {
  const SpinSystem s = bounding();
  const ErrorModel err{0.08, 0.08};
  Rng rng(3);
  const ShapedPulse p = oracle::random_pulse(40, 2e-9, s.omega_max, rng);
  const FitnessWeights w = FitnessWeights::published();
  const PsiBreakdown b = psi_breakdown(p, {kPi, 0}, s, err, w);

  const ComplexMatrix u = pulse_propagator(p, s, {}, false);
  const ComplexMatrix r = kron(rotation(kPi, 0), identity(s.bath_dim()));
  const double f0 = std::abs((u * r.adjoint()).trace()) / s.dim();
  EXPECT_NEAR(b.f0, f0, 1e-12);
  double psi = w.p0 * f0;
  for (std::size_t i = 0; i < w.terms.size(); ++i) {
    const auto& g = w.terms[i].generators;
    const BlockPropagation blk = propagate_block(p, s, g[0], g.back());
    double e = 1.0;
    for (GeneratorTag t : g) e *= t == GeneratorTag::Detuning ? err.eps1
                                  : t == GeneratorTag::Control ? err.eps2 : 1.0;
    const double f = e * e * frobenius_norm_sq(g.size() == 1 ? blk.d1_first : blk.d2) / s.dim();
    EXPECT_NEAR(b.f[i], f, 1e-10 * (1 + f)) << w.terms[i].label();
    psi += w.terms[i].weight * (1.0 - w.terms[i].scale * f);
  }
  EXPECT_NEAR(b.psi, psi, 1e-10);
}

TEST(Fitness, PublishedWeights) {
  const FitnessWeights w = FitnessWeights::published();
  EXPECT_EQ(w.p0, 0.5);
  ASSERT_EQ(w.terms.size(), 6u);
  const double alpha[6] = {1e2, 1e3, 1e3, 1e4, 1e5, 1e5};
  const char* labels[6] = {"d1:v1", "d1:v2", "d1:hse", "d2:v1,v1", "d2:v2,v2", "d2:hse,hse"};
  for (int i = 0; i < 6; ++i) {
    EXPECT_DOUBLE_EQ(w.terms[i].weight, 1.0 / 12.0);
    EXPECT_EQ(w.terms[i].scale, alpha[i]);
    EXPECT_EQ(w.terms[i].label(), labels[i]);
  }
  FitnessWeights bad = w;
  bad.terms[0].weight = -1;
  EXPECT_THROW(bad.validate(), Error);
}

TEST(Fitness, PhiWeightsFromPsi) {
  const SpinSystem s = bounding();
  const FitnessWeights phi =
      phi_weights_from_psi(FitnessWeights::published(), {0.1, 0.2}, s);
  EXPECT_EQ(phi.p0, 1.0);
  EXPECT_NEAR(phi.terms[0].weight, 4.0 * 4 / 12.0 * 1e2 * 0.01, 1e-12);
  EXPECT_NEAR(phi.terms[4].weight, 4.0 * 4 / 12.0 * 1e5 * 0.2 * 0.2 * 0.2 * 0.2, 1e-9);
  EXPECT_NEAR(phi.terms[2].weight, 4.0 * 4 / 12.0 * 1e3, 1e-9);
}

TEST(Gradient, ExactMatchesFiniteDifference) {
  const SpinSystem s = electron();
  Rng rng(4);
  const ShapedPulse p = oracle::random_pulse(12, 2e-9, 0.6 * s.omega_max, rng);
  const std::vector<double> g = fidelity_gradient(p, {kPi, 0}, s, GradientRule::Exact);
  const std::vector<double> g1 = fidelity_gradient(p, {kPi, 0}, s, GradientRule::FirstOrder);
  const double h = 1e-6;
  double num = 0, den = 0, num1 = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    ShapedPulse a = p, b = p;
    double& xa = k % 2 ? a.slices[k / 2].uy : a.slices[k / 2].ux;
    double& xb = k % 2 ? b.slices[k / 2].uy : b.slices[k / 2].ux;
    xa += h * s.omega_max;
    xb -= h * s.omega_max;
    const FitnessWeights w;
    const double fd = (fitness_phi(a, {kPi, 0}, s, w) - fitness_phi(b, {kPi, 0}, s, w)) / (2 * h);
    num += (g[k] - fd) * (g[k] - fd);
    num1 += (g1[k] - fd) * (g1[k] - fd);
    den += fd * fd;
  }
  EXPECT_LT(std::sqrt(num / den), 1e-3);
  // the first-order rule is only an approximation
  EXPECT_GT(std::sqrt(num1 / den), std::sqrt(num / den));
}

TEST(Gradient, PhiIncludesPenalty) {
  const SpinSystem s = electron();
  Rng rng(5);
  const ShapedPulse p = oracle::random_pulse(6, 2e-9, 0.6 * s.omega_max, rng);
  FitnessWeights w;
  w.terms.push_back({{GeneratorTag::Detuning}, 0.05, 1.0});
  w.terms.push_back({{GeneratorTag::Control, GeneratorTag::Control}, 0.01, 1.0});
  const std::vector<double> g = phi_gradient(p, {kPi, 0}, s, w, GradientRule::Exact, 1e-6);
  const double h = 1e-5;
  for (std::size_t k = 0; k < g.size(); k += 3) {
    ShapedPulse a = p, b = p;
    (k % 2 ? a.slices[k / 2].uy : a.slices[k / 2].ux) += h * s.omega_max;
    (k % 2 ? b.slices[k / 2].uy : b.slices[k / 2].ux) -= h * s.omega_max;
    const double fd = (fitness_phi(a, {kPi, 0}, s, w) - fitness_phi(b, {kPi, 0}, s, w)) / (2 * h);
    EXPECT_NEAR(g[k], fd, 1e-5 * (1 + std::abs(fd)));
  }
}

TEST(Grape, OptimalInputStops) {
  const SpinSystem s = electron();
  GrapeConfig cfg;
  cfg.grad_tol = 1e-6;
  const OptimizationResult r =
      grape_optimize(square_on_grid(kPi, 2e-9), {kPi, 0}, s, FitnessWeights{}, cfg);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iterations, 2);
  EXPECT_NEAR(fitness_phi(r.pulse, {kPi, 0}, s, FitnessWeights{}), 4.0, 1e-9);
}

TEST(Grape, ImprovesRandomStart) {
  const SpinSystem s = electron();
  const ShapedPulse init = smoothed_random_pulse(20, 2e-9, {kPi / 2, kPi / 2}, s.omega_max, 9);
  GrapeConfig cfg;
  cfg.max_iters = 200;
  cfg.initial_step = 0.01;
  const OptimizationResult r = grape_optimize(init, {kPi / 2, kPi / 2}, s, FitnessWeights{}, cfg);
  for (std::size_t i = 1; i < r.fitness_history.size(); ++i) {
    EXPECT_GE(r.fitness_history[i], r.fitness_history[i - 1]);
  }
  EXPECT_GT(r.fitness_history.back(), 3.99);
  EXPECT_LE(r.pulse.peak_amplitude(), s.omega_max * (1 + 1e-12));
}

DeConfig small_de() {
  DeConfig c;
  c.chromosome_len_p = 16;
  c.population_ps = 12;
  c.max_iters = 15;
  c.target_fitness = 2.0;
  c.seed = 17;
  return c;
}

TEST(De, DeterministicAndBounded) {
  const SpinSystem s = electron();
  const ErrorModel err{0.08, 0.08};
  const FitnessWeights w = FitnessWeights::published();
  DeConfig c = small_de();
  const OptimizationResult a = de_optimize({kPi, 0}, s, err, w, c);
  const OptimizationResult b = de_optimize({kPi, 0}, s, err, w, c);
  c.threads = 3;
  const OptimizationResult t = de_optimize({kPi, 0}, s, err, w, c);
  EXPECT_EQ(a.pulse, b.pulse);
  EXPECT_EQ(a.pulse, t.pulse);
  EXPECT_EQ(a.fitness_history, t.fitness_history);
  ASSERT_EQ(a.fitness_history.size(), 15u);
  for (std::size_t i = 1; i < a.fitness_history.size(); ++i) {
    EXPECT_GE(a.fitness_history[i], a.fitness_history[i - 1]);
  }
  for (const auto& sl : a.pulse.slices) {
    EXPECT_LE(std::hypot(sl.ux, sl.uy), s.omega_max * (1 + 1e-12));
  }
  EXPECT_EQ(a.pulse.slices.size(), 8u);
  EXPECT_EQ(a.seed, 17u);
  EXPECT_FALSE(a.rng.empty());
  EXPECT_NEAR(fitness_psi(a.pulse, {kPi, 0}, s, err, w), a.fitness_history.back(), 1e-12);
}

TEST(De, RejectsBadConfig) {
  const SpinSystem s = electron();
  DeConfig c = small_de();
  c.population_ps = 4;
  EXPECT_THROW(de_optimize({kPi, 0}, s, {}, FitnessWeights::published(), c), Error);
  c = small_de();
  c.chromosome_len_p = 15;
  EXPECT_THROW(de_optimize({kPi, 0}, s, {}, FitnessWeights::published(), c), Error);
}

TEST(De, SeedChangesResult) {
  const SpinSystem s = electron();
  DeConfig c = small_de();
  const OptimizationResult a = de_optimize({kPi, 0}, s, {0.08, 0.08}, FitnessWeights::published(), c);
  c.seed = 18;
  const OptimizationResult b = de_optimize({kPi, 0}, s, {0.08, 0.08}, FitnessWeights::published(), c);
  EXPECT_FALSE(a.pulse == b.pulse);
}

// The shipped optimized pulses against square pulses of equal duration.
TEST(Shipped, BeatsSameDurationSquare) {
  const SpinSystem s = electron();
  for (const char* name : {"roc_pi.json", "roc_pi2.json"}) {
    const ShapedPulse roc =
        harness::load_pulse(std::string(ROBDD_SOURCE_DIR) + "/configs/pulses/" + name);
    const double omega = roc.target_theta / roc.duration();
    const ShapedPulse sq = square_pulse(roc.target_theta, roc.target_phi, omega, roc.dt);
    EXPECT_NEAR(sq.duration(), roc.duration(), 1e-15);
    const auto nr = standard_norms(roc, s);
    const auto ns = standard_norms(sq, s);
    EXPECT_LT(nr.at("d1:v1"), ns.at("d1:v1")) << name;
    EXPECT_LT(nr.at("d1:v2"), ns.at("d1:v2")) << name;
    const ComplexMatrix u = electron_pulse_propagator(roc, s.delta_max, {});
    EXPECT_GT(unitary_fidelity(u, rotation(roc.target_theta, roc.target_phi)), 0.995) << name;
  }
}

}  // namespace
}  // namespace robdd
