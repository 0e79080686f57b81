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

// Robust pulse search.
//
// Two objectives are provided:
//
//   phi = |Tr(U_C R^dagger)|^2 - sum_i mu_i ||D_i||_F^2
//
// in raw (unnormalized) trace units, used by GRAPE, and
//
//   psi = p0 f0 + sum_i p_i (1 - alpha_i f_i)
//
// with f0 = |Tr(U_C R^dagger)| / d and f_i = ||eps^m D_i^(m)||_F^2 / d, used by
// differential evolution. eps^m is the product of the design error
// magnitudes of the term's generators (eps1 for detuning, eps2 for control,
// 1 for the bath coupling), so f_i is the squared size of the term's
// contribution to the Dyson expansion at the design error point.

#ifndef ROBDD_OPTIMIZER_HPP_
#define ROBDD_OPTIMIZER_HPP_

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "robdd/pulse.hpp"
#include "robdd/system.hpp"
#include "robdd/vanloan.hpp"

namespace robdd {

struct RotationTarget {
  double theta = kPi;
  double phi = 0.0;
};

struct FitnessTerm {
  // One tag for a first-order term, an ordered pair for a second-order one.
  std::vector<GeneratorTag> generators;
  double weight = 0.0;  // p_i (psi) or mu_i (phi)
  double scale = 1.0;   // alpha_i (psi only)

  int order() const { return static_cast<int>(generators.size()); }
  // "d1:v1", "d2:v1,v1", ...
  std::string label() const;
};

struct FitnessWeights {
  double p0 = 0.5;
  std::vector<FitnessTerm> terms;

  // p0 = 1/2, p_i = 1/12, alpha = {1e2, 1e3, 1e3, 1e4, 1e5, 1e5} over
  // D1(V1), D1(V2), D1(H_SE), D2(V1,V1), D2(V2,V2), D2(H_SE,H_SE).
  static FitnessWeights published();

  // Throws ErrorKind::InvalidInput on negative weights, p0 <= 0 or an order
  // outside {1, 2}.
  void validate() const;
};

// Raw ||D||_F^2 on the joint space of sys, one entry per weights.terms.
std::vector<double> term_norms(const ShapedPulse& p, const SpinSystem& sys,
                               const FitnessWeights& weights);

double fitness_phi(const ShapedPulse& p, const RotationTarget& target,
                   const SpinSystem& sys, const FitnessWeights& weights);

struct PsiBreakdown {
  double f0 = 0.0;
  std::vector<double> f;  // per term
  double psi = 0.0;
};

PsiBreakdown psi_breakdown(const ShapedPulse& p, const RotationTarget& target,
                           const SpinSystem& sys, const ErrorModel& err,
                           const FitnessWeights& weights);

double fitness_psi(const ShapedPulse& p, const RotationTarget& target,
                   const SpinSystem& sys, const ErrorModel& err,
                   const FitnessWeights& weights);

struct OptimizationResult {
  ShapedPulse pulse;
  std::vector<double> fitness_history;  // best fitness after each iteration
  std::map<std::string, double> final_norms;
  bool converged = false;
  int iterations = 0;
  std::uint64_t seed = 0;
  std::string rng;
};

enum class GradientRule {
  // dU_l/du ~ -i dt H_u U_l
  FirstOrder,
  // exact per-slice Frechet derivative of exp
  Exact,
};

enum class SearchDirection { Steepest, ConjugateGradient };

struct GrapeConfig {
  int max_iters = 500;
  double initial_step = 1e-3;  // in units of omega_max per unit gradient
  double step_shrink = 0.5;
  double step_grow = 2.0;
  int max_line_search = 40;
  double grad_tol = 1e-9;
  double target_fitness = std::numeric_limits<double>::infinity();
  double fd_step = 1e-6;  // central-difference step, units of omega_max
  GradientRule rule = GradientRule::Exact;
  SearchDirection direction = SearchDirection::ConjugateGradient;
};

// Gradient of phi with respect to the slice amplitudes in units of
// omega_max: out[2l] = d/d(ux[l]/omega_max), out[2l+1] likewise for uy.
// The fidelity part uses `rule`; derivative-norm parts use central
// differences of step fd_step.
std::vector<double> phi_gradient(const ShapedPulse& p, const RotationTarget& target,
                                 const SpinSystem& sys, const FitnessWeights& weights,
                                 GradientRule rule, double fd_step);

// Gradient of the fidelity term |Tr(U_C R^dagger)|^2 alone.
std::vector<double> fidelity_gradient(const ShapedPulse& p,
                                      const RotationTarget& target,
                                      const SpinSystem& sys, GradientRule rule);

// Gradient ascent on phi with backtracking line search. Amplitudes are
// clipped to omega_max after every update. Throws ErrorKind::NonFinite if
// the fitness becomes non-finite.
OptimizationResult grape_optimize(const ShapedPulse& init,
                                  const RotationTarget& target,
                                  const SpinSystem& sys,
                                  const FitnessWeights& weights,
                                  const GrapeConfig& cfg);

// Smoothed random start: uniform in [-0.1, 0.1] omega_max per quadrature,
// then a 3-point moving average.
ShapedPulse smoothed_random_pulse(std::size_t slices, double dt,
                                  const RotationTarget& target,
                                  double omega_max, std::uint64_t seed);

struct DeConfig {
  double scale_r = 0.6;
  double crossover_cr = 0.95;
  int chromosome_len_p = 80;  // 2 x slices
  int population_ps = 60;
  int max_iters = 1000;
  double target_fitness = 0.999;
  std::uint64_t seed = 1;
  double dt = 2e-9;
  unsigned threads = 1;
  // Called after every generation with (generation, best fitness).
  std::function<void(int, double)> progress;
};

// DE/best/2 with binomial crossover and greedy selection over the psi
// fitness. Individuals are the slice quadratures in units of omega_max,
// [ux_0, uy_0, ux_1, uy_1, ...], projected onto the amplitude disc after
// mutation and crossover. Trials for a generation are drawn before any is
// evaluated, so the result depends only on the seed, not on `threads`.
// Throws ErrorKind::InvalidInput if population_ps < 5 or the chromosome
// length is odd.
OptimizationResult de_optimize(const RotationTarget& target, const SpinSystem& sys,
                               const ErrorModel& err, const FitnessWeights& weights,
                               const DeConfig& cfg);

// Phi weights whose optimum matches psi near a perfect pulse:
// mu_i = 4 d p_i alpha_i eps^(2m), with |Tr|/d ~ (|Tr|^2/d^2 + 1)/2.
FitnessWeights phi_weights_from_psi(const FitnessWeights& psi, const ErrorModel& err,
                                    const SpinSystem& sys);

// Label -> raw ||D||_F^2 for the first- and second-order detuning, control
// and bath terms (diagonal pairs).
std::map<std::string, double> standard_norms(const ShapedPulse& p,
                                             const SpinSystem& sys);

}  // namespace robdd

#endif  // ROBDD_OPTIMIZER_HPP_
