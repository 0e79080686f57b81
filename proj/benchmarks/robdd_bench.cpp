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


#include <benchmark/benchmark.h>

#include <cmath>

#include "robdd/experiments.hpp"
#include "robdd/linalg.hpp"
#include "robdd/optimizer.hpp"
#include "robdd/rng.hpp"
#include "robdd/sequences.hpp"
#include "robdd/vanloan.hpp"

namespace {

using namespace robdd;

SpinSystem system_with(int nuclei) {
  SpinSystem s;
  s.omega_max = mhz(25);
  s.delta_max = mhz(25);
  s.t_min = 1e-9;
  s.omega_i = khz(429.47);
  for (int j = 0; j < nuclei; ++j) s.nuclei.push_back({khz(20.0 + 10 * j), khz(15.0 + 5 * j)});
  return s;
}

ShapedPulse random_pulse(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  ShapedPulse p;
  p.dt = 2e-9;
  for (std::size_t l = 0; l < n; ++l) {
    const double r = mhz(25) * std::sqrt(rng.uniform());
    const double a = rng.uniform(0, kTwoPi);
    p.slices.push_back({r * std::cos(a), r * std::sin(a)});
  }
  return p;
}

void BM_Expm(benchmark::State& st) {
  const auto d = st.range(0);
  Rng rng(1);
  ComplexMatrix h(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) h(i, j) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  h = Complex(0, -1) * (h + h.adjoint());
  for (auto _ : st) benchmark::DoNotOptimize(expm(h));
}
BENCHMARK(BM_Expm)->RangeMultiplier(2)->Range(2, 128);

void BM_PulsePropagator(benchmark::State& st) {
  const SpinSystem s = system_with(static_cast<int>(st.range(0)));
  const ShapedPulse p = random_pulse(40, 2);
  for (auto _ : st) benchmark::DoNotOptimize(pulse_propagator(p, s, {0.08, 0.08}, true));
}
BENCHMARK(BM_PulsePropagator)->DenseRange(0, 6, 2);

void BM_DerivativeNorms(benchmark::State& st) {
  const SpinSystem s = system_with(static_cast<int>(st.range(0)));
  const ShapedPulse p = random_pulse(40, 3);
  const std::vector<GeneratorTag> g{GeneratorTag::Detuning, GeneratorTag::Control,
                                    GeneratorTag::Bath};
  for (auto _ : st) benchmark::DoNotOptimize(derivative_norms(directional_derivatives(p, s, g)));
}
BENCHMARK(BM_DerivativeNorms)->DenseRange(0, 3);

void BM_PsiFitness(benchmark::State& st) {
  const SpinSystem s = system_with(1);
  const ShapedPulse p = random_pulse(40, 4);
  const FitnessWeights w = FitnessWeights::published();
  for (auto _ : st) benchmark::DoNotOptimize(fitness_psi(p, {kPi, 0}, s, {0.08, 0.08}, w));
}
BENCHMARK(BM_PsiFitness);

void BM_SequencePropagator(benchmark::State& st) {
  const SpinSystem s = system_with(static_cast<int>(st.range(0)));
  const ShapedPulse sq = square_pulse(kPi, 0, s.omega_max, s.t_min);
  const DDSequence seq = build_sequence(parse_strategy("xy8"), sq, 1.1e-6, 32);
  const SequenceEngine eng(seq, s, {0.08, 0.08});
  for (auto _ : st) benchmark::DoNotOptimize(eng.propagator(1.1e-6));
}
BENCHMARK(BM_SequencePropagator)->DenseRange(1, 6);

void BM_DeGeneration(benchmark::State& st) {
  const SpinSystem s = system_with(1);
  DeConfig c;
  c.max_iters = 1;
  c.target_fitness = 2.0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(
        de_optimize({kPi, 0}, s, {0.08, 0.08}, FitnessWeights::published(), c));
  }
}
BENCHMARK(BM_DeGeneration)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
