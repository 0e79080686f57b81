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
#include <algorithm>
#include <numeric>

#include "oracles.hpp"
#include "robdd/error.hpp"
#include "robdd/experiments.hpp"
#include "robdd/sequences.hpp"

namespace robdd {
namespace {

constexpr double kDeg = kPi / 180.0;

SpinSystem two_spin() {
  SpinSystem s;
  s.omega_max = mhz(25);
  s.delta_max = mhz(25);
  s.t_min = 1e-9;
  s.omega_i = khz(428.41);
  s.nuclei = {{khz(27), khz(17)}};
  return s;
}

double wrap(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0 ? a + kTwoPi : a;
}

void expect_phases(const std::vector<double>& got, const std::vector<double>& deg) {
  ASSERT_EQ(got.size(), deg.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    const double d = std::abs(wrap(got[i]) - wrap(deg[i] * kDeg));
    EXPECT_LT(std::min(d, kTwoPi - d), 1e-12) << i;
  }
}

TEST(Phases, Xy8) {
  const std::vector<double> p = xy8_phases();
  expect_phases(p, {0, 90, 0, 90, 90, 0, 90, 0});
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(p[i], p[7 - i]);
}

TEST(Phases, Ur8) {
  EXPECT_NEAR(ur_phase_step(8), kPi / 2, 1e-15);
  expect_phases(ur_phases(8, ur_phase_step(8)), {0, 90, 270, 180, 180, 270, 90, 0});
}

TEST(Phases, UrSteps) {
  EXPECT_NEAR(ur_phase_step(4), kPi, 1e-15);
  EXPECT_NEAR(ur_phase_step(6), 2 * kPi / 3, 1e-15);
  EXPECT_NEAR(ur_phase_step(10), 4 * kPi / 5, 1e-15);
  EXPECT_NEAR(ur_phase_step(8, -1), -kPi / 2, 1e-15);
  expect_phases(ur_phases(4, kPi), {0, 180, 180, 0});
  EXPECT_THROW(ur_phases(5, 0), Error);
  EXPECT_THROW(ur_phases(2, 0), Error);
}

TEST(Phases, UrFormula) {
  for (int n : {4, 6, 8, 12, 16}) {
    const double big = ur_phase_step(n);
    const std::vector<double> p = ur_phases(n, 0.3);
    for (int k = 1; k <= n; ++k) {
      const double ref = (k - 1) * (k - 2) / 2.0 * big + (k - 1) * 0.3;
      const double d = std::abs(wrap(p[k - 1]) - wrap(ref));
      EXPECT_LT(std::min(d, kTwoPi - d), 1e-9);
    }
  }
}

TEST(Phases, RandomOffsets) {
  const std::vector<double> base = xy8_phases();
  const auto a = rp_phases(base, 10000, 5);
  const auto b = rp_phases(base, 10000, 5);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, rp_phases(base, 10000, 6));
  double mean = 0;
  for (const auto& row : a) {
    mean += row[0];
    for (std::size_t k = 0; k < base.size(); ++k) EXPECT_NEAR(row[k] - row[0], base[k] - base[0], 1e-12);
  }
  EXPECT_NEAR(mean / 10000, kPi, 0.05);
}

TEST(Envelope, Gaussian) {
  const double l0 = 0.271;
  const double big_t = 4.0 * 20 * 1e-6;
  const double sigma = big_t / (4 * std::sqrt(2.0));
  EXPECT_EQ(gaussian_envelope(0, l0, sigma), l0);
  EXPECT_NEAR(gaussian_envelope(big_t / 2, l0, sigma), l0 * std::exp(-4.0), 1e-15);
  EXPECT_EQ(gaussian_envelope(0.3e-6, l0, sigma), gaussian_envelope(-0.3e-6, l0, sigma));
  const std::vector<double> a = gaussian_amplitudes(21, 1e-6, l0, sigma);
  EXPECT_EQ(a[10], l0);
  for (int i = 0; i < 21; ++i) EXPECT_NEAR(a[i], a[20 - i], 1e-15);
  for (int i = 0; i < 10; ++i) EXPECT_LT(a[i], a[i + 1]);
}

TEST(Strategy, Parse) {
  EXPECT_EQ(parse_strategy("xy8").kind, Strategy::Xy8);
  EXPECT_EQ(parse_strategy("ur8").ur_n, 8);
  EXPECT_EQ(parse_strategy("ur12").ur_n, 12);
  EXPECT_EQ(parse_strategy("rp-xy8").kind, Strategy::RpXy8);
  EXPECT_EQ(parse_strategy("bb1-xy8").name(), "bb1-xy8");
  EXPECT_EQ(parse_strategy("gaxy8").gaxy8_lambda0, 0.271);
  for (const char* bad : {"xy4", "ur", "ur7", "urx", ""}) {
    EXPECT_THROW(parse_strategy(bad), Error) << bad;
  }
}

TEST(Build, EntriesAndWidths) {
  const ShapedPulse sq = square_pulse(kPi, 0, mhz(25), 1e-9);
  const DDSequence x = build_sequence(parse_strategy("xy8"), sq, 1e-6, 4);
  ASSERT_EQ(x.entries.size(), 8u);
  EXPECT_NEAR(x.effective_width(), 20e-9, 1e-15);
  EXPECT_TRUE(x.cycles_identical());
  const DDSequence b = build_sequence(parse_strategy("bb1-xy8"), sq, 1e-6, 4);
  EXPECT_NEAR(b.effective_width(), 100e-9, 1e-15);
  const DDSequence u = build_sequence(parse_strategy("ur10"), sq, 1e-6, 2);
  EXPECT_EQ(u.entries.size(), 10u);
  const DDSequence r = build_sequence(parse_strategy("rp-xy8"), sq, 1e-6, 5, 3);
  EXPECT_EQ(r.cycle_phase.size(), 5u);
  EXPECT_FALSE(r.cycles_identical());
  EXPECT_EQ(r.cycle_phase, build_sequence(parse_strategy("rp-xy8"), sq, 1e-6, 5, 3).cycle_phase);
  const DDSequence g = build_sequence(parse_strategy("gaxy8"), sq, 1e-6, 5);
  ASSERT_EQ(g.cycle_scale.size(), 5u);
  EXPECT_NEAR(g.cycle_scale[2], 1.0, 1e-15);

  EXPECT_THROW(build_sequence(parse_strategy("rp-xy8"), sq, 1e-6, 5), Error);
  EXPECT_THROW(build_sequence(parse_strategy("xy8"), square_pulse(kPi / 2, 0, mhz(25), 1e-9), 1e-6, 1),
               Error);
  try {
    build_sequence(parse_strategy("xy8"), sq, 10e-9, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PulseTooLong);
  }
  EXPECT_THROW(build_sequence(parse_strategy("xy8"), sq, 1e-6, 0), Error);
}

TEST(Build, ResonanceDelay) {
  const double w = 2 * kPi * 441.91e3;
  EXPECT_NEAR(resonance_delay(w, 1, 20e-9), 1121.45e-9, 0.01e-9);
  EXPECT_NEAR(resonance_delay(w, 3, 0), 3 * kPi / w, 1e-18);
  EXPECT_THROW(resonance_delay(w, 2, 0), Error);
  EXPECT_THROW(resonance_delay(w, 1, 4e-6), Error);
}

TEST(Propagator, IdealXy8IsIdentity) {
  SpinSystem s = two_spin();
  s.nuclei.clear();
  const ShapedPulse sq = square_pulse(kPi, 0, mhz(25), 1e-9);
  for (const char* name : {"xy8", "ur8", "ur6"}) {
    const DDSequence seq = build_sequence(parse_strategy(name), sq, 1e-6, 3, std::nullopt, true);
    const ComplexMatrix u = sequence_propagator(seq, s, {});
    EXPECT_NEAR(std::abs(u.trace()) / 2, 1.0, 1e-10) << name;
  }
}

// E_k = F R_k F with F the free evolution over (tau - w) / 2, applied in time order.
ComplexMatrix monolithic(const DDSequence& seq, const SpinSystem& s, const ErrorModel& err) {
  const ComplexMatrix h =
      free_hamiltonian(s) + err.eps1 * s.delta_max * electron_operator(s, spin_half().sz);
  ComplexMatrix u = identity(s.dim());
  for (int c = 0; c < seq.cycles; ++c) {
    for (const auto& e : seq.entries) {
      const double ph = e.phase + (seq.cycle_phase.empty() ? 0.0 : seq.cycle_phase[c]);
      ComplexMatrix p;
      double w = 0;
      if (seq.instantaneous) {
        p = kron(rotation(e.pulse.target_theta, e.pulse.target_phi + ph), identity(s.bath_dim()));
      } else {
        p = pulse_propagator(phase_shift(e.pulse, ph), s, err, true);
        w = e.pulse.duration();
      }
      const ComplexMatrix f = oracle::expm_eig(h, 0.5 * (seq.tau - w));
      u = f * p * f * u;
    }
  }
  return u;
}

TEST(Propagator, MatchesMonolithicProduct) {
  const SpinSystem s = two_spin();
  const ShapedPulse sq = square_pulse(kPi, 0, mhz(25), 1e-9);
  const ErrorModel err{0.05, -0.03};
  for (bool inst : {true, false}) {
    for (const char* name : {"xy8", "ur8", "rp-xy8"}) {
      const DDSequence seq = build_sequence(parse_strategy(name), sq, 1.1e-6, 3, 11, inst);
      EXPECT_LT((sequence_propagator(seq, s, err) - monolithic(seq, s, err)).norm(), 1e-10)
          << name << inst;
    }
  }
}

TEST(Propagator, PowerMatchesUnrolled) {
  const SpinSystem s = two_spin();
  const ShapedPulse sq = square_pulse(kPi, 0, mhz(25), 1e-9);
  const DDSequence seq = build_sequence(parse_strategy("xy8"), sq, 1.121e-6, 16);
  const SequenceEngine eng(seq, s, {0.08, 0.08});
  EXPECT_LT((eng.propagator(seq.tau) - eng.propagator_unrolled(seq.tau)).norm(), 1e-9);
  Rng rng(2);
  const ComplexMatrix m = oracle::expm_eig(oracle::random_hermitian(4, rng, 1.0), 1.0);
  ComplexMatrix ref = identity(4);
  for (int i = 0; i < 13; ++i) ref = m * ref;
  EXPECT_LT((matrix_power(m, 13) - ref).norm(), 1e-12);
  EXPECT_LT((matrix_power(m, 0) - identity(4)).norm(), 0.0 + 1e-15);
}

TEST(Propagator, Unitary) {
  Rng rng(8);
  const ShapedPulse sq = square_pulse(kPi, 0, mhz(25), 1e-9);
  for (const char* name : {"xy8", "ur8", "rp-xy8", "bb1-xy8", "gaxy8"}) {
    const SpinSystem s = oracle::random_system(2, rng);
    const DDSequence seq = build_sequence(parse_strategy(name), sq, 1e-6, 5, 4);
    EXPECT_LT(unitarity_defect(sequence_propagator(seq, s, {0.1, 0.1})), 1e-10) << name;
  }
}

SpinSystem pulsepol_spin() {
  SpinSystem s = two_spin();
  s.nuclei = {{0.0, khz(30)}};
  return s;
}

TEST(PulsePol, FlipFlopTransfer) {
  const SpinSystem s = pulsepol_spin();
  PulsePolSpec spec;
  spec.instantaneous = true;
  spec.cycles = 1;
  spec.pi2_pulse = square_pulse(kPi / 2, 0, mhz(25), 1e-9);
  spec.pi_pulse = square_pulse(kPi, 0, mhz(25), 1e-9);
  EXPECT_NEAR(pulsepol_tau(spec, s), 5 * kPi / s.omega_i, 1e-18);
  const ComplexMatrix cyc = pulsepol_propagator(spec, s, {});
  EXPECT_NEAR(nuclear_polarization(identity(s.dim()), s), 0.0, 1e-15);
  std::vector<double> pol{0.0};
  for (int n = 1; n <= 60; ++n) pol.push_back(std::abs(nuclear_polarization(matrix_power(cyc, n), s)));
  int at = 1;
  while (at < 59 && !(pol[at] >= pol[at - 1] && pol[at] > pol[at + 1])) ++at;
  EXPECT_GT(pol[at], 0.95);
  // near-complete return between transfers
  EXPECT_LT(*std::min_element(pol.begin() + at, pol.begin() + 2 * at + 2), 0.05);
  const double alpha = fit_pulsepol_alpha(spec, s);
  EXPECT_NEAR(1.0 / (2 * alpha * pulsepol_tau(spec, s) * s.nuclei[0].a_zx), at, 1.0);
  spec.cycles = at;
  EXPECT_LT((pulsepol_propagator(spec, s, {}) - matrix_power(cyc, at)).norm(), 1e-9);
}

TEST(PulsePol, Errors) {
  const SpinSystem s = pulsepol_spin();
  PulsePolSpec spec;
  spec.pi2_pulse = square_pulse(kPi / 2, 0, khz(300), 1e-9);
  spec.pi_pulse = square_pulse(kPi, 0, khz(300), 1e-9);
  try {
    pulsepol_propagator(spec, s, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PulseTooLong);
  }
  spec.l = 4;
  EXPECT_THROW(pulsepol_propagator(spec, s, {}), Error);
  SpinSystem bare = s;
  bare.nuclei.clear();
  spec.l = 5;
  EXPECT_THROW(pulsepol_propagator(spec, bare, {}), Error);
}

}  // namespace
}  // namespace robdd
