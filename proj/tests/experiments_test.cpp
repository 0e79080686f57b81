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

#include "oracles.hpp"
#include "robdd/error.hpp"
#include "robdd/experiments.hpp"

namespace robdd {
namespace {

SpinSystem single_spin() {
  SpinSystem s;
  s.omega_max = mhz(25);
  s.delta_max = mhz(25);
  s.t_min = 1e-9;
  s.omega_i = khz(428.41);
  s.nuclei = {{khz(27), khz(17)}};
  return s;
}

SequenceShape ideal_xy8(int cycles) {
  SequenceShape sh;
  sh.strategy = parse_strategy("xy8");
  sh.pulse = square_pulse(kPi, 0, mhz(25), 1e-9);
  sh.cycles = cycles;
  sh.instantaneous = true;
  return sh;
}

TEST(Linspace, Endpoints) {
  const auto v = linspace(-1, 1, 5);
  EXPECT_EQ(v.front(), -1);
  EXPECT_EQ(v.back(), 1);
  EXPECT_EQ(v[2], 0);
  EXPECT_EQ(linspace(3, 4, 1), std::vector<double>{3});
}

TEST(Detection, NoNucleiIsOne) {
  SpinSystem s = single_spin();
  s.nuclei.clear();
  const auto res = detection_spectrum(s, ideal_xy8(8), linspace(0.5e-6, 3e-6, 25), {});
  for (const auto& pt : res.grid) EXPECT_NEAR(pt.p, 1.0, 1e-12);
}

TEST(Detection, ProbabilityRangeAndDip) {
  const SpinSystem s = single_spin();
  SequenceShape sh = ideal_xy8(32);
  sh.instantaneous = false;
  const auto res = detection_spectrum(s, sh, linspace(0.9e-6, 1.3e-6, 81), {0.08, 0.08}, 2);
  double lo = 1;
  for (const auto& pt : res.grid) {
    EXPECT_GE(pt.p, -1e-12);
    EXPECT_LE(pt.p, 1 + 1e-12);
    EXPECT_NEAR(pt.omega_det, kPi / pt.tau, 1e-6);
    lo = std::min(lo, pt.p);
  }
  EXPECT_LT(lo, 0.5);
}

TEST(Detection, RandomPhaseSeedIrrelevantForIdealPulses) {
  const SpinSystem s = single_spin();
  SequenceShape a = ideal_xy8(16);
  a.strategy = parse_strategy("rp-xy8");
  a.seed = 1;
  SequenceShape b = a;
  b.seed = 99;
  const auto grid = linspace(0.8e-6, 1.4e-6, 31);
  const auto ra = detection_spectrum(s, a, grid, {});
  const auto rb = detection_spectrum(s, b, grid, {});
  const auto rx = detection_spectrum(s, ideal_xy8(16), grid, {});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(ra.grid[i].p, rb.grid[i].p, 1e-9);
    EXPECT_NEAR(ra.grid[i].p, rx.grid[i].p, 1e-9);
  }
}

TEST(Detection, ThreadIndependent) {
  const SpinSystem s = single_spin();
  SequenceShape sh = ideal_xy8(8);
  sh.instantaneous = false;
  const auto grid = linspace(0.8e-6, 1.4e-6, 17);
  const auto a = detection_spectrum(s, sh, grid, {0.02, 0.01}, 1);
  const auto b = detection_spectrum(s, sh, grid, {0.02, 0.01}, 4);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_EQ(a.grid[i].p, b.grid[i].p);
}

TEST(Profile, SquareMatchesRabiFormula) {
  SpinSystem s = single_spin();
  s.nuclei.clear();
  const ShapedPulse sq = square_pulse(kPi, 0, mhz(25), 1e-9);
  const auto det = linspace(-mhz(10), mhz(10), 9);
  const auto amp = linspace(-0.2, 0.2, 1);
  const RobustnessMap m = pulse_robustness_profile(sq, {kPi, 0}, s, det, {0.0});
  for (std::size_t i = 0; i < det.size(); ++i) {
    EXPECT_NEAR(m.values[i][0], oracle::rabi_pi_fidelity(mhz(25), det[i], sq.duration()), 1e-10);
  }
  const RobustnessMap a = pulse_robustness_profile(sq, {kPi, 0}, s, {0.0}, amp);
  EXPECT_NEAR(a.values[0][0], std::pow(std::sin(kPi / 2 * 0.8), 2), 1e-10);
}

TEST(Profile, CompositeFlatness) {
  SpinSystem s = single_spin();
  s.nuclei.clear();
  const double w = mhz(25);
  const ShapedPulse sq = square_pulse(kPi, 0, w, 1e-9);
  const ShapedPulse co = expand_composite(corpse(kPi), w, 1e-9, kPi, 0);
  const ShapedPulse b1 = expand_composite(bb1(kPi), w, 1e-9, kPi, 0);
  const std::vector<double> d{mhz(2)};
  const std::vector<double> a{0.1};
  auto at = [&](const ShapedPulse& p, const std::vector<double>& dd, const std::vector<double>& aa) {
    return 1 - pulse_robustness_profile(p, {kPi, 0}, s, dd, aa).values[0][0];
  };
  EXPECT_LT(at(co, d, {0.0}), at(sq, d, {0.0}) / 5);
  EXPECT_LT(at(b1, {0.0}, a), at(sq, {0.0}, a) / 5);
}

TEST(Profile, WithBathIsReduced) {
  const SpinSystem s = single_spin();
  const ShapedPulse sq = square_pulse(kPi, 0, mhz(25), 1e-9);
  const RobustnessMap m = pulse_robustness_profile(sq, {kPi, 0}, s, {0.0}, {0.0});
  EXPECT_GT(m.values[0][0], 0.999);
  EXPECT_LE(m.values[0][0], 1.0 + 1e-12);
}

TEST(Identity, OriginIsOne) {
  const SpinSystem s = single_spin();
  SpinSystem bare = s;
  bare.nuclei.clear();
  const RobustnessMap m =
      identity_robustness_map(bare, ideal_xy8(10), 2e-6, {0.0, mhz(1)}, {0.0, 0.1});
  EXPECT_NEAR(m.values[0][0], 1.0, 1e-12);
  EXPECT_NEAR(m.values[1][1], 1.0, 1e-12);  // instantaneous pulses ignore the errors
  SequenceShape sh = ideal_xy8(10);
  sh.instantaneous = false;
  const RobustnessMap f = identity_robustness_map(bare, sh, 2e-6, {0.0, mhz(1)}, {0.0, 0.1});
  EXPECT_NEAR(f.values[0][0], 1.0, 1e-10);
  EXPECT_LT(f.values[1][1], 1.0);
}

TEST(Map, AreaAndBox) {
  RobustnessMap m;
  m.detuning_axis = {-1, 0, 1};
  m.amplitude_axis = {-0.1, 0.1};
  m.values = {{0.5, 0.99}, {1.0, 0.995}, {0.2, 0.3}};
  EXPECT_NEAR(m.area_fraction(0.99), 3.0 / 6.0, 1e-15);
  EXPECT_EQ(m.min_in(-1, 0, -0.1, 0.1), 0.5);
  EXPECT_EQ(m.min_in(0, 0, -0.1, 0.1), 0.995);
}

TEST(Reduced, Trace) {
  const SpinSystem s = single_spin();
  const ComplexMatrix u = kron(rotation(kPi / 3, 0.2), identity(2));
  EXPECT_LT((reduced_electron(u, s) - rotation(kPi / 3, 0.2)).norm(), 1e-14);
  EXPECT_NEAR(reduced_fidelity(u, rotation(kPi / 3, 0.2), s), 1.0, 1e-14);
}

TEST(Dnp, ReferenceNormalization) {
  SpinSystem s = single_spin();
  s.nuclei = {{0.0, khz(30)}};
  PulsePolSpec spec;
  std::tie(spec.pi2_pulse, spec.pi_pulse) = family_pulses("square", mhz(25), 1e-9);
  const DnpMap d = dnp_transfer_map(spec, s, {-mhz(2), 0.0, mhz(2)}, {0.0, 0.1}, 2);
  EXPECT_NEAR(d.map.values[1][0], 1.0, 1e-12);
  EXPECT_LT(d.ideal_polarization, 0.0);
  EXPECT_GT(d.alpha, 0.0);
  EXPECT_THROW(family_pulses("roc", mhz(25), 1e-9), Error);
  EXPECT_THROW(nuclear_polarization(identity(2), SpinSystem{}), Error);
}

}  // namespace
}  // namespace robdd
