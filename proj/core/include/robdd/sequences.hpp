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

// Dynamical decoupling sequences with finite-width pulses.
//
// Timing is center-to-center: an entry of width w sits between two free
// segments of (tau - w) / 2, and every free segment evolves under
// H_free + eps1 delta_max S_z.

#ifndef ROBDD_SEQUENCES_HPP_
#define ROBDD_SEQUENCES_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "robdd/linalg.hpp"
#include "robdd/pulse.hpp"
#include "robdd/system.hpp"

namespace robdd {

std::vector<double> xy8_phases();

// phi_k = (k-1)(k-2)/2 Phi + (k-1) phi2 mod 2 pi, with Phi = sign pi/m for
// n = 4m and sign 2 m pi/(2m + 1) for n = 4m + 2. Throws
// ErrorKind::InvalidInput unless n is even and >= 4.
std::vector<double> ur_phases(int n, double phi2, int sign = 1);

// The Phi^(n) used by ur_phases.
double ur_phase_step(int n, int sign = 1);

// Table [cycle][k] = base[k] + phi_n, phi_n uniform on [0, 2 pi) per cycle.
std::vector<std::vector<double>> rp_phases(const std::vector<double>& base, int cycles,
                                           std::uint64_t seed);

// lambda0 exp(-t^2 / (2 sigma^2))
double gaussian_envelope(double t, double lambda0, double sigma);

// Envelope sampled at cycle centers. A cycle lasts 4 tau, so the sequence
// spans T = 4 N tau and t is measured from its midpoint.
std::vector<double> gaussian_amplitudes(int cycles, double tau, double lambda0,
                                        double sigma);

enum class Strategy { Xy8, Ur, RpXy8, Bb1Xy8, Gaxy8 };

struct StrategySpec {
  Strategy kind = Strategy::Xy8;
  int ur_n = 8;
  double gaxy8_lambda0 = 0.271;

  std::string name() const;
};

// "xy8", "ur8", "ur<n>", "rp-xy8", "bb1-xy8", "gaxy8". Throws
// ErrorKind::UnknownTag.
StrategySpec parse_strategy(std::string_view name);

struct SequenceEntry {
  ShapedPulse pulse;
  double phase = 0.0;
};

struct DDSequence {
  std::vector<SequenceEntry> entries;  // one cycle, first-in-time first
  double tau = 0.0;
  int cycles = 1;
  // Optional per-cycle global phase offsets and amplitude scales; empty
  // means 0 and 1 for every cycle.
  std::vector<double> cycle_phase;
  std::vector<double> cycle_scale;
  // Entries act as ideal zero-width rotations R_phase(target_theta).
  bool instantaneous = false;

  // Longest entry duration, 0 for instantaneous sequences.
  double effective_width() const;
  bool cycles_identical() const;
  // Throws ErrorKind::InvalidInput on cycles < 1 or mismatched per-cycle
  // tables, ErrorKind::PulseTooLong when an entry is wider than tau.
  void validate() const;
};

// Throws ErrorKind::InvalidInput if base.target_theta is not pi, or if an
// rp-xy8 sequence is requested without a seed.
DDSequence build_sequence(const StrategySpec& strategy, const ShapedPulse& base,
                          double tau, int cycles,
                          std::optional<std::uint64_t> seed = std::nullopt,
                          bool instantaneous = false);

// k pi / omega_i - width / 2. Throws ErrorKind::InvalidInput for even or
// non-positive k and for a non-positive result.
double resonance_delay(double omega_i, int k, double effective_width);

// exp(-i (H_free + eps1 delta_max S_z) t) through a cached eigendecomposition.
class FreeEvolution {
 public:
  FreeEvolution(const SpinSystem& sys, const ErrorModel& err);
  ComplexMatrix operator()(double t) const;

 private:
  ComplexMatrix vectors_;
  Eigen::VectorXd values_;
};

// Propagates one sequence shape at any tau. Pulse propagators are built
// once; phase shifts are applied by conjugating with exp(-i phi S_z), which
// commutes with every non-control term.
class SequenceEngine {
 public:
  SequenceEngine(const DDSequence& seq, const SpinSystem& sys, const ErrorModel& err);

  ComplexMatrix propagator(double tau) const;
  // Cycle-by-cycle product even when cycles are identical.
  ComplexMatrix propagator_unrolled(double tau) const;

 private:
  ComplexMatrix cycle(double tau, int c) const;
  ComplexMatrix entry(std::size_t k, int c) const;

  DDSequence seq_;
  SpinSystem sys_;
  FreeEvolution free_;
  Eigen::VectorXd sz_diag_;
  // base_[scale index][entry] and which scale index each cycle uses
  std::vector<std::vector<ComplexMatrix>> base_;
  std::vector<int> scale_of_cycle_;
};

ComplexMatrix sequence_propagator(const DDSequence& seq, const SpinSystem& sys,
                                  const ErrorModel& err);

// M^n by repeated squaring.
ComplexMatrix matrix_power(const ComplexMatrix& m, long long n);

struct PulsePolSpec {
  int l = 5;
  int cycles = 29;
  std::string pulse_family = "square";
  ShapedPulse pi2_pulse;
  ShapedPulse pi_pulse;
  bool instantaneous = false;
};

// l pi / omega_I for the first nucleus.
double pulsepol_tau(const PulsePolSpec& spec, const SpinSystem& sys);

// N cycles of two blocks, each block
//   (pi/2)_y F (pi)_x F (pi/2)_y (pi/2)_x F (pi)_y F (pi/2)_x
// with F = tau_free / 4, tau_free = tau - 4 t_pi2 - 2 t_pi. Throws
// ErrorKind::PulseTooLong when tau_free < 0, ErrorKind::InvalidInput for an
// even l, and ErrorKind::InvalidInput without nuclei.
ComplexMatrix pulsepol_propagator(const PulsePolSpec& spec, const SpinSystem& sys,
                                  const ErrorModel& err);

}  // namespace robdd

#endif  // ROBDD_SEQUENCES_HPP_
