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

// Grid studies: detection spectra, identity-protection maps, PulsePol
// transfer maps and single-pulse robustness profiles. Every sweep is
// parallel over grid points and returns results in grid order.

#ifndef ROBDD_EXPERIMENTS_HPP_
#define ROBDD_EXPERIMENTS_HPP_

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "robdd/linalg.hpp"
#include "robdd/optimizer.hpp"
#include "robdd/pulse.hpp"
#include "robdd/sequences.hpp"
#include "robdd/system.hpp"

namespace robdd {

// n evenly spaced points including both ends; n = 1 gives {lo}.
std::vector<double> linspace(double lo, double hi, std::size_t n);

struct SequenceShape {
  StrategySpec strategy;
  ShapedPulse pulse;  // base pi pulse
  int cycles = 1;
  std::optional<std::uint64_t> seed;
  bool instantaneous = false;
};

struct SpectrumPoint {
  double tau = 0.0;        // s
  double omega_det = 0.0;  // pi / tau, rad/s
  double p = 0.0;
};

struct SpectrumResult {
  std::vector<SpectrumPoint> grid;
};

// Population of |0> after ideal R_{pi/2}(pi/2) preparation, the sequence u
// and the inverse rotation, for rho0 = |+><+| (x) I / 2^n. Without any
// coupling this is 1.
double detection_probability(const ComplexMatrix& u, const SpinSystem& sys);

SpectrumResult detection_spectrum(const SpinSystem& sys, const SequenceShape& shape,
                                  const std::vector<double>& tau_grid,
                                  const ErrorModel& err, unsigned threads = 0);

struct RobustnessMap {
  std::vector<double> detuning_axis;   // rad/s
  std::vector<double> amplitude_axis;  // fractional Rabi deviation
  std::vector<std::vector<double>> values;  // [detuning][amplitude]

  // Fraction of cells with value >= threshold.
  double area_fraction(double threshold) const;
  // Minimum over cells inside the closed box.
  double min_in(double det_lo, double det_hi, double amp_lo, double amp_hi) const;
};

// Partial-trace average over the nuclear bath: Tr_nuc(u) / 2^n.
ComplexMatrix reduced_electron(const ComplexMatrix& u, const SpinSystem& sys);

// |Tr(u_red t^dagger)|^2 / 4 with u_red = reduced_electron(u).
double reduced_fidelity(const ComplexMatrix& u, const ComplexMatrix& target2,
                        const SpinSystem& sys);

// Detuning values are absolute (rad/s); eps1 = detuning / delta_max.
RobustnessMap identity_robustness_map(const SpinSystem& sys, const SequenceShape& shape,
                                      double tau, const std::vector<double>& det_grid,
                                      const std::vector<double>& amp_grid,
                                      unsigned threads = 0);

// Square, CORPSE or BB1 (pi/2, pi) pair at omega on a dt grid, both about x.
// Throws ErrorKind::UnknownTag for anything else, including "roc".
std::pair<ShapedPulse, ShapedPulse> family_pulses(std::string_view family,
                                                  double omega, double dt);

// 2 Tr(rho_f I_z) of the first nucleus for rho0 = |0><0| (x) I / 2.
double nuclear_polarization(const ComplexMatrix& u, const SpinSystem& sys);

struct DnpMap {
  RobustnessMap map;
  double ideal_polarization = 0.0;      // instantaneous pulses, no error
  double reference_polarization = 0.0;  // spec pulses, no error
  double alpha = 0.0;                   // fitted transfer constant
};

// f = polarization / reference_polarization on the grid, so the error-free
// point of every pulse family is 1.
DnpMap dnp_transfer_map(const PulsePolSpec& spec, const SpinSystem& sys,
                        const std::vector<double>& det_grid,
                        const std::vector<double>& rabi_grid, unsigned threads = 0);

// alpha with 2 N tau = 1 / (alpha A_zx), from the period of the ideal
// instantaneous-pulse polarization in N (scanned up to max_cycles).
double fit_pulsepol_alpha(const PulsePolSpec& spec, const SpinSystem& sys,
                          int max_cycles = 400);

// Gate fidelity |Tr(U R^dagger)|^2 / 4 to R_target.phi(target.theta) per
// grid point; with nuclei the bath is included and the electron reduced.
RobustnessMap pulse_robustness_profile(const ShapedPulse& pulse,
                                       const RotationTarget& target,
                                       const SpinSystem& sys,
                                       const std::vector<double>& det_grid,
                                       const std::vector<double>& amp_grid,
                                       unsigned threads = 0);

}  // namespace robdd

#endif  // ROBDD_EXPERIMENTS_HPP_
