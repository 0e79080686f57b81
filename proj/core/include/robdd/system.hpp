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

// Central electron spin coupled to a bath of nuclear spins-1/2.
//
// Tensor ordering is electron (x) nucleus_1 (x) ... (x) nucleus_n, so the
// electron index is the slowest. Frequencies are angular (rad/s), times are
// seconds.

#ifndef ROBDD_SYSTEM_HPP_
#define ROBDD_SYSTEM_HPP_

#include <cstddef>
#include <utility>
#include <vector>

#include "robdd/linalg.hpp"

namespace robdd {

// Linear frequency -> angular frequency.
constexpr double mhz(double f) { return kTwoPi * f * 1e6; }
constexpr double khz(double f) { return kTwoPi * f * 1e3; }
constexpr double ns(double t) { return t * 1e-9; }
constexpr double to_mhz(double w) { return w / (kTwoPi * 1e6); }
constexpr double to_khz(double w) { return w / (kTwoPi * 1e3); }
constexpr double to_ns(double t) { return t * 1e9; }

struct NuclearSpin {
  double a_zz = 0.0;  // rad/s
  double a_zx = 0.0;  // rad/s
};

// Which electron operator multiplies the hyperfine term.
//   Symmetric:   S_z, eigenvalues +-1/2.
//   NvProjector: |1><1| = 1/2 - S_z, i.e. the NV qubit {m_s = 0, m_s = 1}
//                embedded in the spin-1 S_z; the nuclear precession
//                frequencies of the two branches are Omega_I and
//                Omega_I + A_zz, averaging to Omega_I + A_zz / 2.
enum class CouplingConvention { Symmetric, NvProjector };

struct SpinSystem {
  std::vector<NuclearSpin> nuclei;
  double omega_i = 0.0;    // nuclear Larmor Omega_I, rad/s
  double omega_max = 0.0;  // Rabi bound, rad/s
  double delta_max = 0.0;  // detuning scale, rad/s
  double t_min = 0.0;      // minimum switching time, s
  CouplingConvention coupling = CouplingConvention::Symmetric;

  std::size_t num_nuclei() const { return nuclei.size(); }
  Eigen::Index dim() const { return Eigen::Index{2} << nuclei.size(); }
  Eigen::Index bath_dim() const { return Eigen::Index{1} << nuclei.size(); }

  // Throws ErrorKind::InvalidInput unless omega_max > 0, t_min > 0 and
  // every field is finite.
  void validate() const;
};

// Static detuning (eps1, in units of delta_max) and amplitude (eps2,
// fractional) error channels.
struct ErrorModel {
  double eps1 = 0.0;
  double eps2 = 0.0;
};

// op (x) I_bath
ComplexMatrix electron_operator(const SpinSystem& sys, const ComplexMatrix& op);

// I_e (x) ... op on nucleus j ... (x) I
ComplexMatrix nuclear_operator(const SpinSystem& sys, const ComplexMatrix& op,
                               std::size_t j);

// sum_j Omega_I I_z^j + sum_j C (A_zz^j I_z^j + A_zx^j I_x^j), C per the
// coupling convention.
ComplexMatrix free_hamiltonian(const SpinSystem& sys);

// The part of the free Hamiltonian that does not commute with the electron
// controls: S_z (x) sum_j (A_zz^j I_z^j + A_zx^j I_x^j). Under the
// NvProjector convention it enters with a minus sign, which does not change
// any derivative norm.
ComplexMatrix bath_coupling(const SpinSystem& sys);

// Nuclear factor B with bath_coupling = S_z (x) B.
ComplexMatrix bath_coupling_nuclear_factor(const SpinSystem& sys);

// (ux Sx + uy Sy) (x) I_bath. Throws ErrorKind::BoundViolation when the
// amplitude exceeds omega_max by more than a relative 1e-9.
ComplexMatrix control_hamiltonian(const SpinSystem& sys, double ux, double uy);

struct ErrorGenerators {
  ComplexMatrix v1;  // delta_max S_z (x) I
  ComplexMatrix v2;  // control_hamiltonian(sys, ux, uy)
};

ErrorGenerators error_generators(const SpinSystem& sys, double ux, double uy);

// Omega_I + A_zz^j / 2. Throws ErrorKind::IndexOutOfRange.
double effective_larmor(const SpinSystem& sys, std::size_t j);

// gamma_I B in rad/s from Gauss and kHz/G.
double larmor_from_field(double b_gauss, double gamma_khz_per_gauss);

}  // namespace robdd

#endif  // ROBDD_SYSTEM_HPP_
