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

#include "robdd/system.hpp"

#include <cmath>
#include <string>

#include "robdd/error.hpp"

namespace robdd {

void SpinSystem::validate() const {
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(omega_i) || !finite(omega_max) || !finite(delta_max) ||
      !finite(t_min)) {
    throw Error(ErrorKind::InvalidInput, "spin system: non-finite parameter");
  }
  if (omega_max <= 0.0) {
    throw Error(ErrorKind::InvalidInput, "spin system: omega_max must be > 0");
  }
  if (t_min <= 0.0) {
    throw Error(ErrorKind::InvalidInput, "spin system: t_min must be > 0");
  }
  for (const auto& n : nuclei) {
    if (!finite(n.a_zz) || !finite(n.a_zx)) {
      throw Error(ErrorKind::InvalidInput,
                  "spin system: non-finite hyperfine coupling");
    }
  }
}

ComplexMatrix electron_operator(const SpinSystem& sys, const ComplexMatrix& op) {
  return kron(op, identity(sys.bath_dim()));
}

ComplexMatrix nuclear_operator(const SpinSystem& sys, const ComplexMatrix& op,
                               std::size_t j) {
  if (j >= sys.num_nuclei()) {
    throw Error(ErrorKind::IndexOutOfRange, "nuclear_operator: index " +
                                                std::to_string(j) +
                                                " out of range");
  }
  const Eigen::Index before = Eigen::Index{1} << j;
  const Eigen::Index after = Eigen::Index{1} << (sys.num_nuclei() - j - 1);
  return kron(kron(identity(2 * before), op), identity(after));
}

ComplexMatrix bath_coupling_nuclear_factor(const SpinSystem& sys) {
  const auto& s = spin_half();
  const Eigen::Index bath = sys.bath_dim();
  ComplexMatrix b = ComplexMatrix::Zero(bath, bath);
  for (std::size_t j = 0; j < sys.num_nuclei(); ++j) {
    const Eigen::Index before = Eigen::Index{1} << j;
    const Eigen::Index after = Eigen::Index{1} << (sys.num_nuclei() - j - 1);
    const ComplexMatrix local =
        sys.nuclei[j].a_zz * s.sz + sys.nuclei[j].a_zx * s.sx;
    b += kron(kron(identity(before), local), identity(after));
  }
  return b;
}

ComplexMatrix bath_coupling(const SpinSystem& sys) {
  const ComplexMatrix b = bath_coupling_nuclear_factor(sys);
  const double sign =
      sys.coupling == CouplingConvention::NvProjector ? -1.0 : 1.0;
  return sign * kron(spin_half().sz, b);
}

ComplexMatrix free_hamiltonian(const SpinSystem& sys) {
  const auto& s = spin_half();
  const Eigen::Index bath = sys.bath_dim();
  ComplexMatrix zeeman = ComplexMatrix::Zero(bath, bath);
  for (std::size_t j = 0; j < sys.num_nuclei(); ++j) {
    const Eigen::Index before = Eigen::Index{1} << j;
    const Eigen::Index after = Eigen::Index{1} << (sys.num_nuclei() - j - 1);
    zeeman += kron(kron(identity(before), sys.omega_i * s.sz), identity(after));
  }
  const ComplexMatrix b = bath_coupling_nuclear_factor(sys);
  ComplexMatrix h = kron(s.identity, zeeman);
  if (sys.coupling == CouplingConvention::Symmetric) {
    h += kron(s.sz, b);
  } else {
    ComplexMatrix p1 = ComplexMatrix::Zero(2, 2);
    p1(1, 1) = 1.0;
    h += kron(p1, b);
  }
  return h;
}

ComplexMatrix control_hamiltonian(const SpinSystem& sys, double ux, double uy) {
  const double amp = std::hypot(ux, uy);
  if (!std::isfinite(amp)) {
    throw Error(ErrorKind::NonFinite, "control_hamiltonian: non-finite control");
  }
  if (amp > sys.omega_max * (1.0 + 1e-9)) {
    throw Error(ErrorKind::BoundViolation,
                "control_hamiltonian: amplitude exceeds omega_max");
  }
  const auto& s = spin_half();
  return electron_operator(sys, ux * s.sx + uy * s.sy);
}

ErrorGenerators error_generators(const SpinSystem& sys, double ux, double uy) {
  return {electron_operator(sys, sys.delta_max * spin_half().sz),
          control_hamiltonian(sys, ux, uy)};
}

double effective_larmor(const SpinSystem& sys, std::size_t j) {
  if (j >= sys.num_nuclei()) {
    throw Error(ErrorKind::IndexOutOfRange,
                "effective_larmor: index " + std::to_string(j) + " out of range");
  }
  return sys.omega_i + sys.nuclei[j].a_zz / 2.0;
}

double larmor_from_field(double b_gauss, double gamma_khz_per_gauss) {
  return khz(gamma_khz_per_gauss * b_gauss);
}

}  // namespace robdd
