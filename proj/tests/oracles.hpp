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


// Independent reference implementations used by the unit and acceptance
// tests. Nothing here calls expm, kron or the Van Loan code under test.

#ifndef ROBDD_TESTS_ORACLES_HPP_
#define ROBDD_TESTS_ORACLES_HPP_

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "robdd/linalg.hpp"
#include "robdd/pulse.hpp"
#include "robdd/rng.hpp"
#include "robdd/system.hpp"
#include "robdd/vanloan.hpp"

namespace robdd::oracle {

// exp(-i g t) for Hermitian g through its eigendecomposition.
inline ComplexMatrix expm_eig(const ComplexMatrix& g, double t) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (g + g.adjoint()));
  Eigen::VectorXcd ph(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < ph.size(); ++i) {
    ph(i) = std::exp(Complex(0.0, -es.eigenvalues()(i) * t));
  }
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

inline ComplexMatrix kron_loop(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

inline ComplexMatrix random_hermitian(Eigen::Index d, Rng& rng, double scale) {
  ComplexMatrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  return scale * 0.5 * (m + m.adjoint());
}

// Slices uniform in the amplitude disc.
inline ShapedPulse random_pulse(std::size_t slices, double dt, double omega_max, Rng& rng) {
  ShapedPulse p;
  p.dt = dt;
  p.target_theta = kPi;
  for (std::size_t l = 0; l < slices; ++l) {
    const double r = omega_max * std::sqrt(rng.uniform());
    const double a = rng.uniform(0.0, kTwoPi);
    p.slices.push_back({r * std::cos(a), r * std::sin(a)});
  }
  return p;
}

inline SpinSystem random_system(std::size_t nuclei, Rng& rng) {
  SpinSystem s;
  s.omega_max = mhz(25);
  s.delta_max = mhz(25);
  s.t_min = 1e-9;
  s.omega_i = khz(rng.uniform(300.0, 500.0));
  s.coupling = rng.uniform() < 0.5 ? CouplingConvention::NvProjector : CouplingConvention::Symmetric;
  for (std::size_t j = 0; j < nuclei; ++j) {
    s.nuclei.push_back({khz(rng.uniform(-80.0, 80.0)), khz(rng.uniform(-50.0, 50.0))});
  }
  return s;
}

// Closed-form |Tr(U R_0(pi)^dagger)|^2 / 4 for a constant x drive of width t
// with Rabi amplitude w and detuning d.
inline double rabi_pi_fidelity(double w, double d, double t) {
  const double we = std::hypot(w, d);
  const double s = std::sin(0.5 * we * t) * w / we;
  return s * s;
}

struct DysonResult {
  ComplexMatrix u;
  ComplexMatrix d1_first;
  ComplexMatrix d1_second;
  ComplexMatrix d2;
};

// Midpoint nested Riemann sums of
//   D1(V) = -i U int V~,  D2(V, W) = -U int dt1 V~(t1) int_0^t1 dt2 W~(t2)
// in the toggling frame of the control alone, `sub` steps per slice.
inline DysonResult dyson(const ShapedPulse& p, const SpinSystem& sys, GeneratorTag first,
                         GeneratorTag second, int sub) {
  const Eigen::Index d = sys.dim();
  const double h = p.dt / sub;
  ComplexMatrix u = ComplexMatrix::Identity(d, d);
  ComplexMatrix s1 = ComplexMatrix::Zero(d, d);
  ComplexMatrix s2 = ComplexMatrix::Zero(d, d);
  ComplexMatrix acc = ComplexMatrix::Zero(d, d);
  for (const auto& sl : p.slices) {
    const ComplexMatrix hc = control_hamiltonian(sys, sl.ux, sl.uy);
    const ComplexMatrix va = generator_value(first, sys, sl);
    const ComplexMatrix vb = generator_value(second, sys, sl);
    const ComplexMatrix half = expm_eig(hc, 0.5 * h);
    const ComplexMatrix full = expm_eig(hc, h);
    for (int k = 0; k < sub; ++k) {
      const ComplexMatrix um = half * u;
      const ComplexMatrix ta = um.adjoint() * va * um;
      const ComplexMatrix tb = um.adjoint() * vb * um;
      s1 += ta * h;
      acc += tb * h;
      s2 += ta * h * (acc - 0.5 * h * tb);
      u = full * u;
    }
  }
  return {u, Complex(0.0, -1.0) * u * s1, Complex(0.0, -1.0) * u * acc, -u * s2};
}

inline double rel_err(const ComplexMatrix& a, const ComplexMatrix& ref) {
  const double n = ref.norm();
  return n == 0.0 ? a.norm() : (a - ref).norm() / n;
}

}  // namespace robdd::oracle

#endif  // ROBDD_TESTS_ORACLES_HPP_
