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

// Dense complex linear algebra and spin-1/2 operator primitives.

#ifndef ROBDD_LINALG_HPP_
#define ROBDD_LINALG_HPP_

#include <complex>

#include <Eigen/Dense>

namespace robdd {

using Complex = std::complex<double>;
inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Square, row/column storage is Eigen's default; the library only ever
// builds square instances and checks squareness at its entry points.
using ComplexMatrix = Eigen::MatrixXcd;

// Spin-1/2 operators S_a = sigma_a / 2.
struct SpinOperators {
  ComplexMatrix sx;
  ComplexMatrix sy;
  ComplexMatrix sz;
  ComplexMatrix identity;
};

const SpinOperators& spin_half();

ComplexMatrix identity(Eigen::Index dim);

// Standard Kronecker product; a's index is the slow one.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// exp(a) by scaling and squaring with a Pade approximant of degree 3..13,
// with degree and scaling chosen from the 1-norm of a. Valid for
// non-normal input (the augmented block generators are not Hermitian).
ComplexMatrix expm(const ComplexMatrix& a);

// exp(-i g t). Throws ErrorKind::NonFinite on non-finite entries and
// ErrorKind::InvalidInput on negative t.
ComplexMatrix expm_generator(const ComplexMatrix& g, double t);

// |Tr(u v^dagger)|^2 / d^2.
double unitary_fidelity(const ComplexMatrix& u, const ComplexMatrix& v);

double frobenius_norm_sq(const ComplexMatrix& m);

// ||u^dagger u - I||_F
double unitarity_defect(const ComplexMatrix& u);

// Single-qubit rotation R_phi(theta) = exp(-i theta (cos(phi) Sx + sin(phi) Sy)).
ComplexMatrix rotation(double theta, double phi);

// exp(-i phi Sz) on one qubit.
ComplexMatrix z_rotation(double phi);

bool all_finite(const ComplexMatrix& m);

void require_square(const ComplexMatrix& m, const char* what);

}  // namespace robdd

#endif  // ROBDD_LINALG_HPP_
