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

#include "robdd/linalg.hpp"

#include <array>
#include <cmath>
#include <string>

#include "robdd/error.hpp"

namespace robdd {

namespace {

SpinOperators make_spin_half() {
  SpinOperators ops;
  ops.sx = ComplexMatrix::Zero(2, 2);
  ops.sy = ComplexMatrix::Zero(2, 2);
  ops.sz = ComplexMatrix::Zero(2, 2);
  ops.sx(0, 1) = 0.5;
  ops.sx(1, 0) = 0.5;
  ops.sy(0, 1) = Complex(0.0, -0.5);
  ops.sy(1, 0) = Complex(0.0, 0.5);
  ops.sz(0, 0) = 0.5;
  ops.sz(1, 1) = -0.5;
  ops.identity = ComplexMatrix::Identity(2, 2);
  return ops;
}

double one_norm(const ComplexMatrix& a) {
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

// Pade coefficients b_0..b_m (Higham 2005, Table 10.4).
constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0,
                                          420.0,   30.0,    1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0,
                                          277200.0,   25200.0,   1512.0,
                                          56.0,       1.0};
constexpr std::array<double, 10> kPade9 = {
    17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
    2162160.0,     110880.0,     3960.0,       90.0,        1.0};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};

// Largest 1-norm for which degree m gives unit-roundoff backward error.
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

template <std::size_t N>
ComplexMatrix pade_low(const ComplexMatrix& a, const std::array<double, N>& b) {
  const Eigen::Index n = a.rows();
  const ComplexMatrix eye = ComplexMatrix::Identity(n, n);
  const ComplexMatrix a2 = a * a;
  ComplexMatrix power = eye;
  ComplexMatrix u_inner = b[1] * eye;
  ComplexMatrix v = b[0] * eye;
  for (std::size_t k = 2; k + 1 < N; k += 2) {
    power = power * a2;
    v.noalias() += b[k] * power;
    u_inner.noalias() += b[k + 1] * power;
  }
  const ComplexMatrix u = a * u_inner;
  return (v - u).partialPivLu().solve(v + u);
}

ComplexMatrix pade13(const ComplexMatrix& a) {
  const auto& b = kPade13;
  const Eigen::Index n = a.rows();
  const ComplexMatrix eye = ComplexMatrix::Identity(n, n);
  const ComplexMatrix a2 = a * a;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a4 * a2;
  const ComplexMatrix u_hi = b[13] * a6 + b[11] * a4 + b[9] * a2;
  const ComplexMatrix u =
      a * (a6 * u_hi + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * eye);
  const ComplexMatrix v_hi = b[12] * a6 + b[10] * a4 + b[8] * a2;
  const ComplexMatrix v =
      a6 * v_hi + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * eye;
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

const SpinOperators& spin_half() {
  static const SpinOperators ops = make_spin_half();
  return ops;
}

ComplexMatrix identity(Eigen::Index dim) {
  return ComplexMatrix::Identity(dim, dim);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix expm(const ComplexMatrix& a) {
  require_square(a, "expm");
  if (!all_finite(a)) {
    throw Error(ErrorKind::NonFinite, "expm: non-finite matrix entry");
  }
  if (a.rows() == 0) return a;
  const double norm = one_norm(a);
  if (norm <= kTheta3) return pade_low(a, kPade3);
  if (norm <= kTheta5) return pade_low(a, kPade5);
  if (norm <= kTheta7) return pade_low(a, kPade7);
  if (norm <= kTheta9) return pade_low(a, kPade9);
  int squarings = 0;
  if (norm > kTheta13) {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
  }
  ComplexMatrix result = pade13(a * std::ldexp(1.0, -squarings));
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

ComplexMatrix expm_generator(const ComplexMatrix& g, double t) {
  if (!std::isfinite(t) || t < 0.0) {
    throw Error(ErrorKind::InvalidInput,
                "expm_generator: time must be finite and non-negative");
  }
  if (!all_finite(g)) {
    throw Error(ErrorKind::NonFinite, "expm_generator: non-finite generator");
  }
  return expm(Complex(0.0, -t) * g);
}

double unitary_fidelity(const ComplexMatrix& u, const ComplexMatrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols() || u.rows() != u.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                "unitary_fidelity: operands must be square with equal dims");
  }
  const double d = static_cast<double>(u.rows());
  // Tr(u v^dagger) = sum_ij u_ij conj(v_ij)
  const Complex overlap = (u.array() * v.conjugate().array()).sum();
  return std::norm(overlap) / (d * d);
}

double frobenius_norm_sq(const ComplexMatrix& m) { return m.squaredNorm(); }

double unitarity_defect(const ComplexMatrix& u) {
  return (u.adjoint() * u - identity(u.rows())).norm();
}

ComplexMatrix rotation(double theta, double phi) {
  const auto& s = spin_half();
  return expm_generator(std::cos(phi) * s.sx + std::sin(phi) * s.sy, theta);
}

ComplexMatrix z_rotation(double phi) {
  ComplexMatrix r = ComplexMatrix::Zero(2, 2);
  r(0, 0) = std::exp(Complex(0.0, -phi / 2.0));
  r(1, 1) = std::exp(Complex(0.0, phi / 2.0));
  return r;
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + ": matrix must be square");
  }
}

}  // namespace robdd
