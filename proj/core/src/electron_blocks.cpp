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

#include "robdd/electron_blocks.hpp"

#include <cmath>
#include <complex>

namespace robdd {

namespace {

// (e^h - 1) / h
Complex g1(Complex h) {
  if (std::abs(h) < 1e-3) return 1.0 + h / 2.0 + h * h / 6.0 + h * h * h / 24.0;
  return (std::exp(h) - 1.0) / h;
}

// (e^h - 1 - h) / h^2
Complex g2(Complex h) {
  if (std::abs(h) < 1e-3) {
    return 0.5 + h / 6.0 + h * h / 24.0 + h * h * h / 120.0;
  }
  return (std::exp(h) - 1.0 - h) / (h * h);
}

struct Eigenframe {
  Matrix2c q;                 // columns are eigenvectors of H
  std::array<Complex, 2> mu;  // eigenvalues of -i dt H
  std::array<Complex, 2> e;   // exp(mu)
  // f1[j][k] = exp[mu_j, mu_k]
  std::array<std::array<Complex, 2>, 2> f1;
  // f2[j][k][l] = exp[mu_j, mu_k, mu_l]
  std::array<std::array<std::array<Complex, 2>, 2>, 2> f2;
};

Eigenframe eigenframe(double ux, double uy, double dt) {
  Eigenframe f;
  const double a = std::hypot(ux, uy);
  const double phi = a > 0.0 ? std::atan2(uy, ux) : 0.0;
  const Complex ph = std::exp(Complex(0.0, phi));
  const double r = 1.0 / std::sqrt(2.0);
  f.q << r, r, r * ph, -r * ph;
  f.mu = {Complex(0.0, -dt * a / 2.0), Complex(0.0, dt * a / 2.0)};
  f.e = {std::exp(f.mu[0]), std::exp(f.mu[1])};
  const Complex h01 = f.mu[1] - f.mu[0];
  f.f1[0][0] = f.e[0];
  f.f1[1][1] = f.e[1];
  f.f1[0][1] = f.e[0] * g1(h01);
  f.f1[1][0] = f.e[1] * g1(-h01);
  const Complex two_zero = f.e[0] * g2(h01);   // [mu0, mu0, mu1]
  const Complex two_one = f.e[1] * g2(-h01);   // [mu1, mu1, mu0]
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      for (int l = 0; l < 2; ++l) {
        const int zeros = (j == 0) + (k == 0) + (l == 0);
        Complex v;
        if (zeros == 3) {
          v = f.e[0] / 2.0;
        } else if (zeros == 0) {
          v = f.e[1] / 2.0;
        } else if (zeros == 2) {
          v = two_zero;
        } else {
          v = two_one;
        }
        f.f2[j][k][l] = v;
      }
    }
  }
  return f;
}

Matrix2c first_block(const Eigenframe& f, const Matrix2c& b_eig) {
  Matrix2c x;
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) x(j, k) = b_eig(j, k) * f.f1[j][k];
  }
  return x;
}

Matrix2c second_block(const Eigenframe& f, const Matrix2c& b_eig,
                      const Matrix2c& c_eig) {
  Matrix2c z;
  for (int j = 0; j < 2; ++j) {
    for (int l = 0; l < 2; ++l) {
      z(j, l) = b_eig(j, 0) * c_eig(0, l) * f.f2[j][0][l] +
                b_eig(j, 1) * c_eig(1, l) * f.f2[j][1][l];
    }
  }
  return z;
}

Matrix2c sz2() {
  Matrix2c m;
  m << 0.5, 0.0, 0.0, -0.5;
  return m;
}

}  // namespace

SliceBlocks slice_blocks(double ux, double uy, double dt, bool with_cross) {
  const Eigenframe f = eigenframe(ux, uy, dt);
  const Matrix2c qa = f.q.adjoint();
  SliceBlocks out;
  Matrix2c diag = Matrix2c::Zero();
  diag(0, 0) = f.e[0];
  diag(1, 1) = f.e[1];
  out.u = f.q * diag * qa;
  // Generators scaled by -i dt, in the eigenframe.
  std::array<Matrix2c, 2> b;
  b[kSz] = qa * (Complex(0.0, -dt) * sz2()) * f.q;
  b[kHc] = Matrix2c::Zero();
  b[kHc](0, 0) = f.mu[0];
  b[kHc](1, 1) = f.mu[1];
  for (int g = 0; g < 2; ++g) out.x[g] = f.q * first_block(f, b[g]) * qa;
  for (int g = 0; g < 2; ++g) {
    for (int h = 0; h < 2; ++h) {
      if (g != h && !with_cross) {
        out.z[g][h].setZero();
        continue;
      }
      out.z[g][h] = f.q * second_block(f, b[g], b[h]) * qa;
    }
  }
  return out;
}

ElectronDerivatives electron_derivatives(const ShapedPulse& p, bool with_cross) {
  ElectronDerivatives d;
  d.u.setIdentity();
  for (auto& m : d.d1) m.setZero();
  for (auto& row : d.d2) {
    for (auto& m : row) m.setZero();
  }
  for (const auto& sl : p.slices) {
    const SliceBlocks s = slice_blocks(sl.ux, sl.uy, p.dt, with_cross);
    for (int g = 0; g < 2; ++g) {
      for (int h = 0; h < 2; ++h) {
        if (g != h && !with_cross) continue;
        d.d2[g][h] = s.u * d.d2[g][h] + s.x[g] * d.d1[h] + s.z[g][h] * d.u;
      }
    }
    for (int g = 0; g < 2; ++g) d.d1[g] = s.u * d.d1[g] + s.x[g] * d.u;
    d.u = s.u * d.u;
  }
  return d;
}

std::vector<std::array<Matrix2c, 2>> propagator_jacobian(const ShapedPulse& p) {
  const std::size_t n = p.slices.size();
  std::vector<Matrix2c> step(n);
  std::vector<std::array<Matrix2c, 2>> local(n);
  Matrix2c sx;
  sx << 0.0, 0.5, 0.5, 0.0;
  Matrix2c sy;
  sy << 0.0, Complex(0.0, -0.5), Complex(0.0, 0.5), 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    const Eigenframe f = eigenframe(p.slices[l].ux, p.slices[l].uy, p.dt);
    const Matrix2c qa = f.q.adjoint();
    Matrix2c diag = Matrix2c::Zero();
    diag(0, 0) = f.e[0];
    diag(1, 1) = f.e[1];
    step[l] = f.q * diag * qa;
    local[l][0] = f.q * first_block(f, qa * (Complex(0.0, -p.dt) * sx) * f.q) * qa;
    local[l][1] = f.q * first_block(f, qa * (Complex(0.0, -p.dt) * sy) * f.q) * qa;
  }
  // before[l] = U_{l-1} ... U_0, after[l] = U_{n-1} ... U_{l+1}
  std::vector<Matrix2c> before(n, Matrix2c::Identity());
  std::vector<Matrix2c> after(n, Matrix2c::Identity());
  for (std::size_t l = 1; l < n; ++l) before[l] = step[l - 1] * before[l - 1];
  for (std::size_t l = n; l-- > 1;) after[l - 1] = after[l] * step[l];
  std::vector<std::array<Matrix2c, 2>> out(n);
  for (std::size_t l = 0; l < n; ++l) {
    for (int c = 0; c < 2; ++c) out[l][c] = after[l] * local[l][c] * before[l];
  }
  return out;
}

}  // namespace robdd
