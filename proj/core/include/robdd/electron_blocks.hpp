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

// Closed-form Van Loan propagation on the electron qubit.
//
// Every generator the optimizer cares about factors as (electron op) (x)
// (nuclear op) with the electron op either S_z or the slice's own control
// Hamiltonian, and the control only touches the electron. The joint-space
// derivatives are therefore D_e (x) N, and only the 2x2 electron blocks need
// propagating. Each slice's block exponential is evaluated exactly in the
// eigenbasis of the slice Hamiltonian with first and second divided
// differences of exp.

#ifndef ROBDD_ELECTRON_BLOCKS_HPP_
#define ROBDD_ELECTRON_BLOCKS_HPP_

#include <array>

#include <Eigen/Dense>

#include "robdd/pulse.hpp"

namespace robdd {

using Matrix2c = Eigen::Matrix2cd;

// Electron generator kinds: 0 = S_z, 1 = H_C(u(t)).
inline constexpr int kSz = 0;
inline constexpr int kHc = 1;

struct ElectronDerivatives {
  Matrix2c u;
  std::array<Matrix2c, 2> d1;                 // d1[g]
  std::array<std::array<Matrix2c, 2>, 2> d2;  // d2[g][h], g acts later
};

// Exact block quantities for one constant slice H = ux Sx + uy Sy:
// x[g] = block (1,2), z[g][h] = block (1,3) of the augmented exponential.
struct SliceBlocks {
  Matrix2c u;
  std::array<Matrix2c, 2> x;
  std::array<std::array<Matrix2c, 2>, 2> z;
};

SliceBlocks slice_blocks(double ux, double uy, double dt, bool with_cross);

// Propagates U, D1 and D2 through every slice. Cross pairs (S_z, H_C) and
// (H_C, S_z) are only filled when with_cross is set.
ElectronDerivatives electron_derivatives(const ShapedPulse& p, bool with_cross);

// d/d(ux[l]) and d/d(uy[l]) of the control-only electron propagator, exact
// per-slice Frechet derivatives. grad[l][0] is w.r.t. ux, grad[l][1] uy.
std::vector<std::array<Matrix2c, 2>> propagator_jacobian(const ShapedPulse& p);

}  // namespace robdd

#endif  // ROBDD_ELECTRON_BLOCKS_HPP_
