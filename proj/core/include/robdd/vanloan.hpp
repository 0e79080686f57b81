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

// Directional derivatives of a piecewise-constant control propagator.
//
// For generators V, W the block-triangular generator
//
//   [ H  V  0 ]
//   [ 0  H  W ]
//   [ 0  0  H ]
//
// propagates to [[U, D1(V), D2(V, W)], [0, U, D1(W)], [0, 0, U]], where
// D1(V) = -i U int V~ and D2(V, W) = -U int_0^T dt1 V~(t1) int_0^t1 W~(t2),
// V~(t) = U(t)^dagger V(t) U(t) in the toggling frame of the ideal control.

#ifndef ROBDD_VANLOAN_HPP_
#define ROBDD_VANLOAN_HPP_

#include <map>
#include <string_view>
#include <utility>
#include <vector>

#include "robdd/linalg.hpp"
#include "robdd/pulse.hpp"
#include "robdd/system.hpp"

namespace robdd {

enum class GeneratorTag {
  Detuning,  // V1 = delta_max S_z
  Control,   // V2(t) = H_C(u(t))
  Bath,      // S_z-coupled hyperfine term of the free Hamiltonian
};

std::string_view to_string(GeneratorTag tag);
// Accepts "v1"/"detuning", "v2"/"control", "hse"/"bath".
GeneratorTag parse_generator_tag(std::string_view name);

using GeneratorPair = std::pair<GeneratorTag, GeneratorTag>;

struct DerivativeSet {
  ComplexMatrix u_ideal;
  std::map<GeneratorTag, ComplexMatrix> d1;
  std::map<GeneratorPair, ComplexMatrix> d2;
};

struct DerivativeNorms {
  std::map<GeneratorTag, double> first;
  std::map<GeneratorPair, double> second;
};

ComplexMatrix augmented_generator(const ComplexMatrix& hc, const ComplexMatrix& v1,
                                  const ComplexMatrix& v2);

// Generator value of `tag` during one slice, on the joint space of sys.
ComplexMatrix generator_value(GeneratorTag tag, const SpinSystem& sys,
                              const ControlSlice& slice);

// First-order derivatives for every tag in `generators`; second-order ones
// for the diagonal pairs (g, g) and, when include_cross, for every ordered
// pair of distinct tags.
DerivativeSet directional_derivatives(const ShapedPulse& p, const SpinSystem& sys,
                                      const std::vector<GeneratorTag>& generators,
                                      bool include_cross = true);

// Single augmented run for the ordered pair (first, second).
struct BlockPropagation {
  ComplexMatrix u;
  ComplexMatrix d1_first;
  ComplexMatrix d1_second;
  ComplexMatrix d2;
};

BlockPropagation propagate_block(const ShapedPulse& p, const SpinSystem& sys,
                                 GeneratorTag first, GeneratorTag second);

DerivativeNorms derivative_norms(const DerivativeSet& ds);

}  // namespace robdd

#endif  // ROBDD_VANLOAN_HPP_
