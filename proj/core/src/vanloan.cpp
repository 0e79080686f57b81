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

#include "robdd/vanloan.hpp"

#include <algorithm>
#include <string>

#include "robdd/error.hpp"

namespace robdd {

std::string_view to_string(GeneratorTag tag) {
  switch (tag) {
    case GeneratorTag::Detuning: return "v1";
    case GeneratorTag::Control: return "v2";
    case GeneratorTag::Bath: return "hse";
  }
  return "?";
}

GeneratorTag parse_generator_tag(std::string_view name) {
  if (name == "v1" || name == "detuning") return GeneratorTag::Detuning;
  if (name == "v2" || name == "control") return GeneratorTag::Control;
  if (name == "hse" || name == "bath") return GeneratorTag::Bath;
  throw Error(ErrorKind::UnknownTag,
              "unknown generator tag '" + std::string(name) + "'");
}

ComplexMatrix augmented_generator(const ComplexMatrix& hc, const ComplexMatrix& v1,
                                  const ComplexMatrix& v2) {
  require_square(hc, "augmented_generator");
  const Eigen::Index d = hc.rows();
  if (v1.rows() != d || v1.cols() != d || v2.rows() != d || v2.cols() != d) {
    throw Error(ErrorKind::DimensionMismatch,
                "augmented_generator: blocks must share one dimension");
  }
  ComplexMatrix a = ComplexMatrix::Zero(3 * d, 3 * d);
  a.block(0, 0, d, d) = hc;
  a.block(d, d, d, d) = hc;
  a.block(2 * d, 2 * d, d, d) = hc;
  a.block(0, d, d, d) = v1;
  a.block(d, 2 * d, d, d) = v2;
  return a;
}

ComplexMatrix generator_value(GeneratorTag tag, const SpinSystem& sys,
                              const ControlSlice& slice) {
  switch (tag) {
    case GeneratorTag::Detuning:
      return electron_operator(sys, sys.delta_max * spin_half().sz);
    case GeneratorTag::Control:
      return control_hamiltonian(sys, slice.ux, slice.uy);
    case GeneratorTag::Bath:
      return bath_coupling(sys);
  }
  throw Error(ErrorKind::UnknownTag, "generator_value: unknown tag");
}

BlockPropagation propagate_block(const ShapedPulse& p, const SpinSystem& sys,
                                 GeneratorTag first, GeneratorTag second) {
  const Eigen::Index d = sys.dim();
  ComplexMatrix m = identity(3 * d);
  for (const auto& sl : p.slices) {
    const ComplexMatrix hc = control_hamiltonian(sys, sl.ux, sl.uy);
    const ComplexMatrix a = augmented_generator(
        hc, generator_value(first, sys, sl), generator_value(second, sys, sl));
    m = expm_generator(a, p.dt) * m;
  }
  return {m.block(0, 0, d, d), m.block(0, d, d, d), m.block(d, 2 * d, d, d),
          m.block(0, 2 * d, d, d)};
}

DerivativeSet directional_derivatives(const ShapedPulse& p, const SpinSystem& sys,
                                      const std::vector<GeneratorTag>& generators,
                                      bool include_cross) {
  DerivativeSet out;
  out.u_ideal = pulse_propagator(p, sys, ErrorModel{}, false);
  std::vector<GeneratorTag> tags = generators;
  std::sort(tags.begin(), tags.end());
  tags.erase(std::unique(tags.begin(), tags.end()), tags.end());
  for (GeneratorTag a : tags) {
    for (GeneratorTag b : tags) {
      if (a != b && !include_cross) continue;
      BlockPropagation run = propagate_block(p, sys, a, b);
      out.d1.try_emplace(a, run.d1_first);
      out.d1.try_emplace(b, run.d1_second);
      out.d2.emplace(GeneratorPair{a, b}, std::move(run.d2));
    }
  }
  return out;
}

DerivativeNorms derivative_norms(const DerivativeSet& ds) {
  DerivativeNorms out;
  for (const auto& [tag, m] : ds.d1) out.first[tag] = frobenius_norm_sq(m);
  for (const auto& [pair, m] : ds.d2) out.second[pair] = frobenius_norm_sq(m);
  return out;
}

}  // namespace robdd
