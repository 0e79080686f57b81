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

#ifndef ROBDD_PULSE_HPP_
#define ROBDD_PULSE_HPP_

#include <vector>

#include "robdd/linalg.hpp"
#include "robdd/system.hpp"

namespace robdd {

struct ControlSlice {
  double ux = 0.0;  // rad/s
  double uy = 0.0;  // rad/s

  double amplitude() const;
  friend bool operator==(const ControlSlice&, const ControlSlice&) = default;
};

// Piecewise-constant two-quadrature control waveform meant to realize the
// electron rotation R_{target_phi}(target_theta).
struct ShapedPulse {
  double dt = 0.0;  // s per slice
  std::vector<ControlSlice> slices;
  double target_theta = 0.0;
  double target_phi = 0.0;

  double duration() const { return dt * static_cast<double>(slices.size()); }
  double peak_amplitude() const;
  friend bool operator==(const ShapedPulse&, const ShapedPulse&) = default;
};

struct CompositeSegment {
  double theta = 0.0;
  double phi = 0.0;
};

// Square rotations applied in order (front is first in time).
struct CompositeSpec {
  std::vector<CompositeSegment> segments;

  double total_angle() const;
};

// Constant-amplitude pulse at phase phi. The nominal width theta/omega is
// rounded up to whole slices and the amplitude rescaled so the rotation
// angle is exactly theta. Throws ErrorKind::InvalidInput when the nominal
// width is shorter than one slice or theta is outside (0, 2 pi] (composite
// segments may reach 2 pi + pi/2, see corpse()).
ShapedPulse square_pulse(double theta, double phi, double omega, double dt);

// R_0(theta) = R_0(theta/2 - t') R_pi(2 pi - 2 t') R_0(2 pi + theta/2 - t'),
// t' = asin(sin(theta/2)/2). Segments are listed first-in-time first.
CompositeSpec corpse(double theta);

// R_0(theta) = R_p(pi) R_3p(2 pi) R_p(pi) R_0(theta), p = acos(-theta / 4 pi).
// The R_0(theta) factor acts first.
CompositeSpec bb1(double theta);

// Every segment becomes a square pulse at omega on a dt grid; the result is
// one ShapedPulse with the given target.
ShapedPulse expand_composite(const CompositeSpec& spec, double omega, double dt,
                             double target_theta, double target_phi);

// (ux, uy) rotated by phi in the xy-plane, target_phi += phi.
ShapedPulse phase_shift(const ShapedPulse& p, double phi);

// Every slice amplitude is multiplied by factor.
ShapedPulse scale_amplitude(const ShapedPulse& p, double factor);

// Radial projection of each slice onto the disc of radius omega_max.
ShapedPulse clip_amplitudes(const ShapedPulse& p, double omega_max);

// Ordered product over slices of
//   exp(-i dt [include_bath * H_free + (1 + eps2) H_C + eps1 delta_max S_z]).
ComplexMatrix pulse_propagator(const ShapedPulse& p, const SpinSystem& sys,
                               const ErrorModel& err, bool include_bath);

// Same as pulse_propagator(include_bath = false) restricted to the electron.
ComplexMatrix electron_pulse_propagator(const ShapedPulse& p,
                                        double delta_max,
                                        const ErrorModel& err);

// exp(-i dt (bx Sx + by Sy + bz Sz)) in closed form.
ComplexMatrix qubit_step(double bx, double by, double bz, double dt);

// R_phi(theta) (x) I_bath
ComplexMatrix target_rotation(const SpinSystem& sys, double theta, double phi);

}  // namespace robdd

#endif  // ROBDD_PULSE_HPP_
