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

#include "robdd/pulse.hpp"

#include <algorithm>
#include <cmath>

#include "robdd/error.hpp"

namespace robdd {

namespace {

ShapedPulse square_segment(double theta, double phi, double omega, double dt) {
  if (!(omega > 0.0) || !(dt > 0.0) || !std::isfinite(theta) || theta <= 0.0) {
    throw Error(ErrorKind::InvalidInput,
                "square pulse: need theta > 0, omega > 0, dt > 0");
  }
  const double width = theta / omega;
  if (width < dt * (1.0 - 1e-9)) {
    throw Error(ErrorKind::InvalidInput,
                "square pulse: nominal width shorter than one slice");
  }
  const auto n = static_cast<std::size_t>(std::ceil(width / dt - 1e-9));
  const double amp = theta / (static_cast<double>(n) * dt);
  ShapedPulse p;
  p.dt = dt;
  p.slices.assign(n, ControlSlice{amp * std::cos(phi), amp * std::sin(phi)});
  p.target_theta = theta;
  p.target_phi = phi;
  return p;
}

}  // namespace

double ControlSlice::amplitude() const { return std::hypot(ux, uy); }

double ShapedPulse::peak_amplitude() const {
  double peak = 0.0;
  for (const auto& s : slices) peak = std::max(peak, s.amplitude());
  return peak;
}

double CompositeSpec::total_angle() const {
  double sum = 0.0;
  for (const auto& s : segments) sum += s.theta;
  return sum;
}

ShapedPulse square_pulse(double theta, double phi, double omega, double dt) {
  if (!(theta > 0.0) || theta > kTwoPi * (1.0 + 1e-12)) {
    throw Error(ErrorKind::InvalidInput, "square_pulse: theta must be in (0, 2pi]");
  }
  return square_segment(theta, phi, omega, dt);
}

CompositeSpec corpse(double theta) {
  const double tp = std::asin(std::sin(theta / 2.0) / 2.0);
  return CompositeSpec{{{2.0 * kPi + theta / 2.0 - tp, 0.0},
                        {2.0 * kPi - 2.0 * tp, kPi},
                        {theta / 2.0 - tp, 0.0}}};
}

CompositeSpec bb1(double theta) {
  const double p = std::acos(-theta / (4.0 * kPi));
  return CompositeSpec{
      {{theta, 0.0}, {kPi, p}, {2.0 * kPi, 3.0 * p}, {kPi, p}}};
}

ShapedPulse expand_composite(const CompositeSpec& spec, double omega, double dt,
                             double target_theta, double target_phi) {
  ShapedPulse out;
  out.dt = dt;
  out.target_theta = target_theta;
  out.target_phi = target_phi;
  for (const auto& seg : spec.segments) {
    const ShapedPulse piece = square_segment(seg.theta, seg.phi, omega, dt);
    out.slices.insert(out.slices.end(), piece.slices.begin(), piece.slices.end());
  }
  return out;
}

ShapedPulse phase_shift(const ShapedPulse& p, double phi) {
  ShapedPulse out = p;
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  for (auto& sl : out.slices) {
    const double x = sl.ux;
    const double y = sl.uy;
    sl.ux = c * x - s * y;
    sl.uy = s * x + c * y;
  }
  out.target_phi += phi;
  return out;
}

ShapedPulse scale_amplitude(const ShapedPulse& p, double factor) {
  ShapedPulse out = p;
  for (auto& sl : out.slices) {
    sl.ux *= factor;
    sl.uy *= factor;
  }
  return out;
}

ShapedPulse clip_amplitudes(const ShapedPulse& p, double omega_max) {
  ShapedPulse out = p;
  for (auto& sl : out.slices) {
    const double a = sl.amplitude();
    if (a > omega_max) {
      // Scale and then pin to the bound so rounding never leaves a > omega_max.
      const double f = omega_max / a;
      sl.ux *= f;
      sl.uy *= f;
      while (sl.amplitude() > omega_max) {
        sl.ux = std::nextafter(sl.ux, 0.0);
        sl.uy = std::nextafter(sl.uy, 0.0);
      }
    }
  }
  return out;
}

ComplexMatrix qubit_step(double bx, double by, double bz, double dt) {
  const double norm = std::sqrt(bx * bx + by * by + bz * bz);
  ComplexMatrix u(2, 2);
  if (norm == 0.0) {
    u.setIdentity();
    return u;
  }
  const double half = 0.5 * norm * dt;
  const double c = std::cos(half);
  const double s = std::sin(half) / norm;
  // cos(h) I - i sin(h) (n . sigma)
  u(0, 0) = Complex(c, -s * bz);
  u(1, 1) = Complex(c, s * bz);
  u(0, 1) = Complex(-s * by, -s * bx);
  u(1, 0) = Complex(s * by, -s * bx);
  return u;
}

ComplexMatrix electron_pulse_propagator(const ShapedPulse& p, double delta_max,
                                        const ErrorModel& err) {
  const double amp = 1.0 + err.eps2;
  const double bz = err.eps1 * delta_max;
  ComplexMatrix u = identity(2);
  for (const auto& sl : p.slices) {
    u = qubit_step(amp * sl.ux, amp * sl.uy, bz, p.dt) * u;
  }
  return u;
}

ComplexMatrix pulse_propagator(const ShapedPulse& p, const SpinSystem& sys,
                               const ErrorModel& err, bool include_bath) {
  if (!include_bath || sys.num_nuclei() == 0) {
    for (const auto& sl : p.slices) {
      if (sl.amplitude() > sys.omega_max * (1.0 + 1e-9)) {
        throw Error(ErrorKind::BoundViolation,
                    "pulse_propagator: slice amplitude exceeds omega_max");
      }
    }
    const ComplexMatrix ue = electron_pulse_propagator(p, sys.delta_max, err);
    if (sys.num_nuclei() == 0) return ue;
    return electron_operator(sys, ue);
  }
  const auto& s = spin_half();
  const ComplexMatrix h_free = free_hamiltonian(sys);
  const ComplexMatrix sx = electron_operator(sys, s.sx);
  const ComplexMatrix sy = electron_operator(sys, s.sy);
  const ComplexMatrix base =
      h_free + err.eps1 * sys.delta_max * electron_operator(sys, s.sz);
  ComplexMatrix u = identity(sys.dim());
  const double amp = 1.0 + err.eps2;
  for (std::size_t l = 0; l < p.slices.size();) {
    const ControlSlice& sl = p.slices[l];
    if (sl.amplitude() > sys.omega_max * (1.0 + 1e-9)) {
      throw Error(ErrorKind::BoundViolation,
                  "pulse_propagator: slice amplitude exceeds omega_max");
    }
    // Runs of equal slices share one exponential.
    std::size_t run = 1;
    while (l + run < p.slices.size() && p.slices[l + run] == sl) ++run;
    const ComplexMatrix h = base + amp * sl.ux * sx + amp * sl.uy * sy;
    u = expm_generator(h, p.dt * static_cast<double>(run)) * u;
    l += run;
  }
  return u;
}

ComplexMatrix target_rotation(const SpinSystem& sys, double theta, double phi) {
  return electron_operator(sys, rotation(theta, phi));
}

}  // namespace robdd
