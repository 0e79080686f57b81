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

#include "robdd/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "robdd/error.hpp"
#include "robdd/parallel.hpp"

namespace robdd {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

double detection_probability(const ComplexMatrix& u, const SpinSystem& sys) {
  const Eigen::Index b = sys.bath_dim();
  const ComplexMatrix r = rotation(kPi / 2.0, -kPi / 2.0);
  // rows of (<0| R) U, columns on |+> (x) I
  const ComplexMatrix top = r(0, 0) * u.topRows(b) + r(0, 1) * u.bottomRows(b);
  const ComplexMatrix m = (top.leftCols(b) + top.rightCols(b)) / std::sqrt(2.0);
  return m.squaredNorm() / static_cast<double>(b);
}

SpectrumResult detection_spectrum(const SpinSystem& sys, const SequenceShape& shape,
                                  const std::vector<double>& tau_grid,
                                  const ErrorModel& err, unsigned threads) {
  SpectrumResult res;
  res.grid.resize(tau_grid.size());
  if (tau_grid.empty()) return res;
  const double tau0 = *std::max_element(tau_grid.begin(), tau_grid.end());
  const DDSequence seq = build_sequence(shape.strategy, shape.pulse, tau0, shape.cycles,
                                        shape.seed, shape.instantaneous);
  const SequenceEngine engine(seq, sys, err);
  parallel_for(tau_grid.size(), threads, [&](std::size_t i) {
    const double tau = tau_grid[i];
    res.grid[i] = {tau, kPi / tau, detection_probability(engine.propagator(tau), sys)};
  });
  return res;
}

double RobustnessMap::area_fraction(double threshold) const {
  std::size_t hit = 0;
  std::size_t total = 0;
  for (const auto& row : values) {
    for (double v : row) {
      ++total;
      if (v >= threshold) ++hit;
    }
  }
  return total ? static_cast<double>(hit) / static_cast<double>(total) : 0.0;
}

double RobustnessMap::min_in(double det_lo, double det_hi, double amp_lo,
                             double amp_hi) const {
  const double tol = 1e-9;
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < detuning_axis.size(); ++i) {
    const double d = detuning_axis[i];
    if (d < det_lo - tol * std::abs(det_lo) - tol || d > det_hi + tol * std::abs(det_hi) + tol)
      continue;
    for (std::size_t j = 0; j < amplitude_axis.size(); ++j) {
      const double a = amplitude_axis[j];
      if (a < amp_lo - tol || a > amp_hi + tol) continue;
      m = std::min(m, values[i][j]);
    }
  }
  return m;
}

ComplexMatrix reduced_electron(const ComplexMatrix& u, const SpinSystem& sys) {
  const Eigen::Index b = sys.bath_dim();
  ComplexMatrix r(2, 2);
  for (int a = 0; a < 2; ++a) {
    for (int c = 0; c < 2; ++c) r(a, c) = u.block(a * b, c * b, b, b).trace();
  }
  return r / static_cast<double>(b);
}

double reduced_fidelity(const ComplexMatrix& u, const ComplexMatrix& target2,
                        const SpinSystem& sys) {
  const Complex t = (reduced_electron(u, sys) * target2.adjoint()).trace();
  return std::norm(t) / 4.0;
}

namespace {

RobustnessMap empty_map(const std::vector<double>& det, const std::vector<double>& amp) {
  RobustnessMap m;
  m.detuning_axis = det;
  m.amplitude_axis = amp;
  m.values.assign(det.size(), std::vector<double>(amp.size(), 0.0));
  return m;
}

template <typename Fn>
void fill_map(RobustnessMap& m, unsigned threads, Fn&& value_at) {
  const std::size_t na = m.amplitude_axis.size();
  parallel_for(m.detuning_axis.size() * na, threads, [&](std::size_t k) {
    const std::size_t i = k / na;
    const std::size_t j = k % na;
    m.values[i][j] = value_at(m.detuning_axis[i], m.amplitude_axis[j]);
  });
}

ErrorModel error_at(const SpinSystem& sys, double detuning, double amp) {
  return ErrorModel{detuning / sys.delta_max, amp};
}

}  // namespace

RobustnessMap identity_robustness_map(const SpinSystem& sys, const SequenceShape& shape,
                                      double tau, const std::vector<double>& det_grid,
                                      const std::vector<double>& amp_grid,
                                      unsigned threads) {
  const DDSequence seq = build_sequence(shape.strategy, shape.pulse, tau, shape.cycles,
                                        shape.seed, shape.instantaneous);
  const ComplexMatrix id = identity(2);
  RobustnessMap m = empty_map(det_grid, amp_grid);
  fill_map(m, threads, [&](double det, double amp) {
    const ComplexMatrix u = sequence_propagator(seq, sys, error_at(sys, det, amp));
    return reduced_fidelity(u, id, sys);
  });
  return m;
}

std::pair<ShapedPulse, ShapedPulse> family_pulses(std::string_view family,
                                                  double omega, double dt) {
  if (family == "square") {
    return {square_pulse(kPi / 2.0, 0.0, omega, dt), square_pulse(kPi, 0.0, omega, dt)};
  }
  if (family == "corpse") {
    return {expand_composite(corpse(kPi / 2.0), omega, dt, kPi / 2.0, 0.0),
            expand_composite(corpse(kPi), omega, dt, kPi, 0.0)};
  }
  if (family == "bb1") {
    return {expand_composite(bb1(kPi / 2.0), omega, dt, kPi / 2.0, 0.0),
            expand_composite(bb1(kPi), omega, dt, kPi, 0.0)};
  }
  throw Error(ErrorKind::UnknownTag, "no built-in pulse family '" + std::string(family) + "'");
}

double nuclear_polarization(const ComplexMatrix& u, const SpinSystem& sys) {
  if (sys.num_nuclei() == 0) {
    throw Error(ErrorKind::InvalidInput, "nuclear_polarization: no nuclei");
  }
  const Eigen::Index b = sys.bath_dim();
  const ComplexMatrix iz = nuclear_operator(sys, spin_half().sz, 0);
  // rho0 = |0><0| (x) I / b, so U rho0 U^dagger uses the first b columns
  const ComplexMatrix c = u.leftCols(b);
  const Complex t = (c.adjoint() * iz * c).trace();
  return 2.0 * t.real() / static_cast<double>(b);
}

DnpMap dnp_transfer_map(const PulsePolSpec& spec, const SpinSystem& sys,
                        const std::vector<double>& det_grid,
                        const std::vector<double>& rabi_grid, unsigned threads) {
  DnpMap out;
  PulsePolSpec ideal = spec;
  ideal.instantaneous = true;
  out.ideal_polarization = nuclear_polarization(pulsepol_propagator(ideal, sys, {}), sys);
  out.reference_polarization = nuclear_polarization(pulsepol_propagator(spec, sys, {}), sys);
  out.alpha = fit_pulsepol_alpha(spec, sys);
  out.map = empty_map(det_grid, rabi_grid);
  fill_map(out.map, threads, [&](double det, double amp) {
    const ComplexMatrix u = pulsepol_propagator(spec, sys, error_at(sys, det, amp));
    return nuclear_polarization(u, sys) / out.reference_polarization;
  });
  return out;
}

double fit_pulsepol_alpha(const PulsePolSpec& spec, const SpinSystem& sys,
                          int max_cycles) {
  PulsePolSpec one = spec;
  one.instantaneous = true;
  one.cycles = 1;
  const double tau = pulsepol_tau(one, sys);
  const ComplexMatrix cyc = pulsepol_propagator(one, sys, {});
  std::vector<double> pol{0.0};
  ComplexMatrix u = identity(sys.dim());
  for (int n = 1; n <= max_cycles; ++n) {
    u = cyc * u;
    pol.push_back(std::abs(nuclear_polarization(u, sys)));
  }
  // First local maximum, refined by a parabola through its neighbours.
  for (int n = 1; n < max_cycles; ++n) {
    if (pol[n] >= pol[n - 1] && pol[n] > pol[n + 1]) {
      const double a = pol[n - 1];
      const double b = pol[n];
      const double c = pol[n + 1];
      const double den = a - 2.0 * b + c;
      const double shift = den != 0.0 ? 0.5 * (a - c) / den : 0.0;
      const double n_full = n + shift;
      return 1.0 / (2.0 * n_full * tau * sys.nuclei[0].a_zx);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

RobustnessMap pulse_robustness_profile(const ShapedPulse& pulse,
                                       const RotationTarget& target,
                                       const SpinSystem& sys,
                                       const std::vector<double>& det_grid,
                                       const std::vector<double>& amp_grid,
                                       unsigned threads) {
  const ComplexMatrix r = rotation(target.theta, target.phi);
  RobustnessMap m = empty_map(det_grid, amp_grid);
  fill_map(m, threads, [&](double det, double amp) {
    const ErrorModel e = error_at(sys, det, amp);
    if (sys.num_nuclei() == 0) {
      const ComplexMatrix u = electron_pulse_propagator(pulse, sys.delta_max, e);
      return std::norm((u * r.adjoint()).trace()) / 4.0;
    }
    return reduced_fidelity(pulse_propagator(pulse, sys, e, true), r, sys);
  });
  return m;
}

}  // namespace robdd
