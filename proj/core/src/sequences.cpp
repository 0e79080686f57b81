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

#include "robdd/sequences.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include <Eigen/Eigenvalues>

#include "robdd/error.hpp"
#include "robdd/rng.hpp"

namespace robdd {

namespace {

double wrap_phase(double phi) {
  double r = std::fmod(phi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod can return 2 pi - tiny for exact multiples after rounding
  if (kTwoPi - r < 1e-12) r = 0.0;
  return r;
}

// P -> exp(-i phi S_z) P exp(i phi S_z) on the joint space.
ComplexMatrix conjugate_phase(const ComplexMatrix& p, const Eigen::VectorXd& sz,
                              double phi) {
  if (phi == 0.0) return p;
  ComplexMatrix out(p.rows(), p.cols());
  for (Eigen::Index b = 0; b < p.cols(); ++b) {
    for (Eigen::Index a = 0; a < p.rows(); ++a) {
      out(a, b) = p(a, b) * std::exp(Complex(0.0, -phi * (sz(a) - sz(b))));
    }
  }
  return out;
}

Eigen::VectorXd electron_sz_diagonal(const SpinSystem& sys) {
  const Eigen::Index d = sys.dim();
  Eigen::VectorXd v(d);
  for (Eigen::Index a = 0; a < d; ++a) v(a) = a < d / 2 ? 0.5 : -0.5;
  return v;
}

}  // namespace

std::vector<double> xy8_phases() {
  const double x = 0.0;
  const double y = kPi / 2.0;
  return {x, y, x, y, y, x, y, x};
}

double ur_phase_step(int n, int sign) {
  if (n < 4 || n % 2 != 0) {
    throw Error(ErrorKind::InvalidInput, "ur_phases: n must be even and at least 4");
  }
  const double s = sign < 0 ? -1.0 : 1.0;
  if (n % 4 == 0) return s * kPi / (n / 4);
  const int m = (n - 2) / 4;
  return s * 2.0 * m * kPi / (2 * m + 1);
}

std::vector<double> ur_phases(int n, double phi2, int sign) {
  const double step = ur_phase_step(n, sign);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    const double tri = (k - 1) * (k - 2) / 2;
    out[k - 1] = wrap_phase(tri * step + (k - 1) * phi2);
  }
  return out;
}

std::vector<std::vector<double>> rp_phases(const std::vector<double>& base, int cycles,
                                           std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> out(static_cast<std::size_t>(std::max(cycles, 0)));
  for (auto& row : out) {
    const double g = rng.uniform(0.0, kTwoPi);
    row.reserve(base.size());
    for (double b : base) row.push_back(b + g);
  }
  return out;
}

double gaussian_envelope(double t, double lambda0, double sigma) {
  return lambda0 * std::exp(-t * t / (2.0 * sigma * sigma));
}

std::vector<double> gaussian_amplitudes(int cycles, double tau, double lambda0,
                                        double sigma) {
  if (cycles < 1) {
    throw Error(ErrorKind::InvalidInput, "gaussian_amplitudes: cycles must be >= 1");
  }
  const double len = 4.0 * tau;
  const double mid = 0.5 * len * cycles;
  std::vector<double> out(static_cast<std::size_t>(cycles));
  for (int n = 0; n < cycles; ++n) {
    out[n] = gaussian_envelope((n + 0.5) * len - mid, lambda0, sigma);
  }
  return out;
}

std::string StrategySpec::name() const {
  switch (kind) {
    case Strategy::Xy8: return "xy8";
    case Strategy::Ur: return "ur" + std::to_string(ur_n);
    case Strategy::RpXy8: return "rp-xy8";
    case Strategy::Bb1Xy8: return "bb1-xy8";
    case Strategy::Gaxy8: return "gaxy8";
  }
  return "?";
}

StrategySpec parse_strategy(std::string_view name) {
  StrategySpec s;
  if (name == "xy8") return s;
  if (name == "rp-xy8") {
    s.kind = Strategy::RpXy8;
    return s;
  }
  if (name == "bb1-xy8") {
    s.kind = Strategy::Bb1Xy8;
    return s;
  }
  if (name == "gaxy8") {
    s.kind = Strategy::Gaxy8;
    return s;
  }
  if (name.size() > 2 && name.substr(0, 2) == "ur") {
    int n = 0;
    const auto digits = name.substr(2);
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec == std::errc() && ptr == digits.data() + digits.size()) {
      ur_phase_step(n);
      s.kind = Strategy::Ur;
      s.ur_n = n;
      return s;
    }
  }
  throw Error(ErrorKind::UnknownTag, "unknown strategy '" + std::string(name) + "'");
}

double DDSequence::effective_width() const {
  if (instantaneous) return 0.0;
  double w = 0.0;
  for (const auto& e : entries) w = std::max(w, e.pulse.duration());
  return w;
}

bool DDSequence::cycles_identical() const {
  auto uniform = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
  };
  return uniform(cycle_phase) && uniform(cycle_scale);
}

void DDSequence::validate() const {
  if (cycles < 1) throw Error(ErrorKind::InvalidInput, "sequence: cycles must be >= 1");
  if (entries.empty()) throw Error(ErrorKind::InvalidInput, "sequence: no entries");
  const auto n = static_cast<std::size_t>(cycles);
  if ((!cycle_phase.empty() && cycle_phase.size() != n) ||
      (!cycle_scale.empty() && cycle_scale.size() != n)) {
    throw Error(ErrorKind::InvalidInput, "sequence: per-cycle table size mismatch");
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw Error(ErrorKind::InvalidInput, "sequence: tau must be positive");
  }
  if (effective_width() > tau * (1.0 + 1e-12)) {
    throw Error(ErrorKind::PulseTooLong, "sequence: pulse wider than tau");
  }
}

DDSequence build_sequence(const StrategySpec& strategy, const ShapedPulse& base,
                          double tau, int cycles, std::optional<std::uint64_t> seed,
                          bool instantaneous) {
  if (std::abs(base.target_theta - kPi) > 1e-9) {
    throw Error(ErrorKind::InvalidInput, "build_sequence: base pulse must target pi");
  }
  if (cycles < 1) {
    throw Error(ErrorKind::InvalidInput, "build_sequence: cycles must be >= 1");
  }
  DDSequence seq;
  seq.tau = tau;
  seq.cycles = cycles;
  seq.instantaneous = instantaneous;
  std::vector<double> phases = xy8_phases();
  ShapedPulse pulse = base;
  switch (strategy.kind) {
    case Strategy::Xy8:
      break;
    case Strategy::Ur:
      phases = ur_phases(strategy.ur_n, ur_phase_step(strategy.ur_n));
      break;
    case Strategy::RpXy8: {
      if (!seed) {
        throw Error(ErrorKind::InvalidInput, "build_sequence: rp-xy8 needs a seed");
      }
      Rng rng(*seed);
      seq.cycle_phase.resize(static_cast<std::size_t>(cycles));
      for (double& g : seq.cycle_phase) g = rng.uniform(0.0, kTwoPi);
      break;
    }
    case Strategy::Bb1Xy8:
      pulse = phase_shift(
          expand_composite(bb1(kPi), base.peak_amplitude(), base.dt, kPi, 0.0),
          base.target_phi);
      break;
    case Strategy::Gaxy8: {
      const double sigma = 4.0 * cycles * tau / (4.0 * std::sqrt(2.0));
      const double l0 = strategy.gaxy8_lambda0;
      seq.cycle_scale = gaussian_amplitudes(cycles, tau, l0, sigma);
      for (double& s : seq.cycle_scale) s /= l0;
      break;
    }
  }
  for (double phi : phases) seq.entries.push_back({pulse, phi - pulse.target_phi});
  seq.validate();
  return seq;
}

double resonance_delay(double omega_i, int k, double effective_width) {
  if (k <= 0 || k % 2 == 0) {
    throw Error(ErrorKind::InvalidInput, "resonance_delay: k must be odd and positive");
  }
  const double t = k * kPi / omega_i - effective_width / 2.0;
  if (!(t > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "resonance_delay: non-positive delay");
  }
  return t;
}

FreeEvolution::FreeEvolution(const SpinSystem& sys, const ErrorModel& err) {
  ComplexMatrix h = free_hamiltonian(sys);
  h += err.eps1 * sys.delta_max * electron_operator(sys, spin_half().sz);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  vectors_ = es.eigenvectors();
  values_ = es.eigenvalues();
}

ComplexMatrix FreeEvolution::operator()(double t) const {
  Eigen::VectorXcd ph(values_.size());
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    ph(i) = std::exp(Complex(0.0, -values_(i) * t));
  }
  return vectors_ * ph.asDiagonal() * vectors_.adjoint();
}

ComplexMatrix matrix_power(const ComplexMatrix& m, long long n) {
  if (n < 0) throw Error(ErrorKind::InvalidInput, "matrix_power: negative exponent");
  ComplexMatrix result = identity(m.rows());
  ComplexMatrix base = m;
  bool first = true;
  while (n > 0) {
    if (n & 1) {
      result = first ? base : ComplexMatrix(base * result);
      first = false;
    }
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

SequenceEngine::SequenceEngine(const DDSequence& seq, const SpinSystem& sys,
                               const ErrorModel& err)
    : seq_(seq), sys_(sys), free_(sys, err), sz_diag_(electron_sz_diagonal(sys)) {
  seq_.validate();
  std::vector<double> scales{1.0};
  scale_of_cycle_.assign(static_cast<std::size_t>(seq_.cycles), 0);
  if (!seq_.cycle_scale.empty() && !seq_.instantaneous) {
    scales.clear();
    for (std::size_t c = 0; c < seq_.cycle_scale.size(); ++c) {
      const double s = seq_.cycle_scale[c];
      auto it = std::find(scales.begin(), scales.end(), s);
      if (it == scales.end()) {
        scales.push_back(s);
        it = scales.end() - 1;
      }
      scale_of_cycle_[c] = static_cast<int>(it - scales.begin());
    }
  }
  base_.resize(scales.size());
  for (std::size_t s = 0; s < scales.size(); ++s) {
    std::vector<std::pair<const ShapedPulse*, std::size_t>> seen;
    for (std::size_t k = 0; k < seq_.entries.size(); ++k) {
      const ShapedPulse& p = seq_.entries[k].pulse;
      auto it = std::find_if(seen.begin(), seen.end(),
                             [&](const auto& e) { return *e.first == p; });
      if (it != seen.end()) {
        base_[s].push_back(base_[s][it->second]);
        continue;
      }
      seen.emplace_back(&p, k);
      if (seq_.instantaneous) {
        base_[s].push_back(target_rotation(sys_, p.target_theta, p.target_phi));
      } else {
        base_[s].push_back(pulse_propagator(scale_amplitude(p, scales[s]), sys_, err, true));
      }
    }
  }
}

ComplexMatrix SequenceEngine::entry(std::size_t k, int c) const {
  double phi = seq_.entries[k].phase;
  if (!seq_.cycle_phase.empty()) phi += seq_.cycle_phase[static_cast<std::size_t>(c)];
  return conjugate_phase(base_[scale_of_cycle_[c]][k], sz_diag_, phi);
}

ComplexMatrix SequenceEngine::cycle(double tau, int c) const {
  std::map<double, ComplexMatrix> half;
  ComplexMatrix u = identity(sys_.dim());
  for (std::size_t k = 0; k < seq_.entries.size(); ++k) {
    const double w = seq_.instantaneous ? 0.0 : seq_.entries[k].pulse.duration();
    if (w > tau * (1.0 + 1e-12)) {
      throw Error(ErrorKind::PulseTooLong, "sequence: pulse wider than tau");
    }
    auto it = half.find(w);
    if (it == half.end()) it = half.emplace(w, free_(std::max(0.0, tau - w) / 2.0)).first;
    u = it->second * entry(k, c) * it->second * u;
  }
  return u;
}

ComplexMatrix SequenceEngine::propagator(double tau) const {
  if (seq_.cycles_identical()) return matrix_power(cycle(tau, 0), seq_.cycles);
  return propagator_unrolled(tau);
}

ComplexMatrix SequenceEngine::propagator_unrolled(double tau) const {
  ComplexMatrix u = identity(sys_.dim());
  for (int c = 0; c < seq_.cycles; ++c) u = cycle(tau, c) * u;
  return u;
}

ComplexMatrix sequence_propagator(const DDSequence& seq, const SpinSystem& sys,
                                  const ErrorModel& err) {
  return SequenceEngine(seq, sys, err).propagator(seq.tau);
}

double pulsepol_tau(const PulsePolSpec& spec, const SpinSystem& sys) {
  if (spec.l <= 0 || spec.l % 2 == 0) {
    throw Error(ErrorKind::InvalidInput, "pulsepol: l must be odd and positive");
  }
  if (sys.num_nuclei() == 0) {
    throw Error(ErrorKind::InvalidInput, "pulsepol: needs a nuclear spin");
  }
  return spec.l * kPi / effective_larmor(sys, 0);
}

ComplexMatrix pulsepol_propagator(const PulsePolSpec& spec, const SpinSystem& sys,
                                  const ErrorModel& err) {
  const double tau = pulsepol_tau(spec, sys);
  if (spec.cycles < 1) {
    throw Error(ErrorKind::InvalidInput, "pulsepol: cycles must be >= 1");
  }
  const double t2 = spec.instantaneous ? 0.0 : spec.pi2_pulse.duration();
  const double t1 = spec.instantaneous ? 0.0 : spec.pi_pulse.duration();
  const double tau_free = tau - 4.0 * t2 - 2.0 * t1;
  if (tau_free < 0.0) {
    throw Error(ErrorKind::PulseTooLong, "pulsepol: pulses longer than tau");
  }
  const Eigen::VectorXd sz = electron_sz_diagonal(sys);
  auto base = [&](const ShapedPulse& p, double theta) {
    if (spec.instantaneous) return std::pair{target_rotation(sys, theta, 0.0), 0.0};
    return std::pair{pulse_propagator(p, sys, err, true), p.target_phi};
  };
  const auto [p2, p2_phi] = base(spec.pi2_pulse, kPi / 2.0);
  const auto [p1, p1_phi] = base(spec.pi_pulse, kPi);
  const double y = kPi / 2.0;
  const ComplexMatrix p2x = conjugate_phase(p2, sz, -p2_phi);
  const ComplexMatrix p2y = conjugate_phase(p2, sz, y - p2_phi);
  const ComplexMatrix p1x = conjugate_phase(p1, sz, -p1_phi);
  const ComplexMatrix p1y = conjugate_phase(p1, sz, y - p1_phi);
  const ComplexMatrix f = FreeEvolution(sys, err)(tau_free / 4.0);
  const ComplexMatrix first = p2y * f * p1x * f * p2y;
  const ComplexMatrix second = p2x * f * p1y * f * p2x;
  const ComplexMatrix block = second * first;
  return matrix_power(block * block, spec.cycles);
}

}  // namespace robdd
