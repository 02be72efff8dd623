// Copyright 2026 The spinq Authors
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

#include "spinq/device/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "spinq/kernels/cmat4.hpp"

namespace spinq {

using kernels::CMat4;

namespace {

// Rotating-frame Hamiltonian, frequency units, basis index = 2*b1 + b2.
//   noise:      (df1/2) Z1 + (df2/2) Z2
//   exchange:   J/4 (Z1 Z2 - 1) + J/2 (e^{i w t} s+_1 s-_2 + h.c.),  w = 2 pi dEz
//   drive:      sum_tones sum_q g Omega/2 (e^{-i psi} s+_q + h.c.),
//               psi = phase + 2 pi (nu - f_q) t
constexpr std::array<double, 4> kZ1{1.0, 1.0, -1.0, -1.0};
constexpr std::array<double, 4> kZ2{1.0, -1.0, 1.0, -1.0};

struct Coupling {
  double amplitude;  // Omega / 2
  double phase0;
  double detuning;   // nu - f_q
  int qubit;
};

struct SegmentModel {
  double t_start = 0.0;  // absolute
  double j_plateau = 0.0;
  double j_res = 0.0;
  double dez = 0.0;
  double diag_noise[4] = {0, 0, 0, 0};
  std::vector<Coupling> couplings;
  const Segment* seg = nullptr;

  SegmentModel(const DeviceParams& p, const Segment& s, const NoiseRealization& n, double t0)
      : t_start(t0), j_plateau(segment_exchange(p, s)), j_res(p.J_res), dez(p.delta_ez()), seg(&s) {
    for (int i = 0; i < 4; ++i) {
      diag_noise[i] = 0.5 * (n.delta_f1 * kZ1[i] + n.delta_f2 * kZ2[i]);
    }
    for (const Tone& tone : s.tones) {
      for (int q = 0; q < 2; ++q) {
        couplings.push_back({0.5 * tone.rabi, tone.phase, tone.frequency - p.frequency(q), q});
      }
    }
  }

  double exchange_at(double tau) const {
    return j_res + (j_plateau - j_res) * segment_envelope(*seg, tau);
  }

  void hamiltonian(double tau, CMat4& h) const {
    h = CMat4::zero();
    const double t = t_start + tau;
    const double g = segment_envelope(*seg, tau);
    const double j = j_res + (j_plateau - j_res) * g;
    for (int i = 0; i < 4; ++i) {
      h.re[5 * i] = diag_noise[i] + 0.25 * j * (kZ1[i] * kZ2[i] - 1.0);
    }
    if (j != 0.0) {
      const std::complex<double> ff = std::polar(0.5 * j, kTwoPi * dez * t);
      h.add(2, 1, ff);
      h.add(1, 2, std::conj(ff));
    }
    for (const Coupling& c : couplings) {
      if (c.amplitude == 0.0 || g == 0.0) continue;
      const std::complex<double> v = std::polar(g * c.amplitude, -(c.phase0 + kTwoPi * c.detuning * t));
      if (c.qubit == 0) {
        for (int b2 = 0; b2 < 2; ++b2) {
          h.add(2 + b2, b2, v);
          h.add(b2, 2 + b2, std::conj(v));
        }
      } else {
        for (int b1 = 0; b1 < 2; ++b1) {
          h.add(2 * b1 + 1, 2 * b1, v);
          h.add(2 * b1, 2 * b1 + 1, std::conj(v));
        }
      }
    }
  }
};

bool is_constant(const Segment& s) {
  return s.tones.empty() && (s.shape == Shape::Square || s.ramp <= 0.0);
}

Mat to_eigen(const CMat4& m) {
  Mat out(4, 4);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) out(r, c) = m(r, c);
  }
  return out;
}

CMat4 from_eigen(const Mat& m) {
  CMat4 out;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) out.set(r, c, m(r, c));
  }
  return out;
}

// Frame that makes the flip-flop term static: V(t) = exp(-i (w t / 4)(Z1 - Z2)).
Eigen::Vector4cd flipflop_frame(double dez, double t) {
  const double a = 0.5 * kTwoPi * dez * t;
  return {1.0, std::polar(1.0, -a), std::polar(1.0, a), 1.0};
}

// Static Hamiltonian in the flip-flop frame for an undriven constant segment.
Mat static_hamiltonian(const SegmentModel& m) {
  Mat h = Mat::Zero(4, 4);
  const double j = m.j_plateau;
  for (int i = 0; i < 4; ++i) h(i, i) = m.diag_noise[i] + 0.25 * j * (kZ1[i] * kZ2[i] - 1.0);
  h(1, 1) -= 0.5 * m.dez;
  h(2, 2) += 0.5 * m.dez;
  h(2, 1) = 0.5 * j;
  h(1, 2) = 0.5 * j;
  return h;
}

// Exact propagator of an undriven constant segment.
Mat constant_unitary(const SegmentModel& m, double duration) {
  const Mat h = static_hamiltonian(m);
  Mat u = Mat::Zero(4, 4);
  u(0, 0) = std::polar(1.0, -kTwoPi * h(0, 0).real() * duration);
  u(3, 3) = std::polar(1.0, -kTwoPi * h(3, 3).real() * duration);
  Eigen::Matrix2cd block;
  block << h(1, 1), h(1, 2), h(2, 1), h(2, 2);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(block);
  Eigen::Vector2cd phases;
  for (int k = 0; k < 2; ++k) phases(k) = std::polar(1.0, -kTwoPi * es.eigenvalues()(k) * duration);
  const Eigen::Matrix2cd ub = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  u.block(1, 1, 2, 2) = ub;
  const Eigen::Vector4cd v0 = flipflop_frame(m.dez, m.t_start);
  const Eigen::Vector4cd v1 = flipflop_frame(m.dez, m.t_start + duration);
  return v1.asDiagonal() * u * v0.conjugate().asDiagonal();
}

double dephasing_rate(int i, int j, double g1, double g2) {
  double r = 0.0;
  if ((i >> 1) != (j >> 1)) r += g1;
  if ((i & 1) != (j & 1)) r += g2;
  return r;
}

// Exact Lindblad evolution of an undriven constant segment with phase damping.
Mat constant_lindblad(const SegmentModel& m, double duration, double g1, double g2, const Mat& rho) {
  const Eigen::Vector4cd v0 = flipflop_frame(m.dez, m.t_start);
  const Eigen::Vector4cd v1 = flipflop_frame(m.dez, m.t_start + duration);
  const Mat rho_frame = v0.conjugate().asDiagonal() * rho * v0.asDiagonal();
  Mat out(4, 4);
  if (m.j_plateau == 0.0) {
    const Mat h = static_hamiltonian(m);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        const double w = h(i, i).real() - h(j, j).real();
        out(i, j) = rho_frame(i, j) * std::polar(std::exp(-duration * dephasing_rate(i, j, g1, g2)),
                                                 -kTwoPi * w * duration);
      }
    }
  } else {
    const Mat h = static_hamiltonian(m);
    Eigen::Matrix<cplx, 16, 16> l = Eigen::Matrix<cplx, 16, 16>::Zero();
    const cplx mi2pi(0.0, -kTwoPi);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        const int row = 4 * i + j;
        for (int k = 0; k < 4; ++k) {
          l(row, 4 * k + j) += mi2pi * h(i, k);
          l(row, 4 * i + k) -= mi2pi * h(k, j);
        }
        l(row, row) -= dephasing_rate(i, j, g1, g2);
      }
    }
    const Eigen::Matrix<cplx, 16, 16> prop = (l * duration).exp();
    Eigen::Matrix<cplx, 16, 1> vec;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) vec(4 * i + j) = rho_frame(i, j);
    }
    const Eigen::Matrix<cplx, 16, 1> res = prop * vec;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) out(i, j) = res(4 * i + j);
    }
  }
  return v1.asDiagonal() * out * v1.conjugate().asDiagonal();
}

// Fourth-order Magnus step with two Gauss points; returns exp(-2 pi i Omega).
CMat4 magnus_step(const SegmentModel& m, double tau, double h, const kernels::KernelTable& k) {
  static const double kGauss = std::sqrt(3.0) / 6.0;
  CMat4 ha;
  CMat4 hb;
  m.hamiltonian(tau + h * (0.5 - kGauss), ha);
  m.hamiltonian(tau + h * (0.5 + kGauss), hb);
  // K = pi h (Ha + Hb) - i (sqrt(3) pi^2 h^2 / 3) [Hb, Ha]
  CMat4 kmat = CMat4::zero();
  k.axpy(kPi * h, 0.0, ha, kmat);
  k.axpy(kPi * h, 0.0, hb, kmat);
  CMat4 ba;
  CMat4 ab;
  k.mul(hb, ha, ba);
  k.mul(ha, hb, ab);
  const double c = std::sqrt(3.0) * kPi * kPi * h * h / 3.0;
  k.axpy(0.0, -c, ba, kmat);
  k.axpy(0.0, c, ab, kmat);
  return kernels::expm_minus_i(kmat, k);
}

// Intervals of a segment on which the envelope is smooth.
std::vector<std::pair<double, double>> smooth_pieces(const Segment& s) {
  const double d = s.duration;
  if (s.shape == Shape::Square || s.ramp <= 0.0) return {{0.0, d}};
  const double up = std::min(s.ramp, 0.5 * d);
  const double down = std::max(d - s.ramp, 0.5 * d);
  std::vector<std::pair<double, double>> out{{0.0, up}};
  if (down > up) out.emplace_back(up, down);
  out.emplace_back(down, d);
  return out;
}

enum class Mode { Density, Unitary };

struct Engine {
  const DeviceParams& p;
  const NoiseRealization& noise;
  const EvolveOptions& opts;
  Mode mode;
  const kernels::KernelTable& k = kernels::active();

  void run(const PulseSchedule& schedule, CMat4& state,
           const std::function<void(std::size_t, const CMat4&)>* observer) const {
    schedule.validate();
    const double g1 = (mode == Mode::Density && opts.markovian && std::isfinite(p.T2echo1)) ? 1.0 / p.T2echo1 : 0.0;
    const double g2 = (mode == Mode::Density && opts.markovian && std::isfinite(p.T2echo2)) ? 1.0 / p.T2echo2 : 0.0;
    double t = opts.t_offset;
    for (std::size_t si = 0; si < schedule.segments.size(); ++si) {
      const Segment& s = schedule.segments[si];
      if (s.duration < 1e-12) throw SpinqError("timestep underflow: segment shorter than 1 ps");
      const SegmentModel model(p, s, noise, t);
      if (is_constant(s)) {
        if (mode == Mode::Unitary) {
          const CMat4 u = from_eigen(constant_unitary(model, s.duration));
          k.mul(u, state, state);
        } else if (g1 == 0.0 && g2 == 0.0) {
          const CMat4 u = from_eigen(constant_unitary(model, s.duration));
          CMat4 out;
          kernels::sandwich(u, state, out, k);
          state = out;
        } else {
          state = from_eigen(constant_lindblad(model, s.duration, g1, g2, to_eigen(state)));
        }
      } else {
        const double dt_max = max_timestep(p, s, opts.dt_scale);
        const bool damp = g1 != 0.0 || g2 != 0.0;
        CMat4 tmp;
        // Steps never straddle a ramp edge, where the envelope has a kink.
        for (const auto& [a, b] : smooth_pieces(s)) {
          const auto steps = static_cast<long>(std::max(1.0, std::ceil((b - a) / dt_max - 1e-9)));
          const double h = (b - a) / static_cast<double>(steps);
          double mask[16];
          if (damp) {
            for (int i = 0; i < 4; ++i) {
              for (int j = 0; j < 4; ++j) mask[4 * i + j] = std::exp(-h * dephasing_rate(i, j, g1, g2));
            }
          }
          for (long n = 0; n < steps; ++n) {
            const CMat4 u = magnus_step(model, a + h * static_cast<double>(n), h, k);
            if (mode == Mode::Unitary) {
              k.mul(u, state, state);
            } else {
              kernels::sandwich(u, state, tmp, k);
              state = tmp;
              if (damp) k.scale_entries(mask, state);
            }
          }
        }
      }
      t += s.duration;
      if (observer != nullptr) (*observer)(si, state);
    }
  }
};

DensityMatrix finish_density(const CMat4& state) {
  Mat rho = to_eigen(state);
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace().real();
  return DensityMatrix(std::move(rho), 1e-8);
}

}  // namespace

double max_timestep(const DeviceParams& p, const Segment& s, double dt_scale) {
  double omega = 0.0;
  for (const Tone& t : s.tones) omega = std::max(omega, std::abs(t.rabi));
  const double j = std::max(std::abs(segment_exchange(p, s)), std::abs(p.J_res));
  const double rate = std::max(omega, j);
  // A tenth of the Zeeman beat period; 0.2 leaves ~4e-7 of pi-pulse fidelity
  // on the table against a halved step.
  double dt = 0.1 / std::abs(p.delta_ez());
  if (rate > 0.0) dt = std::min(dt, 0.01 / rate);
  return dt * dt_scale;
}

Mat frame_rotation(double a, double b) {
  Mat out = Mat::Zero(4, 4);
  for (int i = 0; i < 4; ++i) {
    const double phase = -0.5 * (a * kZ1[static_cast<std::size_t>(i)] + b * kZ2[static_cast<std::size_t>(i)]);
    out(i, i) = std::polar(1.0, phase);
  }
  return out;
}

DensityMatrix evolve(const DeviceParams& p, const PulseSchedule& schedule, const NoiseRealization& noise,
                     const DensityMatrix& rho0, const EvolveOptions& opts) {
  CMat4 state = from_eigen(rho0.matrix());
  Engine{p, noise, opts, Mode::Density}.run(schedule, state, nullptr);
  return finish_density(state);
}

DensityMatrix evolve_observed(const DeviceParams& p, const PulseSchedule& schedule,
                              const NoiseRealization& noise, const DensityMatrix& rho0,
                              const EvolveOptions& opts,
                              const std::function<void(std::size_t, const Mat&)>& after_segment) {
  CMat4 state = from_eigen(rho0.matrix());
  const std::function<void(std::size_t, const CMat4&)> obs = [&](std::size_t i, const CMat4& s) {
    after_segment(i, to_eigen(s));
  };
  Engine{p, noise, opts, Mode::Density}.run(schedule, state, &obs);
  return finish_density(state);
}

Mat propagate(const DeviceParams& p, const PulseSchedule& schedule, const NoiseRealization& noise,
              const EvolveOptions& opts) {
  CMat4 state = CMat4::identity();
  Engine{p, noise, opts, Mode::Unitary}.run(schedule, state, nullptr);
  return to_eigen(state);
}

}  // namespace spinq
