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

#include "spinq/tomo/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spinq/util/parallel.hpp"
#include "spinq/util/rng.hpp"

namespace spinq {

namespace {

Mat local_rotation(PreRotation r) {
  switch (r) {
    case PreRotation::None: return pauli::I2();
    case PreRotation::X90: return gate_matrix(GateOp::x90(0));
    case PreRotation::Y90: return gate_matrix(GateOp::y90(0));
  }
  return pauli::I2();
}

void add_rotation(Circuit& c, PreRotation r, int q) {
  if (r == PreRotation::X90) c.add(GateOp::x90(q));
  if (r == PreRotation::Y90) c.add(GateOp::y90(q));
}

const std::array<std::array<Mat, 4>, 9>& povm_table() {
  static const auto table = [] {
    std::array<std::array<Mat, 4>, 9> t;
    for (int s = 0; s < 9; ++s) {
      const auto& st = tomography_settings()[static_cast<std::size_t>(s)];
      const Mat r = kron(local_rotation(st.q1), local_rotation(st.q2));
      for (int o = 0; o < 4; ++o) {
        Mat proj = Mat::Zero(4, 4);
        proj(o, o) = 1.0;
        t[static_cast<std::size_t>(s)][static_cast<std::size_t>(o)] = r.adjoint() * proj * r;
      }
    }
    return t;
  }();
  return table;
}

const std::array<Mat, 16>& pauli_basis() {
  static const auto basis = [] {
    const std::array<Mat, 4> s{pauli::I2(), pauli::X(), pauli::Y(), pauli::Z()};
    std::array<Mat, 16> b;
    for (int a = 0; a < 4; ++a) {
      for (int c = 0; c < 4; ++c) b[static_cast<std::size_t>(4 * a + c)] = kron(s[a], s[c]);
    }
    return b;
  }();
  return basis;
}

double expectation(const Mat& e, const Mat& rho) { return (e * rho).trace().real(); }

std::array<ProbabilityVector, 9> probabilities_of(const Mat& rho) {
  std::array<ProbabilityVector, 9> out{};
  for (int s = 0; s < 9; ++s) {
    double total = 0.0;
    for (int o = 0; o < 4; ++o) {
      const double v = std::max(0.0, expectation(tomography_povm(s, o), rho));
      out[static_cast<std::size_t>(s)].p[static_cast<std::size_t>(o)] = v;
      total += v;
    }
    for (auto& v : out[static_cast<std::size_t>(s)].p) v /= total;
  }
  return out;
}

Mat psd_projection(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.adjoint()));
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  if (ev.sum() <= 0.0) return Mat::Identity(4, 4) / 4.0;
  ev /= ev.sum();
  return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

DensityMatrix as_density(const Mat& m) {
  Mat h = 0.5 * (m + m.adjoint());
  h /= h.trace().real();
  return DensityMatrix(std::move(h), 1e-9);
}

}  // namespace

const std::array<TomographySetting, 9>& tomography_settings() {
  static const std::array<TomographySetting, 9> s = [] {
    std::array<TomographySetting, 9> out;
    const std::array<PreRotation, 3> r{PreRotation::None, PreRotation::X90, PreRotation::Y90};
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) out[static_cast<std::size_t>(3 * a + b)] = {r[a], r[b]};
    }
    return out;
  }();
  return s;
}

const char* to_string(PreRotation r) {
  switch (r) {
    case PreRotation::None: return "none";
    case PreRotation::X90: return "X90";
    case PreRotation::Y90: return "Y90";
  }
  return "?";
}

const Mat& tomography_povm(int setting, int outcome) {
  if (setting < 0 || setting >= 9 || outcome < 0 || outcome >= 4) throw SpinqError("tomography index out of range");
  return povm_table()[static_cast<std::size_t>(setting)][static_cast<std::size_t>(outcome)];
}

Eigen::MatrixXd tomography_design() {
  Eigen::MatrixXd d(36, 16);
  for (int s = 0; s < 9; ++s) {
    for (int o = 0; o < 4; ++o) {
      for (int k = 0; k < 16; ++k) {
        d(4 * s + o, k) = expectation(tomography_povm(s, o), pauli_basis()[static_cast<std::size_t>(k)]) / 4.0;
      }
    }
  }
  return d;
}

Circuit bell_prep_circuit(BellState which) {
  // Y90 on both qubits and a CZ give (|d>|+> + |u>|->)/sqrt(2); a final Y90
  // on Q2 maps -> to d and + to u (psi), with Z(pi) first it maps the other
  // way (phi). Z(pi) on Q1 at the end flips the relative sign.
  Circuit c;
  c.name = std::string("bell_") + to_string(which);
  c.add(GateOp::y90(0)).add(GateOp::y90(1)).add(GateOp::cz());
  const bool phi = which == BellState::PhiPlus || which == BellState::PhiMinus;
  if (phi) c.add(GateOp::z(1, kPi));
  c.add(GateOp::y90(1));
  if (which == BellState::PhiMinus || which == BellState::PsiMinus) c.add(GateOp::z(0, kPi));
  return c;
}

TomographyData ideal_tomography_data(const DensityMatrix& rho) {
  TomographyData d;
  d.frequencies = probabilities_of(rho.matrix());
  d.shots_per_setting = 0;
  return d;
}

TomographyData sample_tomography_data(const DensityMatrix& rho, std::int64_t shots, std::mt19937_64& rng) {
  if (shots < 1) throw SpinqError("tomography needs at least one shot per setting");
  const auto probs = probabilities_of(rho.matrix());
  TomographyData d;
  d.shots_per_setting = shots;
  for (std::size_t s = 0; s < 9; ++s) d.frequencies[s] = sample_counts(probs[s], shots, rng).frequencies();
  return d;
}

TomographyData simulate_tomography(const DeviceParams& p, const Circuit& prep, const CZCalibration& cal,
                                   const SimulationMode& mode) {
  if (mode.shots < 0) throw SpinqError("tomography shots must be >= 0");
  TomographyData d;
  d.shots_per_setting = mode.shots;
  parallel_for(9, [&](std::size_t s) {
    Circuit c = prep;
    add_rotation(c, tomography_settings()[s].q1, 0);
    add_rotation(c, tomography_settings()[s].q2, 1);
    const PulseSchedule sched = compile_circuit(c, cal, p);
    const std::uint64_t key = mix64((tag(StreamTag::Tomography) << 32) + s);
    d.frequencies[s] = simulate_schedule(p, sched, mode, key).probs;
  });
  return d;
}

LinearInversion linear_inversion(const TomographyData& data) {
  const Eigen::MatrixXd d = tomography_design();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(d, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > 1e-10 * sv(0)) ++rank;
  }
  if (rank < 16) throw SpinqError("tomography design is rank deficient (rank " + std::to_string(rank) + ")");
  Eigen::VectorXd f(36);
  for (int s = 0; s < 9; ++s) {
    for (int o = 0; o < 4; ++o) f(4 * s + o) = data.frequencies[static_cast<std::size_t>(s)][o];
  }
  const Eigen::VectorXd c = svd.solve(f);
  Mat rho = Mat::Zero(4, 4);
  for (int k = 0; k < 16; ++k) rho += c(k) / 4.0 * pauli_basis()[static_cast<std::size_t>(k)];
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace().real();
  LinearInversion out;
  out.rho = rho;
  out.min_eigenvalue = Eigen::SelfAdjointEigenSolver<Mat>(rho).eigenvalues()(0);
  out.non_psd = out.min_eigenvalue < -1e-12;
  return out;
}

double tomography_log_likelihood(const Mat& rho, const TomographyData& data) {
  const double w = data.weight();
  double ll = 0.0;
  for (int s = 0; s < 9; ++s) {
    for (int o = 0; o < 4; ++o) {
      const double n = w * data.frequencies[static_cast<std::size_t>(s)][o];
      if (n <= 0.0) continue;
      const double p = expectation(tomography_povm(s, o), rho);
      if (p <= 0.0) return -std::numeric_limits<double>::infinity();
      ll += n * std::log(p);
    }
  }
  return ll;
}

namespace {

MLEResult ascend(const TomographyData& data, const Mat& start, const MLEOptions& opts) {
  const double w = data.weight();
  double total = 0.0;
  for (const auto& f : data.frequencies) total += w * f.sum();

  Mat rho = start;
  // rho = T^dagger T via the eigen decomposition, robust for singular rho.
  Eigen::SelfAdjointEigenSolver<Mat> es(rho);
  const Eigen::VectorXd roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Mat t = roots.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  rho = t.adjoint() * t;
  double ll = tomography_log_likelihood(rho, data);

  MLEResult res;
  double eps = 1.0;
  for (res.iterations = 0; res.iterations < opts.max_iterations;) {
    Mat r = Mat::Zero(4, 4);
    for (int s = 0; s < 9; ++s) {
      for (int o = 0; o < 4; ++o) {
        const double n = w * data.frequencies[static_cast<std::size_t>(s)][o];
        if (n <= 0.0) continue;
        const Mat& e = tomography_povm(s, o);
        r += (n / total / expectation(e, rho)) * e;
      }
    }
    bool accepted = false;
    double next_ll = ll;
    Mat next_t;
    while (eps > 1e-12) {
      const Mat m = (Mat::Identity(4, 4) + eps * r) / (1.0 + eps);
      next_t = t * m;
      Mat cand = next_t.adjoint() * next_t;
      const double tr = cand.trace().real();
      next_t /= std::sqrt(tr);
      cand /= tr;
      next_ll = tomography_log_likelihood(cand, data);
      if (next_ll >= ll) {
        accepted = true;
        rho = cand;
        break;
      }
      eps *= 0.5;
    }
    ++res.iterations;
    if (!accepted) {
      res.converged = true;
      break;
    }
    t = next_t;
    const double gain = next_ll - ll;
    ll = next_ll;
    if (opts.record_trace) res.trace.push_back(ll);
    if (gain < opts.tolerance) {
      res.converged = true;
      break;
    }
    eps = std::min(eps * 2.0, 1e3);
  }
  res.rho = as_density(rho);
  res.log_likelihood = ll;
  return res;
}

}  // namespace

MLEResult mle_reconstruct(const TomographyData& data, const MLEOptions& opts) {
  for (const auto& f : data.frequencies) {
    for (double v : f.p) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw SpinqError("tomography frequencies must be finite and >= 0");
    }
  }
  double total = 0.0;
  for (const auto& f : data.frequencies) total += f.sum();
  if (!(total > 0.0)) throw SpinqError("tomography data is empty");

  // The PSD part of the linear inversion is the natural start, but the
  // multiplicative updates cannot leave its support; a full-rank mixture is
  // run as well and the higher likelihood wins.
  const Mat projected = psd_projection(linear_inversion(data).rho);
  constexpr double kMix = 1e-4;
  MLEResult best = ascend(data, (1.0 - kMix) * projected + kMix * Mat::Identity(4, 4) / 4.0, opts);
  if (std::isfinite(tomography_log_likelihood(projected, data))) {
    MLEResult alt = ascend(data, projected, opts);
    if (alt.log_likelihood > best.log_likelihood) best = std::move(alt);
  }
  return best;
}

SpamCorrection spam_correct(const TomographyData& data, const Matrix4d& confusion) {
  Eigen::JacobiSVD<Matrix4d> svd(confusion);
  const auto& sv = svd.singularValues();
  const double cond = sv(3) > 0.0 ? sv(0) / sv(3) : std::numeric_limits<double>::infinity();
  if (!(cond < 1e4)) throw SpinqError("confusion matrix is near singular (condition number " + std::to_string(cond) + ")");
  const Matrix4d inv = confusion.inverse();
  SpamCorrection out;
  out.data.shots_per_setting = data.shots_per_setting;
  for (std::size_t s = 0; s < 9; ++s) {
    Eigen::Vector4d v;
    for (int o = 0; o < 4; ++o) v(o) = data.frequencies[s][o];
    const Eigen::Vector4d c = inv * v;
    ProbabilityVector pv;
    double sum = 0.0;
    for (int o = 0; o < 4; ++o) {
      double x = c(o);
      if (x < 0.0) {
        pv.had_negative = true;
        x = 0.0;
      }
      pv.p[static_cast<std::size_t>(o)] = x;
      sum += x;
    }
    if (!(sum > 0.0)) throw SpinqError("SPAM correction removed all probability of a setting");
    for (auto& x : pv.p) x /= sum;
    out.clipped = out.clipped || pv.had_negative;
    out.data.frequencies[s] = pv;
  }
  return out;
}

TomographyResult reconstruct(const TomographyData& data, BellState target, const Matrix4d& readout,
                             const MLEOptions& opts) {
  TomographyResult res;
  res.target = target;
  res.raw_data = data;
  res.linear = linear_inversion(data);
  res.raw = mle_reconstruct(data, opts);
  const auto corr = spam_correct(data, readout);
  res.clipped = corr.clipped;
  res.corrected = mle_reconstruct(corr.data, opts);
  const Vec psi = bell_vector(target);
  res.fidelity_raw = state_fidelity(res.raw.rho, psi);
  res.fidelity_corrected = state_fidelity(res.corrected.rho, psi);
  return res;
}

TomographyResult bell_tomography(const DeviceParams& p, BellState which, const CZCalibration& cal,
                                 const SimulationMode& mode, const MLEOptions& opts) {
  const auto data = simulate_tomography(p, bell_prep_circuit(which), cal, mode);
  return reconstruct(data, which, readout_confusion(p), opts);
}

}  // namespace spinq
