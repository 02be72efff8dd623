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

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spinq/compiler/compile.hpp"
#include "spinq/core/quantum.hpp"
#include "spinq/device/experiments.hpp"
#include "spinq/device/spam.hpp"

namespace spinq {

/// Pre-rotation applied to one qubit before the Z-basis readout.
enum class PreRotation : std::uint8_t { None = 0, X90 = 1, Y90 = 2 };

/// Setting index s = 3 * q1 + q2 over the 3 x 3 local pre-rotations.
struct TomographySetting {
  PreRotation q1 = PreRotation::None;
  PreRotation q2 = PreRotation::None;
};

const std::array<TomographySetting, 9>& tomography_settings();
const char* to_string(PreRotation r);

/// Outcome data of the 9 settings. With shots == 0 the frequencies are exact
/// probabilities and carry unit weight per setting.
struct TomographyData {
  std::array<ProbabilityVector, 9> frequencies{};
  std::int64_t shots_per_setting = 0;

  double weight() const { return shots_per_setting > 0 ? static_cast<double>(shots_per_setting) : 1.0; }
};

/// Effective measurement operator of (setting, outcome): R^dagger |o><o| R.
const Mat& tomography_povm(int setting, int outcome);

/// 36 x 16 real design matrix mapping Pauli coefficients to probabilities.
Eigen::MatrixXd tomography_design();

/// Native circuit of one CZ preparing the Bell state from |dd>.
Circuit bell_prep_circuit(BellState which);

/// Exact outcome probabilities of `rho` under the ideal measurement design.
TomographyData ideal_tomography_data(const DensityMatrix& rho);

/// Multinomial sampling of ideal data, for statistical tests.
TomographyData sample_tomography_data(const DensityMatrix& rho, std::int64_t shots, std::mt19937_64& rng);

/// Compiles prep + pre-rotations for every setting and simulates it under
/// `mode` (shots, noise, seed). mode.shots == 0 gives exact probabilities.
TomographyData simulate_tomography(const DeviceParams& p, const Circuit& prep, const CZCalibration& cal,
                                   const SimulationMode& mode);

struct LinearInversion {
  Mat rho;  // Hermitian, trace 1, possibly not PSD
  double min_eigenvalue = 0.0;
  bool non_psd = false;
};

/// Least-squares inversion of the design. Throws when the design is rank
/// deficient.
LinearInversion linear_inversion(const TomographyData& data);

struct MLEOptions {
  int max_iterations = 10000;
  double tolerance = 1e-10;  // on the log-likelihood change per step
  /// Store the log-likelihood after every iteration.
  bool record_trace = false;
};

struct MLEResult {
  DensityMatrix rho = DensityMatrix::maximally_mixed(4);
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

/// Weighted multinomial log-likelihood sum_j n_j log p_j(rho).
double tomography_log_likelihood(const Mat& rho, const TomographyData& data);

/// Maximum-likelihood state over PSD, trace-one matrices. Diluted R rho R
/// ascent on a factored rho = T^dagger T; every accepted step raises the
/// likelihood.
MLEResult mle_reconstruct(const TomographyData& data, const MLEOptions& opts = {});

struct SpamCorrection {
  TomographyData data;
  /// Some corrected entry was negative and clipped.
  bool clipped = false;
};

/// p_corr = C^-1 p per setting, clipped to >= 0 and renormalized. Throws
/// when the condition number of C is 1e4 or more.
SpamCorrection spam_correct(const TomographyData& data, const Matrix4d& confusion);

struct TomographyResult {
  BellState target = BellState::PhiMinus;
  TomographyData raw_data;
  MLEResult raw;
  MLEResult corrected;
  double fidelity_raw = 0.0;        // F_u
  double fidelity_corrected = 0.0;  // F_c
  bool clipped = false;
  LinearInversion linear;
};

/// Bell-state tomography end to end. SPAM correction inverts the readout
/// confusion matrix of `p`.
TomographyResult bell_tomography(const DeviceParams& p, BellState which, const CZCalibration& cal,
                                 const SimulationMode& mode, const MLEOptions& opts = {});

/// Runs the reconstruction and correction on given data.
TomographyResult reconstruct(const TomographyData& data, BellState target, const Matrix4d& readout,
                             const MLEOptions& opts = {});

}  // namespace spinq
