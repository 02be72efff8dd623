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

// Dense linear algebra for one- and two-qubit objects.
//
// Basis convention: |0> is spin-down, qubit 1 is the most significant bit,
// so index 0 = |dd>, 1 = |du>, 2 = |ud>, 3 = |uu>.

#include <array>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace spinq {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Thrown when an argument violates a documented precondition.
class SpinqError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace pauli {
Mat I2();
Mat X();
Mat Y();
Mat Z();
}  // namespace pauli

Mat kron(const Mat& a, const Mat& b);

class Unitary {
 public:
  /// Validates U^dagger U = I within `tol` (Frobenius norm).
  explicit Unitary(Mat m, double tol = 1e-10);
  static Unitary identity(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Mat& matrix() const { return m_; }
  Unitary adjoint() const;
  Unitary operator*(const Unitary& rhs) const;

 private:
  Mat m_;
};

class DensityMatrix {
 public:
  /// Validates Hermiticity, unit trace and eigenvalues >= -1e-9.
  explicit DensityMatrix(Mat m, double tol = 1e-10);
  static DensityMatrix pure(const Vec& psi);
  static DensityMatrix basis(int dim, int index);
  static DensityMatrix maximally_mixed(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Mat& matrix() const { return m_; }
  double min_eigenvalue() const;
  /// Diagonal in the computational basis.
  std::vector<double> populations() const;

 private:
  Mat m_;
};

/// CPTP map as a Kraus list; completeness is checked at construction.
class Channel {
 public:
  explicit Channel(std::vector<Mat> kraus, double tol = 1e-9);
  static Channel from_unitary(const Unitary& u);
  /// rho -> (1 - lambda) rho + lambda I/d
  static Channel depolarizing(int dim, double lambda);
  /// Kraus {sqrt(1-q) I, sqrt(q) Z} on one qubit.
  static Channel dephasing(double q);

  int dim() const { return static_cast<int>(kraus_.front().rows()); }
  const std::vector<Mat>& kraus() const { return kraus_; }
  /// Maximum deviation of sum K^dagger K from the identity.
  double completeness_error() const;
  /// this after `first`
  Channel after(const Channel& first) const;

 private:
  std::vector<Mat> kraus_;
};

/// Joint outcome probabilities in the order dd, du, ud, uu.
struct ProbabilityVector {
  std::array<double, 4> p{};
  /// Set when a correction step produced a negative entry.
  bool had_negative = false;

  double operator[](int i) const { return p[static_cast<std::size_t>(i)]; }
  double sum() const { return p[0] + p[1] + p[2] + p[3]; }
};

Unitary tensor_product(const Unitary& a, const Unitary& b);

/// <psi|rho|psi>; psi must be normalized.
double state_fidelity(const DensityMatrix& rho, const Vec& psi);

/// Average gate fidelity of `actual` against the unitary `ideal`,
/// (d F_pro + 1) / (d + 1) with F_pro = sum_k |Tr(U^dagger K_k)|^2 / d^2.
double average_gate_fidelity(const Channel& actual, const Unitary& ideal);

/// Entanglement (process) fidelity |Tr(U^dagger V)|^2 / d^2 of two unitaries.
double process_fidelity(const Mat& u, const Mat& v);

/// |Tr(U^dagger V)| / d: 1 iff equal up to global phase.
double phase_insensitive_overlap(const Mat& u, const Mat& v);

DensityMatrix apply_channel(const Channel& ch, const DensityMatrix& rho);

/// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2 for mixed states.
double uhlmann_fidelity(const Mat& a, const Mat& b);

/// 0.5 * ||a - b||_1 for Hermitian a, b.
double trace_distance(const Mat& a, const Mat& b);

/// Haar-random pure state of the given dimension.
Vec random_pure_state(int dim, std::mt19937_64& rng);

/// Haar-random unitary (QR of a Ginibre matrix with phase fix).
Mat random_unitary(int dim, std::mt19937_64& rng);

/// Standard Bell states in the |d>=|0> basis.
enum class BellState { PhiPlus, PhiMinus, PsiPlus, PsiMinus };
Vec bell_vector(BellState which);
const char* to_string(BellState which);

}  // namespace spinq
