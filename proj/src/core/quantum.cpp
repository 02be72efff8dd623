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

#include "spinq/core/quantum.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

namespace spinq {

namespace pauli {
Mat I2() { return Mat::Identity(2, 2); }
Mat X() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
Mat Y() {
  Mat m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}
Mat Z() {
  Mat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

Mat kron(const Mat& a, const Mat& b) { return Eigen::kroneckerProduct(a, b).eval(); }

namespace {

void require_dim(long rows, long cols) {
  if (rows != cols || (rows != 2 && rows != 4)) {
    throw SpinqError("matrix must be 2x2 or 4x4");
  }
}

}  // namespace

Unitary::Unitary(Mat m, double tol) : m_(std::move(m)) {
  require_dim(m_.rows(), m_.cols());
  const double err = (m_.adjoint() * m_ - Mat::Identity(m_.rows(), m_.cols())).norm();
  if (err > tol) throw SpinqError("matrix is not unitary (residual " + std::to_string(err) + ")");
}

Unitary Unitary::identity(int dim) { return Unitary(Mat::Identity(dim, dim)); }

Unitary Unitary::adjoint() const { return Unitary(m_.adjoint(), 1e-8); }

Unitary Unitary::operator*(const Unitary& rhs) const {
  if (dim() != rhs.dim()) throw SpinqError("unitary dimension mismatch");
  return Unitary(m_ * rhs.m_, 1e-8);
}

DensityMatrix::DensityMatrix(Mat m, double tol) : m_(std::move(m)) {
  require_dim(m_.rows(), m_.cols());
  if ((m_ - m_.adjoint()).norm() > tol) throw SpinqError("density matrix is not Hermitian");
  if (std::abs(m_.trace() - cplx(1.0)) > tol) throw SpinqError("density matrix trace != 1");
  if (min_eigenvalue() < -1e-9) throw SpinqError("density matrix has a negative eigenvalue");
}

DensityMatrix DensityMatrix::pure(const Vec& psi) {
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw SpinqError("state vector is not normalized");
  return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix DensityMatrix::basis(int dim, int index) {
  Mat m = Mat::Zero(dim, dim);
  m(index, index) = 1.0;
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix(Mat::Identity(dim, dim) / static_cast<double>(dim));
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Mat> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

std::vector<double> DensityMatrix::populations() const {
  std::vector<double> p(static_cast<std::size_t>(dim()));
  for (int i = 0; i < dim(); ++i) p[static_cast<std::size_t>(i)] = m_(i, i).real();
  return p;
}

Channel::Channel(std::vector<Mat> kraus, double tol) : kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw SpinqError("channel needs at least one Kraus operator");
  const long d = kraus_.front().rows();
  require_dim(d, kraus_.front().cols());
  for (const Mat& k : kraus_) {
    if (k.rows() != d || k.cols() != d) throw SpinqError("Kraus operator dimension mismatch");
  }
  if (completeness_error() > tol) throw SpinqError("Kraus operators are not trace preserving");
}

Channel Channel::from_unitary(const Unitary& u) { return Channel({u.matrix()}); }

Channel Channel::depolarizing(int dim, double lambda) {
  if (lambda < 0.0 || lambda > 1.0 + 1.0 / (dim * dim - 1.0)) {
    throw SpinqError("depolarizing strength out of range");
  }
  // Pauli-twirl form: weight 1 - lambda (d^2-1)/d^2 on identity, lambda/d^2 on the rest.
  std::vector<Mat> paulis;
  const std::array<Mat, 4> single{pauli::I2(), pauli::X(), pauli::Y(), pauli::Z()};
  if (dim == 2) {
    for (const Mat& p : single) paulis.push_back(p);
  } else if (dim == 4) {
    for (const Mat& a : single) {
      for (const Mat& b : single) paulis.push_back(kron(a, b));
    }
  } else {
    throw SpinqError("depolarizing channel supports d = 2 or 4");
  }
  const double d2 = static_cast<double>(dim * dim);
  std::vector<Mat> kraus;
  kraus.reserve(paulis.size());
  for (std::size_t i = 0; i < paulis.size(); ++i) {
    const double w = i == 0 ? 1.0 - lambda * (d2 - 1.0) / d2 : lambda / d2;
    kraus.push_back(std::sqrt(std::max(w, 0.0)) * paulis[i]);
  }
  return Channel(std::move(kraus));
}

Channel Channel::dephasing(double q) {
  if (q < 0.0 || q > 1.0) throw SpinqError("dephasing probability out of range");
  return Channel({std::sqrt(1.0 - q) * pauli::I2(), std::sqrt(q) * pauli::Z()});
}

double Channel::completeness_error() const {
  const long d = kraus_.front().rows();
  Mat sum = Mat::Zero(d, d);
  for (const Mat& k : kraus_) sum += k.adjoint() * k;
  return (sum - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
}

Channel Channel::after(const Channel& first) const {
  if (dim() != first.dim()) throw SpinqError("channel dimension mismatch");
  std::vector<Mat> out;
  out.reserve(kraus_.size() * first.kraus_.size());
  for (const Mat& a : kraus_) {
    for (const Mat& b : first.kraus_) out.push_back(a * b);
  }
  return Channel(std::move(out));
}

Unitary tensor_product(const Unitary& a, const Unitary& b) {
  if (a.dim() != 2 || b.dim() != 2) throw SpinqError("tensor_product expects two single-qubit unitaries");
  return Unitary(kron(a.matrix(), b.matrix()));
}

double state_fidelity(const DensityMatrix& rho, const Vec& psi) {
  if (psi.size() != rho.dim()) throw SpinqError("state dimension mismatch");
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw SpinqError("state vector is not normalized");
  const cplx f = psi.adjoint() * rho.matrix() * psi;
  return std::clamp(f.real(), 0.0, 1.0);
}

double average_gate_fidelity(const Channel& actual, const Unitary& ideal) {
  if (actual.dim() != ideal.dim()) throw SpinqError("channel / unitary dimension mismatch");
  if (actual.completeness_error() > 1e-9) throw SpinqError("channel is not CPTP");
  const double d = ideal.dim();
  double f_pro = 0.0;
  for (const Mat& k : actual.kraus()) f_pro += std::norm((ideal.matrix().adjoint() * k).trace());
  f_pro /= d * d;
  return std::clamp((d * f_pro + 1.0) / (d + 1.0), 0.0, 1.0);
}

double process_fidelity(const Mat& u, const Mat& v) {
  const double d = static_cast<double>(u.rows());
  return std::norm((u.adjoint() * v).trace()) / (d * d);
}

double phase_insensitive_overlap(const Mat& u, const Mat& v) {
  return std::abs((u.adjoint() * v).trace()) / static_cast<double>(u.rows());
}

DensityMatrix apply_channel(const Channel& ch, const DensityMatrix& rho) {
  if (ch.dim() != rho.dim()) throw SpinqError("channel / state dimension mismatch");
  Mat out = Mat::Zero(rho.dim(), rho.dim());
  for (const Mat& k : ch.kraus()) out += k * rho.matrix() * k.adjoint();
  out = 0.5 * (out + out.adjoint());
  return DensityMatrix(std::move(out), 1e-9);
}

namespace {

Mat psd_sqrt(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double uhlmann_fidelity(const Mat& a, const Mat& b) {
  const Mat sa = psd_sqrt(a);
  const Mat inner = sa * b * sa;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
  const double t = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(t * t, 0.0, 1.0);
}

double trace_distance(const Mat& a, const Mat& b) {
  const Mat diff = a - b;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

Vec random_pure_state(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = cplx(n(rng), n(rng));
  return v / v.norm();
}

Mat random_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) g(i, j) = cplx(n(rng), n(rng));
  }
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR();
  for (int j = 0; j < dim; ++j) {
    const cplx diag = r(j, j);
    q.col(j) *= diag / std::abs(diag);
  }
  return q;
}

Vec bell_vector(BellState which) {
  const double s = 1.0 / std::sqrt(2.0);
  Vec v = Vec::Zero(4);
  switch (which) {
    case BellState::PhiPlus: v(0) = s; v(3) = s; break;
    case BellState::PhiMinus: v(0) = s; v(3) = -s; break;
    case BellState::PsiPlus: v(1) = s; v(2) = s; break;
    case BellState::PsiMinus: v(1) = s; v(2) = -s; break;
  }
  return v;
}

const char* to_string(BellState which) {
  switch (which) {
    case BellState::PhiPlus: return "phi+";
    case BellState::PhiMinus: return "phi-";
    case BellState::PsiPlus: return "psi+";
    case BellState::PsiMinus: return "psi-";
  }
  return "?";
}

}  // namespace spinq
