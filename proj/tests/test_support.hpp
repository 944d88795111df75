// Copyright 2026 The qloop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>

// Reference implementations and generators for the test binaries. The
// helpers here deliberately avoid the library under test: plain index
// arithmetic and literal formulas only, so they can act as oracles for it.

namespace testsupport {

using Cx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec3 = Eigen::Vector3d;

template <typename DerivedA, typename DerivedB>
double max_abs_diff(const Eigen::MatrixBase<DerivedA>& a,
                    const Eigen::MatrixBase<DerivedB>& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline Mat2 density_from_bloch_ref(const Vec3& a) {
  Mat2 rho;
  rho << Cx((1 + a.z()) / 2), Cx(a.x() / 2, -a.y() / 2),  //
      Cx(a.x() / 2, a.y() / 2), Cx((1 - a.z()) / 2);
  return rho;
}

inline Vec3 bloch_from_density_ref(const Mat2& rho) {
  return Vec3(2 * rho(1, 0).real(), 2 * rho(1, 0).imag(),
              (rho(0, 0) - rho(1, 1)).real());
}

inline Mat4 kron_ref(const Mat2& a, const Mat2& b) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return out;
}

inline Mat2 trace_out_first_ref(const Mat4& m) {
  Mat2 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out(i, j) = m(i, j) + m(2 + i, 2 + j);
  return out;
}

inline Mat2 trace_out_second_ref(const Mat4& m) {
  Mat2 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out(i, j) = m(2 * i, 2 * j) + m(2 * i + 1, 2 * j + 1);
  return out;
}

// Flips the second qubit when the first is in the excited basis state.
inline Mat4 cnot_ref() {
  Mat4 g;
  g << 1, 0, 0, 0,  //
      0, 1, 0, 0,   //
      0, 0, 0, 1,   //
      0, 0, 1, 0;
  return g;
}

// The control-on-ground variant: flips the second qubit when the first is in
// the ground basis state.
inline Mat4 cnot_control_on_ground_ref() {
  Mat4 g;
  g << 0, 1, 0, 0,  //
      1, 0, 0, 0,   //
      0, 0, 1, 0,   //
      0, 0, 0, 1;
  return g;
}

// ---- Closed forms for the loop ----------------------------------------------

// Action of the loss process on a Bloch vector.
inline Vec3 damp_bloch_ref(const Vec3& a, double gamma) {
  const double root = std::sqrt(1 - gamma);
  return Vec3(a.x() * root, a.y() * root, a.z() * (1 - gamma) + gamma);
}

// Steady process input of the free-running loop.
inline double no_input_a3_ref(double gamma) { return 2 * gamma / (1 + 2 * gamma); }

// Steady process input and output under CNOT mixing with input z component e3.
inline double cnot_a3_ref(double gamma, double e3) {
  return e3 * gamma / (1.5 - e3 * (1 - gamma));
}
inline double cnot_b3_ref(double gamma, double e3) {
  return gamma / (1 - (2.0 / 3.0) * e3 * (1 - gamma));
}

// Gain of the steady output's z component with respect to e3.
inline double cnot_gain_ref(double gamma, double e3) {
  const double den = 1 - (2.0 / 3.0) * e3 * (1 - gamma);
  return (2.0 / 3.0) * gamma * (1 - gamma) / (den * den);
}

// State entering the loss process one trip after it entered as a, under CNOT
// mixing: damp, shrink by 2/3, then scale the transverse components by e3.
inline Mat2 cnot_mixed_state_ref(const Vec3& a, double e3, double gamma) {
  const Vec3 b = damp_bloch_ref(a, gamma);
  const Vec3 f = (2.0 / 3.0) * b;
  return density_from_bloch_ref(Vec3(f.x(), e3 * f.y(), e3 * f.z()));
}

// ---- Exact solution of the emission master equation --------------------------

// Populations relax at rate 2 gamma'; the coherence rotates at omega while
// decaying at gamma'. Valid for any hermitian unit-trace initial state.
inline Mat2 emission_exact_ref(const Mat2& rho0, double omega, double gamma_prime,
                               double t) {
  const double excited = std::exp(-2 * gamma_prime * t) * rho0(1, 1).real();
  const Cx coherence = std::exp(Cx(-gamma_prime * t, omega * t)) * rho0(0, 1);
  Mat2 out;
  out << Cx(1 - excited), coherence,  //
      std::conj(coherence), Cx(excited);
  return out;
}

// ---- Seeded generators --------------------------------------------------------

class Rng {
 public:
  explicit Rng(unsigned seed = 42) : gen_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(gen_); }

  Vec3 direction() {
    Vec3 v(gauss_(gen_), gauss_(gen_), gauss_(gen_));
    while (v.norm() == 0) v = Vec3(gauss_(gen_), gauss_(gen_), gauss_(gen_));
    return v / v.norm();
  }

  // Uniform in the unit ball (cube-root radius law).
  Vec3 bloch_in_ball() {
    return std::cbrt(uniform(0.0, 1.0)) * direction();
  }

  Vec3 bloch_on_sphere() { return direction(); }

  Mat2 density() { return density_from_bloch_ref(bloch_in_ball()); }

  // Unitary from the QR decomposition of a complex Gaussian matrix, with the
  // R-diagonal phases folded back in.
  Mat2 unitary2() {
    Mat2 z;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) z(i, j) = Cx(gauss_(gen_), gauss_(gen_));
    const Eigen::HouseholderQR<Mat2> qr(z);
    Mat2 q = qr.householderQ();
    const Mat2 r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < 2; ++k) {
      const double mag = std::abs(r(k, k));
      if (mag > 0) q.col(k) *= r(k, k) / mag;
    }
    return q;
  }

 private:
  std::mt19937 gen_;
  std::normal_distribution<double> gauss_;
};

}  // namespace testsupport
