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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qloop/qmath.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <vector>

using namespace qloop;
using testsupport::Cx;
using testsupport::Mat2;
using testsupport::Mat4;
using testsupport::max_abs_diff;
using testsupport::Rng;
using testsupport::Vec3;

TEST_CASE("pauli matrices and ladder operators") {
  CHECK(max_abs_diff(pauli_x<double>() * pauli_x<double>(), Mat2::Identity()) == 0);
  CHECK(max_abs_diff(pauli_y<double>() * pauli_y<double>(), Mat2::Identity()) == 0);
  CHECK(max_abs_diff(pauli_z<double>() * pauli_z<double>(), Mat2::Identity()) == 0);
  CHECK(is_hermitian(pauli_x<double>()));
  CHECK(is_hermitian(pauli_y<double>()));
  CHECK(is_hermitian(pauli_z<double>()));
  CHECK(is_unitary(pauli_y<double>()));

  // XY = iZ fixes the sign conventions.
  CHECK(max_abs_diff(pauli_x<double>() * pauli_y<double>(),
                     Cx(0, 1) * pauli_z<double>()) == 0);

  // sigma_minus lowers |excited> onto |ground>: only the (0, 1) entry is set.
  Mat2 lower = Mat2::Zero();
  lower(0, 1) = 1;
  CHECK(max_abs_diff(sigma_minus<double>(), lower) == 0);
  CHECK(max_abs_diff(sigma_plus<double>(), lower.adjoint()) == 0);
  CHECK(max_abs_diff(sigma_plus<double>() * sigma_minus<double>(),
                     (Mat2() << 0, 0, 0, 1).finished()) == 0);
}

TEST_CASE("bloch_to_density at reference points") {
  const Matrix2c<double> ground = bloch_to_density(Vec3(0, 0, 1));
  CHECK(ground(0, 0) == Cx(1));
  CHECK(ground(1, 1) == Cx(0));
  CHECK(ground(0, 1) == Cx(0));

  const Matrix2c<double> center = bloch_to_density(Vec3::Zero());
  CHECK(max_abs_diff(center, (0.5 * Mat2::Identity()).eval()) == 0);

  const Matrix2c<double> plus_x = bloch_to_density(Vec3(1, 0, 0));
  CHECK(plus_x(0, 1) == Cx(0.5));
  CHECK(plus_x(1, 0) == Cx(0.5));
}

TEST_CASE("bloch conversion round trip over random states") {
  Rng rng;
  for (int i = 0; i < 200; ++i) {
    const Vec3 a = rng.bloch_in_ball();
    const Matrix2c<double> rho = bloch_to_density(a);
    CHECK(max_abs_diff(rho, testsupport::density_from_bloch_ref(a)) <= 1e-15);
    CHECK(is_density_matrix(rho));
    const Vec3 back = density_to_bloch(rho);
    CHECK((back - a).norm() <= 1e-12);
    CHECK((testsupport::bloch_from_density_ref(rho) - back).norm() <= 1e-14);
  }
}

TEST_CASE("bloch_to_density boundary and rejection") {
  Rng rng;
  for (int i = 0; i < 50; ++i) {
    const Vec3 pure = rng.bloch_on_sphere();
    const Matrix2c<double> rho = bloch_to_density(pure);
    CHECK(is_density_matrix(rho, 1e-12));
    // Pure states are rank one: the smallest eigenvalue is zero.
    CHECK(std::abs(hermitian_eigenvalues(rho).minCoeff()) <= 1e-14);
  }
  CHECK_THROWS_AS((void)bloch_to_density(Vec3(1.0 + 1e-6, 0, 0)), std::invalid_argument);
  CHECK_THROWS_AS((void)bloch_to_density(Vec3(0.8, 0.8, 0.8)), std::invalid_argument);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS((void)bloch_to_density(Vec3(nan, 0, 0)), std::invalid_argument);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS((void)bloch_to_density(Vec3(0, inf, 0)), std::invalid_argument);
}

TEST_CASE("tensor_product matches the index-level reference") {
  Rng rng;
  for (int i = 0; i < 50; ++i) {
    const Mat2 a = rng.unitary2();
    const Mat2 b = rng.density();
    const Matrix4c<double> lib = tensor_product(a, b);
    CHECK(max_abs_diff(lib, testsupport::kron_ref(a, b)) == 0);
    CHECK(std::abs(lib.trace() - a.trace() * b.trace()) <= 1e-14);
  }
  // The first factor owns the slow index: |ground><ground| x |excited><excited|
  // puts its single 1 at row and column 1.
  Mat2 g = Mat2::Zero();
  g(0, 0) = 1;
  Mat2 e = Mat2::Zero();
  e(1, 1) = 1;
  const Matrix4c<double> both = tensor_product(g, e);
  CHECK(both(1, 1) == Cx(1));
  CHECK(both.cwiseAbs().sum() == 1.0);
}

TEST_CASE("partial traces undo tensor products") {
  Rng rng;
  for (int i = 0; i < 50; ++i) {
    const Mat2 a = rng.density();
    const Mat2 b = rng.density();
    const Matrix4c<double> joint = tensor_product(a, b);
    CHECK(max_abs_diff(partial_trace_first(joint), b) <= 1e-15);
    CHECK(max_abs_diff(partial_trace_second(joint), a) <= 1e-15);
  }
}

TEST_CASE("partial traces on correlated matrices") {
  Rng rng;
  for (int i = 0; i < 50; ++i) {
    // A random mixture of products is generally correlated.
    const Matrix4c<double> m = 0.25 * tensor_product(rng.density(), rng.density()) +
                               0.75 * tensor_product(rng.density(), rng.density());
    CHECK(max_abs_diff(partial_trace_first(m), testsupport::trace_out_first_ref(m)) == 0);
    CHECK(max_abs_diff(partial_trace_second(m), testsupport::trace_out_second_ref(m)) == 0);
    CHECK(std::abs(partial_trace_first(m).trace() - m.trace()) <= 1e-14);
    CHECK(std::abs(partial_trace_second(m).trace() - m.trace()) <= 1e-14);
  }
}

TEST_CASE("controlled_u builds the excited-controlled gate") {
  const Matrix4c<double> cnot = controlled_u(pauli_x<double>());
  CHECK(max_abs_diff(cnot, testsupport::cnot_ref()) == 0);
  CHECK(is_unitary(cnot));

  const Matrix4c<double> idle = controlled_u(Mat2::Identity().eval());
  CHECK(max_abs_diff(idle, Mat4::Identity()) == 0);

  Mat2 not_unitary = Mat2::Identity();
  not_unitary(0, 0) = 2;
  CHECK_THROWS_AS((void)controlled_u(not_unitary), std::invalid_argument);

  // Excited control, ground target: the gate flips the target.
  Mat4 in = Mat4::Zero();
  in(2, 2) = 1;
  Mat4 expected = Mat4::Zero();
  expected(3, 3) = 1;
  CHECK(max_abs_diff(conjugate_by(cnot, in), expected) == 0);
}

TEST_CASE("the ground-controlled flip variant moves the bottom rung up") {
  // Frozen convention check: a gate that flips the target when the control
  // is in the ground state maps ground x ground onto ground x excited.
  const Mat4 variant = testsupport::cnot_control_on_ground_ref();
  CHECK(is_unitary(variant));
  Mat4 in = Mat4::Zero();
  in(0, 0) = 1;
  Mat4 expected = Mat4::Zero();
  expected(1, 1) = 1;
  CHECK(max_abs_diff(conjugate_by(variant, in), expected) == 0);
}

TEST_CASE("conjugate_by preserves the spectrum and rejects non-unitaries") {
  Rng rng;
  for (int i = 0; i < 50; ++i) {
    const Mat2 rho = rng.density();
    const Mat2 u = rng.unitary2();
    const Matrix2c<double> rotated = conjugate_by(u, rho);
    Eigen::Vector2d before = hermitian_eigenvalues(rho);
    Eigen::Vector2d after = hermitian_eigenvalues(rotated);
    std::sort(before.data(), before.data() + 2);
    std::sort(after.data(), after.data() + 2);
    CHECK((before - after).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(std::abs(rotated.trace() - rho.trace()) <= 1e-14);
  }
  CHECK_THROWS_AS((void)conjugate_by((2.0 * Mat2::Identity()).eval(), Mat2::Identity().eval()),
                  std::invalid_argument);
}

TEST_CASE("validators accept the good and reject the bad") {
  Rng rng;
  const Mat2 rho = rng.density();
  CHECK(is_density_matrix(rho));
  CHECK_NOTHROW(require_density_matrix(rho, "test"));
  CHECK_NOTHROW(require_unitary(rng.unitary2(), "test"));

  Mat2 skew = rho;
  skew(0, 1) += Cx(0, 1e-6);
  CHECK_FALSE(is_hermitian(skew));
  CHECK_THROWS_AS(require_density_matrix(skew, "test"), std::invalid_argument);

  Mat2 off_trace = rho * 1.5;
  CHECK_FALSE(is_density_matrix(off_trace));
  CHECK_THROWS_AS(require_density_matrix(off_trace, "test"), std::invalid_argument);

  Mat2 indefinite;
  indefinite << 1.2, 0, 0, -0.2;
  CHECK(is_hermitian(indefinite));
  CHECK_FALSE(is_positive_semidefinite(indefinite));
  CHECK_THROWS_AS(require_density_matrix(indefinite, "test"), std::invalid_argument);

  CHECK_FALSE(is_unitary((0.5 * Mat2::Identity()).eval()));
  CHECK_THROWS_AS(require_unitary((0.5 * Mat2::Identity()).eval(), "test"),
                  std::invalid_argument);
}

TEST_CASE("hermitian_eigenvalues sums to the trace") {
  Rng rng;
  for (int i = 0; i < 20; ++i) {
    const Mat2 rho = rng.density();
    CHECK(std::abs(hermitian_eigenvalues(rho).sum() - 1.0) <= 1e-12);
  }
}

TEST_CASE("the core instantiates on other scalar types") {
  using LVec = BlochVector<long double>;
  const LVec a(LVec(0.25L, -0.125L, 0.5L));
  const Matrix2c<long double> rho = bloch_to_density(a);
  const LVec back = density_to_bloch(rho);
  CHECK(static_cast<double>((back - a).norm()) <= 1e-15);
  CHECK(max_abs_diff(
            (pauli_x<long double>() * pauli_x<long double>()).cast<std::complex<double>>(),
            Mat2::Identity()) == 0);
}
