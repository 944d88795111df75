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

#include <complex>
#include <stdexcept>
#include <string>

/// Dense one- and two-qubit linear algebra: density matrices, Bloch-vector
/// conversions, tensor products, partial traces and controlled gates.
/// Everything is a fixed-size Eigen matrix templated on the real scalar, and
/// the free functions accept arbitrary Eigen expressions of the right shape.
///
/// Conventions used throughout: the first basis state is the ground state,
/// the first tensor factor is the slow index of a two-qubit matrix, and a
/// Bloch vector a maps to the state (I + a . sigma) / 2, so the ground state
/// sits at the +z pole.

namespace qloop {

template <typename Scalar>
using Matrix2c = Eigen::Matrix<std::complex<Scalar>, 2, 2>;
template <typename Scalar>
using Matrix4c = Eigen::Matrix<std::complex<Scalar>, 4, 4>;
template <typename Scalar>
using Matrix3r = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using BlochVector = Eigen::Matrix<Scalar, 3, 1>;

/// Default absolute tolerance for hermiticity, unitarity, trace and
/// Bloch-ball checks. All matrices here are 2x2 or 4x4 doubles, so a
/// near-roundoff tolerance is affordable.
inline constexpr double default_tolerance = 1e-12;

namespace detail {
template <typename Derived>
using RealScalarOf = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
}  // namespace detail

// ---- Pauli matrices and ladder operators -----------------------------------

template <typename Scalar = double>
Matrix2c<Scalar> pauli_x() {
  Matrix2c<Scalar> m;
  m << 0, 1,  //
      1, 0;
  return m;
}

template <typename Scalar = double>
Matrix2c<Scalar> pauli_y() {
  using C = std::complex<Scalar>;
  Matrix2c<Scalar> m;
  m << C(0), C(0, -1),  //
      C(0, 1), C(0);
  return m;
}

template <typename Scalar = double>
Matrix2c<Scalar> pauli_z() {
  Matrix2c<Scalar> m;
  m << 1, 0,  //
      0, -1;
  return m;
}

/// Lowering operator |ground><excited|; its adjoint raises.
template <typename Scalar = double>
Matrix2c<Scalar> sigma_minus() {
  Matrix2c<Scalar> m;
  m << 0, 1,  //
      0, 0;
  return m;
}

template <typename Scalar = double>
Matrix2c<Scalar> sigma_plus() {
  return sigma_minus<Scalar>().adjoint();
}

// ---- Predicates and guards --------------------------------------------------

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m,
                  double tol = default_tolerance) {
  const typename Derived::PlainObject mat = m;
  return (mat - mat.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& m,
                double tol = default_tolerance) {
  const typename Derived::PlainObject mat = m;
  using Plain = typename Derived::PlainObject;
  return (mat.adjoint() * mat - Plain::Identity()).cwiseAbs().maxCoeff() <= tol;
}

/// Eigenvalues of the hermitian part (m + m^dagger) / 2, ascending.
template <typename Derived>
auto hermitian_eigenvalues(const Eigen::MatrixBase<Derived>& m)
    -> Eigen::Matrix<detail::RealScalarOf<Derived>, Derived::RowsAtCompileTime, 1> {
  using Plain = typename Derived::PlainObject;
  const Plain sym =
      (m.derived() + m.derived().adjoint()) * typename Derived::Scalar(0.5);
  return Eigen::SelfAdjointEigenSolver<Plain>(sym, Eigen::EigenvaluesOnly)
      .eigenvalues();
}

template <typename Derived>
bool is_positive_semidefinite(const Eigen::MatrixBase<Derived>& m,
                              double tol = default_tolerance) {
  return hermitian_eigenvalues(m).minCoeff() >= -tol;
}

/// Hermitian, unit trace, and no eigenvalue below -tol.
template <typename Derived>
bool is_density_matrix(const Eigen::MatrixBase<Derived>& m,
                       double tol = default_tolerance) {
  const typename Derived::PlainObject mat = m;
  if (!is_hermitian(mat, tol)) return false;
  if (std::abs(mat.trace() - typename Derived::Scalar(1)) > tol) return false;
  return is_positive_semidefinite(mat, tol);
}

template <typename Derived>
void require_unitary(const Eigen::MatrixBase<Derived>& m,
                     const std::string& what,
                     double tol = default_tolerance) {
  const typename Derived::PlainObject mat = m;
  using Plain = typename Derived::PlainObject;
  const double defect = static_cast<double>(
      (mat.adjoint() * mat - Plain::Identity()).cwiseAbs().maxCoeff());
  if (!(defect <= tol)) {
    throw std::invalid_argument(what + ": matrix is not unitary (max |U'U - I| = " +
                                std::to_string(defect) + ")");
  }
}

template <typename Derived>
void require_density_matrix(const Eigen::MatrixBase<Derived>& m,
                            const std::string& what,
                            double tol = default_tolerance) {
  const typename Derived::PlainObject mat = m;
  if (!is_hermitian(mat, tol)) {
    throw std::invalid_argument(what + ": matrix is not hermitian");
  }
  const double trace_defect =
      std::abs(mat.trace() - typename Derived::Scalar(1));
  if (trace_defect > tol) {
    throw std::invalid_argument(what + ": trace differs from one by " +
                                std::to_string(trace_defect));
  }
  if (!is_positive_semidefinite(mat, tol)) {
    throw std::invalid_argument(what + ": matrix has a negative eigenvalue");
  }
}

// ---- Bloch-vector conversions -----------------------------------------------

/// State (I + a . sigma) / 2 for a Bloch vector inside the unit ball.
/// Rejects vectors longer than 1 + tol and non-finite components.
template <typename Derived>
auto bloch_to_density(const Eigen::MatrixBase<Derived>& a,
                      double tol = default_tolerance)
    -> Matrix2c<typename Derived::Scalar> {
  static_assert(Derived::RowsAtCompileTime == 3 && Derived::ColsAtCompileTime == 1,
                "bloch_to_density expects a real 3-vector");
  using S = typename Derived::Scalar;
  using C = std::complex<S>;
  const BlochVector<S> v = a;
  const S len = v.norm();
  if (!(len <= S(1) + S(tol))) {
    throw std::invalid_argument(
        "bloch_to_density: vector of length " +
        std::to_string(static_cast<double>(len)) + " is outside the unit ball");
  }
  Matrix2c<S> rho;
  rho << C((S(1) + v[2]) / S(2)), C(v[0] / S(2), -v[1] / S(2)),  //
      C(v[0] / S(2), v[1] / S(2)), C((S(1) - v[2]) / S(2));
  return rho;
}

/// Pauli expectation values (Tr(rho sigma_x), Tr(rho sigma_y), Tr(rho sigma_z)).
template <typename Derived>
auto density_to_bloch(const Eigen::MatrixBase<Derived>& rho)
    -> BlochVector<detail::RealScalarOf<Derived>> {
  static_assert(Derived::RowsAtCompileTime == 2 && Derived::ColsAtCompileTime == 2,
                "density_to_bloch expects a 2x2 matrix");
  using S = detail::RealScalarOf<Derived>;
  const Matrix2c<S> m = rho;
  return BlochVector<S>((m * pauli_x<S>()).trace().real(),
                        (m * pauli_y<S>()).trace().real(),
                        (m * pauli_z<S>()).trace().real());
}

// ---- Composite-system helpers -------------------------------------------------

/// Kronecker product; the first factor owns the slow (block) index.
template <typename DerivedA, typename DerivedB>
auto tensor_product(const Eigen::MatrixBase<DerivedA>& a,
                    const Eigen::MatrixBase<DerivedB>& b)
    -> Matrix4c<detail::RealScalarOf<DerivedA>> {
  static_assert(DerivedA::RowsAtCompileTime == 2 && DerivedA::ColsAtCompileTime == 2 &&
                    DerivedB::RowsAtCompileTime == 2 && DerivedB::ColsAtCompileTime == 2,
                "tensor_product expects two 2x2 matrices");
  using S = detail::RealScalarOf<DerivedA>;
  const Matrix2c<S> lhs = a;
  const Matrix2c<S> rhs = b;
  Matrix4c<S> out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.template block<2, 2>(2 * i, 2 * j) = lhs(i, j) * rhs;
    }
  }
  return out;
}

/// Traces out the first (slow) factor of a two-qubit matrix.
template <typename Derived>
auto partial_trace_first(const Eigen::MatrixBase<Derived>& m)
    -> Matrix2c<detail::RealScalarOf<Derived>> {
  static_assert(Derived::RowsAtCompileTime == 4 && Derived::ColsAtCompileTime == 4,
                "partial_trace_first expects a 4x4 matrix");
  using S = detail::RealScalarOf<Derived>;
  const Matrix4c<S> joint = m;
  Matrix2c<S> out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out(i, j) = joint(i, j) + joint(2 + i, 2 + j);
    }
  }
  return out;
}

/// Traces out the second (fast) factor of a two-qubit matrix.
template <typename Derived>
auto partial_trace_second(const Eigen::MatrixBase<Derived>& m)
    -> Matrix2c<detail::RealScalarOf<Derived>> {
  static_assert(Derived::RowsAtCompileTime == 4 && Derived::ColsAtCompileTime == 4,
                "partial_trace_second expects a 4x4 matrix");
  using S = detail::RealScalarOf<Derived>;
  const Matrix4c<S> joint = m;
  Matrix2c<S> out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out(i, j) = joint(2 * i, 2 * j) + joint(2 * i + 1, 2 * j + 1);
    }
  }
  return out;
}

/// Two-qubit gate that applies u to the second factor when the first factor
/// is in the excited basis state, and nothing otherwise.
template <typename Derived>
auto controlled_u(const Eigen::MatrixBase<Derived>& u,
                  double tol = default_tolerance)
    -> Matrix4c<detail::RealScalarOf<Derived>> {
  static_assert(Derived::RowsAtCompileTime == 2 && Derived::ColsAtCompileTime == 2,
                "controlled_u expects a 2x2 matrix");
  using S = detail::RealScalarOf<Derived>;
  const Matrix2c<S> target_op = u;
  require_unitary(target_op, "controlled_u", tol);
  Matrix4c<S> gate = Matrix4c<S>::Identity();
  gate.template block<2, 2>(2, 2) = target_op;
  return gate;
}

/// gate . m . gate^dagger for a unitary gate of the same size as m.
template <typename DerivedG, typename DerivedM>
auto conjugate_by(const Eigen::MatrixBase<DerivedG>& gate,
                  const Eigen::MatrixBase<DerivedM>& m,
                  double tol = default_tolerance)
    -> Eigen::Matrix<std::complex<detail::RealScalarOf<DerivedM>>,
                     DerivedM::RowsAtCompileTime, DerivedM::ColsAtCompileTime> {
  static_assert(DerivedG::RowsAtCompileTime == DerivedM::RowsAtCompileTime &&
                    DerivedG::ColsAtCompileTime == DerivedM::ColsAtCompileTime &&
                    DerivedG::RowsAtCompileTime == DerivedG::ColsAtCompileTime,
                "conjugate_by expects square matrices of matching size");
  const typename DerivedG::PlainObject g = gate;
  require_unitary(g, "conjugate_by", tol);
  return g * m.derived() * g.adjoint();
}

}  // namespace qloop
