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

#include "qloop/qmath.hpp"

#include <cmath>
#include <utility>
#include <vector>

/// Single-qubit quantum operations: the operator-sum (Kraus) representation,
/// the photon-loss channel, the symmetric cloner, and the affine picture of a
/// channel acting on Bloch vectors.

namespace qloop {

/// Operation in operator-sum form. The completeness relation
/// sum_i P_i^dagger P_i = I is checked once, at construction.
template <typename Scalar>
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<Matrix2c<Scalar>> operators,
                        double tol = default_tolerance)
      : ops_(std::move(operators)) {
    if (ops_.empty()) {
      throw std::invalid_argument("KrausChannel: at least one operator required");
    }
    Matrix2c<Scalar> sum = Matrix2c<Scalar>::Zero();
    for (const auto& p : ops_) {
      sum += p.adjoint() * p;
    }
    const double defect = static_cast<double>(
        (sum - Matrix2c<Scalar>::Identity()).cwiseAbs().maxCoeff());
    if (!(defect <= tol)) {
      throw std::invalid_argument(
          "KrausChannel: operators violate completeness (max defect " +
          std::to_string(defect) + ")");
    }
  }

  const std::vector<Matrix2c<Scalar>>& operators() const { return ops_; }

 private:
  std::vector<Matrix2c<Scalar>> ops_;
};

/// sum_i P_i rho P_i^dagger. Trusts its inputs; the channel was validated at
/// construction and callers own the state check.
template <typename Scalar>
Matrix2c<Scalar> apply_channel(const KrausChannel<Scalar>& channel,
                               const Matrix2c<Scalar>& rho) {
  Matrix2c<Scalar> out = Matrix2c<Scalar>::Zero();
  for (const auto& p : channel.operators()) {
    out += p * rho * p.adjoint();
  }
  return out;
}

/// Photon-loss (spontaneous-emission) channel with loss probability gamma.
/// One operator keeps the excited amplitude with weight sqrt(1 - gamma), the
/// other moves excited population to the ground state with weight sqrt(gamma).
template <typename Scalar>
KrausChannel<Scalar> amplitude_damping(Scalar gamma) {
  if (!(gamma >= Scalar(0) && gamma <= Scalar(1))) {
    throw std::invalid_argument("amplitude_damping: gamma must lie in [0, 1]");
  }
  using std::sqrt;
  Matrix2c<Scalar> keep;
  keep << 1, 0,  //
      0, std::complex<Scalar>(sqrt(Scalar(1) - gamma));
  Matrix2c<Scalar> decay;
  decay << 0, std::complex<Scalar>(sqrt(gamma)),  //
      0, 0;
  return KrausChannel<Scalar>({keep, decay});
}

/// Symmetric cloner, one output copy: (2/3) rho + (1/6) I. Both copies of the
/// cloner carry this same state, so a single map covers either leg.
template <typename Derived>
auto buzek_hillery_clone(const Eigen::MatrixBase<Derived>& rho)
    -> Matrix2c<detail::RealScalarOf<Derived>> {
  static_assert(Derived::RowsAtCompileTime == 2 && Derived::ColsAtCompileTime == 2,
                "buzek_hillery_clone expects a 2x2 matrix");
  using S = detail::RealScalarOf<Derived>;
  const Matrix2c<S> in = rho;
  return (S(2) / S(3)) * in + (S(1) / S(6)) * Matrix2c<S>::Identity();
}

/// Operator-sum form of the cloner copy: depolarizing with mixing weight 1/3,
/// which reproduces (2/3) rho + (1/6) I.
template <typename Scalar = double>
KrausChannel<Scalar> cloner_channel() {
  using std::sqrt;
  const Scalar keep_weight = sqrt(Scalar(3) / Scalar(4));
  const Scalar flip_weight = sqrt(Scalar(1) / Scalar(12));
  return KrausChannel<Scalar>({(keep_weight * Matrix2c<Scalar>::Identity()).eval(),
                               (flip_weight * pauli_x<Scalar>()).eval(),
                               (flip_weight * pauli_y<Scalar>()).eval(),
                               (flip_weight * pauli_z<Scalar>()).eval()});
}

/// Action of a channel on Bloch vectors: a -> linear a + offset.
template <typename Scalar>
struct AffineBlochMap {
  Matrix3r<Scalar> linear = Matrix3r<Scalar>::Identity();
  BlochVector<Scalar> offset = BlochVector<Scalar>::Zero();

  BlochVector<Scalar> operator()(const BlochVector<Scalar>& a) const {
    return linear * a + offset;
  }

  static AffineBlochMap identity() { return {}; }
};

/// outer after inner.
template <typename Scalar>
AffineBlochMap<Scalar> compose(const AffineBlochMap<Scalar>& outer,
                               const AffineBlochMap<Scalar>& inner) {
  return {outer.linear * inner.linear,
          outer.linear * inner.offset + outer.offset};
}

/// Extracts the affine Bloch action of a channel by probing it: the image of
/// the maximally mixed state gives the offset, the images of the three axis
/// states give the columns. Exact for trace-preserving linear maps.
template <typename Scalar>
AffineBlochMap<Scalar> channel_to_affine(const KrausChannel<Scalar>& channel) {
  const auto image = [&channel](const BlochVector<Scalar>& a) {
    return density_to_bloch(apply_channel(channel, bloch_to_density(a)));
  };
  AffineBlochMap<Scalar> map;
  map.offset = image(BlochVector<Scalar>::Zero());
  for (int k = 0; k < 3; ++k) {
    map.linear.col(k) = image(BlochVector<Scalar>::Unit(k)) - map.offset;
  }
  return map;
}

/// Bloch picture of the cloner copy: uniform shrink by 2/3, no offset.
template <typename Scalar = double>
AffineBlochMap<Scalar> cloner_affine() {
  return {(Scalar(2) / Scalar(3)) * Matrix3r<Scalar>::Identity(),
          BlochVector<Scalar>::Zero()};
}

}  // namespace qloop
