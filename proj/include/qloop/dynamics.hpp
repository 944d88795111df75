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

/// Continuous-time picture of the loss process: the spontaneous-emission
/// master equation, a fixed-step RK4 integrator for it, and the rotating-frame
/// transform that strips the coherent evolution so the result can be compared
/// with the operator-sum channel at gamma = 1 - exp(-2 t gamma').

namespace qloop {

/// Emitter parameters: level splitting omega (hbar = 1), decay rate
/// gamma_prime, and elapsed time t.
template <typename Scalar>
struct EmissionParams {
  Scalar omega{};
  Scalar gamma_prime{};
  Scalar t{};
};

template <typename Scalar>
void validate_params(const EmissionParams<Scalar>& p) {
  if (!(std::isfinite(static_cast<double>(p.omega)))) {
    throw std::invalid_argument("EmissionParams: omega must be finite");
  }
  if (!(p.gamma_prime >= Scalar(0)) ||
      !std::isfinite(static_cast<double>(p.gamma_prime))) {
    throw std::invalid_argument("EmissionParams: gamma_prime must be >= 0 and finite");
  }
  if (!(p.t >= Scalar(0)) || !std::isfinite(static_cast<double>(p.t))) {
    throw std::invalid_argument("EmissionParams: t must be >= 0 and finite");
  }
}

/// Loss probability accumulated by time t: 1 - exp(-2 t gamma').
template <typename Scalar>
Scalar gamma_from_time(Scalar gamma_prime, Scalar t) {
  if (!(gamma_prime >= Scalar(0)) || !(t >= Scalar(0))) {
    throw std::invalid_argument("gamma_from_time: gamma_prime and t must be >= 0");
  }
  using std::expm1;
  return -expm1(Scalar(-2) * gamma_prime * t);
}

/// Right-hand side of the emission master equation,
///   d rho / dt = -i [H, rho] + gamma' (2 s- rho s+ - s+ s- rho - rho s+ s-),
/// with H = -omega sigma_z / 2.
template <typename Scalar>
Matrix2c<Scalar> lindblad_rhs(const Matrix2c<Scalar>& rho, Scalar omega,
                              Scalar gamma_prime) {
  using C = std::complex<Scalar>;
  const Matrix2c<Scalar> h = (-omega / Scalar(2)) * pauli_z<Scalar>();
  static const Matrix2c<Scalar> lower = sigma_minus<Scalar>();
  static const Matrix2c<Scalar> raise = sigma_plus<Scalar>();
  static const Matrix2c<Scalar> number = raise * lower;
  return C(0, -1) * (h * rho - rho * h) +
         gamma_prime * (Scalar(2) * lower * rho * raise - number * rho - rho * number);
}

/// One classical fourth-order Runge-Kutta step of size dt.
template <typename Scalar>
Matrix2c<Scalar> lindblad_step(const Matrix2c<Scalar>& rho, Scalar omega,
                               Scalar gamma_prime, Scalar dt) {
  if (!(dt > Scalar(0))) {
    throw std::invalid_argument("lindblad_step: dt must be positive");
  }
  if (!(gamma_prime >= Scalar(0))) {
    throw std::invalid_argument("lindblad_step: gamma_prime must be >= 0");
  }
  const Matrix2c<Scalar> k1 = lindblad_rhs(rho, omega, gamma_prime);
  const Matrix2c<Scalar> k2 =
      lindblad_rhs(Matrix2c<Scalar>(rho + (dt / Scalar(2)) * k1), omega, gamma_prime);
  const Matrix2c<Scalar> k3 =
      lindblad_rhs(Matrix2c<Scalar>(rho + (dt / Scalar(2)) * k2), omega, gamma_prime);
  const Matrix2c<Scalar> k4 =
      lindblad_rhs(Matrix2c<Scalar>(rho + dt * k3), omega, gamma_prime);
  return rho + (dt / Scalar(6)) * (k1 + Scalar(2) * k2 + Scalar(2) * k3 + k4);
}

template <typename Scalar>
struct EvolveResult {
  Matrix2c<Scalar> state;
  /// |Tr(state) - 1| at the end of the run, before any renormalization.
  Scalar trace_drift{};
  long steps{};
  bool renormalized{};
};

/// Integrates the master equation from 0 to p.t with a uniform step no larger
/// than dt (t is always hit exactly). Trace drift is surfaced in the result;
/// drift above 1e-12 is corrected by renormalization and flagged, drift above
/// 1e-8 is treated as an integrator failure.
template <typename Scalar>
EvolveResult<Scalar> lindblad_evolve(const Matrix2c<Scalar>& rho0,
                                     const EmissionParams<Scalar>& p, Scalar dt) {
  validate_params(p);
  if (!(dt > Scalar(0))) {
    throw std::invalid_argument("lindblad_evolve: dt must be positive");
  }
  require_density_matrix(rho0, "lindblad_evolve");
  EvolveResult<Scalar> result{rho0, Scalar(0), 0, false};
  if (p.t == Scalar(0)) return result;

  // Steps of exactly t / n, with n chosen so the step never exceeds dt.
  // Round-to-nearest absorbs the roundoff when t / dt is meant to be integral.
  const double ratio = static_cast<double>(p.t / dt);
  long n = std::llround(ratio);
  if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * std::max(1.0, ratio)) {
    n = static_cast<long>(std::ceil(ratio));
  }
  if (n < 1) n = 1;
  const Scalar h = p.t / Scalar(n);

  Matrix2c<Scalar> rho = rho0;
  for (long i = 0; i < n; ++i) {
    rho = lindblad_step(rho, p.omega, p.gamma_prime, h);
  }

  const std::complex<Scalar> trace = rho.trace();
  const Scalar drift = std::abs(trace - std::complex<Scalar>(1));
  if (!(drift <= Scalar(1e-8))) {
    throw std::runtime_error("lindblad_evolve: trace drift " +
                             std::to_string(static_cast<double>(drift)) +
                             " signals an integrator failure; reduce dt");
  }
  result.steps = n;
  result.trace_drift = drift;
  if (drift > Scalar(1e-12)) {
    rho /= trace.real();
    result.renormalized = true;
  }
  result.state = rho;
  return result;
}

/// Removes the coherent rotation from a lab-frame state: conjugates by
/// exp(i H t), which for H = -omega sigma_z / 2 is a diagonal phase. After
/// this transform the evolution matches the pure loss channel.
template <typename Scalar>
Matrix2c<Scalar> to_interaction_picture(const Matrix2c<Scalar>& rho_lab,
                                        const EmissionParams<Scalar>& p) {
  validate_params(p);
  using C = std::complex<Scalar>;
  const Scalar half_angle = p.omega * p.t / Scalar(2);
  Matrix2c<Scalar> u = Matrix2c<Scalar>::Zero();
  u(0, 0) = std::exp(C(0, -half_angle));
  u(1, 1) = std::exp(C(0, half_angle));
  return u * rho_lab * u.adjoint();
}

}  // namespace qloop
