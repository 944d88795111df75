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

#include "qloop/channels.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

/// The measurement-free feedback loop. One round trip sends the process-input
/// state through the loss process, clones the result, and recombines one copy
/// with a fresh input state through a two-qubit gate; the surviving leg feeds
/// the process again. Everything the loop does to a Bloch vector is affine,
/// so a trip is a single AffineBlochMap whose unique fixed point is the
/// steady state (the map contracts: the cloner alone shrinks by 2/3).

namespace qloop {

enum class GateKind { none, cnot, controlled_u, controlled_phase };

/// Wiring of the two-qubit mixing register. With ControlAssignment::feedback
/// the register is ordered (input, feedback) and the input leg is traced out
/// after the gate, so the input state drives the control slot and the gate's
/// target action lands on the feedback copy. ControlAssignment::input swaps
/// the legs and traces the other slot instead. The surviving leg becomes the
/// next process input either way.
enum class ControlAssignment { feedback, input };

/// Which loop signal is fed back. Only the cloned copy is modeled; the
/// cloner's ancilla is not a valid feedback signal here.
enum class FeedbackLeg { cloned_copy, ancilla };

enum class SolverMethod { closed_form_linear, fixed_point_iteration };

struct SolverSettings {
  SolverMethod method = SolverMethod::closed_form_linear;
  int max_iterations = 1000;
  double tolerance = 1e-12;
};

/// Everything that defines one loop: the loss strength, the (optional) input
/// state, the mixing gate and its wiring, and how to solve for the fixed
/// point. Without a gate the loop runs free and no input state is allowed.
template <typename Scalar>
struct LoopConfig {
  Scalar gamma{};
  std::optional<BlochVector<Scalar>> input_bloch;
  GateKind gate = GateKind::none;
  /// Payload for GateKind::controlled_u.
  Matrix2c<Scalar> gate_target = Matrix2c<Scalar>::Identity();
  /// Angle (radians) for GateKind::controlled_phase.
  Scalar phase{};
  ControlAssignment control = ControlAssignment::feedback;
  FeedbackLeg feedback_leg = FeedbackLeg::cloned_copy;
  SolverSettings solver{};

  static LoopConfig no_input(Scalar gamma) {
    LoopConfig cfg;
    cfg.gamma = gamma;
    return cfg;
  }

  static LoopConfig with_cnot(Scalar gamma, const BlochVector<Scalar>& input,
                              ControlAssignment control = ControlAssignment::feedback) {
    LoopConfig cfg;
    cfg.gamma = gamma;
    cfg.input_bloch = input;
    cfg.gate = GateKind::cnot;
    cfg.control = control;
    return cfg;
  }

  static LoopConfig with_controlled_u(Scalar gamma, const Matrix2c<Scalar>& target,
                                      const BlochVector<Scalar>& input,
                                      ControlAssignment control = ControlAssignment::feedback) {
    LoopConfig cfg;
    cfg.gamma = gamma;
    cfg.input_bloch = input;
    cfg.gate = GateKind::controlled_u;
    cfg.gate_target = target;
    cfg.control = control;
    return cfg;
  }

  static LoopConfig with_controlled_phase(Scalar gamma, Scalar phase,
                                          const BlochVector<Scalar>& input,
                                          ControlAssignment control = ControlAssignment::feedback) {
    LoopConfig cfg;
    cfg.gamma = gamma;
    cfg.input_bloch = input;
    cfg.gate = GateKind::controlled_phase;
    cfg.phase = phase;
    cfg.control = control;
    return cfg;
  }
};

template <typename Scalar>
void validate_config(const LoopConfig<Scalar>& cfg) {
  if (!(cfg.gamma >= Scalar(0) && cfg.gamma <= Scalar(1))) {
    throw std::invalid_argument("LoopConfig: gamma must lie in [0, 1]");
  }
  if (cfg.feedback_leg == FeedbackLeg::ancilla) {
    throw std::invalid_argument(
        "LoopConfig: the cloner ancilla is not a usable feedback signal; "
        "feed back the cloned copy");
  }
  if (cfg.gate == GateKind::none) {
    if (cfg.input_bloch) {
      throw std::invalid_argument(
          "LoopConfig: an input state needs a mixing gate; select one or drop the input");
    }
  } else {
    if (!cfg.input_bloch) {
      throw std::invalid_argument("LoopConfig: the selected gate needs an input state");
    }
    const Scalar len = cfg.input_bloch->norm();
    if (!(len <= Scalar(1) + Scalar(1e-12))) {
      throw std::invalid_argument(
          "LoopConfig: input Bloch vector of length " +
          std::to_string(static_cast<double>(len)) + " is outside the unit ball");
    }
  }
  if (cfg.solver.max_iterations < 1) {
    throw std::invalid_argument("LoopConfig: max_iterations must be >= 1");
  }
  if (!(cfg.solver.tolerance > 0)) {
    throw std::invalid_argument("LoopConfig: solver tolerance must be positive");
  }
}

/// The full two-qubit unitary selected by the config. Identity for
/// GateKind::none.
template <typename Scalar>
Matrix4c<Scalar> gate_unitary(const LoopConfig<Scalar>& cfg) {
  switch (cfg.gate) {
    case GateKind::none:
      return Matrix4c<Scalar>::Identity();
    case GateKind::cnot:
      return controlled_u(pauli_x<Scalar>());
    case GateKind::controlled_u:
      return controlled_u(cfg.gate_target);
    case GateKind::controlled_phase: {
      Matrix2c<Scalar> u = Matrix2c<Scalar>::Identity();
      u(1, 1) = std::exp(std::complex<Scalar>(0, cfg.phase));
      return controlled_u(u);
    }
  }
  throw std::logic_error("gate_unitary: unhandled gate kind");
}

/// Affine map from the feedback Bloch vector to the next process input: the
/// feedback copy meets the given input state in the two-qubit gate, then the
/// leg named by the assignment is traced out. Probing the maximally mixed
/// state and the three axis states recovers the map exactly. The input state
/// enters linearly, so any hermitian unit-trace matrix is acceptable here;
/// physicality is the caller's concern.
template <typename Scalar>
AffineBlochMap<Scalar> gate_mix_affine(const Matrix4c<Scalar>& gate,
                                       const Matrix2c<Scalar>& input_state,
                                       ControlAssignment control) {
  require_unitary(gate, "gate_mix_affine");
  const auto mix = [&](const BlochVector<Scalar>& f) -> BlochVector<Scalar> {
    const Matrix2c<Scalar> feedback_state = bloch_to_density(f);
    if (control == ControlAssignment::feedback) {
      const Matrix4c<Scalar> joint = tensor_product(input_state, feedback_state);
      const Matrix4c<Scalar> mixed = gate * joint * gate.adjoint();
      return density_to_bloch(partial_trace_first(mixed));
    }
    const Matrix4c<Scalar> joint = tensor_product(feedback_state, input_state);
    const Matrix4c<Scalar> mixed = gate * joint * gate.adjoint();
    return density_to_bloch(partial_trace_second(mixed));
  };
  AffineBlochMap<Scalar> map;
  map.offset = mix(BlochVector<Scalar>::Zero());
  for (int k = 0; k < 3; ++k) {
    map.linear.col(k) = mix(BlochVector<Scalar>::Unit(k)) - map.offset;
  }
  return map;
}

/// Bloch picture of the loss process at strength gamma.
template <typename Scalar>
AffineBlochMap<Scalar> process_affine(Scalar gamma) {
  return channel_to_affine(amplitude_damping(gamma));
}

template <typename Scalar>
Scalar spectral_radius(const Matrix3r<Scalar>& m) {
  return Eigen::EigenSolver<Matrix3r<Scalar>>(m, false)
      .eigenvalues()
      .cwiseAbs()
      .maxCoeff();
}

namespace detail {

/// (I + a . sigma) / 2 without the ball check; used where the affine
/// extension to slightly unphysical inputs is wanted (difference probes at
/// the ball boundary).
template <typename Scalar>
Matrix2c<Scalar> state_from_bloch_unchecked(const BlochVector<Scalar>& a) {
  using C = std::complex<Scalar>;
  Matrix2c<Scalar> rho;
  rho << C((Scalar(1) + a[2]) / Scalar(2)), C(a[0] / Scalar(2), -a[1] / Scalar(2)),
      C(a[0] / Scalar(2), a[1] / Scalar(2)), C((Scalar(1) - a[2]) / Scalar(2));
  return rho;
}

template <typename Scalar>
AffineBlochMap<Scalar> loop_map_impl(const LoopConfig<Scalar>& cfg) {
  AffineBlochMap<Scalar> trip =
      compose(cloner_affine<Scalar>(), process_affine(cfg.gamma));
  if (cfg.gate != GateKind::none) {
    trip = compose(gate_mix_affine(gate_unitary(cfg),
                                   state_from_bloch_unchecked(*cfg.input_bloch),
                                   cfg.control),
                   trip);
  }
  return trip;
}

template <typename Scalar>
struct AffineFixedPoint {
  BlochVector<Scalar> point = BlochVector<Scalar>::Zero();
  int iterations{};
  Scalar residual{};
};

template <typename Scalar>
AffineFixedPoint<Scalar> solve_affine_fixed_point(const AffineBlochMap<Scalar>& map,
                                                  const SolverSettings& settings) {
  if (!(spectral_radius(map.linear) < Scalar(1))) {
    throw std::runtime_error(
        "steady state: the loop map is not a contraction (spectral radius >= 1)");
  }
  AffineFixedPoint<Scalar> sol;
  if (settings.method == SolverMethod::closed_form_linear) {
    const Matrix3r<Scalar> system = Matrix3r<Scalar>::Identity() - map.linear;
    Eigen::FullPivLU<Matrix3r<Scalar>> lu(system);
    if (!lu.isInvertible()) {
      throw std::runtime_error("steady state: I - M is singular");
    }
    sol.point = lu.solve(map.offset);
  } else {
    BlochVector<Scalar> a = BlochVector<Scalar>::Zero();
    bool converged = false;
    for (int i = 1; i <= settings.max_iterations; ++i) {
      const BlochVector<Scalar> next = map(a);
      const Scalar step = (next - a).norm();
      a = next;
      sol.iterations = i;
      if (step <= Scalar(settings.tolerance)) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw std::runtime_error(
          "steady state: fixed-point iteration did not converge within " +
          std::to_string(settings.max_iterations) + " iterations");
    }
    sol.point = a;
  }
  sol.residual = (map(sol.point) - sol.point).norm();
  return sol;
}

}  // namespace detail

/// One full trip around the loop as a single affine map on the process-input
/// Bloch vector: loss process, cloner copy, then the mixing gate (if any).
template <typename Scalar>
AffineBlochMap<Scalar> loop_map(const LoopConfig<Scalar>& cfg) {
  validate_config(cfg);
  return detail::loop_map_impl(cfg);
}

/// Steady state of the loop. process_input is the fixed point a (the state
/// entering the loss process), process_output is b = process(a), and
/// system_output is the cloned copy (2/3) b that leaves the loop.
template <typename Scalar>
struct LoopSolution {
  BlochVector<Scalar> process_input = BlochVector<Scalar>::Zero();
  BlochVector<Scalar> process_output = BlochVector<Scalar>::Zero();
  BlochVector<Scalar> system_output = BlochVector<Scalar>::Zero();
  int iterations{};
  Scalar residual{};
};

namespace detail {

template <typename Scalar>
LoopSolution<Scalar> solve_loop(const LoopConfig<Scalar>& cfg) {
  const AffineFixedPoint<Scalar> fixed =
      solve_affine_fixed_point(loop_map_impl(cfg), cfg.solver);
  LoopSolution<Scalar> sol;
  sol.process_input = fixed.point;
  sol.process_output = process_affine(cfg.gamma)(fixed.point);
  sol.system_output = (Scalar(2) / Scalar(3)) * sol.process_output;
  sol.iterations = fixed.iterations;
  sol.residual = fixed.residual;
  return sol;
}

}  // namespace detail

template <typename Scalar>
LoopSolution<Scalar> solve_steady_state(const LoopConfig<Scalar>& cfg) {
  validate_config(cfg);
  return detail::solve_loop(cfg);
}

/// Inverts the output chain: given the system output (the cloned copy),
/// reconstructs the Bloch vector that entered the loss process. The chain
/// loses all input information at gamma = 1, and an output that maps back to
/// a point outside the Bloch ball is inconsistent with the claimed gamma.
template <typename Scalar>
BlochVector<Scalar> observability(Scalar gamma,
                                  const BlochVector<Scalar>& system_output) {
  if (!(gamma >= Scalar(0) && gamma <= Scalar(1))) {
    throw std::invalid_argument("observability: gamma must lie in [0, 1]");
  }
  if (!(gamma < Scalar(1))) {
    throw std::invalid_argument(
        "observability: the process forgets its input at gamma = 1; "
        "the output chain is not invertible");
  }
  using std::sqrt;
  const BlochVector<Scalar> b = (Scalar(3) / Scalar(2)) * system_output;
  const Scalar root = sqrt(Scalar(1) - gamma);
  const BlochVector<Scalar> a(b[0] / root, b[1] / root,
                              (b[2] - gamma) / (Scalar(1) - gamma));
  if (!(a.norm() <= Scalar(1) + Scalar(1e-9))) {
    throw std::runtime_error(
        "observability: reconstructed state lies outside the Bloch ball; "
        "the output is inconsistent with this gamma");
  }
  return a;
}

/// Influence threshold for the numeric rank decisions below.
inline constexpr double rank_tolerance = 1e-9;

template <typename Scalar>
struct ControlAnalysis {
  bool controllable{};
  bool observable{};
  /// d b3 / d e3 at the operating point: how hard the steady output's z
  /// component responds to the input's z component.
  Scalar sensitivity{};
  /// Which input components move the steady output at all.
  std::array<bool, 3> affected{{false, false, false}};
};

/// Differentiates the steady process output with respect to the input Bloch
/// vector (central differences of step de) and classifies the loop:
/// controllable when the restriction of the Jacobian to the affected
/// components has full rank, observable when the output chain inverts back
/// to the steady process input. The loop map is affine in the input state,
/// so probe points slightly outside the unit ball are well defined and the
/// derivative at boundary operating points is taken through that extension.
template <typename Scalar>
ControlAnalysis<Scalar> controllability(const LoopConfig<Scalar>& cfg,
                                        Scalar de = Scalar(1e-5)) {
  validate_config(cfg);
  if (!(de > Scalar(0))) {
    throw std::invalid_argument("controllability: step must be positive");
  }
  ControlAnalysis<Scalar> analysis;
  const LoopSolution<Scalar> base = detail::solve_loop(cfg);

  if (cfg.gamma < Scalar(1)) {
    try {
      const BlochVector<Scalar> recovered =
          observability(cfg.gamma, base.system_output);
      analysis.observable =
          (recovered - base.process_input).norm() <= Scalar(1e-10);
    } catch (const std::exception&) {
      analysis.observable = false;
    }
  }

  if (cfg.gate == GateKind::none) {
    return analysis;  // free-running loop: no input to steer with
  }

  Matrix3r<Scalar> jacobian = Matrix3r<Scalar>::Zero();
  for (int k = 0; k < 3; ++k) {
    LoopConfig<Scalar> plus = cfg;
    LoopConfig<Scalar> minus = cfg;
    (*plus.input_bloch)[k] += de;
    (*minus.input_bloch)[k] -= de;
    const BlochVector<Scalar> bp = detail::solve_loop(plus).process_output;
    const BlochVector<Scalar> bm = detail::solve_loop(minus).process_output;
    jacobian.col(k) = (bp - bm) / (Scalar(2) * de);
    analysis.affected[k] =
        jacobian.col(k).cwiseAbs().maxCoeff() > Scalar(rank_tolerance);
  }
  analysis.sensitivity = jacobian(2, 2);

  int affected_count = 0;
  Eigen::Matrix<Scalar, 3, Eigen::Dynamic> restricted(3, 3);
  for (int k = 0; k < 3; ++k) {
    if (analysis.affected[k]) {
      restricted.col(affected_count++) = jacobian.col(k);
    }
  }
  if (affected_count == 0) {
    analysis.controllable = false;
    return analysis;
  }
  restricted.conservativeResize(Eigen::NoChange, affected_count);
  const Eigen::JacobiSVD<Eigen::Matrix<Scalar, 3, Eigen::Dynamic>> svd(restricted);
  analysis.controllable =
      svd.singularValues().minCoeff() > Scalar(rank_tolerance);
  return analysis;
}

}  // namespace qloop
