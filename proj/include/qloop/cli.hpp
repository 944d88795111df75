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

#include "qloop/dynamics.hpp"
#include "qloop/feedback.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

// Command implementations behind the qloop binary. They are plain functions
// over argument structs writing to caller-supplied streams, so tests can run
// them in-process and check exit codes and output without spawning anything.

namespace qloop::cli {

// 0 on success; 2 for bad arguments or domain violations; 3 for numerical
// failures (residual above tolerance, non-convergence, integrator trouble).
inline constexpr int exit_ok = 0;
inline constexpr int exit_usage_error = 2;
inline constexpr int exit_numeric_error = 3;

enum class OutputFormat { csv, json };

/// One solved operating point. e3 is empty for runs without an input state,
/// phi for runs without a phase gate; both serialize as empty CSV cells and
/// JSON nulls.
struct ResultRow {
  double gamma{};
  std::optional<double> e3;
  std::optional<double> phi;
  double a1{}, a2{}, a3{};
  double b1{}, b2{}, b3{};
  double out1{}, out2{}, out3{};
  double residual{};
  bool controllable{};
  double sensitivity{};
};

/// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double value);

const std::string& csv_header();
void write_csv(const std::vector<ResultRow>& rows, std::ostream& os);
void write_json(const std::vector<ResultRow>& rows, std::ostream& os);
void write_rows(const std::vector<ResultRow>& rows, OutputFormat format,
                std::ostream& os);

/// Strict reader for the write_csv format; throws std::runtime_error on any
/// malformed header, row width, or cell.
std::vector<ResultRow> parse_csv(std::istream& is);

struct GateArgs {
  std::string gate = "none";  // none | cnot | cu | cphase
  double phi = 0;
  // Euler angles for --gate cu: U(theta, phi, lambda) in the usual
  // one-qubit convention, U(pi, 0, pi) = X up to nothing, U(0, 0, l) a phase.
  double u_theta = 0;
  double u_phi = 0;
  double u_lambda = 0;
  std::string control = "feedback";  // feedback | input
};

struct SteadyArgs {
  double gamma = 0;
  bool no_input = false;
  double ex = 0;
  double ey = 0;
  double e3 = 0;
  GateArgs gate;
  OutputFormat format = OutputFormat::csv;
  double tol = 1e-10;
};

struct SweepAxis {
  std::string param;  // gamma | e3 | phi
  double start = 0;
  double stop = 0;
  int steps = 0;
};

struct SweepArgs {
  SteadyArgs base;
  std::vector<SweepAxis> axes;
  // Flags that were also given explicitly, to reject fixed-and-swept clashes.
  bool gamma_fixed = false;
  bool e3_fixed = false;
  bool phi_fixed = false;
};

struct LindbladArgs {
  double omega = 0;
  double gamma_prime = 1;
  double t = 1;
  double dt = 1e-3;
  double tol = 1e-6;
  std::uint32_t seed = 42;
  int states = 20;
  OutputFormat format = OutputFormat::csv;
};

/// U(theta, phi, lambda): the standard one-qubit rotation parametrization.
Matrix2c<double> unitary_from_angles(double theta, double phi, double lambda);

/// Maps CLI arguments onto a loop configuration; throws std::invalid_argument
/// with a user-facing message on any inconsistency.
LoopConfig<double> build_config(const SteadyArgs& args);

/// Solves one configuration and runs the control analysis on it.
ResultRow evaluate_row(const LoopConfig<double>& cfg);

int run_steady(const SteadyArgs& args, std::ostream& out, std::ostream& err);
int run_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err);
int run_lindblad(const LindbladArgs& args, std::ostream& out, std::ostream& err);

}  // namespace qloop::cli
