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

#include "qloop/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

namespace {

using qloop::cli::LindbladArgs;
using qloop::cli::OutputFormat;
using qloop::cli::SteadyArgs;
using qloop::cli::SweepArgs;

OutputFormat parse_format(const std::string& name) {
  return name == "json" ? OutputFormat::json : OutputFormat::csv;
}

void add_loop_flags(CLI::App* cmd, SteadyArgs& args, std::string& format_name,
                    std::string& out_path) {
  cmd->add_option("--gamma", args.gamma,
                  "photon-loss probability of the process, in [0, 1]");
  cmd->add_flag("--no-input", args.no_input,
                "run the loop free, without an input state or gate");
  cmd->add_option("--e3", args.e3, "z component of the input Bloch vector");
  cmd->add_option("--ex", args.ex, "x component of the input Bloch vector");
  cmd->add_option("--ey", args.ey, "y component of the input Bloch vector");
  cmd->add_option("--gate", args.gate.gate, "mixing gate")
      ->check(CLI::IsMember({"none", "cnot", "cu", "cphase"}));
  cmd->add_option("--phi", args.gate.phi,
                  "phase angle in radians, for --gate cphase");
  cmd->add_option("--u-theta", args.gate.u_theta,
                  "theta angle of U(theta, phi, lambda), for --gate cu");
  cmd->add_option("--u-phi", args.gate.u_phi,
                  "phi angle of U(theta, phi, lambda), for --gate cu");
  cmd->add_option("--u-lambda", args.gate.u_lambda,
                  "lambda angle of U(theta, phi, lambda), for --gate cu");
  cmd->add_option("--control", args.gate.control,
                  "leg receiving the gate's conditioned action: feedback "
                  "(conditioned on the input) or input (conditioned on the "
                  "feedback copy)")
      ->check(CLI::IsMember({"feedback", "input"}));
  cmd->add_option("--format", format_name, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--tol", args.tol, "largest acceptable steady-state residual");
  cmd->add_option("--out", out_path, "write the table to FILE instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Measurement-free feedback loop for a lossy qubit: steady states, "
      "parameter sweeps, and master-equation cross-checks"};
  app.require_subcommand(1);

  SteadyArgs steady;
  std::string steady_format = "csv";
  std::string steady_out;
  CLI::App* steady_cmd = app.add_subcommand(
      "steady", "Solve one loop configuration for its steady state");
  add_loop_flags(steady_cmd, steady, steady_format, steady_out);

  SweepArgs sweep;
  std::string sweep_format = "csv";
  std::string sweep_out;
  std::vector<std::string> sweep_params;
  std::vector<double> sweep_from;
  std::vector<double> sweep_to;
  std::vector<int> sweep_steps;
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "Tabulate steady states over one or more parameter grids");
  add_loop_flags(sweep_cmd, sweep.base, sweep_format, sweep_out);
  sweep_cmd->add_option("--param", sweep_params,
                        "swept parameter: gamma, e3 or phi (repeat for a grid)");
  sweep_cmd->add_option("--from", sweep_from, "first value of the matching --param");
  sweep_cmd->add_option("--to", sweep_to, "last value of the matching --param");
  sweep_cmd->add_option("--steps", sweep_steps,
                        "number of points of the matching --param, >= 2");

  LindbladArgs lindblad;
  std::string lindblad_format = "csv";
  std::string lindblad_out;
  CLI::App* lindblad_cmd = app.add_subcommand(
      "lindblad",
      "Integrate the emission master equation over random initial states and "
      "compare against the loss channel in the rotating frame");
  lindblad_cmd->add_option("--omega", lindblad.omega, "level splitting (hbar = 1)");
  lindblad_cmd->add_option("--gamma-prime", lindblad.gamma_prime,
                           "spontaneous-emission rate, >= 0");
  lindblad_cmd->add_option("--t", lindblad.t, "total evolution time");
  lindblad_cmd->add_option("--dt", lindblad.dt, "integrator step ceiling");
  lindblad_cmd->add_option("--tol", lindblad.tol,
                           "largest acceptable discrepancy against the channel");
  lindblad_cmd->add_option("--seed", lindblad.seed,
                           "seed for the random initial states");
  lindblad_cmd->add_option("--states", lindblad.states,
                           "number of random initial states");
  lindblad_cmd->add_option("--format", lindblad_format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  lindblad_cmd->add_option("--out", lindblad_out,
                           "write the report to FILE instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qloop::cli::exit_usage_error;
  }

  steady.format = parse_format(steady_format);
  sweep.base.format = parse_format(sweep_format);
  lindblad.format = parse_format(lindblad_format);

  sweep.gamma_fixed = sweep_cmd->count("--gamma") > 0;
  sweep.e3_fixed = sweep_cmd->count("--e3") > 0;
  sweep.phi_fixed = sweep_cmd->count("--phi") > 0;
  if (sweep_params.size() != sweep_from.size() ||
      sweep_params.size() != sweep_to.size() ||
      sweep_params.size() != sweep_steps.size()) {
    std::cerr << "sweep: --param, --from, --to and --steps must be repeated "
                 "the same number of times\n";
    return qloop::cli::exit_usage_error;
  }
  for (std::size_t i = 0; i < sweep_params.size(); ++i) {
    sweep.axes.push_back(
        {sweep_params[i], sweep_from[i], sweep_to[i], sweep_steps[i]});
  }

  const std::string* out_path = nullptr;
  if (steady_cmd->parsed() && !steady_out.empty()) out_path = &steady_out;
  if (sweep_cmd->parsed() && !sweep_out.empty()) out_path = &sweep_out;
  if (lindblad_cmd->parsed() && !lindblad_out.empty()) out_path = &lindblad_out;

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (out_path != nullptr) {
    file.open(*out_path);
    if (!file) {
      std::cerr << "cannot open '" << *out_path << "' for writing\n";
      return qloop::cli::exit_usage_error;
    }
    out = &file;
  }

  if (steady_cmd->parsed()) {
    return qloop::cli::run_steady(steady, *out, std::cerr);
  }
  if (sweep_cmd->parsed()) {
    return qloop::cli::run_sweep(sweep, *out, std::cerr);
  }
  return qloop::cli::run_lindblad(lindblad, *out, std::cerr);
}
