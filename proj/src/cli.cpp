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

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <string_view>
#include <system_error>

namespace qloop::cli {

namespace {

using Json = nlohmann::ordered_json;

double parse_cell(std::string_view cell) {
  double value{};
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
    throw std::runtime_error("parse_csv: bad number '" + std::string(cell) + "'");
  }
  return value;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t begin = 0;
  while (true) {
    const std::size_t comma = line.find(',', begin);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(begin));
      return cells;
    }
    cells.push_back(line.substr(begin, comma - begin));
    begin = comma + 1;
  }
}

/// Direction uniform on the sphere, radius from the cube-root law, so the
/// point is uniform in the ball.
BlochVector<double> random_bloch(std::mt19937& rng) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  BlochVector<double> direction(gauss(rng), gauss(rng), gauss(rng));
  const double len = direction.norm();
  if (len == 0) return BlochVector<double>::Zero();
  return std::cbrt(unit(rng)) * direction / len;
}

ControlAssignment parse_control(const std::string& name) {
  if (name == "feedback") return ControlAssignment::feedback;
  if (name == "input") return ControlAssignment::input;
  throw std::invalid_argument("--control must be 'feedback' or 'input'");
}

std::vector<double> axis_grid(const SweepAxis& axis) {
  std::vector<double> values(static_cast<std::size_t>(axis.steps));
  const double span = axis.stop - axis.start;
  for (int i = 0; i < axis.steps; ++i) {
    values[static_cast<std::size_t>(i)] =
        axis.start + span * static_cast<double>(i) / static_cast<double>(axis.steps - 1);
  }
  values.back() = axis.stop;
  return values;
}

void validate_axes(const SweepArgs& args) {
  if (args.axes.empty()) {
    throw std::invalid_argument("sweep needs at least one axis (--param/--from/--to/--steps)");
  }
  std::set<std::string> seen;
  for (const SweepAxis& axis : args.axes) {
    if (axis.param != "gamma" && axis.param != "e3" && axis.param != "phi") {
      throw std::invalid_argument("--param must be one of gamma, e3, phi (got '" +
                                  axis.param + "')");
    }
    if (!seen.insert(axis.param).second) {
      throw std::invalid_argument("parameter '" + axis.param + "' is swept twice");
    }
    if (axis.steps < 2) {
      throw std::invalid_argument("--steps must be >= 2 for axis '" + axis.param + "'");
    }
    if (!std::isfinite(axis.start) || !std::isfinite(axis.stop)) {
      throw std::invalid_argument("--from/--to must be finite for axis '" + axis.param + "'");
    }
    if (!(axis.start < axis.stop)) {
      throw std::invalid_argument("--from must be smaller than --to for axis '" +
                                  axis.param + "'");
    }
    if (axis.param == "gamma" && (axis.start < 0 || axis.stop > 1)) {
      throw std::invalid_argument("swept gamma values must stay inside [0, 1]");
    }
    if (axis.param == "e3" && (axis.start < -1 || axis.stop > 1)) {
      throw std::invalid_argument("swept e3 values must stay inside [-1, 1]");
    }
    if (axis.param == "e3" || axis.param == "phi") {
      if (args.base.no_input) {
        throw std::invalid_argument("sweeping '" + axis.param +
                                    "' conflicts with --no-input");
      }
      if (args.base.gate.gate == "none") {
        throw std::invalid_argument("sweeping '" + axis.param + "' needs a --gate");
      }
    }
    if (axis.param == "phi" && args.base.gate.gate != "cphase") {
      throw std::invalid_argument("sweeping 'phi' needs --gate cphase");
    }
    if (axis.param == "gamma" && args.gamma_fixed) {
      throw std::invalid_argument("gamma is both fixed (--gamma) and swept (--param gamma)");
    }
    if (axis.param == "e3" && args.e3_fixed) {
      throw std::invalid_argument("e3 is both fixed (--e3) and swept (--param e3)");
    }
    if (axis.param == "phi" && args.phi_fixed) {
      throw std::invalid_argument("phi is both fixed (--phi) and swept (--param phi)");
    }
  }
}

void append_row_json(Json& array, const ResultRow& row) {
  Json obj;
  obj["gamma"] = row.gamma;
  obj["e3"] = row.e3 ? Json(*row.e3) : Json(nullptr);
  obj["phi"] = row.phi ? Json(*row.phi) : Json(nullptr);
  obj["a1"] = row.a1;
  obj["a2"] = row.a2;
  obj["a3"] = row.a3;
  obj["b1"] = row.b1;
  obj["b2"] = row.b2;
  obj["b3"] = row.b3;
  obj["out1"] = row.out1;
  obj["out2"] = row.out2;
  obj["out3"] = row.out3;
  obj["residual"] = row.residual;
  obj["controllable"] = row.controllable;
  obj["sensitivity"] = row.sensitivity;
  array.push_back(std::move(obj));
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  const auto res = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, res.ptr);
}

const std::string& csv_header() {
  static const std::string header =
      "gamma,e3,phi,a1,a2,a3,b1,b2,b3,out1,out2,out3,residual,controllable,"
      "sensitivity";
  return header;
}

void write_csv(const std::vector<ResultRow>& rows, std::ostream& os) {
  os << csv_header() << '\n';
  for (const ResultRow& row : rows) {
    os << format_double(row.gamma) << ','
       << (row.e3 ? format_double(*row.e3) : std::string()) << ','
       << (row.phi ? format_double(*row.phi) : std::string()) << ','
       << format_double(row.a1) << ',' << format_double(row.a2) << ','
       << format_double(row.a3) << ',' << format_double(row.b1) << ','
       << format_double(row.b2) << ',' << format_double(row.b3) << ','
       << format_double(row.out1) << ',' << format_double(row.out2) << ','
       << format_double(row.out3) << ',' << format_double(row.residual) << ','
       << (row.controllable ? "true" : "false") << ','
       << format_double(row.sensitivity) << '\n';
  }
}

void write_json(const std::vector<ResultRow>& rows, std::ostream& os) {
  Json array = Json::array();
  for (const ResultRow& row : rows) {
    append_row_json(array, row);
  }
  os << array.dump(2) << '\n';
}

void write_rows(const std::vector<ResultRow>& rows, OutputFormat format,
                std::ostream& os) {
  if (format == OutputFormat::csv) {
    write_csv(rows, os);
  } else {
    write_json(rows, os);
  }
}

std::vector<ResultRow> parse_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) {
    throw std::runtime_error("parse_csv: empty input");
  }
  if (line != csv_header()) {
    throw std::runtime_error("parse_csv: unexpected header '" + line + "'");
  }
  std::vector<ResultRow> rows;
  while (std::getline(is, line)) {
    const std::vector<std::string_view> cells = split_cells(line);
    if (cells.size() != 15) {
      throw std::runtime_error("parse_csv: expected 15 cells, got " +
                               std::to_string(cells.size()));
    }
    ResultRow row;
    row.gamma = parse_cell(cells[0]);
    if (!cells[1].empty()) row.e3 = parse_cell(cells[1]);
    if (!cells[2].empty()) row.phi = parse_cell(cells[2]);
    row.a1 = parse_cell(cells[3]);
    row.a2 = parse_cell(cells[4]);
    row.a3 = parse_cell(cells[5]);
    row.b1 = parse_cell(cells[6]);
    row.b2 = parse_cell(cells[7]);
    row.b3 = parse_cell(cells[8]);
    row.out1 = parse_cell(cells[9]);
    row.out2 = parse_cell(cells[10]);
    row.out3 = parse_cell(cells[11]);
    row.residual = parse_cell(cells[12]);
    if (cells[13] == "true") {
      row.controllable = true;
    } else if (cells[13] == "false") {
      row.controllable = false;
    } else {
      throw std::runtime_error("parse_csv: bad flag '" + std::string(cells[13]) + "'");
    }
    row.sensitivity = parse_cell(cells[14]);
    rows.push_back(row);
  }
  return rows;
}

Matrix2c<double> unitary_from_angles(double theta, double phi, double lambda) {
  if (!std::isfinite(theta) || !std::isfinite(phi) || !std::isfinite(lambda)) {
    throw std::invalid_argument("cu angles must be finite");
  }
  using C = std::complex<double>;
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  Matrix2c<double> u;
  u << C(c), -std::exp(C(0, lambda)) * s,  //
      std::exp(C(0, phi)) * s, std::exp(C(0, phi + lambda)) * c;
  return u;
}

LoopConfig<double> build_config(const SteadyArgs& args) {
  if (!std::isfinite(args.gamma)) {
    throw std::invalid_argument("--gamma must be finite");
  }
  const ControlAssignment control = parse_control(args.gate.control);

  if (args.no_input) {
    if (args.gate.gate != "none") {
      throw std::invalid_argument("--no-input excludes --gate; drop one of them");
    }
    LoopConfig<double> cfg = LoopConfig<double>::no_input(args.gamma);
    validate_config(cfg);
    return cfg;
  }

  const BlochVector<double> input(args.ex, args.ey, args.e3);
  LoopConfig<double> cfg;
  if (args.gate.gate == "cnot") {
    cfg = LoopConfig<double>::with_cnot(args.gamma, input, control);
  } else if (args.gate.gate == "cu") {
    cfg = LoopConfig<double>::with_controlled_u(
        args.gamma,
        unitary_from_angles(args.gate.u_theta, args.gate.u_phi, args.gate.u_lambda),
        input, control);
  } else if (args.gate.gate == "cphase") {
    if (!std::isfinite(args.gate.phi)) {
      throw std::invalid_argument("--phi must be finite");
    }
    cfg = LoopConfig<double>::with_controlled_phase(args.gamma, args.gate.phi, input,
                                                    control);
  } else if (args.gate.gate == "none") {
    throw std::invalid_argument(
        "no gate selected: pass --no-input for the free-running loop or pick "
        "--gate cnot, cu or cphase");
  } else {
    throw std::invalid_argument("--gate must be one of none, cnot, cu, cphase");
  }
  validate_config(cfg);
  return cfg;
}

ResultRow evaluate_row(const LoopConfig<double>& cfg) {
  const LoopSolution<double> sol = solve_steady_state(cfg);
  ResultRow row;
  row.gamma = cfg.gamma;
  if (cfg.input_bloch) row.e3 = (*cfg.input_bloch)[2];
  if (cfg.gate == GateKind::controlled_phase) row.phi = cfg.phase;
  row.a1 = sol.process_input[0];
  row.a2 = sol.process_input[1];
  row.a3 = sol.process_input[2];
  row.b1 = sol.process_output[0];
  row.b2 = sol.process_output[1];
  row.b3 = sol.process_output[2];
  row.out1 = sol.system_output[0];
  row.out2 = sol.system_output[1];
  row.out3 = sol.system_output[2];
  row.residual = sol.residual;
  const ControlAnalysis<double> analysis = controllability(cfg);
  row.controllable = analysis.controllable;
  row.sensitivity = analysis.sensitivity;
  return row;
}

int run_steady(const SteadyArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const LoopConfig<double> cfg = build_config(args);
    const ResultRow row = evaluate_row(cfg);
    write_rows({row}, args.format, out);
    if (row.residual > args.tol) {
      err << "steady: residual " << format_double(row.residual)
          << " exceeds tolerance " << format_double(args.tol) << '\n';
      return exit_numeric_error;
    }
    return exit_ok;
  } catch (const std::invalid_argument& e) {
    err << "steady: " << e.what() << '\n';
    return exit_usage_error;
  } catch (const std::exception& e) {
    err << "steady: " << e.what() << '\n';
    return exit_numeric_error;
  }
}

int run_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  try {
    validate_axes(args);
    std::vector<std::vector<double>> grids;
    grids.reserve(args.axes.size());
    for (const SweepAxis& axis : args.axes) {
      grids.push_back(axis_grid(axis));
    }

    std::vector<ResultRow> rows;
    std::vector<std::size_t> index(args.axes.size(), 0);
    bool more = true;
    while (more) {
      SteadyArgs point = args.base;
      for (std::size_t d = 0; d < args.axes.size(); ++d) {
        const double value = grids[d][index[d]];
        if (args.axes[d].param == "gamma") {
          point.gamma = value;
        } else if (args.axes[d].param == "e3") {
          point.e3 = value;
        } else {
          point.gate.phi = value;
        }
      }
      rows.push_back(evaluate_row(build_config(point)));

      // Odometer: the last axis spins fastest, so the first axis is the
      // outermost loop and rows come out in row-major grid order.
      more = false;
      for (std::size_t d = args.axes.size(); d-- > 0;) {
        if (++index[d] < grids[d].size()) {
          more = true;
          break;
        }
        index[d] = 0;
      }
    }

    write_rows(rows, args.base.format, out);
    double worst = 0;
    for (const ResultRow& row : rows) worst = std::max(worst, row.residual);
    if (worst > args.base.tol) {
      err << "sweep: largest residual " << format_double(worst)
          << " exceeds tolerance " << format_double(args.base.tol) << '\n';
      return exit_numeric_error;
    }
    return exit_ok;
  } catch (const std::invalid_argument& e) {
    err << "sweep: " << e.what() << '\n';
    return exit_usage_error;
  } catch (const std::exception& e) {
    err << "sweep: " << e.what() << '\n';
    return exit_numeric_error;
  }
}

int run_lindblad(const LindbladArgs& args, std::ostream& out, std::ostream& err) {
  try {
    if (!std::isfinite(args.omega)) {
      throw std::invalid_argument("--omega must be finite");
    }
    if (!(args.gamma_prime >= 0) || !std::isfinite(args.gamma_prime)) {
      throw std::invalid_argument("--gamma-prime must be >= 0 and finite");
    }
    if (!(args.t > 0) || !std::isfinite(args.t)) {
      throw std::invalid_argument("--t must be positive and finite");
    }
    if (!(args.dt > 0) || !std::isfinite(args.dt)) {
      throw std::invalid_argument("--dt must be positive and finite");
    }
    if (args.dt >= args.t) {
      throw std::invalid_argument("--dt must be smaller than --t");
    }
    if (!(args.tol > 0)) {
      throw std::invalid_argument("--tol must be positive");
    }
    if (args.states < 1) {
      throw std::invalid_argument("--states must be >= 1");
    }

    const double gamma = gamma_from_time(args.gamma_prime, args.t);
    const KrausChannel<double> channel = amplitude_damping(gamma);
    const EmissionParams<double> params{args.omega, args.gamma_prime, args.t};

    std::mt19937 rng(args.seed);
    double max_diff = 0;
    double max_drift = 0;
    for (int i = 0; i < args.states; ++i) {
      const Matrix2c<double> rho0 = bloch_to_density(random_bloch(rng));
      const EvolveResult<double> evolved = lindblad_evolve(rho0, params, args.dt);
      const Matrix2c<double> rotated = to_interaction_picture(evolved.state, params);
      const Matrix2c<double> expected = apply_channel(channel, rho0);
      max_diff = std::max(max_diff, (rotated - expected).cwiseAbs().maxCoeff());
      max_drift = std::max(max_drift, evolved.trace_drift);
    }

    const bool within_tol = max_diff <= args.tol;
    if (args.format == OutputFormat::csv) {
      out << "omega,gamma_prime,t,dt,gamma,states,max_abs_diff,max_trace_drift,"
             "within_tol\n";
      out << format_double(args.omega) << ',' << format_double(args.gamma_prime)
          << ',' << format_double(args.t) << ',' << format_double(args.dt) << ','
          << format_double(gamma) << ',' << args.states << ','
          << format_double(max_diff) << ',' << format_double(max_drift) << ','
          << (within_tol ? "true" : "false") << '\n';
    } else {
      Json obj;
      obj["omega"] = args.omega;
      obj["gamma_prime"] = args.gamma_prime;
      obj["t"] = args.t;
      obj["dt"] = args.dt;
      obj["gamma"] = gamma;
      obj["states"] = args.states;
      obj["max_abs_diff"] = max_diff;
      obj["max_trace_drift"] = max_drift;
      obj["within_tol"] = within_tol;
      out << obj.dump(2) << '\n';
    }

    if (!within_tol) {
      err << "lindblad: max discrepancy " << format_double(max_diff)
          << " exceeds tolerance " << format_double(args.tol) << '\n';
      return exit_numeric_error;
    }
    return exit_ok;
  } catch (const std::invalid_argument& e) {
    err << "lindblad: " << e.what() << '\n';
    return exit_usage_error;
  } catch (const std::exception& e) {
    err << "lindblad: " << e.what() << '\n';
    return exit_numeric_error;
  }
}

}  // namespace qloop::cli
