// Copyright (c) 2026 The shiftrule developers.
// Licensed under the MIT License; see LICENSE for details.

#include "shiftrule/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace shiftrule {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> linspace(double lo, double hi, std::size_t points) {
  if (points == 0)
    throw std::invalid_argument("experiment grid needs at least one point");
  std::vector<double> grid(points);
  if (points == 1) {
    grid[0] = lo;
    return grid;
  }
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = lo + (hi - lo) * static_cast<double>(i) /
                       static_cast<double>(points - 1);
  return grid;
}

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::size_t resolve_shots(const ExperimentSpec& spec) {
  if (spec.shots != 0) return spec.shots;
  return spec.name == "fig5" ? 10000 : 1000;
}

EstimatorConfig estimator_config(const ExperimentSpec& spec, std::size_t shots,
                                 std::size_t row, std::uint64_t salt) {
  EstimatorConfig cfg;
  cfg.shots = shots;
  cfg.seed = derive_seed(spec.seed, row, salt);
  cfg.epsilon = spec.epsilon;
  cfg.threads = spec.threads;
  return cfg;
}

nlohmann::json base_config(const ExperimentSpec& spec, std::size_t shots) {
  // The thread count is deliberately omitted: it never changes the bytes.
  return nlohmann::json{{"experiment", spec.name},
                        {"shots", shots},
                        {"seed", spec.seed},
                        {"grid_points", spec.grid_points},
                        {"epsilon", spec.epsilon}};
}

ObservablePtr make_observable(std::size_t qubits,
                              std::initializer_list<
                                  std::pair<std::string_view, double>>
                                  terms) {
  return std::make_shared<const ObservableSpec>(
      PauliSum::from_terms(qubits, terms));
}

// Shared shape of the two cross-resonance sweep figures.
CsvTable run_fig2(const ExperimentSpec& spec, bool sweep_coupling) {
  const std::size_t shots = resolve_shots(spec);
  const ObservablePtr obs =
      sweep_coupling ? make_observable(2, {{"YY", 1.0}})
                     : make_observable(2, {{"YI", 1.0}});
  const ParametricCircuit c = cross_resonance_circuit(obs);
  const std::vector<double> curves = {0.5, 1.0, 2.0};
  const std::vector<double> grid =
      sweep_coupling ? linspace(-2.0, 2.0, spec.grid_points)
                     : linspace(0.0, kPi, spec.grid_points);
  const std::size_t p = sweep_coupling ? 1 : 0;

  CsvTable table;
  table.config = base_config(spec, shots);
  table.config["gate"] = "exp(i[t XI - b t ZX + c t IX])";
  if (sweep_coupling) {
    table.config["observable"] = "YY";
    table.config["fixed"] = {{"c", std::sqrt(2.0)}};
    table.config["curves"] = {{"t", curves}};
    table.config["sweep"] = {{"var", "b"}, {"lo", -2.0}, {"hi", 2.0}};
    table.config["derivative"] = "dC/db";
    table.columns = {"t",         "b",        "fd_value",
                     "spsr_mean", "spsr_sem", "approx_mean",
                     "approx_sem"};
  } else {
    table.config["observable"] = "YI";
    table.config["fixed"] = {{"c", 0.0}};
    table.config["curves"] = {{"b", curves}};
    table.config["sweep"] = {{"var", "t"}, {"lo", 0.0}, {"hi", kPi}};
    table.config["derivative"] = "dC/dt";
    table.columns = {"b",         "t",        "fd_value",
                     "spsr_mean", "spsr_sem", "approx_mean",
                     "approx_sem"};
  }

  std::size_t row = 0;
  for (double curve : curves)
    for (double sweep : grid) {
      Eigen::VectorXd theta(3);
      if (sweep_coupling) {
        theta << curve, sweep, std::sqrt(2.0);
      } else {
        theta << sweep, curve, 0.0;
      }
      const double fd = finite_difference(c, theta, p);
      const GradientEstimate spsr = stochastic_gradient(
          c, theta, p, estimator_config(spec, shots, row, 1),
          SliceEstimator::spsr);
      const GradientEstimate approx = stochastic_gradient(
          c, theta, p, estimator_config(spec, shots, row, 2),
          SliceEstimator::approx_spsr);
      table.rows.push_back({curve, sweep, fd, spsr.mean,
                            spsr.standard_error(), approx.mean,
                            approx.standard_error()});
      ++row;
    }
  return table;
}

}  // namespace

void write_csv(const CsvTable& table, std::ostream& out) {
  out << "# " << table.config.dump() << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    out << (i == 0 ? "" : ",") << table.columns[i];
  out << "\n";
  for (const std::vector<double>& row : table.rows) {
    if (row.size() != table.columns.size())
      throw std::logic_error("csv row width does not match the column list");
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i == 0 ? "" : ",") << format_value(row[i]);
    out << "\n";
  }
}

void write_csv_file(const CsvTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  write_csv(table, out);
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

PauliSum ring_hamiltonian(std::size_t n) {
  if (n < 2)
    throw std::invalid_argument("ring_hamiltonian: need at least 2 qubits");
  PauliSum h(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::string bond(n, 'I');
    bond[j] = 'X';
    bond[(j + 1) % n] = 'X';
    h.add(bond, 1.0);
    h.add(PauliString::single(n, j, 'X'), 1.0 / 3.0);
    h.add(PauliString::single(n, j, 'Z'), 0.5);
  }
  return h;
}

ObservablePtr total_z_observable(std::size_t n) {
  PauliSum a(n);
  for (std::size_t j = 0; j < n; ++j) a.add(PauliString::single(n, j, 'Z'), 1.0);
  return std::make_shared<const ObservableSpec>(a);
}

ParametricCircuit ring_circuit(std::size_t n) {
  ParametricCircuit c(StateVector::zero_state(n), total_z_observable(n), 1);
  const std::size_t gate = c.add_gate(ring_hamiltonian(n));
  c.bind(gate, PauliString::single(n, 0, 'Z'),
         [](const Eigen::VectorXd& th) { return th[0]; },
         {{0, [](const Eigen::VectorXd&) { return 1.0; }}});
  return c;
}

ParametricCircuit dressed_ring_circuit(std::size_t n) {
  const HermitianExp ring(ring_hamiltonian(n));
  const Eigen::MatrixXcd w = ring.unitary(0.5);
  PauliSum a(n);
  for (std::size_t j = 0; j < n; ++j) a.add(PauliString::single(n, j, 'Z'), 1.0);
  const Eigen::MatrixXcd dressed = w * a.to_matrix() * w.adjoint();
  ObservablePtr obs =
      std::make_shared<const ObservableSpec>(PauliSum::decompose(dressed));
  ParametricCircuit c(StateVector(n, w.col(0)), std::move(obs), 1);
  const std::size_t gate = c.add_gate(PauliSum(n));
  c.bind(gate, PauliString::single(n, 0, 'Z'),
         [](const Eigen::VectorXd& th) { return th[0]; },
         {{0, [](const Eigen::VectorXd&) { return 1.0; }}});
  return c;
}

ParametricCircuit cross_resonance_circuit(ObservablePtr observable) {
  ParametricCircuit c(StateVector::zero_state(2), std::move(observable), 3);
  add_cross_resonance(c, 0, 1, 2);
  return c;
}

CircuitSlice cross_resonance_two_level_slice(double t, double b,
                                             ObservablePtr observable) {
  PauliSum target(2);
  target.add("XI", 1.0);
  target.add("ZX", -b);
  return CircuitSlice{StateVector::zero_state(2), PauliSum(2),
                      std::move(target), t,       {},
                      std::move(observable)};
}

CsvTable run_fig2a(const ExperimentSpec& spec) {
  return run_fig2(spec, /*sweep_coupling=*/false);
}

CsvTable run_fig2b(const ExperimentSpec& spec) {
  return run_fig2(spec, /*sweep_coupling=*/true);
}

CsvTable run_fig5(const ExperimentSpec& spec) {
  const std::size_t shots = resolve_shots(spec);
  const ObservablePtr obs = make_observable(2, {{"YY", 1.0}});
  const ParametricCircuit c = cross_resonance_circuit(obs);
  const std::vector<double> curves = {0.5, 1.0, 2.0};
  const std::vector<double> grid = linspace(0.0, kPi, spec.grid_points);

  CsvTable table;
  table.config = base_config(spec, shots);
  table.config["gate"] = "exp(i[t XI - b t ZX + c t IX])";
  table.config["observable"] = "YY";
  table.config["fixed"] = {{"c", 0.0}};
  table.config["curves"] = {{"b", curves}};
  table.config["sweep"] = {{"var", "t"}, {"lo", 0.0}, {"hi", kPi}};
  table.config["derivative"] = "dC/dt";
  table.config["statistic"] = "single-shot std of each estimator";
  table.columns = {"b",         "t",        "fd_value",
                   "psr_mean",  "psr_std",  "spsr_mean",
                   "spsr_std",  "approx_mean", "approx_std"};

  std::size_t row = 0;
  for (double b : curves)
    for (double t : grid) {
      Eigen::VectorXd theta(3);
      theta << t, b, 0.0;
      const double fd = finite_difference(c, theta, 0);
      const GradientEstimate psr = slice_gradient_sampled(
          cross_resonance_two_level_slice(t, b, obs), SliceEstimator::psr,
          estimator_config(spec, shots, row, 1));
      const GradientEstimate spsr = stochastic_gradient(
          c, theta, 0, estimator_config(spec, shots, row, 2),
          SliceEstimator::spsr);
      const GradientEstimate approx = stochastic_gradient(
          c, theta, 0, estimator_config(spec, shots, row, 3),
          SliceEstimator::approx_spsr);
      table.rows.push_back({b, t, fd, psr.mean, std::sqrt(psr.sample_variance),
                            spsr.mean, std::sqrt(spsr.sample_variance),
                            approx.mean, std::sqrt(approx.sample_variance)});
      ++row;
    }
  return table;
}

namespace {

// Shared shape of the ring-model sweeps.
CsvTable run_ring_family(const ExperimentSpec& spec,
                         const std::vector<std::size_t>& sizes, bool dressed,
                         bool report_sem) {
  const std::size_t shots = resolve_shots(spec);
  const std::vector<double> grid = linspace(0.0, kPi, spec.grid_points);
  const SliceEstimator kind =
      dressed ? SliceEstimator::psr : SliceEstimator::spsr;
  const std::string prefix = dressed ? "psr" : "spsr";

  CsvTable table;
  table.config = base_config(spec, shots);
  table.config["model"] = dressed ? "dressed_ring" : "ring";
  table.config["sizes"] = sizes;
  table.config["sweep"] = {{"var", "x"}, {"lo", 0.0}, {"hi", kPi}};
  table.config["derivative"] = "dC/dx";
  table.config["estimator"] = prefix;
  table.columns = {"n", "x", "fd_value", prefix + "_mean",
                   report_sem ? prefix + "_sem" : prefix + "_std"};

  std::size_t row = 0;
  for (std::size_t n : sizes) {
    const ParametricCircuit c =
        dressed ? dressed_ring_circuit(n) : ring_circuit(n);
    for (double x : grid) {
      Eigen::VectorXd theta(1);
      theta << x;
      const double fd = finite_difference(c, theta, 0);
      const GradientEstimate est = stochastic_gradient(
          c, theta, 0, estimator_config(spec, shots, row, 1), kind);
      const double spread = report_sem ? est.standard_error()
                                       : std::sqrt(est.sample_variance);
      table.rows.push_back(
          {static_cast<double>(n), x, fd, est.mean, spread});
      ++row;
    }
  }
  return table;
}

}  // namespace

CsvTable run_fig6a(const ExperimentSpec& spec) {
  return run_ring_family(spec, {2, 3, 4, 5, 6}, /*dressed=*/false,
                         /*report_sem=*/false);
}

CsvTable run_fig6b(const ExperimentSpec& spec) {
  return run_ring_family(spec, {2, 3, 4, 5, 6}, /*dressed=*/true,
                         /*report_sem=*/false);
}

CsvTable run_fig7(const ExperimentSpec& spec) {
  return run_ring_family(spec, {2, 3, 4}, /*dressed=*/false,
                         /*report_sem=*/true);
}

CsvTable run_experiment(const ExperimentSpec& spec) {
  if (spec.name == "fig2a") return run_fig2a(spec);
  if (spec.name == "fig2b") return run_fig2b(spec);
  if (spec.name == "fig5") return run_fig5(spec);
  if (spec.name == "fig6a") return run_fig6a(spec);
  if (spec.name == "fig6b") return run_fig6b(spec);
  if (spec.name == "fig7") return run_fig7(spec);
  throw std::invalid_argument(
      "unknown experiment \"" + spec.name +
      "\"; expected fig2a, fig2b, fig5, fig6a, fig6b, fig7 or custom");
}

CsvTable run_custom(const ExperimentSpec& spec, const ParametricCircuit& c,
                    const CustomSweep& sweep) {
  if (sweep.param >= c.parameter_count())
    throw std::invalid_argument("custom sweep: parameter index out of range");
  if (sweep.theta0.size() != static_cast<Eigen::Index>(c.parameter_count()))
    throw std::invalid_argument(
        "custom sweep: theta0 has the wrong dimension");
  const std::size_t shots = resolve_shots(spec);
  const std::vector<double> grid =
      linspace(sweep.lo, sweep.hi, spec.grid_points);

  CsvTable table;
  table.config = base_config(spec, shots);
  table.config["experiment"] = "custom";
  table.config["param"] = sweep.param;
  table.config["estimator"] = gradient_method_name(sweep.method);
  table.config["sweep"] = {{"var", "theta[" + std::to_string(sweep.param) + "]"},
                           {"lo", sweep.lo},
                           {"hi", sweep.hi}};
  table.columns = {"theta", "fd_value", "mean", "sem", "std"};

  std::size_t row = 0;
  for (double value : grid) {
    Eigen::VectorXd theta = sweep.theta0;
    theta[static_cast<Eigen::Index>(sweep.param)] = value;
    const double fd = finite_difference(c, theta, sweep.param);
    const EstimatorConfig cfg = estimator_config(spec, shots, row, 1);
    const GradientEstimate est =
        estimate_parameter(c, theta, sweep.param, sweep.method, cfg);
    table.rows.push_back({value, fd, est.mean, est.standard_error(),
                          std::sqrt(est.sample_variance)});
    ++row;
  }
  return table;
}

}  // namespace shiftrule
