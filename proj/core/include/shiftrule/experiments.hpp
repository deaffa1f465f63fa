// Copyright (c) 2026 The shiftrule developers.
// Licensed under the MIT License; see LICENSE for details.

#pragma once

#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "shiftrule/circuit.hpp"
#include "shiftrule/gradients.hpp"

namespace shiftrule {

/// A named parameter sweep rendered to CSV.  `shots == 0` selects the
/// experiment's own default (10000 for the fig5 variance study, 1000
/// otherwise).  The thread count affects runtime only, never output bytes.
struct ExperimentSpec {
  std::string name;  ///< fig2a | fig2b | fig5 | fig6a | fig6b | fig7
  std::size_t shots = 0;
  std::uint64_t seed = 0;
  std::size_t threads = 1;  ///< 0 = resolve from environment/hardware
  std::size_t grid_points = 41;
  double epsilon = 1e-2;  ///< approximate-pulse strength
};

/// Tabular experiment output: a one-line JSON config (emitted as a
/// `#`-prefixed comment), column names, and numeric rows.
struct CsvTable {
  nlohmann::json config;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Serialize with a `# {config json}` first line and %.17g numbers, so
/// outputs are byte-stable and round-trip exactly.
void write_csv(const CsvTable& table, std::ostream& out);
void write_csv_file(const CsvTable& table, const std::string& path);

/// Transverse-coupled ring generator on n >= 2 qubits:
/// sum_j [ X_j X_{j+1} + X_j / 3 + Z_j / 2 ] with periodic boundary
/// (for n = 2 the two bonds coincide and the XX coefficient doubles).
PauliSum ring_hamiltonian(std::size_t n);

/// Observable sum_j Z_j.
ObservablePtr total_z_observable(std::size_t n);

/// Entangling benchmark circuit: |0..0> evolved by e^{i(H_ring + x Z_0)},
/// measured with sum_j Z_j; the single parameter is x.
ParametricCircuit ring_circuit(std::size_t n);

/// Drift-free twin of the ring circuit with the entanglement moved into the
/// basis: state W|0..0> evolved by e^{i x Z_0}, measured with W (sum_j Z_j)
/// W^dag, where W = e^{i H_ring / 2}.  The standard two-eigenvalue rule
/// applies to it directly.
ParametricCircuit dressed_ring_circuit(std::size_t n);

/// Echoed cross-resonance circuit on |00>: one gate
/// exp(i [t XI - b t ZX + c t IX]) with theta = (t, b, c).
ParametricCircuit cross_resonance_circuit(ObservablePtr observable);

/// The c = 0 cross-resonance gate sliced for the standard rule: generator
/// t (XI - b ZX), whose target has the two eigenvalues -+ sqrt(1 + b^2).
CircuitSlice cross_resonance_two_level_slice(double t, double b,
                                             ObservablePtr observable);

/// dC/dt of the cross-resonance circuit with c = 0, observable Y x 1,
/// t swept over [0, pi], one curve per b in {0.5, 1, 2}: finite-difference
/// reference plus sampled/approximate stochastic estimates.
CsvTable run_fig2a(const ExperimentSpec& spec);

/// dC/db with c = sqrt(2), observable Y x Y, b swept over [-2, 2], one curve
/// per t in {0.5, 1, 2}.
CsvTable run_fig2b(const ExperimentSpec& spec);

/// Single-shot standard deviation of the three estimators (standard rule,
/// stochastic rule, approximate pulse) for dC/dt at c = 0, observable Y x Y.
CsvTable run_fig5(const ExperimentSpec& spec);

/// Stochastic-rule mean/std on the ring circuit for n in {2..6}.
CsvTable run_fig6a(const ExperimentSpec& spec);

/// Standard-rule mean/std on the dressed ring circuit for n in {2..6}.
CsvTable run_fig6b(const ExperimentSpec& spec);

/// Stochastic-rule estimate vs finite difference on the ring circuit for
/// n in {2, 3, 4}.
CsvTable run_fig7(const ExperimentSpec& spec);

/// Dispatch by spec.name; throws std::invalid_argument for unknown names.
CsvTable run_experiment(const ExperimentSpec& spec);

/// A one-parameter sweep of a user-supplied circuit: component `param` of
/// theta0 runs over [lo, hi] and the chosen estimator is compared against
/// the finite-difference oracle at every grid point.
struct CustomSweep {
  std::size_t param = 0;
  GradientMethod method = GradientMethod::spsr;
  double lo = 0.0;
  double hi = 3.141592653589793;
  Eigen::VectorXd theta0;
};

CsvTable run_custom(const ExperimentSpec& spec, const ParametricCircuit& c,
                    const CustomSweep& sweep);

}  // namespace shiftrule
