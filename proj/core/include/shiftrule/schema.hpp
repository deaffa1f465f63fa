// Copyright (c) 2026 The shiftrule developers.
// Licensed under the MIT License; see LICENSE for details.

#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <stdexcept>
#include <string>

#include "shiftrule/circuit.hpp"
#include "shiftrule/metric.hpp"
#include "shiftrule/noise.hpp"
#include "shiftrule/optimize.hpp"

namespace shiftrule {

/// Input-validation failure.  `field()` names the offending location: a JSON
/// pointer-style path for semantic errors ("gates[2].generator") or a
/// "line L, column C" position for parse errors.  The CLI maps this to exit
/// code 2.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Parse {"XZ": 0.5, ...} into a Pauli sum on `qubits` qubits.  `field`
/// names the location for diagnostics.
PauliSum parse_pauli_sum(const nlohmann::json& j, std::size_t qubits,
                         const std::string& field);

/// A parsed circuit file: exactly one member is engaged.  `parameter_count`
/// is the theta dimension of the unitary circuit (0 for noisy circuits,
/// whose only knob is the gate's own theta).
struct CircuitDocument {
  std::optional<ParametricCircuit> unitary;
  std::optional<NoisyCircuit> noisy;
  std::size_t parameter_count = 0;
};

/// Parse a circuit document:
///   {"qubits": N,
///    "gates": [{"generator": {"XZ": 0.5}, "params": [{"pauli": "XZ",
///               "expr": "linear(0)"}]},
///              ...one entry may instead be a noisy-gate block
///              {"register_h": {...}, "coupling_h": {...}, "env_qubits": k,
///               "tau": t, "theta": h, "label": "..."}...],
///    "initial": "zeros" | [[re, im], ...],
///    "observable": {"YY": 1.0},
///    "parameters": P}
/// or, instead of "gates", a pulse parametrization
///   {"pulse_model": {"kind": "piecewise"|"fourier", "steps": N,
///                    "horizon": T, "frequencies": [...],
///                    "drift": {...}, "controls": [{...}, ...]}}.
/// Built-in parameter expressions: linear(p[, scale]) for scale*theta[p] and
/// product(p, q[, scale]) for scale*theta[p]*theta[q].
/// Throws SchemaError on any violation.
CircuitDocument parse_circuit_json(const nlohmann::json& j);

/// As above from raw text; JSON syntax errors carry line/column diagnostics.
CircuitDocument parse_circuit_text(const std::string& text);

/// As above from a file; unreadable paths are reported as SchemaError.
CircuitDocument load_circuit_file(const std::string& path);

/// Optimization run configuration:
///   {"estimator": "spsr", "shots": 200, "eta": 0.05, "iterations": 500,
///    "direction": "min", "seed": 7, "optimizer": "sgd"|"adam",
///    "epsilon": e, "threads": n, "quad_points": q,
///    "natural_gradient": false, "metric": "full"|"diagonal",
///    "metric_reg": l, "beta1": ..., "beta2": ..., "adam_epsilon": ...,
///    "theta0": [...]}
struct RunSpec {
  OptimizeConfig config;
  bool adam = false;
  std::optional<Eigen::VectorXd> theta0;
};

RunSpec parse_run_config_json(const nlohmann::json& j);
RunSpec parse_run_config_text(const std::string& text);
RunSpec load_run_config_file(const std::string& path);

/// Estimator name <-> GradientMethod ("exact", "psr", "spsr", "approx_spsr",
/// "doubly_stochastic", "single_measurement").
GradientMethod parse_gradient_method(const std::string& name,
                                     const std::string& field);

nlohmann::json to_json(const GradientEstimate& est);
nlohmann::json to_json(const MetricEstimate& est);

}  // namespace shiftrule
