// Copyright (c) 2026 The shiftrule developers.
// Licensed under the MIT License; see LICENSE for details.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "shiftrule/circuit.hpp"
#include "shiftrule/gradients.hpp"

namespace shiftrule {

/// A control-pulse parametrization of a time evolution
///   Prod_p exp(-i dt (H0 + sum_j lambda_j(p dt) V_j)),  dt = horizon/steps.
/// `piecewise` reads lambda_j(p dt) directly from theta; `fourier` expands
/// each control as lambda_j(t) = sum_m a_m cos(w_m t + phi_m) with the (a, phi)
/// amplitudes in theta and the frequencies fixed by the model.
struct PulseModel {
  enum class Kind { piecewise, fourier };

  Kind kind = Kind::piecewise;
  std::size_t steps = 1;            ///< N_T time slices (both kinds)
  std::vector<double> frequencies;  ///< fourier: w_1..w_M, shared by controls
  double horizon = 1.0;             ///< total evolution time T
  PauliSum drift = PauliSum(1);     ///< H0
  std::vector<PauliSum> controls;   ///< V_j

  /// piecewise: controls * steps; fourier: controls * 2 * modes.
  /// Layout: piecewise theta[j*steps + p] = lambda_j(p dt); fourier
  /// theta[j*2M + m] = a_m and theta[j*2M + M + m] = phi_m of control j.
  std::size_t parameter_count() const;

  /// lambda_j(t) at theta; t is clamped into [0, horizon].
  double pulse_value(std::size_t control, const Eigen::VectorXd& theta,
                     double t) const;
};

/// Build the parametric circuit realized by the pulse model, acting on
/// `initial` and measured by `observable`.  Every step carries the drift as
/// its fixed generator and one binding per control Pauli axis with the
/// chain-rule partials of the parametrization.  Throws std::invalid_argument
/// on a nonpositive horizon, zero steps, empty/mismatched controls, or (for
/// fourier) an empty frequency list.
ParametricCircuit build_control_circuit(const PulseModel& model,
                                        StateVector initial,
                                        ObservablePtr observable);

/// Optimization direction for the hybrid loop.
enum class Direction { minimize, maximize };

/// Metric choice for natural-gradient preconditioning.
enum class MetricKind { full, diagonal };

/// Hybrid-loop configuration.  The estimator seed is re-derived per
/// iteration (and per parameter inside the gradient call), so a run is
/// reproducible bit-for-bit from (theta0, config).
struct OptimizeConfig {
  GradientMethod method = GradientMethod::exact;
  EstimatorConfig estimator;  ///< shots/seed/epsilon/threads for sampled runs
  std::size_t quad_points = 64;  ///< for exact-quadrature gradients
  double learning_rate = 0.05;
  std::size_t iterations = 100;
  Direction direction = Direction::minimize;
  bool natural_gradient = false;
  MetricKind metric_kind = MetricKind::full;
  double metric_regularizer = 1e-3;
  std::size_t metric_quad_points = 32;
  double beta1 = 0.9;  ///< Adam first-moment decay
  double beta2 = 0.999;  ///< Adam second-moment decay
  double adam_epsilon = 1e-8;
};

/// Trajectory of a run: theta and the exactly evaluated objective at the
/// start and after every iteration (history.size() == iteration + 1).
struct OptimizerState {
  Eigen::VectorXd theta;
  std::size_t iteration = 0;
  double learning_rate = 0.0;
  Eigen::VectorXd first_moment;   ///< Adam accumulator (empty for SGD)
  Eigen::VectorXd second_moment;  ///< Adam accumulator (empty for SGD)

  struct HistoryEntry {
    Eigen::VectorXd theta;
    double value = 0.0;
  };
  std::vector<HistoryEntry> history;
};

/// Stochastic gradient descent/ascent: theta <- theta -+ eta g with g from
/// the configured estimator (optionally naturally preconditioned).
/// Estimator precondition violations surface per iteration.
OptimizerState sgd_run(const ParametricCircuit& c,
                       const Eigen::VectorXd& theta0,
                       const OptimizeConfig& cfg);

/// Adam with the standard bias-corrected first/second moments; shares the
/// estimator, direction, and preconditioning plumbing with sgd_run.
OptimizerState adam_run(const ParametricCircuit& c,
                        const Eigen::VectorXd& theta0,
                        const OptimizeConfig& cfg);

}  // namespace shiftrule
