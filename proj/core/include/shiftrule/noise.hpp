// Copyright (c) 2026 The shiftrule developers.
// Licensed under the MIT License; see LICENSE for details.

#pragma once

#include <string>
#include <vector>

#include "shiftrule/gradients.hpp"
#include "shiftrule/pauli.hpp"
#include "shiftrule/state.hpp"

namespace shiftrule {

/// A gate realized by jointly evolving the register with an inaccessible
/// environment:  E(rho) = Tr_E[ e^{-i tau (H_RE + theta H_R)} (rho x sigma_E)
/// e^{+i tau (...)} ].  `register_generator` is H_R (register only),
/// `coupling` is H_RE on the combined register+environment, `env_state` is
/// sigma_E.
struct NoisyGateSpec {
  std::string label;
  PauliSum register_generator;
  PauliSum coupling;
  std::size_t env_qubits;
  DensityMatrix env_state;
  double tau = 1.0;
  double theta = 0.0;

  std::size_t register_qubits() const {
    return register_generator.qubit_count();
  }

  /// Shape checks; throws std::invalid_argument on violation.  The
  /// environment is capped at 2 qubits.
  void validate() const;
};

/// Spec with the default environment state |0..0><0..0|.
NoisyGateSpec make_noisy_gate(std::string label, PauliSum register_generator,
                              PauliSum coupling, std::size_t env_qubits,
                              double tau, double theta);

/// Apply the channel to a register state.
DensityMatrix apply_channel(const NoisyGateSpec& gate,
                            const DensityMatrix& rho);

/// A register circuit containing one noisy gate: unitary generators applied
/// before it, the channel, unitary generators after it, and an observable.
struct NoisyCircuit {
  DensityMatrix initial;
  std::vector<PauliSum> pre;
  NoisyGateSpec gate;
  std::vector<PauliSum> post;
  ObservablePtr observable;
};

/// Exact expectation Tr[A E(rho)] with the gate at its stored theta.
double noisy_evaluate(const NoisyCircuit& c);

/// Same with the control amplitude overridden.
double noisy_evaluate_at(const NoisyCircuit& c, double theta);

/// Central finite difference in theta.  Simulator-only oracle: it evaluates
/// the channel exactly, which a device cannot do.
double noisy_theta_fd(const NoisyCircuit& c, double eps = 1e-5);

/// Central finite difference in the control time tau.  Simulator-only
/// oracle; the sampled estimators cannot measure this derivative (see
/// tau_gradient_unsupported).
double tau_fd_simulator_oracle(const NoisyCircuit& c, double eps = 1e-5);

/// Sampled dC/dtheta via the stochastic shift rule run through the channel:
/// the pi/4 pulse is realized as the device-runnable approximate gate
/// exp(-i eps tau H_RE +/- i pi/4 H_R) with strength eps = cfg.epsilon, so
/// the estimator carries an O(eps) bias that vanishes as eps -> 0.
/// Requires H_R to be a single Pauli word with unit-magnitude coefficient.
GradientEstimate noisy_spsr_theta_gradient(const NoisyCircuit& c,
                                           const EstimatorConfig& cfg);

/// Expectation of the sampled estimator above (deterministic quadrature);
/// converges to the finite-difference oracle as eps -> 0.
double noisy_spsr_theta_expected(const NoisyCircuit& c, double epsilon,
                                 std::size_t quad_points = 64);

/// Why no sampled tau-gradient exists for a noisy gate.
struct TauGradientRefusal {
  std::string gate_label;
  std::string reason;
};

/// The tau-derivative of a noisy gate multiplies the full joint generator
/// H_RE + theta H_R, and the shift pulse it would require acts on the
/// register and the environment together -- which the interface cannot
/// realize (the environment is not controllable).  This always returns the
/// refusal; callers needing the derivative numerically can use
/// tau_fd_simulator_oracle.
TauGradientRefusal tau_gradient_unsupported(const NoisyGateSpec& gate);

}  // namespace shiftrule
