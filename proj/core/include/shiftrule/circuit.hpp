// Copyright (c) 2026 The shiftrule developers.
// Licensed under the MIT License; see LICENSE for details.

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "shiftrule/pauli.hpp"
#include "shiftrule/state.hpp"

namespace shiftrule {

/// A scalar function of the parameter vector theta.
using ValueFn = std::function<double(const Eigen::VectorXd&)>;

/// One parametric gate coefficient x_{t,v}(theta): which gate, which Pauli
/// axis, its value closure, and the declared list of parameters it depends
/// on with their partial-derivative closures.  Gradient drivers iterate the
/// declared pattern, never a numeric scan, so exact zeros of a partial at
/// the current theta are still visited.
struct ParamBinding {
  std::size_t gate;
  PauliString axis;
  ValueFn value;
  std::vector<std::pair<std::size_t, ValueFn>> partials;
};

/// The map theta -> {x_{t,v}} with its declared sparsity pattern.
class ParameterMap {
 public:
  explicit ParameterMap(std::size_t parameter_count)
      : parameter_count_(parameter_count) {}

  std::size_t parameter_count() const { return parameter_count_; }
  const std::vector<ParamBinding>& bindings() const { return bindings_; }

  /// Register a binding; throws on duplicate (gate, axis) or on a partial
  /// referencing a parameter index out of range.
  void bind(ParamBinding binding);

  /// Binding for (gate, axis), or nullptr.
  const ParamBinding* find(std::size_t gate, const PauliString& axis) const;

  /// Indices (into bindings()) of coefficients whose declared pattern
  /// contains parameter p.
  std::vector<std::size_t> pattern(std::size_t p) const;

  /// Declared partial d x_b / d theta_p at theta (0 if p is not declared).
  double partial(std::size_t binding_index, std::size_t p,
                 const Eigen::VectorXd& theta) const;

 private:
  std::size_t parameter_count_;
  std::vector<ParamBinding> bindings_;
  std::map<std::pair<std::size_t, PauliString>, std::size_t> index_;
};

/// A decomposition of one circuit position used by the shift rules:
/// the circuit reads  <phi| W^dag e^{-i(H + xV)} A e^{i(H + xV)} W |phi>
/// with W the product of the suffix gates.  `prefix` is |phi>, `fixed` is H,
/// `target` is V (a single Pauli word for the stochastic rule; any
/// two-eigenvalue sum for the standard rule), `coefficient` is x.
struct CircuitSlice {
  StateVector prefix;
  PauliSum fixed;
  PauliSum target;
  double coefficient = 0.0;
  std::vector<PauliSum> suffix;
  ObservablePtr observable;
};

/// An ordered product of exponential gates U_T ... U_1 acting on a fixed
/// initial state, measured by a fixed observable.  Gate t has generator
/// X_t(theta) = (fixed Pauli sum) + sum of bound coefficients, and the gate
/// applies e^{i X_t(theta)}.
class ParametricCircuit {
 public:
  ParametricCircuit(StateVector initial, ObservablePtr observable,
                    std::size_t parameter_count);

  std::size_t qubit_count() const { return initial_.qubit_count(); }
  std::size_t gate_count() const { return gates_.size(); }
  std::size_t parameter_count() const { return map_.parameter_count(); }
  const StateVector& initial_state() const { return initial_; }
  const ObservablePtr& observable() const { return observable_; }
  const ParameterMap& parameter_map() const { return map_; }

  /// Append a gate with the given theta-independent generator part; returns
  /// the gate index.
  std::size_t add_gate(PauliSum fixed);

  /// Bind coefficient x_{gate,axis}(theta) = value(theta), added on top of
  /// any fixed coefficient the gate already carries on that axis.
  void bind(std::size_t gate, const PauliString& axis, ValueFn value,
            std::vector<std::pair<std::size_t, ValueFn>> partials);

  const PauliSum& fixed_generator(std::size_t gate) const;

  /// Full generator X_t(theta) of one gate.
  PauliSum generator(std::size_t gate, const Eigen::VectorXd& theta) const;

  /// State after applying the first `gates` gates to the initial state.
  StateVector state_through(std::size_t gates,
                            const Eigen::VectorXd& theta) const;

  /// C(theta) = <A> on the fully evolved state.
  double evaluate(const Eigen::VectorXd& theta) const;

  /// Slice the circuit at (gate, axis).  The axis must carry a binding.
  CircuitSlice slice(std::size_t gate, const PauliString& axis,
                     const Eigen::VectorXd& theta) const;

  void check_theta(const Eigen::VectorXd& theta) const;

 private:
  StateVector initial_;
  ObservablePtr observable_;
  std::vector<PauliSum> gates_;
  ParameterMap map_;
};

/// Append an echoed cross-resonance gate exp(i[t XI - bt ZX + ct IX]) to a
/// two-qubit circuit, with t, b, c read from theta at the given slots.
/// Returns the gate index.  The slots must be distinct.
std::size_t add_cross_resonance(ParametricCircuit& c, std::size_t t_slot,
                                std::size_t b_slot, std::size_t c_slot);

/// Append a drift-plus-control gate exp(i[t H0 + bt H1]) with t, b read from
/// theta at the given (distinct) slots.  Every Pauli axis in H0 or H1 gets a
/// binding with the chain-rule partials, so gradient drivers see the full
/// declared pattern.
std::size_t add_drift_gate(ParametricCircuit& c, std::size_t t_slot,
                           std::size_t b_slot, const PauliSum& h0,
                           const PauliSum& h1);

/// Append a plain rotation exp(i theta_slot H).
std::size_t add_rotation_gate(ParametricCircuit& c, std::size_t slot,
                              const PauliSum& h);

/// Rebuild `c` on a doubled register so that evaluating it yields the
/// gate-fidelity objective |Tr(G^dag U(theta))|^2 / d^2: the initial state
/// becomes the maximally entangled pair state, every gate acts on the second
/// half, and the observable becomes the projector onto the entangled state
/// propagated through the target G.  Throws if G is not unitary within
/// `unitary_tol`.
ParametricCircuit choi_fidelity_circuit(const ParametricCircuit& c,
                                        const Eigen::MatrixXcd& target,
                                        double unitary_tol = 1e-8);

/// |Tr(G^dag U(theta))|^2 / d^2 evaluated via the entangled-pair circuit.
double control_fidelity(const ParametricCircuit& c,
                        const Eigen::VectorXd& theta,
                        const Eigen::MatrixXcd& target);

}  // namespace shiftrule
