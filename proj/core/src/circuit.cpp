// Copyright (c) 2026 The shiftrule developers.
// Licensed under the MIT License; see LICENSE for details.

#include "shiftrule/circuit.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace shiftrule {

void ParameterMap::bind(ParamBinding binding) {
  const auto key = std::make_pair(binding.gate, binding.axis);
  if (index_.count(key))
    throw std::invalid_argument(
        "ParameterMap: duplicate binding for gate " +
        std::to_string(binding.gate) + ", axis " + binding.axis.str());
  for (const auto& [p, fn] : binding.partials) {
    if (p >= parameter_count_)
      throw std::invalid_argument("ParameterMap: partial references parameter " +
                                  std::to_string(p) + " but only " +
                                  std::to_string(parameter_count_) +
                                  " parameters exist");
    if (!fn) throw std::invalid_argument("ParameterMap: null partial closure");
  }
  if (!binding.value)
    throw std::invalid_argument("ParameterMap: null value closure");
  index_.emplace(key, bindings_.size());
  bindings_.push_back(std::move(binding));
}

const ParamBinding* ParameterMap::find(std::size_t gate,
                                       const PauliString& axis) const {
  const auto it = index_.find(std::make_pair(gate, axis));
  return it == index_.end() ? nullptr : &bindings_[it->second];
}

std::vector<std::size_t> ParameterMap::pattern(std::size_t p) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < bindings_.size(); ++i)
    for (const auto& [q, fn] : bindings_[i].partials)
      if (q == p) {
        out.push_back(i);
        break;
      }
  return out;
}

double ParameterMap::partial(std::size_t binding_index, std::size_t p,
                             const Eigen::VectorXd& theta) const {
  const ParamBinding& b = bindings_.at(binding_index);
  for (const auto& [q, fn] : b.partials)
    if (q == p) return fn(theta);
  return 0.0;
}

ParametricCircuit::ParametricCircuit(StateVector initial,
                                     ObservablePtr observable,
                                     std::size_t parameter_count)
    : initial_(std::move(initial)),
      observable_(std::move(observable)),
      map_(parameter_count) {
  if (!observable_)
    throw std::invalid_argument("ParametricCircuit: null observable");
  if (observable_->qubit_count() != initial_.qubit_count())
    throw std::invalid_argument(
        "ParametricCircuit: observable/state register mismatch");
}

std::size_t ParametricCircuit::add_gate(PauliSum fixed) {
  if (fixed.qubit_count() != qubit_count())
    throw std::invalid_argument("add_gate: generator register mismatch");
  gates_.push_back(std::move(fixed));
  return gates_.size() - 1;
}

void ParametricCircuit::bind(
    std::size_t gate, const PauliString& axis, ValueFn value,
    std::vector<std::pair<std::size_t, ValueFn>> partials) {
  if (gate >= gates_.size())
    throw std::invalid_argument("bind: gate index out of range");
  if (axis.qubit_count() != qubit_count())
    throw std::invalid_argument("bind: axis register mismatch");
  map_.bind(ParamBinding{gate, axis, std::move(value), std::move(partials)});
}

const PauliSum& ParametricCircuit::fixed_generator(std::size_t gate) const {
  if (gate >= gates_.size())
    throw std::invalid_argument("fixed_generator: gate index out of range");
  return gates_[gate];
}

void ParametricCircuit::check_theta(const Eigen::VectorXd& theta) const {
  if (static_cast<std::size_t>(theta.size()) != map_.parameter_count())
    throw std::invalid_argument(
        "theta has " + std::to_string(theta.size()) + " entries; circuit has " +
        std::to_string(map_.parameter_count()) + " parameters");
}

PauliSum ParametricCircuit::generator(std::size_t gate,
                                      const Eigen::VectorXd& theta) const {
  if (gate >= gates_.size())
    throw std::invalid_argument("generator: gate index out of range");
  check_theta(theta);
  PauliSum g = gates_[gate];
  for (const ParamBinding& b : map_.bindings())
    if (b.gate == gate) g.add(b.axis, b.value(theta));
  return g;
}

StateVector ParametricCircuit::state_through(
    std::size_t gates, const Eigen::VectorXd& theta) const {
  if (gates > gates_.size())
    throw std::invalid_argument("state_through: gate count out of range");
  check_theta(theta);
  StateVector psi = initial_;
  for (std::size_t t = 0; t < gates; ++t) {
    const PauliSum g = generator(t, theta);
    if (!g.is_zero()) psi = HermitianExp(g).apply(1.0, psi);
  }
  return psi;
}

double ParametricCircuit::evaluate(const Eigen::VectorXd& theta) const {
  return observable_->expectation(state_through(gates_.size(), theta));
}

CircuitSlice ParametricCircuit::slice(std::size_t gate, const PauliString& axis,
                                      const Eigen::VectorXd& theta) const {
  if (gate >= gates_.size())
    throw std::invalid_argument("slice: gate index out of range");
  check_theta(theta);
  if (!map_.find(gate, axis))
    throw std::invalid_argument("slice: no binding for gate " +
                                std::to_string(gate) + ", axis " + axis.str());
  PauliSum g = generator(gate, theta);
  const double x = g.coefficient(axis);
  g.add(axis, -x);  // remove the sliced axis; the remainder is H
  CircuitSlice s{state_through(gate, theta),
                 std::move(g),
                 PauliSum(qubit_count()),
                 x,
                 {},
                 observable_};
  s.target.add(axis, 1.0);
  s.suffix.reserve(gates_.size() - gate - 1);
  for (std::size_t t = gate + 1; t < gates_.size(); ++t)
    s.suffix.push_back(generator(t, theta));
  return s;
}

namespace {

ValueFn read_slot(std::size_t slot) {
  return [slot](const Eigen::VectorXd& th) { return th[slot]; };
}

ValueFn constant(double v) {
  return [v](const Eigen::VectorXd&) { return v; };
}

void check_distinct(std::initializer_list<std::size_t> slots,
                    const char* what) {
  std::vector<std::size_t> v(slots);
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (v[i] == v[j])
        throw std::invalid_argument(std::string(what) +
                                    ": parameter slots must be distinct");
}

}  // namespace

std::size_t add_cross_resonance(ParametricCircuit& c, std::size_t t_slot,
                                std::size_t b_slot, std::size_t c_slot) {
  if (c.qubit_count() != 2)
    throw std::invalid_argument(
        "add_cross_resonance: requires a two-qubit register");
  check_distinct({t_slot, b_slot, c_slot}, "add_cross_resonance");
  const std::size_t gate = c.add_gate(PauliSum(2));
  // x_XI = t, x_ZX = -b t, x_IX = c t.
  c.bind(gate, PauliString::parse("XI"), read_slot(t_slot),
         {{t_slot, constant(1.0)}});
  c.bind(gate, PauliString::parse("ZX"),
         [=](const Eigen::VectorXd& th) { return -th[b_slot] * th[t_slot]; },
         {{t_slot,
           [=](const Eigen::VectorXd& th) { return -th[b_slot]; }},
          {b_slot,
           [=](const Eigen::VectorXd& th) { return -th[t_slot]; }}});
  c.bind(gate, PauliString::parse("IX"),
         [=](const Eigen::VectorXd& th) { return th[c_slot] * th[t_slot]; },
         {{t_slot,
           [=](const Eigen::VectorXd& th) { return th[c_slot]; }},
          {c_slot,
           [=](const Eigen::VectorXd& th) { return th[t_slot]; }}});
  return gate;
}

std::size_t add_drift_gate(ParametricCircuit& c, std::size_t t_slot,
                           std::size_t b_slot, const PauliSum& h0,
                           const PauliSum& h1) {
  if (h0.qubit_count() != c.qubit_count() ||
      h1.qubit_count() != c.qubit_count())
    throw std::invalid_argument("add_drift_gate: generator register mismatch");
  check_distinct({t_slot, b_slot}, "add_drift_gate");
  const std::size_t gate = c.add_gate(PauliSum(c.qubit_count()));
  // Union of axes collected explicitly so that h1 = -h0 still binds.
  std::map<PauliString, std::pair<double, double>> axes;
  for (const auto& [w, v] : h0.terms()) axes[w].first = v;
  for (const auto& [w, v] : h1.terms()) axes[w].second = v;
  for (const auto& [axis, hv] : axes) {
    const double a0 = hv.first, a1 = hv.second;
    c.bind(gate, axis,
           [=](const Eigen::VectorXd& th) {
             return th[t_slot] * (a0 + th[b_slot] * a1);
           },
           {{t_slot,
             [=](const Eigen::VectorXd& th) { return a0 + th[b_slot] * a1; }},
            {b_slot,
             [=](const Eigen::VectorXd& th) { return th[t_slot] * a1; }}});
  }
  return gate;
}

std::size_t add_rotation_gate(ParametricCircuit& c, std::size_t slot,
                              const PauliSum& h) {
  if (h.qubit_count() != c.qubit_count())
    throw std::invalid_argument(
        "add_rotation_gate: generator register mismatch");
  if (h.is_zero())
    throw std::invalid_argument("add_rotation_gate: zero generator");
  const std::size_t gate = c.add_gate(PauliSum(c.qubit_count()));
  for (const auto& [axis, v] : h.terms())
    c.bind(gate, axis,
           [slot, v](const Eigen::VectorXd& th) { return th[slot] * v; },
           {{slot, constant(v)}});
  return gate;
}

ParametricCircuit choi_fidelity_circuit(const ParametricCircuit& c,
                                        const Eigen::MatrixXcd& target,
                                        double unitary_tol) {
  const std::size_t n = c.qubit_count();
  const Eigen::Index d = Eigen::Index(1) << n;
  if (target.rows() != d || target.cols() != d)
    throw std::invalid_argument("choi_fidelity_circuit: target shape mismatch");
  const double dev =
      (target.adjoint() * target - Eigen::MatrixXcd::Identity(d, d))
          .cwiseAbs()
          .maxCoeff();
  if (dev > unitary_tol)
    throw std::invalid_argument(
        "choi_fidelity_circuit: target deviates from unitary by " +
        std::to_string(dev));

  const std::size_t wide = 2 * n;
  const double root_d = std::sqrt(static_cast<double>(d));

  // Maximally entangled pair state sum_i |i,i> / sqrt(d).
  Eigen::VectorXcd pair = Eigen::VectorXcd::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i) pair[i * d + i] = 1.0 / root_d;

  // (1 x G) applied to the pair state: amp(i,j) = G(j,i) / sqrt(d).
  Eigen::VectorXcd evolved = Eigen::VectorXcd::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      evolved[i * d + j] = target(j, i) / root_d;

  const Eigen::MatrixXcd projector = evolved * evolved.adjoint();
  auto observable =
      std::make_shared<const ObservableSpec>(PauliSum::decompose(projector));

  ParametricCircuit out(StateVector(wide, std::move(pair)), observable,
                        c.parameter_count());
  const std::string pad(n, 'I');
  for (std::size_t t = 0; t < c.gate_count(); ++t)
    out.add_gate(c.fixed_generator(t).embedded(wide, n));
  for (const ParamBinding& b : c.parameter_map().bindings())
    out.bind(b.gate, PauliString::parse(pad + b.axis.str()), b.value,
             b.partials);
  return out;
}

double control_fidelity(const ParametricCircuit& c,
                        const Eigen::VectorXd& theta,
                        const Eigen::MatrixXcd& target) {
  return choi_fidelity_circuit(c, target).evaluate(theta);
}

}  // namespace shiftrule
