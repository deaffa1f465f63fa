// Copyright (c) 2026 The shiftrule developers.
// Licensed under the MIT License; see LICENSE for details.

#include "shiftrule/noise.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "shiftrule/quadrature.hpp"

namespace shiftrule {

namespace {

std::vector<std::size_t> register_indices(std::size_t register_qubits) {
  std::vector<std::size_t> keep(register_qubits);
  std::iota(keep.begin(), keep.end(), std::size_t{0});
  return keep;
}

// Cached machinery for one noisy gate: joint generator J = H_RE + theta H_R,
// approximate pulses, and the input/output plumbing.
struct ChannelEngine {
  const NoisyCircuit& circuit;
  double eps;
  std::size_t reg, env, joint_qubits;
  HermitianExp joint;                       // H_RE + theta H_R on R+E
  std::optional<HermitianExp> pulse_plus;   // exp(i[-eps tau H_RE + pi/4 H_R])
  std::optional<HermitianExp> pulse_minus;
  DensityMatrix input;                      // register state before the gate
  std::vector<std::size_t> keep;

  ChannelEngine(const NoisyCircuit& c, double epsilon, bool build_pulses)
      : circuit(c),
        eps(epsilon),
        reg(c.gate.register_qubits()),
        env(c.gate.env_qubits),
        joint_qubits(reg + env),
        joint(make_joint(c.gate)),
        input(run_gates(c.initial, c.pre)),
        keep(register_indices(reg)) {
    c.gate.validate();
    if (!c.observable)
      throw std::invalid_argument("noisy circuit: null observable");
    if (c.observable->qubit_count() != reg ||
        c.initial.qubit_count() != reg)
      throw std::invalid_argument("noisy circuit: register size mismatch");
    if (build_pulses) {
      if (epsilon <= 0.0)
        throw PreconditionError(
            "noisy shift rule: pulse strength epsilon must be > 0, got " +
            std::to_string(epsilon));
      const PauliSum& hr = c.gate.register_generator;
      if (hr.size() != 1 ||
          std::abs(std::abs(hr.terms().begin()->second) - 1.0) > 1e-12)
        throw PreconditionError(
            "noisy shift rule: the register generator must be a single Pauli "
            "word with unit-magnitude coefficient");
      const Eigen::MatrixXcd hre =
          c.gate.coupling.to_matrix();
      const Eigen::MatrixXcd hr_wide =
          hr.embedded(joint_qubits, 0).to_matrix();
      const double quarter = std::numbers::pi / 4.0;
      pulse_plus.emplace(Eigen::MatrixXcd(-eps * c.gate.tau * hre +
                                          quarter * hr_wide));
      pulse_minus.emplace(Eigen::MatrixXcd(-eps * c.gate.tau * hre -
                                           quarter * hr_wide));
    }
  }

  static PauliSum make_joint(const NoisyGateSpec& gate) {
    gate.validate();
    PauliSum j = gate.coupling;
    j += gate.theta *
         gate.register_generator.embedded(
             gate.register_qubits() + gate.env_qubits, 0);
    return j;
  }

  static DensityMatrix run_gates(DensityMatrix rho,
                                 const std::vector<PauliSum>& gates) {
    for (const PauliSum& g : gates)
      if (!g.is_zero()) rho = dm_evolve(g, 1.0, rho);
    return rho;
  }

  // Register state after the gate with the alpha pulse inserted at split s.
  DensityMatrix pulsed_output(double s, int alpha) const {
    const double tau = circuit.gate.tau;
    DensityMatrix rho = kron(input, circuit.gate.env_state);
    rho = joint.conjugate(-(1.0 - s) * tau, rho);
    rho = (alpha >= 0 ? *pulse_plus : *pulse_minus).conjugate(1.0, rho);
    rho = joint.conjugate(-s * tau, rho);
    DensityMatrix out = partial_trace(rho, keep);
    return run_gates(std::move(out), circuit.post);
  }

  double expected(double s, int alpha) const {
    return circuit.observable->dm_expectation(pulsed_output(s, alpha));
  }
};

}  // namespace

void NoisyGateSpec::validate() const {
  if (register_generator.is_zero())
    throw std::invalid_argument("noisy gate '" + label +
                                "': zero register generator");
  if (env_qubits < 1 || env_qubits > 2)
    throw std::invalid_argument("noisy gate '" + label +
                                "': environment must have 1 or 2 qubits");
  if (coupling.qubit_count() != register_qubits() + env_qubits)
    throw std::invalid_argument(
        "noisy gate '" + label +
        "': coupling register size must equal register + environment");
  if (env_state.qubit_count() != env_qubits)
    throw std::invalid_argument("noisy gate '" + label +
                                "': environment state size mismatch");
}

NoisyGateSpec make_noisy_gate(std::string label, PauliSum register_generator,
                              PauliSum coupling, std::size_t env_qubits,
                              double tau, double theta) {
  NoisyGateSpec spec{std::move(label),
                     std::move(register_generator),
                     std::move(coupling),
                     env_qubits,
                     DensityMatrix::zero_state(env_qubits),
                     tau,
                     theta};
  spec.validate();
  return spec;
}

DensityMatrix apply_channel(const NoisyGateSpec& gate,
                            const DensityMatrix& rho) {
  gate.validate();
  if (rho.qubit_count() != gate.register_qubits())
    throw std::invalid_argument("apply_channel: register size mismatch");
  const PauliSum joint = ChannelEngine::make_joint(gate);
  DensityMatrix big = kron(rho, gate.env_state);
  if (!joint.is_zero())
    big = HermitianExp(joint).conjugate(-gate.tau, big);
  return partial_trace(big, register_indices(gate.register_qubits()));
}

double noisy_evaluate(const NoisyCircuit& c) {
  if (!c.observable)
    throw std::invalid_argument("noisy circuit: null observable");
  DensityMatrix rho = ChannelEngine::run_gates(c.initial, c.pre);
  rho = apply_channel(c.gate, rho);
  rho = ChannelEngine::run_gates(std::move(rho), c.post);
  return c.observable->dm_expectation(rho);
}

double noisy_evaluate_at(const NoisyCircuit& c, double theta) {
  NoisyCircuit copy = c;
  copy.gate.theta = theta;
  return noisy_evaluate(copy);
}

double noisy_theta_fd(const NoisyCircuit& c, double eps) {
  if (eps <= 0.0) throw std::invalid_argument("noisy_theta_fd: eps must be > 0");
  return (noisy_evaluate_at(c, c.gate.theta + eps) -
          noisy_evaluate_at(c, c.gate.theta - eps)) /
         (2.0 * eps);
}

double tau_fd_simulator_oracle(const NoisyCircuit& c, double eps) {
  if (eps <= 0.0)
    throw std::invalid_argument("tau_fd_simulator_oracle: eps must be > 0");
  NoisyCircuit plus = c, minus = c;
  plus.gate.tau += eps;
  minus.gate.tau -= eps;
  return (noisy_evaluate(plus) - noisy_evaluate(minus)) / (2.0 * eps);
}

GradientEstimate noisy_spsr_theta_gradient(const NoisyCircuit& c,
                                           const EstimatorConfig& cfg) {
  const ChannelEngine engine(c, cfg.epsilon, /*build_pulses=*/true);
  const double tau = c.gate.tau;
  return reduce_shots("noisy_spsr_theta", cfg, [&](PhiloxStream& rng) {
    const double s = rng.uniform();
    const double r_plus =
        c.observable->sample_termwise(engine.pulsed_output(s, +1), rng);
    const double r_minus =
        c.observable->sample_termwise(engine.pulsed_output(s, -1), rng);
    return -tau * (r_plus - r_minus);
  });
}

double noisy_spsr_theta_expected(const NoisyCircuit& c, double epsilon,
                                 std::size_t quad_points) {
  if (quad_points == 0)
    throw std::invalid_argument(
        "noisy_spsr_theta_expected: quad_points must be >= 1");
  const ChannelEngine engine(c, epsilon, /*build_pulses=*/true);
  const Quadrature q = gauss_legendre_01(quad_points);
  double total = 0.0;
  for (std::size_t i = 0; i < quad_points; ++i)
    total += q.weights[i] *
             (engine.expected(q.nodes[i], -1) - engine.expected(q.nodes[i], +1));
  return c.gate.tau * total;
}

TauGradientRefusal tau_gradient_unsupported(const NoisyGateSpec& gate) {
  return TauGradientRefusal{
      gate.label,
      "the control-time derivative multiplies the full joint generator "
      "(coupling plus theta times the register generator); the shift pulse "
      "it requires acts on the register and the environment together, and "
      "the environment is not controllable through this interface. No "
      "sampled estimator is provided; use tau_fd_simulator_oracle on the "
      "simulator."};
}

}  // namespace shiftrule
