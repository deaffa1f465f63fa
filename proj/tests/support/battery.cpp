#include "support/battery.hpp"

#include <memory>
#include <utility>

#include "shiftrule/experiments.hpp"
#include "shiftrule/rng.hpp"
#include "support/oracles.hpp"

namespace testsupport {

using namespace shiftrule;

ObservablePtr make_observable(PauliSum op) {
  return std::make_shared<const ObservableSpec>(std::move(op));
}

ParametricCircuit single_x_circuit() {
  ParametricCircuit c(StateVector::zero_state(1),
                      make_observable(PauliSum::from_terms(1, {{"Z", 1.0}})),
                      1);
  const std::size_t gate = c.add_gate(PauliSum(1));
  c.bind(gate, PauliString::parse("X"),
         [](const Eigen::VectorXd& th) { return th[0]; },
         {{0, [](const Eigen::VectorXd&) { return 1.0; }}});
  return c;
}

std::vector<CircuitCase> gradient_battery() {
  std::vector<CircuitCase> cases;

  {
    Eigen::VectorXd theta(1);
    theta << 0.3;
    cases.push_back({"single_x", single_x_circuit(), theta, 0, true});
  }
  {
    Eigen::VectorXd theta(3);
    theta << 0.7, 1.2, 0.0;  // t, b, c
    cases.push_back(
        {"cross_resonance_dt",
         cross_resonance_circuit(
             make_observable(PauliSum::from_terms(2, {{"YI", 1.0}}))),
         theta, 0, false});
  }
  {
    Eigen::VectorXd theta(3);
    theta << 1.0, 1.0, 1.4142135623730951;  // t, b, c = sqrt(2)
    cases.push_back(
        {"cross_resonance_db",
         cross_resonance_circuit(
             make_observable(PauliSum::from_terms(2, {{"YY", 1.0}}))),
         theta, 1, false});
  }
  {
    Eigen::VectorXd theta(1);
    theta << 0.4;
    cases.push_back({"ring_n2", ring_circuit(2), theta, 0, false});
    cases.push_back({"ring_n3", ring_circuit(3), theta, 0, false});
    cases.push_back({"dressed_n2", dressed_ring_circuit(2), theta, 0, true});
  }
  return cases;
}

namespace {

PauliString random_word(std::size_t qubits, PhiloxStream& rng,
                        bool allow_identity) {
  static constexpr char kAxes[4] = {'I', 'X', 'Y', 'Z'};
  for (;;) {
    std::string text;
    for (std::size_t q = 0; q < qubits; ++q)
      text.push_back(kAxes[rng.next_u32() % 4]);
    PauliString word = PauliString::parse(text);
    if (allow_identity || !word.is_identity()) return word;
  }
}

PauliSum random_observable(std::size_t qubits, PhiloxStream& rng) {
  PauliSum op(qubits);
  while (op.is_zero()) {
    for (int k = 0; k < 2; ++k)
      op.add(random_word(qubits, rng, false), rng.uniform(-1.0, 1.0));
  }
  return op;
}

CircuitSlice random_slice(std::uint64_t seed, bool with_drift) {
  PhiloxStream rng(seed, 0x77);
  const std::size_t qubits = 1 + rng.next_u32() % 2;
  const std::size_t dim = std::size_t{1} << qubits;

  CircuitSlice slice{
      StateVector(qubits, random_state(dim, derive_seed(seed, 1))),
      PauliSum(qubits), PauliSum(qubits), 0.0, {}, nullptr};

  if (with_drift) {
    while (slice.fixed.is_zero()) {
      slice.fixed.add(random_word(qubits, rng, false),
                      rng.uniform(-1.0, 1.0));
      slice.fixed.add(random_word(qubits, rng, false),
                      rng.uniform(-1.0, 1.0));
    }
  }

  slice.target.add(random_word(qubits, rng, false),
                   rng.next_u32() % 2 ? 1.0 : -1.0);
  slice.coefficient = rng.uniform(-1.5, 1.5);

  if (rng.next_u32() % 2) {
    PauliSum suffix_gen(qubits);
    suffix_gen.add(random_word(qubits, rng, false), rng.uniform(-1.0, 1.0));
    slice.suffix.push_back(suffix_gen);
  }

  slice.observable = make_observable(random_observable(qubits, rng));
  return slice;
}

}  // namespace

CircuitSlice random_drift_free_slice(std::uint64_t seed) {
  return random_slice(seed, /*with_drift=*/false);
}

CircuitSlice random_drift_slice(std::uint64_t seed) {
  return random_slice(seed, /*with_drift=*/true);
}

}  // namespace testsupport
