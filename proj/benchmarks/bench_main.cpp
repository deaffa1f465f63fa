// Microbenchmarks for the hot paths: Pauli application, cached shifted
// evolutions, sampled gradients, and metric quadrature.

#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "shiftrule/circuit.hpp"
#include "shiftrule/experiments.hpp"
#include "shiftrule/gradients.hpp"
#include "shiftrule/metric.hpp"
#include "shiftrule/rng.hpp"
#include "shiftrule/state.hpp"

namespace {

using namespace shiftrule;

void BM_PauliSumApply(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const PauliSum h = ring_hamiltonian(n);
  Eigen::VectorXcd psi = StateVector::zero_state(n).amplitudes();
  for (auto _ : state) {
    benchmark::DoNotOptimize(h.apply(psi));
  }
}
BENCHMARK(BM_PauliSumApply)->Arg(4)->Arg(8)->Arg(10);

void BM_HermitianExpBuild(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const PauliSum h = ring_hamiltonian(n);
  for (auto _ : state) {
    HermitianExp exp(h);
    benchmark::DoNotOptimize(exp.eigenvalues());
  }
}
BENCHMARK(BM_HermitianExpBuild)->Arg(4)->Arg(6)->Arg(8);

void BM_ShiftedStateSample(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const ParametricCircuit c = ring_circuit(n);
  Eigen::VectorXd theta(1);
  theta << 0.4;
  const CircuitSlice slice = c.slice(0, PauliString::single(n, 0, 'Z'), theta);
  const ShiftedEvolution ev(slice);
  PhiloxStream rng(7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spsr_sample(ev, rng));
  }
}
BENCHMARK(BM_ShiftedStateSample)->Arg(2)->Arg(4)->Arg(6);

void BM_StochasticGradient100(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const ParametricCircuit c = ring_circuit(n);
  Eigen::VectorXd theta(1);
  theta << 0.4;
  EstimatorConfig cfg;
  cfg.shots = 100;
  cfg.seed = 11;
  for (auto _ : state) {
    benchmark::DoNotOptimize(stochastic_gradient(c, theta, 0, cfg));
  }
}
BENCHMARK(BM_StochasticGradient100)->Arg(2)->Arg(4);

void BM_MetricDiagonalExpected(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const ParametricCircuit c = ring_circuit(n);
  Eigen::VectorXd theta(1);
  theta << 0.4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(metric_diagonal_expected(c, theta));
  }
}
BENCHMARK(BM_MetricDiagonalExpected)->Arg(2)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
