#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numbers>

#include "shiftrule/optimize.hpp"
#include "support/battery.hpp"
#include "support/oracles.hpp"

using namespace shiftrule;
using testsupport::make_observable;
using testsupport::single_x_circuit;

namespace {

Eigen::VectorXd scalar_theta(double x) {
  Eigen::VectorXd t(1);
  t << x;
  return t;
}

/// Two-parameter circuit in which parameter 1 never appears.
ParametricCircuit circuit_with_spectator() {
  ParametricCircuit c(StateVector::zero_state(1),
                      make_observable(PauliSum::from_terms(1, {{"Z", 1.0}})),
                      2);
  add_rotation_gate(c, 0, PauliSum::from_terms(1, {{"X", 1.0}}));
  return c;
}

}  // namespace

TEST_CASE("exact SGD minimizes the single-rotation objective") {
  const ParametricCircuit c = single_x_circuit();
  OptimizeConfig cfg;
  cfg.method = GradientMethod::exact;
  cfg.learning_rate = 0.05;
  cfg.iterations = 500;
  const OptimizerState state = sgd_run(c, scalar_theta(0.3), cfg);

  REQUIRE(state.history.size() == cfg.iterations + 1);
  CHECK(state.iteration == cfg.iterations);
  CHECK(std::abs(state.theta[0] - std::numbers::pi / 2) < 1e-3);
  CHECK(state.history.back().value == Catch::Approx(-1.0).margin(1e-5));
  // History starts at the initial point and improves monotonically here.
  CHECK(state.history.front().theta[0] == 0.3);
  CHECK(state.history.front().value > state.history.back().value);
}

TEST_CASE("maximization flips the update direction") {
  const ParametricCircuit c = single_x_circuit();
  OptimizeConfig cfg;
  cfg.method = GradientMethod::exact;
  cfg.learning_rate = 0.05;
  cfg.iterations = 500;
  cfg.direction = Direction::maximize;
  const OptimizerState state = sgd_run(c, scalar_theta(1.2), cfg);
  // cos(2x) has its maximum +1 at x = pi.
  CHECK(state.history.back().value == Catch::Approx(1.0).margin(1e-5));
}

TEST_CASE("parameters outside the pattern never move") {
  const ParametricCircuit c = circuit_with_spectator();
  OptimizeConfig cfg;
  cfg.method = GradientMethod::exact;
  cfg.iterations = 50;
  Eigen::VectorXd theta0(2);
  theta0 << 0.3, -0.75;
  const OptimizerState state = sgd_run(c, theta0, cfg);
  CHECK(state.theta[1] == -0.75);
}

TEST_CASE("a vanishing gradient leaves theta fixed") {
  const ParametricCircuit c = single_x_circuit();
  OptimizeConfig cfg;
  cfg.method = GradientMethod::exact;
  cfg.iterations = 20;
  const OptimizerState state = sgd_run(c, scalar_theta(0.0), cfg);
  CHECK(state.theta[0] == 0.0);
}

TEST_CASE("sampled SGD tracks the exact trajectory") {
  const ParametricCircuit c = single_x_circuit();
  OptimizeConfig exact;
  exact.method = GradientMethod::exact;
  exact.learning_rate = 0.05;
  exact.iterations = 200;
  const double target = sgd_run(c, scalar_theta(0.3), exact).history.back().value;

  OptimizeConfig sampled = exact;
  sampled.method = GradientMethod::spsr;
  sampled.estimator.shots = 200;
  sampled.estimator.seed = 5;
  const OptimizerState state = sgd_run(c, scalar_theta(0.3), sampled);
  CHECK(std::abs(state.history.back().value - target) < 0.02);
}

TEST_CASE("Adam reaches the same optimum") {
  const ParametricCircuit c = single_x_circuit();
  OptimizeConfig cfg;
  cfg.method = GradientMethod::exact;
  cfg.learning_rate = 0.05;
  cfg.iterations = 400;
  const OptimizerState state = adam_run(c, scalar_theta(0.3), cfg);
  REQUIRE(state.history.size() == cfg.iterations + 1);
  CHECK(state.first_moment.size() == 1);
  CHECK(state.second_moment.size() == 1);
  CHECK(std::abs(state.history.back().value - (-1.0)) < 1e-2);
}

TEST_CASE("sampled runs are reproducible bit for bit") {
  const ParametricCircuit c = single_x_circuit();
  OptimizeConfig cfg;
  cfg.method = GradientMethod::spsr;
  cfg.estimator.shots = 64;
  cfg.estimator.seed = 9;
  cfg.iterations = 25;
  const OptimizerState a = sgd_run(c, scalar_theta(0.3), cfg);
  const OptimizerState b = sgd_run(c, scalar_theta(0.3), cfg);
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t k = 0; k < a.history.size(); ++k) {
    CHECK(a.history[k].value == b.history[k].value);
    CHECK(a.history[k].theta == b.history[k].theta);
  }
}

TEST_CASE("natural-gradient preconditioning still converges") {
  const ParametricCircuit c = single_x_circuit();
  OptimizeConfig cfg;
  cfg.method = GradientMethod::exact;
  cfg.learning_rate = 0.1;
  cfg.iterations = 400;
  cfg.natural_gradient = true;
  for (MetricKind kind : {MetricKind::full, MetricKind::diagonal}) {
    cfg.metric_kind = kind;
    const OptimizerState state = sgd_run(c, scalar_theta(0.3), cfg);
    CHECK(std::abs(state.history.back().value - (-1.0)) < 1e-3);
  }
}

TEST_CASE("pulse parametrizations: layout and constant-control equivalence") {
  PulseModel piecewise;
  piecewise.kind = PulseModel::Kind::piecewise;
  piecewise.steps = 6;
  piecewise.horizon = 1.0;
  piecewise.drift = PauliSum::from_terms(1, {{"Z", 0.5}});
  piecewise.controls = {PauliSum::from_terms(1, {{"X", 1.0}})};
  REQUIRE(piecewise.parameter_count() == 6);

  PulseModel fourier = piecewise;
  fourier.kind = PulseModel::Kind::fourier;
  fourier.frequencies = {0.0};
  REQUIRE(fourier.parameter_count() == 2);

  // a cos(0 t + 0) = a: the two parametrizations realize the same pulse.
  const Eigen::VectorXd pw_theta = Eigen::VectorXd::Constant(6, 0.7);
  Eigen::VectorXd fr_theta(2);
  fr_theta << 0.7, 0.0;
  CHECK(fourier.pulse_value(0, fr_theta, 0.4) == Catch::Approx(0.7));
  CHECK(piecewise.pulse_value(0, pw_theta, 0.4) == Catch::Approx(0.7));

  const auto obs = make_observable(PauliSum::from_terms(1, {{"Z", 1.0}}));
  const ParametricCircuit cp =
      build_control_circuit(piecewise, StateVector::zero_state(1), obs);
  const ParametricCircuit cf =
      build_control_circuit(fourier, StateVector::zero_state(1), obs);
  CHECK(std::abs(cp.evaluate(pw_theta) - cf.evaluate(fr_theta)) < 1e-10);
}

TEST_CASE("time discretization error shrinks with the step count") {
  // A genuinely time-dependent pulse so that coarse step counts are biased.
  auto objective = [](std::size_t steps) {
    PulseModel model;
    model.kind = PulseModel::Kind::fourier;
    model.steps = steps;
    model.frequencies = {3.0};
    model.horizon = 2.0;
    model.drift = PauliSum::from_terms(1, {{"Z", 0.6}});
    model.controls = {PauliSum::from_terms(1, {{"X", 1.0}})};
    Eigen::VectorXd theta(2);
    theta << 0.9, 0.4;
    const auto obs = make_observable(PauliSum::from_terms(1, {{"Z", 1.0}}));
    const ParametricCircuit c =
        build_control_circuit(model, StateVector::zero_state(1), obs);
    return c.evaluate(theta);
  };
  const double reference = objective(1024);
  const double e16 = std::abs(objective(16) - reference);
  const double e32 = std::abs(objective(32) - reference);
  const double e64 = std::abs(objective(64) - reference);
  const double e128 = std::abs(objective(128) - reference);
  CHECK(e16 > e32);
  CHECK(e32 > e64);
  CHECK(e64 > e128);
  // First-order splitting: doubling the resolution roughly halves the error.
  CHECK(e128 < 0.7 * e64);
  CHECK(e128 < 0.01);
}

TEST_CASE("pulse model rejects inconsistent configurations") {
  PulseModel model;
  model.steps = 0;
  model.controls = {PauliSum::from_terms(1, {{"X", 1.0}})};
  const auto obs = make_observable(PauliSum::from_terms(1, {{"Z", 1.0}}));
  CHECK_THROWS_AS(
      build_control_circuit(model, StateVector::zero_state(1), obs),
      std::invalid_argument);
  model.steps = 4;
  model.controls.clear();
  CHECK_THROWS_AS(
      build_control_circuit(model, StateVector::zero_state(1), obs),
      std::invalid_argument);
  model.controls = {PauliSum::from_terms(1, {{"X", 1.0}})};
  model.kind = PulseModel::Kind::fourier;  // no frequencies given
  CHECK_THROWS_AS(
      build_control_circuit(model, StateVector::zero_state(1), obs),
      std::invalid_argument);
  model.kind = PulseModel::Kind::piecewise;
  model.horizon = -1.0;
  CHECK_THROWS_AS(
      build_control_circuit(model, StateVector::zero_state(1), obs),
      std::invalid_argument);
}

TEST_CASE("pulse shaping: drive a drifting qubit onto a target gate") {
  PulseModel model;
  model.kind = PulseModel::Kind::piecewise;
  model.steps = 8;
  model.horizon = 1.0;
  model.drift = PauliSum::from_terms(1, {{"Z", 0.3}});
  model.controls = {PauliSum::from_terms(1, {{"X", 1.0}})};

  const auto obs = make_observable(PauliSum::from_terms(1, {{"Z", 1.0}}));
  const ParametricCircuit plant =
      build_control_circuit(model, StateVector::zero_state(1), obs);

  Eigen::MatrixXcd target(2, 2);
  target << 0.0, 1.0, 1.0, 0.0;  // the X gate
  const ParametricCircuit fidelity = choi_fidelity_circuit(plant, target);
  CHECK(fidelity.qubit_count() == 2);

  OptimizeConfig cfg;
  cfg.method = GradientMethod::exact;
  cfg.learning_rate = 0.1;
  cfg.iterations = 400;
  cfg.direction = Direction::maximize;
  const Eigen::VectorXd theta0 = Eigen::VectorXd::Constant(8, 0.3);
  const OptimizerState state = adam_run(fidelity, theta0, cfg);
  const double achieved = state.history.back().value;
  CHECK(achieved >= 0.99);
  CHECK(achieved ==
        Catch::Approx(control_fidelity(plant, state.theta, target))
            .margin(1e-9));
}
