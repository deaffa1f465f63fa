// Copyright (c) 2026 The shiftrule developers.
// Licensed under the MIT License; see LICENSE for details.

#include "shiftrule/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "shiftrule/metric.hpp"

namespace shiftrule {

namespace {

void validate_model(const PulseModel& model) {
  if (model.horizon <= 0.0)
    throw std::invalid_argument("pulse model: horizon must be > 0");
  if (model.steps == 0)
    throw std::invalid_argument("pulse model: steps must be >= 1");
  if (model.controls.empty())
    throw std::invalid_argument("pulse model: at least one control required");
  for (const PauliSum& v : model.controls)
    if (v.qubit_count() != model.drift.qubit_count())
      throw std::invalid_argument(
          "pulse model: drift and controls must act on the same register");
  if (model.kind == PulseModel::Kind::fourier && model.frequencies.empty())
    throw std::invalid_argument(
        "pulse model: fourier parametrization needs at least one frequency");
}

}  // namespace

std::size_t PulseModel::parameter_count() const {
  validate_model(*this);
  return kind == Kind::piecewise ? controls.size() * steps
                                 : controls.size() * 2 * frequencies.size();
}

double PulseModel::pulse_value(std::size_t control,
                               const Eigen::VectorXd& theta, double t) const {
  validate_model(*this);
  if (control >= controls.size())
    throw std::invalid_argument("pulse model: control index out of range");
  if (theta.size() != static_cast<Eigen::Index>(parameter_count()))
    throw std::invalid_argument("pulse model: theta has the wrong dimension");
  t = std::clamp(t, 0.0, horizon);
  if (kind == Kind::piecewise) {
    const double dt = horizon / static_cast<double>(steps);
    const std::size_t p = std::min(static_cast<std::size_t>(t / dt), steps - 1);
    return theta[control * steps + p];
  }
  const std::size_t modes = frequencies.size();
  const std::size_t base = control * 2 * modes;
  double lambda = 0.0;
  for (std::size_t m = 0; m < modes; ++m)
    lambda += theta[base + m] *
              std::cos(frequencies[m] * t + theta[base + modes + m]);
  return lambda;
}

ParametricCircuit build_control_circuit(const PulseModel& model,
                                        StateVector initial,
                                        ObservablePtr observable) {
  validate_model(model);
  if (initial.qubit_count() != model.drift.qubit_count())
    throw std::invalid_argument(
        "pulse model: initial state acts on a different register than the "
        "drift");
  const std::size_t np = model.parameter_count();
  const std::size_t steps = model.steps;
  const std::size_t modes = model.frequencies.size();
  const double dt = model.horizon / static_cast<double>(steps);

  ParametricCircuit c(std::move(initial), std::move(observable), np);
  for (std::size_t p = 0; p < steps; ++p) {
    const double tp = static_cast<double>(p) * dt;
    const std::size_t gate = c.add_gate(-dt * model.drift);

    // Per axis, the slopes -dt * v_{j,axis} of every control j touching it;
    // shared axes become a single binding so coefficients never collide.
    std::map<PauliString, std::vector<std::pair<std::size_t, double>>> axes;
    for (std::size_t j = 0; j < model.controls.size(); ++j)
      for (const auto& [word, coeff] : model.controls[j].terms())
        axes[word].push_back({j, -dt * coeff});

    for (const auto& [axis, sources] : axes) {
      std::vector<std::pair<std::size_t, ValueFn>> partials;
      if (model.kind == PulseModel::Kind::piecewise) {
        for (const auto& [j, slope] : sources)
          partials.emplace_back(
              j * steps + p,
              [slope](const Eigen::VectorXd&) { return slope; });
        c.bind(gate, axis,
               [sources, steps, p](const Eigen::VectorXd& th) {
                 double x = 0.0;
                 for (const auto& [j, slope] : sources)
                   x += slope * th[j * steps + p];
                 return x;
               },
               std::move(partials));
      } else {
        const std::vector<double> freqs = model.frequencies;
        for (const auto& [j, slope] : sources) {
          const std::size_t base = j * 2 * modes;
          for (std::size_t m = 0; m < modes; ++m) {
            const double w = freqs[m];
            partials.emplace_back(
                base + m, [slope, w, tp, base, modes, m](
                              const Eigen::VectorXd& th) {
                  return slope * std::cos(w * tp + th[base + modes + m]);
                });
            partials.emplace_back(
                base + modes + m, [slope, w, tp, base, modes, m](
                                      const Eigen::VectorXd& th) {
                  return -slope * th[base + m] *
                         std::sin(w * tp + th[base + modes + m]);
                });
          }
        }
        c.bind(gate, axis,
               [sources, freqs, modes, tp](const Eigen::VectorXd& th) {
                 double x = 0.0;
                 for (const auto& [j, slope] : sources) {
                   const std::size_t base = j * 2 * modes;
                   for (std::size_t m = 0; m < modes; ++m)
                     x += slope * th[base + m] *
                          std::cos(freqs[m] * tp + th[base + modes + m]);
                 }
                 return x;
               },
               std::move(partials));
      }
    }
  }
  return c;
}

namespace {

Eigen::VectorXd gradient_means(const ParametricCircuit& c,
                               const Eigen::VectorXd& theta,
                               const OptimizeConfig& cfg,
                               std::size_t iteration) {
  EstimatorConfig ecfg = cfg.estimator;
  // Fresh derived stream per iteration; estimate_gradient_vector derives
  // further per parameter, so every draw in a run is addressed by
  // (seed, iteration, parameter, shot).
  ecfg.seed = derive_seed(cfg.estimator.seed, iteration, 0x17e7);
  const std::vector<GradientEstimate> ests =
      estimate_gradient_vector(c, theta, cfg.method, ecfg, cfg.quad_points);
  Eigen::VectorXd g(static_cast<Eigen::Index>(ests.size()));
  for (std::size_t p = 0; p < ests.size(); ++p)
    g[static_cast<Eigen::Index>(p)] = ests[p].mean;
  return g;
}

Eigen::MatrixXd metric_matrix(const ParametricCircuit& c,
                              const Eigen::VectorXd& theta,
                              const OptimizeConfig& cfg) {
  if (cfg.metric_kind == MetricKind::full)
    return metric_tensor_expected(c, theta, cfg.metric_quad_points);
  return Eigen::MatrixXd(
      metric_diagonal_expected(c, theta, cfg.metric_quad_points).asDiagonal());
}

OptimizerState run_loop(const ParametricCircuit& c,
                        const Eigen::VectorXd& theta0,
                        const OptimizeConfig& cfg, bool adam) {
  c.check_theta(theta0);
  if (cfg.iterations == 0)
    throw std::invalid_argument("optimizer: iterations must be >= 1");
  if (cfg.learning_rate <= 0.0)
    throw std::invalid_argument("optimizer: learning rate must be > 0");
  const double sign = cfg.direction == Direction::minimize ? -1.0 : 1.0;

  OptimizerState st;
  st.theta = theta0;
  st.learning_rate = cfg.learning_rate;
  if (adam) {
    st.first_moment = Eigen::VectorXd::Zero(theta0.size());
    st.second_moment = Eigen::VectorXd::Zero(theta0.size());
  }
  st.history.push_back({st.theta, c.evaluate(st.theta)});

  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    Eigen::VectorXd g = gradient_means(c, st.theta, cfg, it);
    if (cfg.natural_gradient)
      g = apply_natural_preconditioner(g, metric_matrix(c, st.theta, cfg),
                                       cfg.metric_regularizer);
    Eigen::VectorXd update;
    if (adam) {
      const double t = static_cast<double>(it + 1);
      st.first_moment = cfg.beta1 * st.first_moment + (1.0 - cfg.beta1) * g;
      st.second_moment =
          (cfg.beta2 * st.second_moment.array() +
           (1.0 - cfg.beta2) * g.array().square())
              .matrix();
      const Eigen::ArrayXd mhat =
          st.first_moment.array() / (1.0 - std::pow(cfg.beta1, t));
      const Eigen::ArrayXd vhat =
          st.second_moment.array() / (1.0 - std::pow(cfg.beta2, t));
      update = (mhat / (vhat.sqrt() + cfg.adam_epsilon)).matrix();
    } else {
      update = g;
    }
    st.theta += sign * cfg.learning_rate * update;
    st.iteration = it + 1;
    st.history.push_back({st.theta, c.evaluate(st.theta)});
  }
  return st;
}

}  // namespace

OptimizerState sgd_run(const ParametricCircuit& c,
                       const Eigen::VectorXd& theta0,
                       const OptimizeConfig& cfg) {
  return run_loop(c, theta0, cfg, /*adam=*/false);
}

OptimizerState adam_run(const ParametricCircuit& c,
                        const Eigen::VectorXd& theta0,
                        const OptimizeConfig& cfg) {
  return run_loop(c, theta0, cfg, /*adam=*/true);
}

}  // namespace shiftrule
