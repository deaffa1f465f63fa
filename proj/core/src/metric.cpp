// Copyright (c) 2026 The shiftrule developers.
// Licensed under the MIT License; see LICENSE for details.

#include "shiftrule/metric.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "shiftrule/quadrature.hpp"

namespace shiftrule {

namespace {

bool same_index(const MetricIndex& a, const MetricIndex& b) {
  return a.gate == b.gate && a.axis == b.axis;
}

// Signed four-overlap sum  sum_{a,a'} a a' |<psi_a | phi_a'>|^2.
double signed_overlaps(const Eigen::VectorXcd& psi_plus,
                       const Eigen::VectorXcd& psi_minus,
                       const Eigen::VectorXcd& phi_plus,
                       const Eigen::VectorXcd& phi_minus) {
  const double pp = std::norm(psi_plus.dot(phi_plus));
  const double pm = std::norm(psi_plus.dot(phi_minus));
  const double mp = std::norm(psi_minus.dot(phi_plus));
  const double mm = std::norm(psi_minus.dot(phi_minus));
  return pp - pm - mp + mm;
}

// Shifted states of one coefficient at every quadrature node and both signs.
struct NodeStates {
  std::vector<Eigen::VectorXcd> plus;
  std::vector<Eigen::VectorXcd> minus;
};

NodeStates states_at_nodes(const ShiftedEvolution& ev, const Quadrature& q) {
  NodeStates out;
  out.plus.reserve(q.nodes.size());
  out.minus.reserve(q.nodes.size());
  for (double s : q.nodes) {
    out.plus.push_back(ev.state(s, +1).amplitudes());
    out.minus.push_back(ev.state(s, -1).amplitudes());
  }
  return out;
}

double quadrature_element(const NodeStates& a, const NodeStates& b,
                          const Quadrature& q) {
  double total = 0.0;
  for (std::size_t k = 0; k < q.nodes.size(); ++k) {
    double inner = 0.0;
    for (std::size_t l = 0; l < q.nodes.size(); ++l)
      inner += q.weights[l] *
               signed_overlaps(a.plus[k], a.minus[k], b.plus[l], b.minus[l]);
    total += q.weights[k] * inner;
  }
  return total;
}

}  // namespace

double metric_element_expected(const ParametricCircuit& c,
                               const Eigen::VectorXd& theta,
                               const MetricIndex& i, const MetricIndex& j,
                               std::size_t quad_points) {
  if (quad_points == 0)
    throw std::invalid_argument(
        "metric_element_expected: quad_points must be >= 1");
  const Quadrature q = gauss_legendre_01(quad_points);
  const ShiftedEvolution ev_i(c.slice(i.gate, i.axis, theta));
  const NodeStates a = states_at_nodes(ev_i, q);
  if (same_index(i, j)) return quadrature_element(a, a, q);
  const ShiftedEvolution ev_j(c.slice(j.gate, j.axis, theta));
  const NodeStates b = states_at_nodes(ev_j, q);
  return quadrature_element(a, b, q);
}

MetricEstimate metric_element_sampled(const ParametricCircuit& c,
                                      const Eigen::VectorXd& theta,
                                      const MetricIndex& i,
                                      const MetricIndex& j,
                                      const EstimatorConfig& cfg) {
  const ShiftedEvolution ev_i(c.slice(i.gate, i.axis, theta));
  const bool diagonal = same_index(i, j);
  // Optional is only to defer construction; ev_j is fixed for all shots.
  std::optional<ShiftedEvolution> ev_j;
  if (!diagonal) ev_j.emplace(c.slice(j.gate, j.axis, theta));

  const GradientEstimate ge =
      reduce_shots("metric_overlap", cfg, [&](PhiloxStream& rng) {
        const double s = rng.uniform();
        const double sp = rng.uniform();
        const Eigen::VectorXcd ip = ev_i.state(s, +1).amplitudes();
        const Eigen::VectorXcd im = ev_i.state(s, -1).amplitudes();
        if (diagonal) {
          const Eigen::VectorXcd jp = ev_i.state(sp, +1).amplitudes();
          const Eigen::VectorXcd jm = ev_i.state(sp, -1).amplitudes();
          return signed_overlaps(ip, im, jp, jm);
        }
        const Eigen::VectorXcd jp = ev_j->state(sp, +1).amplitudes();
        const Eigen::VectorXcd jm = ev_j->state(sp, -1).amplitudes();
        // Symmetrized in (i, j): the same shots are produced when the caller
        // swaps the indices, so F_ij == F_ji exactly, not just on average.
        const Eigen::VectorXcd iq = ev_i.state(sp, +1).amplitudes();
        const Eigen::VectorXcd in = ev_i.state(sp, -1).amplitudes();
        const Eigen::VectorXcd jq = ev_j->state(s, +1).amplitudes();
        const Eigen::VectorXcd jn = ev_j->state(s, -1).amplitudes();
        return 0.5 * (signed_overlaps(ip, im, jp, jm) +
                      signed_overlaps(jq, jn, iq, in));
      });

  MetricEstimate est;
  est.row = i;
  est.col = j;
  est.mean = ge.mean;
  est.sample_variance = ge.sample_variance;
  est.shots = ge.shots;
  est.seed = ge.seed;
  return est;
}

double diagonal_via_f1f2(const CircuitSlice& slice, std::size_t quad_points) {
  if (quad_points == 0)
    throw std::invalid_argument("diagonal_via_f1f2: quad_points must be >= 1");
  PauliSum generator = slice.fixed;
  generator += slice.coefficient * slice.target;
  const HermitianExp gate(generator);
  const Eigen::MatrixXcd v = slice.target.to_matrix();
  const Quadrature q = gauss_legendre_01(quad_points);
  // Y = int_0^1 e^{-i(1-s)K} V e^{+i(1-s)K} ds, a Hermitian average of V in
  // the Heisenberg picture of the not-yet-applied part of the gate.
  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(v.rows(), v.cols());
  for (std::size_t k = 0; k < quad_points; ++k) {
    const Eigen::MatrixXcd u = gate.unitary(-(1.0 - q.nodes[k]));
    y += q.weights[k] * (u * v * u.adjoint());
  }
  const Eigen::VectorXcd& phi = slice.prefix.amplitudes();
  const Eigen::VectorXcd yphi = y * phi;
  const double f1 = phi.dot(yphi).real();
  const double f2 = yphi.squaredNorm();
  return 2.0 * (f2 - f1 * f1);
}

Eigen::MatrixXd metric_tensor_expected(const ParametricCircuit& c,
                                       const Eigen::VectorXd& theta,
                                       std::size_t quad_points) {
  if (quad_points == 0)
    throw std::invalid_argument(
        "metric_tensor_expected: quad_points must be >= 1");
  c.check_theta(theta);
  const Quadrature q = gauss_legendre_01(quad_points);
  const auto& bindings = c.parameter_map().bindings();
  const std::size_t nb = bindings.size();
  const std::size_t np = c.parameter_count();

  std::vector<NodeStates> states;
  states.reserve(nb);
  for (const ParamBinding& b : bindings)
    states.push_back(states_at_nodes(
        ShiftedEvolution(c.slice(b.gate, b.axis, theta)), q));

  Eigen::MatrixXd coeff = Eigen::MatrixXd::Zero(nb, nb);
  for (std::size_t a = 0; a < nb; ++a)
    for (std::size_t b = a; b < nb; ++b) {
      coeff(a, b) = quadrature_element(states[a], states[b], q);
      coeff(b, a) = coeff(a, b);
    }

  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(nb, np);
  for (std::size_t b = 0; b < nb; ++b)
    for (const auto& [p, fn] : bindings[b].partials)
      jac(b, p) = fn(theta);

  return jac.transpose() * coeff * jac;
}

Eigen::VectorXd metric_diagonal_expected(const ParametricCircuit& c,
                                         const Eigen::VectorXd& theta,
                                         std::size_t quad_points) {
  c.check_theta(theta);
  const auto& bindings = c.parameter_map().bindings();
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(c.parameter_count());
  for (const ParamBinding& b : bindings) {
    const double fbb =
        diagonal_via_f1f2(c.slice(b.gate, b.axis, theta), quad_points);
    for (const auto& [p, fn] : b.partials) {
      const double j = fn(theta);
      diag[p] += j * j * fbb;
    }
  }
  return diag;
}

Eigen::VectorXd apply_natural_preconditioner(const Eigen::VectorXd& grad,
                                             const Eigen::MatrixXd& metric,
                                             double regularizer) {
  if (metric.rows() != metric.cols() || metric.rows() != grad.size())
    throw std::invalid_argument(
        "natural gradient: grad and metric shapes disagree");
  if (regularizer < 0.0)
    throw std::invalid_argument("natural gradient: regularizer must be >= 0");
  const Eigen::MatrixXd reg =
      metric + regularizer * Eigen::MatrixXd::Identity(metric.rows(),
                                                       metric.cols());
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(reg);
  Eigen::VectorXd step;
  bool solved = ldlt.info() == Eigen::Success;
  if (solved) {
    step = ldlt.solve(grad);
    // LDLT does not flag rank deficiency through info(); verify the solve.
    solved = step.allFinite() &&
             (reg * step - grad).norm() <= 1e-8 * (grad.norm() + 1.0);
  }
  if (!solved)
    throw std::runtime_error(
        "natural gradient: regularized metric is singular; increase the "
        "regularizer");
  return step;
}

Eigen::VectorXd natural_gradient_step(const Eigen::VectorXd& theta,
                                      const Eigen::VectorXd& grad,
                                      const Eigen::MatrixXd& metric,
                                      double learning_rate, double regularizer,
                                      bool ascend) {
  if (theta.size() != grad.size())
    throw std::invalid_argument(
        "natural_gradient_step: theta and grad shapes disagree");
  const Eigen::VectorXd step =
      apply_natural_preconditioner(grad, metric, regularizer);
  return ascend ? (theta + learning_rate * step).eval()
                : (theta - learning_rate * step).eval();
}

}  // namespace shiftrule
