// Copyright (c) 2026 The shiftrule developers.
// Licensed under the MIT License; see LICENSE for details.

#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "shiftrule/circuit.hpp"
#include "shiftrule/gradients.hpp"

namespace shiftrule {

/// Address of one parametric gate coefficient (t, v).
struct MetricIndex {
  std::size_t gate;
  PauliString axis;
};

/// Fubini-Study-style metric element over gate coefficients:
///   F_{ij} = sum_{a,a'} a a' Int Int Tr[rho_i(s,a) rho_j(s',a')] ds ds'
/// where rho_i(s,a) is the full circuit state with gate i replaced by the
/// shifted evolution U_a(x_i, s).  Evaluated by tensor Gauss-Legendre
/// quadrature; exact in the quadrature limit.
double metric_element_expected(const ParametricCircuit& c,
                               const Eigen::VectorXd& theta,
                               const MetricIndex& i, const MetricIndex& j,
                               std::size_t quad_points = 32);

/// A sampled metric element with provenance.
struct MetricEstimate {
  MetricIndex row;
  MetricIndex col;
  double mean = 0.0;
  double sample_variance = 0.0;
  std::size_t shots = 0;
  std::uint64_t seed = 0;
};

/// Monte Carlo estimate of metric_element_expected: each shot draws (s, s'),
/// prepares the four shifted states, and sums the signed pairwise overlaps
/// (symmetrized in (i, j), so swapping the indices reproduces the estimate
/// exactly).  Unbiased.
MetricEstimate metric_element_sampled(const ParametricCircuit& c,
                                      const Eigen::VectorXd& theta,
                                      const MetricIndex& i,
                                      const MetricIndex& j,
                                      const EstimatorConfig& cfg);

/// Diagonal shortcut: F_{ii} = 2 (F2 - F1^2) with F1 = <phi|Y|phi>,
/// F2 = <phi|Y^2|phi>, Y = Int_0^1 e^{-i(1-s)K} V e^{+i(1-s)K} ds, K = H+xV.
/// Needs only expectation values of the slice gate; no state overlaps.
double diagonal_via_f1f2(const CircuitSlice& slice,
                         std::size_t quad_points = 32);

/// Metric over circuit parameters, assembled by the chain rule:
/// F_{pq} = sum_{ij} (dx_i/dtheta_p) F_{ij} (dx_j/dtheta_q) over all bound
/// coefficients.  Symmetric positive semidefinite.
Eigen::MatrixXd metric_tensor_expected(const ParametricCircuit& c,
                                       const Eigen::VectorXd& theta,
                                       std::size_t quad_points = 32);

/// Per-parameter diagonal metric by the binding-diagonal approximation
/// F_pp ~= sum_b (dx_b/dtheta_p)^2 F_bb with each F_bb from the F1/F2
/// shortcut.  Exact whenever no two bound coefficients share a parameter.
Eigen::VectorXd metric_diagonal_expected(const ParametricCircuit& c,
                                         const Eigen::VectorXd& theta,
                                         std::size_t quad_points = 32);

/// Solve (metric + regularizer I) y = grad, the preconditioning inside a
/// natural-gradient update.  Throws std::runtime_error if the regularized
/// metric cannot be solved (regularizer too small).
Eigen::VectorXd apply_natural_preconditioner(const Eigen::VectorXd& grad,
                                             const Eigen::MatrixXd& metric,
                                             double regularizer);

/// One natural-gradient update: theta -+ eta (F + lambda I)^{-1} g
/// (descent by default; ascent with ascend = true).  Throws
/// std::runtime_error if the regularized metric cannot be solved.
Eigen::VectorXd natural_gradient_step(const Eigen::VectorXd& theta,
                                      const Eigen::VectorXd& grad,
                                      const Eigen::MatrixXd& metric,
                                      double learning_rate,
                                      double regularizer = 1e-3,
                                      bool ascend = false);

}  // namespace shiftrule
