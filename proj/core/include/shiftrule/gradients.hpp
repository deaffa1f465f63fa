// Copyright (c) 2026 The shiftrule developers.
// Licensed under the MIT License; see LICENSE for details.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "shiftrule/circuit.hpp"
#include "shiftrule/rng.hpp"
#include "shiftrule/state.hpp"

namespace shiftrule {

/// Violation of an estimator applicability condition (e.g. the standard
/// two-eigenvalue rule on a gate with a drift term).  The command-line tool
/// maps this to exit code 3.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Which single-slice sampler a gradient driver uses.
enum class SliceEstimator { psr, spsr, approx_spsr };

/// paired: both shifted circuits are run per sample (difference estimator).
/// single: a fair coin selects one shifted circuit per sample.
enum class SamplingMode { paired, single };

/// Shot budget and reproducibility contract for sampled estimators.
/// Shot i always reads stream (seed, i), so results do not depend on the
/// thread count.
struct EstimatorConfig {
  std::size_t shots = 1000;
  std::uint64_t seed = 0;
  double epsilon = 1e-2;  ///< approximate-pulse strength (> 0 where used)
  SamplingMode sampling_mode = SamplingMode::paired;
  std::size_t threads = 1;  ///< 0 = resolve from environment/hardware
};

/// A sampled gradient with its provenance.
struct GradientEstimate {
  double mean = 0.0;
  double sample_variance = 0.0;  ///< unbiased, over per-shot values
  std::size_t shots = 0;
  std::uint64_t seed = 0;
  std::string estimator;

  double standard_error() const;
};

/// Runs cfg.shots independent single-shot estimates (shot i reads the
/// counter-based stream (cfg.seed, i)) across cfg.threads workers and reduces
/// them in shot order, so the result is identical for every thread count.
GradientEstimate reduce_shots(std::string estimator, const EstimatorConfig& cfg,
                              const std::function<double(PhiloxStream&)>& per_shot);

/// Affine split V = radius * V' + center * 1 of a two-eigenvalue operator,
/// with V'^2 = 1.  radius > 0.
struct TwoEigenvalueShift {
  double center = 0.0;
  double radius = 0.0;
};

/// Detect the two-eigenvalue structure of `target`.  Throws
/// PreconditionError unless the spectrum has exactly two distinct
/// eigenvalues (tolerance 1e-9).
TwoEigenvalueShift two_eigenvalue_shift(const PauliSum& target);

/// The shifted evolution U_pm(x, s) = e^{is(H+xV)} e^{pm i pi/4 V}
/// e^{i(1-s)(H+xV)} for one slice, with every spectral decomposition cached
/// so per-sample work is a handful of matrix-vector products.  Immutable
/// after construction; safe to share across threads.
class ShiftedEvolution {
 public:
  /// Exact pulses only.
  explicit ShiftedEvolution(const CircuitSlice& slice);

  /// Also prepare approximate pulses e^{i(eps H pm pi/4 V)} (eps > 0).
  ShiftedEvolution(const CircuitSlice& slice, double approx_epsilon);

  const CircuitSlice& slice() const { return slice_; }
  const HermitianExp& gate_exp() const { return gate_; }
  bool fixed_is_zero() const { return slice_.fixed.is_zero(); }
  double approx_epsilon() const;

  /// Two-eigenvalue split of the target, if it has one (cached).
  const std::optional<TwoEigenvalueShift>& two_level() const {
    return two_level_;
  }

  /// Full-circuit state with the sliced gate replaced by U_pm(x, s).
  StateVector state(double s, int sign) const;

  /// Same with the approximate pulse; requires the epsilon constructor.
  StateVector state_approx(double s, int sign) const;

  /// Full-circuit state with e^{i(x+delta)V} substituted for the gate
  /// (standard-rule path).  Requires H = 0.
  StateVector shifted_coefficient_state(double delta) const;

  /// Exact shifted expectations C_pm(x, s).
  double expected(double s, int sign) const;
  double expected_approx(double s, int sign) const;

  double expectation(const StateVector& psi) const;
  double born(const StateVector& psi, PhiloxStream& rng) const;

  /// Apply the suffix gates to a state.
  StateVector apply_suffix(StateVector psi) const;

 private:
  StateVector pulse(int sign, StateVector psi) const;

  CircuitSlice slice_;
  HermitianExp gate_;                       // H + xV
  std::optional<HermitianExp> target_exp_;  // V (standard-rule shifts)
  std::optional<TwoEigenvalueShift> two_level_;
  bool unit_word_target_ = false;
  PauliString pulse_word_;
  double pulse_sign_ = 1.0;
  double approx_epsilon_ = 0.0;
  std::optional<HermitianExp> approx_plus_, approx_minus_;
  std::vector<HermitianExp> suffix_;
};

/// One paired sample of the standard (two-eigenvalue) shift rule:
/// u * (r+ - r-) with r_pm measured at coefficient shifts pm pi/(4u).
/// Requires H = 0 and a two-eigenvalue target whose detected radius matches
/// the supplied u.
double psr_sample(const ShiftedEvolution& ev, double u, PhiloxStream& rng);
double psr_sample(const CircuitSlice& slice, double u, PhiloxStream& rng);

/// One paired sample of the stochastic shift rule: r+ - r-, where r+ and r-
/// are independent runs and each Pauli word of the observable is measured on
/// its own run with its own uniformly drawn split point s.  The independence
/// keeps Var(r+ - r-) <= 2 sum_v c_v^2.  Requires the target to be a single
/// Pauli word (the pi/4 pulse needs an involution).
double spsr_sample(const ShiftedEvolution& ev, PhiloxStream& rng);
double spsr_sample(const CircuitSlice& slice, PhiloxStream& rng);

/// One paired sample with the approximate pulse of strength epsilon.
double approx_spsr_sample(const ShiftedEvolution& ev, PhiloxStream& rng);
double approx_spsr_sample(const CircuitSlice& slice, double epsilon,
                          PhiloxStream& rng);

/// Expectation of the paired stochastic sample, integrated over s by
/// Gauss-Legendre quadrature: equals dC/dx exactly in the quadrature limit.
double spsr_expected(const CircuitSlice& slice, std::size_t quad_points = 64);

/// Expectation of the approximate-pulse estimator (carries an O(epsilon)
/// bias).
double approx_spsr_expected(const CircuitSlice& slice, double epsilon,
                            std::size_t quad_points = 64);

/// dC/dx for one slice via the commutator identity: Y = Int_0^1 e^{isK} V
/// e^{-isK} ds is built by quadrature, expanded in the Pauli basis, and
/// i<[A, Y]> is evaluated on the evolved state.  Deterministic oracle; on
/// hardware each Pauli term of Y maps to an auxiliary-qubit interference
/// measurement.
double hadamard_gradient(const CircuitSlice& slice,
                         std::size_t quad_points = 64);

/// Central finite difference (dC/dtheta_p); simulator-only oracle.
double finite_difference(const ParametricCircuit& c,
                         const Eigen::VectorXd& theta, std::size_t p,
                         double eps = 1e-5);

/// Deterministic dC/dtheta_p: chain rule over the declared pattern with
/// quadrature slice derivatives.
double exact_gradient(const ParametricCircuit& c, const Eigen::VectorXd& theta,
                      std::size_t p, std::size_t quad_points = 64);

/// Repeat a single-slice sampler `cfg.shots` times.  Tags: "psr", "spsr",
/// "approx_spsr".
GradientEstimate slice_gradient_sampled(const CircuitSlice& slice,
                                        SliceEstimator kind,
                                        const EstimatorConfig& cfg);

/// Sampled dC/dtheta_p: every shot visits the whole declared pattern of
/// theta_p, draws a fresh split point per coefficient, and accumulates the
/// chain rule.  Unbiased.
GradientEstimate stochastic_gradient(const ParametricCircuit& c,
                                     const Eigen::VectorXd& theta,
                                     std::size_t p, const EstimatorConfig& cfg,
                                     SliceEstimator kind = SliceEstimator::spsr);

/// One doubly stochastic sample: additionally draws which coefficient of the
/// pattern to probe, with probability proportional to |d x / d theta_p|.
/// Throws PreconditionError if the Jacobian row is identically zero.
double doubly_stochastic_sample(const ParametricCircuit& c,
                                const Eigen::VectorXd& theta, std::size_t p,
                                PhiloxStream& rng);

GradientEstimate doubly_stochastic_gradient(const ParametricCircuit& c,
                                            const Eigen::VectorXd& theta,
                                            std::size_t p,
                                            const EstimatorConfig& cfg);

/// One single-measurement sample: a fair coin picks which of the two shifted
/// circuits to run, and the sample is 2 m r n.  One device run per sample.
double single_measurement_sample(const ParametricCircuit& c,
                                 const Eigen::VectorXd& theta, std::size_t p,
                                 PhiloxStream& rng);

GradientEstimate single_measurement_gradient(const ParametricCircuit& c,
                                             const Eigen::VectorXd& theta,
                                             std::size_t p,
                                             const EstimatorConfig& cfg);

/// How an optimizer (or the CLI) obtains a full gradient vector.
enum class GradientMethod {
  exact,
  psr,
  spsr,
  approx_spsr,
  doubly_stochastic,
  single_measurement,
};

/// dC/dtheta_p by the chosen method, with cfg.seed used as-is.  The exact
/// method reports zero variance and zero shots.
GradientEstimate estimate_parameter(const ParametricCircuit& c,
                                    const Eigen::VectorXd& theta,
                                    std::size_t p, GradientMethod method,
                                    const EstimatorConfig& cfg,
                                    std::size_t quad_points = 64);

/// Gradient vector with one estimate per parameter.  Component p of a
/// sampled method uses the derived seed derive_seed(cfg.seed, p).
std::vector<GradientEstimate> estimate_gradient_vector(
    const ParametricCircuit& c, const Eigen::VectorXd& theta,
    GradientMethod method, const EstimatorConfig& cfg,
    std::size_t quad_points = 64);

const char* gradient_method_name(GradientMethod method);

}  // namespace shiftrule
