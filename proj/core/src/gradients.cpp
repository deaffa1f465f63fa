// Copyright (c) 2026 The shiftrule developers.
// Licensed under the MIT License; see LICENSE for details.

#include "shiftrule/gradients.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "shiftrule/parallel.hpp"
#include "shiftrule/quadrature.hpp"

namespace shiftrule {

namespace {

constexpr double kRoot2Inv = 0.7071067811865475244;  // 1/sqrt(2)

std::vector<double> distinct_eigenvalues(const Eigen::VectorXd& sorted,
                                         double tol = 1e-9) {
  std::vector<double> reps;
  for (Eigen::Index i = 0; i < sorted.size(); ++i) {
    if (reps.empty() || sorted[i] - reps.back() > tol)
      reps.push_back(sorted[i]);
  }
  return reps;
}

std::optional<TwoEigenvalueShift> try_two_eigenvalue_shift(
    const Eigen::VectorXd& sorted_eigenvalues) {
  const auto reps = distinct_eigenvalues(sorted_eigenvalues);
  if (reps.size() != 2) return std::nullopt;
  return TwoEigenvalueShift{0.5 * (reps[0] + reps[1]),
                            0.5 * (reps[1] - reps[0])};
}

// Mean and unbiased sample variance, reduced in index order so results do
// not depend on the thread count.
GradientEstimate reduce(std::string tag, const EstimatorConfig& cfg,
                        const std::vector<double>& vals) {
  GradientEstimate est;
  est.shots = vals.size();
  est.seed = cfg.seed;
  est.estimator = std::move(tag);
  double sum = 0.0;
  for (double v : vals) sum += v;
  est.mean = sum / static_cast<double>(vals.size());
  if (vals.size() > 1) {
    double ss = 0.0;
    for (double v : vals) {
      const double d = v - est.mean;
      ss += d * d;
    }
    est.sample_variance = ss / static_cast<double>(vals.size() - 1);
  }
  return est;
}

// Declared Jacobian row of parameter p: (binding index, dx/dtheta_p).
struct RowEntry {
  std::size_t binding;
  double jac;
};

std::vector<RowEntry> jacobian_row(const ParametricCircuit& c,
                                   const Eigen::VectorXd& theta,
                                   std::size_t p) {
  c.check_theta(theta);
  if (p >= c.parameter_count())
    throw std::invalid_argument("parameter index out of range");
  std::vector<RowEntry> row;
  for (std::size_t b : c.parameter_map().pattern(p))
    row.push_back({b, c.parameter_map().partial(b, p, theta)});
  return row;
}

}  // namespace

double GradientEstimate::standard_error() const {
  return shots == 0 ? 0.0
                    : std::sqrt(sample_variance / static_cast<double>(shots));
}

GradientEstimate reduce_shots(
    std::string estimator, const EstimatorConfig& cfg,
    const std::function<double(PhiloxStream&)>& per_shot) {
  if (cfg.shots == 0)
    throw std::invalid_argument("estimator config: shots must be >= 1");
  std::vector<double> vals(cfg.shots);
  parallel_for(cfg.shots, resolve_thread_count(cfg.threads),
               [&](std::size_t i) {
                 PhiloxStream stream(cfg.seed, i);
                 vals[i] = per_shot(stream);
               });
  return reduce(std::move(estimator), cfg, vals);
}

TwoEigenvalueShift two_eigenvalue_shift(const PauliSum& target) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(target.to_matrix(),
                                                     Eigen::EigenvaluesOnly);
  const auto shift = try_two_eigenvalue_shift(es.eigenvalues());
  if (!shift)
    throw PreconditionError(
        "standard shift rule: target must have exactly two distinct "
        "eigenvalues, found " +
        std::to_string(distinct_eigenvalues(es.eigenvalues()).size()));
  return *shift;
}

ShiftedEvolution::ShiftedEvolution(const CircuitSlice& slice)
    : slice_(slice),
      gate_(slice.fixed + slice.coefficient * slice.target),
      target_exp_(HermitianExp(slice.target)) {
  if (!slice_.observable)
    throw std::invalid_argument("ShiftedEvolution: slice has no observable");
  if (slice_.observable->qubit_count() != slice_.prefix.qubit_count())
    throw std::invalid_argument("ShiftedEvolution: register mismatch");
  if (slice_.target.size() == 1) {
    const auto& [word, coeff] = *slice_.target.terms().begin();
    if (std::abs(std::abs(coeff) - 1.0) < 1e-12) {
      unit_word_target_ = true;
      pulse_word_ = word;
      pulse_sign_ = coeff;
    }
  }
  two_level_ = try_two_eigenvalue_shift(target_exp_->eigenvalues());
  suffix_.reserve(slice_.suffix.size());
  for (const PauliSum& g : slice_.suffix) suffix_.emplace_back(g);
}

ShiftedEvolution::ShiftedEvolution(const CircuitSlice& slice,
                                   double approx_epsilon)
    : ShiftedEvolution(slice) {
  if (approx_epsilon <= 0.0)
    throw PreconditionError(
        "approximate pulse requires epsilon > 0, got " +
        std::to_string(approx_epsilon));
  if (!unit_word_target_)
    throw PreconditionError(
        "approximate pulse requires a single Pauli word with unit-magnitude "
        "coefficient as shift target");
  approx_epsilon_ = approx_epsilon;
  const Eigen::MatrixXcd h = slice_.fixed.to_matrix();
  const Eigen::MatrixXcd v = slice_.target.to_matrix();
  const double quarter = std::numbers::pi / 4.0;
  approx_plus_.emplace(Eigen::MatrixXcd(approx_epsilon * h + quarter * v));
  approx_minus_.emplace(Eigen::MatrixXcd(approx_epsilon * h - quarter * v));
}

double ShiftedEvolution::approx_epsilon() const {
  if (approx_epsilon_ <= 0.0)
    throw std::invalid_argument(
        "ShiftedEvolution: approximate pulses were not prepared");
  return approx_epsilon_;
}

StateVector ShiftedEvolution::pulse(int sign, StateVector psi) const {
  if (!unit_word_target_)
    throw PreconditionError(
        "stochastic shift rule requires a single Pauli word with "
        "unit-magnitude coefficient as shift target, got " +
        std::to_string(slice_.target.size()) + " terms");
  // e^{i a pi/4 sigma} = (1 + i a sigma) / sqrt(2) for a = +/-1.
  const double a = sign >= 0 ? pulse_sign_ : -pulse_sign_;
  Eigen::VectorXcd rotated = shiftrule::apply(pulse_word_, psi.amplitudes());
  Eigen::VectorXcd out =
      kRoot2Inv * (psi.amplitudes() +
                   std::complex<double>(0.0, a) * rotated);
  return StateVector(psi.qubit_count(), std::move(out));
}

StateVector ShiftedEvolution::apply_suffix(StateVector psi) const {
  for (const HermitianExp& g : suffix_) psi = g.apply(1.0, psi);
  return psi;
}

StateVector ShiftedEvolution::state(double s, int sign) const {
  StateVector psi = gate_.apply(1.0 - s, slice_.prefix);
  psi = pulse(sign, std::move(psi));
  psi = gate_.apply(s, psi);
  return apply_suffix(std::move(psi));
}

StateVector ShiftedEvolution::state_approx(double s, int sign) const {
  if (approx_epsilon_ <= 0.0)
    throw std::invalid_argument(
        "ShiftedEvolution: approximate pulses were not prepared");
  StateVector psi = gate_.apply(1.0 - s, slice_.prefix);
  psi = (sign >= 0 ? *approx_plus_ : *approx_minus_).apply(1.0, psi);
  psi = gate_.apply(s, psi);
  return apply_suffix(std::move(psi));
}

StateVector ShiftedEvolution::shifted_coefficient_state(double delta) const {
  if (!fixed_is_zero())
    throw PreconditionError(
        "standard shift rule requires a drift-free gate (H = 0); this slice "
        "has a nonzero fixed part");
  StateVector psi =
      target_exp_->apply(slice_.coefficient + delta, slice_.prefix);
  return apply_suffix(std::move(psi));
}

double ShiftedEvolution::expected(double s, int sign) const {
  return slice_.observable->expectation(state(s, sign));
}

double ShiftedEvolution::expected_approx(double s, int sign) const {
  return slice_.observable->expectation(state_approx(s, sign));
}

double ShiftedEvolution::expectation(const StateVector& psi) const {
  return slice_.observable->expectation(psi);
}

double ShiftedEvolution::born(const StateVector& psi,
                              PhiloxStream& rng) const {
  return slice_.observable->sample_termwise(psi, rng);
}

double psr_sample(const ShiftedEvolution& ev, double u, PhiloxStream& rng) {
  if (!ev.two_level())
    throw PreconditionError(
        "standard shift rule: target must have exactly two distinct "
        "eigenvalues");
  const TwoEigenvalueShift shift = *ev.two_level();
  if (std::abs(shift.radius - u) > 1e-9 * std::max(1.0, std::abs(u)))
    throw PreconditionError(
        "standard shift rule: supplied u = " + std::to_string(u) +
        " disagrees with the detected eigenvalue radius " +
        std::to_string(shift.radius));
  const double delta = std::numbers::pi / (4.0 * u);
  const double r_plus = ev.born(ev.shifted_coefficient_state(delta), rng);
  const double r_minus = ev.born(ev.shifted_coefficient_state(-delta), rng);
  return u * (r_plus - r_minus);
}

double psr_sample(const CircuitSlice& slice, double u, PhiloxStream& rng) {
  return psr_sample(ShiftedEvolution(slice), u, rng);
}

double spsr_sample(const ShiftedEvolution& ev, PhiloxStream& rng) {
  // r+ and r- come from independent runs, and every Pauli word of the
  // observable is measured on its own independently shifted circuit (each
  // word needs its own measurement setting on hardware anyway).  With the
  // draws independent across terms and signs,
  //   Var(r+ - r-) = sum_v c_v^2 [(1 - E[m+]^2) + (1 - E[m-]^2)]
  // which never exceeds 2 sum_v c_v^2.
  const ObservableSpec& obs = *ev.slice().observable;
  double total = 0.0;
  for (std::size_t t = 0; t < obs.term_count(); ++t)
    for (const int sign : {+1, -1})
      total += sign * obs.sample_term(t, ev.state(rng.uniform(), sign), rng);
  return total;
}

double spsr_sample(const CircuitSlice& slice, PhiloxStream& rng) {
  return spsr_sample(ShiftedEvolution(slice), rng);
}

double approx_spsr_sample(const ShiftedEvolution& ev, PhiloxStream& rng) {
  // Same independent-draw layout as spsr_sample.
  const ObservableSpec& obs = *ev.slice().observable;
  double total = 0.0;
  for (std::size_t t = 0; t < obs.term_count(); ++t)
    for (const int sign : {+1, -1})
      total +=
          sign * obs.sample_term(t, ev.state_approx(rng.uniform(), sign), rng);
  return total;
}

double approx_spsr_sample(const CircuitSlice& slice, double epsilon,
                          PhiloxStream& rng) {
  return approx_spsr_sample(ShiftedEvolution(slice, epsilon), rng);
}

double spsr_expected(const CircuitSlice& slice, std::size_t quad_points) {
  if (quad_points == 0)
    throw std::invalid_argument("spsr_expected: quad_points must be >= 1");
  const ShiftedEvolution ev(slice);
  const Quadrature q = gauss_legendre_01(quad_points);
  double total = 0.0;
  for (std::size_t i = 0; i < quad_points; ++i)
    total += q.weights[i] *
             (ev.expected(q.nodes[i], +1) - ev.expected(q.nodes[i], -1));
  return total;
}

double approx_spsr_expected(const CircuitSlice& slice, double epsilon,
                            std::size_t quad_points) {
  if (quad_points == 0)
    throw std::invalid_argument(
        "approx_spsr_expected: quad_points must be >= 1");
  const ShiftedEvolution ev(slice, epsilon);
  const Quadrature q = gauss_legendre_01(quad_points);
  double total = 0.0;
  for (std::size_t i = 0; i < quad_points; ++i)
    total += q.weights[i] * (ev.expected_approx(q.nodes[i], +1) -
                             ev.expected_approx(q.nodes[i], -1));
  return total;
}

double hadamard_gradient(const CircuitSlice& slice, std::size_t quad_points) {
  if (quad_points == 0)
    throw std::invalid_argument("hadamard_gradient: quad_points must be >= 1");
  const ShiftedEvolution ev(slice);
  const Eigen::MatrixXcd v = slice.target.to_matrix();
  const Quadrature q = gauss_legendre_01(quad_points);
  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(v.rows(), v.cols());
  for (std::size_t i = 0; i < quad_points; ++i) {
    const Eigen::MatrixXcd u = ev.gate_exp().unitary(q.nodes[i]);
    y += q.weights[i] * (u * v * u.adjoint());
  }
  // Pauli expansion of the averaged shift generator; on hardware each term
  // maps to one auxiliary-qubit interference measurement.
  const PauliSum y_sum = PauliSum::decompose(y);

  const StateVector evolved = ev.gate_exp().apply(1.0, slice.prefix);
  const StateVector psi_full = ev.apply_suffix(evolved);
  const StateVector chi = ev.apply_suffix(
      StateVector(evolved.qubit_count(), y_sum.apply(evolved.amplitudes())));
  const std::complex<double> z = psi_full.amplitudes().dot(
      slice.observable->pauli().apply(chi.amplitudes()));
  return -2.0 * z.imag();
}

double finite_difference(const ParametricCircuit& c,
                         const Eigen::VectorXd& theta, std::size_t p,
                         double eps) {
  c.check_theta(theta);
  if (p >= c.parameter_count())
    throw std::invalid_argument("finite_difference: parameter out of range");
  if (eps <= 0.0)
    throw std::invalid_argument("finite_difference: eps must be > 0");
  Eigen::VectorXd tp = theta, tm = theta;
  tp[p] += eps;
  tm[p] -= eps;
  return (c.evaluate(tp) - c.evaluate(tm)) / (2.0 * eps);
}

double exact_gradient(const ParametricCircuit& c, const Eigen::VectorXd& theta,
                      std::size_t p, std::size_t quad_points) {
  double total = 0.0;
  for (const RowEntry& e : jacobian_row(c, theta, p)) {
    if (e.jac == 0.0) continue;
    const ParamBinding& b = c.parameter_map().bindings()[e.binding];
    total += e.jac * spsr_expected(c.slice(b.gate, b.axis, theta), quad_points);
  }
  return total;
}

GradientEstimate slice_gradient_sampled(const CircuitSlice& slice,
                                        SliceEstimator kind,
                                        const EstimatorConfig& cfg) {
  switch (kind) {
    case SliceEstimator::psr: {
      const ShiftedEvolution ev(slice);
      if (!ev.two_level())
        throw PreconditionError(
            "standard shift rule: target must have exactly two distinct "
            "eigenvalues");
      const double u = ev.two_level()->radius;
      return reduce_shots("psr", cfg, [&](PhiloxStream& rng) {
        return psr_sample(ev, u, rng);
      });
    }
    case SliceEstimator::spsr: {
      const ShiftedEvolution ev(slice);
      return reduce_shots("spsr", cfg, [&](PhiloxStream& rng) {
        return spsr_sample(ev, rng);
      });
    }
    case SliceEstimator::approx_spsr: {
      const ShiftedEvolution ev(slice, cfg.epsilon);
      return reduce_shots("approx_spsr", cfg, [&](PhiloxStream& rng) {
        return approx_spsr_sample(ev, rng);
      });
    }
  }
  throw std::invalid_argument("slice_gradient_sampled: unknown estimator");
}

GradientEstimate stochastic_gradient(const ParametricCircuit& c,
                                     const Eigen::VectorXd& theta,
                                     std::size_t p, const EstimatorConfig& cfg,
                                     SliceEstimator kind) {
  const std::vector<RowEntry> row = jacobian_row(c, theta, p);

  struct Prepared {
    double jac;
    double u;  // standard-rule radius (psr only)
    ShiftedEvolution ev;
  };
  std::vector<Prepared> prepared;
  for (const RowEntry& e : row) {
    if (e.jac == 0.0) continue;
    const ParamBinding& b = c.parameter_map().bindings()[e.binding];
    CircuitSlice slice = c.slice(b.gate, b.axis, theta);
    if (kind == SliceEstimator::approx_spsr) {
      prepared.push_back({e.jac, 1.0, ShiftedEvolution(slice, cfg.epsilon)});
    } else {
      ShiftedEvolution ev(slice);
      double u = 1.0;
      if (kind == SliceEstimator::psr) {
        if (!ev.two_level())
          throw PreconditionError(
              "standard shift rule: target must have exactly two distinct "
              "eigenvalues");
        u = ev.two_level()->radius;
      }
      prepared.push_back({e.jac, u, std::move(ev)});
    }
  }

  // Tag with the same vocabulary the run config accepts so that a result
  // can be replayed verbatim.
  const std::string tag = kind == SliceEstimator::psr
                              ? "psr"
                              : kind == SliceEstimator::spsr ? "spsr"
                                                             : "approx_spsr";
  if (prepared.empty()) {
    GradientEstimate est;
    est.shots = cfg.shots;
    est.seed = cfg.seed;
    est.estimator = tag;
    return est;
  }
  return reduce_shots(tag, cfg, [&](PhiloxStream& rng) {
    double g = 0.0;
    for (const Prepared& pr : prepared) {
      double sample = 0.0;
      switch (kind) {
        case SliceEstimator::psr:
          sample = psr_sample(pr.ev, pr.u, rng);
          break;
        case SliceEstimator::spsr:
          sample = spsr_sample(pr.ev, rng);
          break;
        case SliceEstimator::approx_spsr:
          sample = approx_spsr_sample(pr.ev, rng);
          break;
      }
      g += pr.jac * sample;
    }
    return g;
  });
}

namespace {

// Shared machinery for the two pattern-sampling estimators: evolutions for
// the nonzero entries of a Jacobian row plus the selection distribution.
struct RowSampler {
  std::vector<double> weights;  // |jac|
  std::vector<double> signs;
  std::vector<ShiftedEvolution> evs;
  double norm = 0.0;

  RowSampler(const ParametricCircuit& c, const Eigen::VectorXd& theta,
             std::size_t p) {
    for (const RowEntry& e : jacobian_row(c, theta, p)) {
      if (e.jac == 0.0) continue;
      const ParamBinding& b = c.parameter_map().bindings()[e.binding];
      weights.push_back(std::abs(e.jac));
      signs.push_back(e.jac > 0.0 ? 1.0 : -1.0);
      evs.emplace_back(c.slice(b.gate, b.axis, theta));
      norm += std::abs(e.jac);
    }
    if (evs.empty())
      throw PreconditionError(
          "pattern sampling: the Jacobian row of parameter " +
          std::to_string(p) + " is identically zero at this theta");
  }

  // Index drawn with probability |jac|/norm.  Degenerate single-entry rows
  // consume no randomness, so the estimator reduces exactly to the paired
  // slice sample scaled by the Jacobian entry.
  std::size_t select(PhiloxStream& rng) const {
    if (evs.size() == 1) return 0;
    return rng.sample_index(weights);
  }

  double paired_sample(PhiloxStream& rng) const {
    const std::size_t k = select(rng);
    return spsr_sample(evs[k], rng) * norm * signs[k];
  }

  double single_sample(PhiloxStream& rng) const {
    const double s = rng.uniform();
    const std::size_t k = select(rng);
    const int m = (rng.next_u32() & 1u) ? 1 : -1;
    const double r = evs[k].born(evs[k].state(s, m), rng);
    return 2.0 * m * r * norm * signs[k];
  }
};

}  // namespace

double doubly_stochastic_sample(const ParametricCircuit& c,
                                const Eigen::VectorXd& theta, std::size_t p,
                                PhiloxStream& rng) {
  return RowSampler(c, theta, p).paired_sample(rng);
}

GradientEstimate doubly_stochastic_gradient(const ParametricCircuit& c,
                                            const Eigen::VectorXd& theta,
                                            std::size_t p,
                                            const EstimatorConfig& cfg) {
  const RowSampler sampler(c, theta, p);
  return reduce_shots("doubly_stochastic", cfg, [&](PhiloxStream& rng) {
    return sampler.paired_sample(rng);
  });
}

double single_measurement_sample(const ParametricCircuit& c,
                                 const Eigen::VectorXd& theta, std::size_t p,
                                 PhiloxStream& rng) {
  return RowSampler(c, theta, p).single_sample(rng);
}

GradientEstimate single_measurement_gradient(const ParametricCircuit& c,
                                             const Eigen::VectorXd& theta,
                                             std::size_t p,
                                             const EstimatorConfig& cfg) {
  const RowSampler sampler(c, theta, p);
  return reduce_shots("single_measurement", cfg, [&](PhiloxStream& rng) {
    return sampler.single_sample(rng);
  });
}

GradientEstimate estimate_parameter(const ParametricCircuit& c,
                                    const Eigen::VectorXd& theta,
                                    std::size_t p, GradientMethod method,
                                    const EstimatorConfig& cfg,
                                    std::size_t quad_points) {
  GradientEstimate out;
  switch (method) {
    case GradientMethod::exact:
      out.mean = exact_gradient(c, theta, p, quad_points);
      out.estimator = "exact";
      return out;
    case GradientMethod::psr:
      return stochastic_gradient(c, theta, p, cfg, SliceEstimator::psr);
    case GradientMethod::spsr:
      return stochastic_gradient(c, theta, p, cfg, SliceEstimator::spsr);
    case GradientMethod::approx_spsr:
      return stochastic_gradient(c, theta, p, cfg,
                                 SliceEstimator::approx_spsr);
    case GradientMethod::doubly_stochastic:
      return doubly_stochastic_gradient(c, theta, p, cfg);
    case GradientMethod::single_measurement:
      return single_measurement_gradient(c, theta, p, cfg);
  }
  throw std::invalid_argument("unknown gradient method");
}

std::vector<GradientEstimate> estimate_gradient_vector(
    const ParametricCircuit& c, const Eigen::VectorXd& theta,
    GradientMethod method, const EstimatorConfig& cfg,
    std::size_t quad_points) {
  c.check_theta(theta);
  std::vector<GradientEstimate> grad(c.parameter_count());
  for (std::size_t p = 0; p < c.parameter_count(); ++p) {
    EstimatorConfig local = cfg;
    local.seed = derive_seed(cfg.seed, p);
    grad[p] = estimate_parameter(c, theta, p, method, local, quad_points);
  }
  return grad;
}

const char* gradient_method_name(GradientMethod method) {
  switch (method) {
    case GradientMethod::exact:
      return "exact";
    case GradientMethod::psr:
      return "psr";
    case GradientMethod::spsr:
      return "spsr";
    case GradientMethod::approx_spsr:
      return "approx_spsr";
    case GradientMethod::doubly_stochastic:
      return "doubly_stochastic";
    case GradientMethod::single_measurement:
      return "single_measurement";
  }
  return "unknown";
}

}  // namespace shiftrule
