// Acceptance gate: one pass/fail line per shipped guarantee, exit nonzero if
// any fails.  Every randomized check runs from a frozen seed, so the verdict
// is reproducible.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "shiftrule/experiments.hpp"
#include "shiftrule/gradients.hpp"
#include "shiftrule/metric.hpp"
#include "shiftrule/noise.hpp"
#include "shiftrule/optimize.hpp"
#include "support/battery.hpp"
#include "support/oracles.hpp"

using namespace shiftrule;
using testsupport::CircuitCase;
using testsupport::gradient_battery;
using testsupport::random_drift_free_slice;
using testsupport::random_drift_slice;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  double seconds = 0.0;
  std::string detail;
};

int failures = 0;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

template <typename Fn>
void criterion(int id, const std::string& label, double time_limit, Fn&& fn) {
  Outcome outcome;
  const auto start = std::chrono::steady_clock::now();
  try {
    fn(outcome);
  } catch (const std::exception& e) {
    outcome.pass = false;
    outcome.detail = std::string("exception: ") + e.what();
  }
  outcome.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (time_limit > 0.0 && outcome.seconds > time_limit) {
    outcome.pass = false;
    outcome.detail += " [exceeded " + fmt(time_limit) + "s budget]";
  }
  if (!outcome.pass) ++failures;
  std::printf("%s %2d: %s (%.2fs)%s%s\n", outcome.pass ? "PASS" : "FAIL", id,
              label.c_str(), outcome.seconds,
              outcome.detail.empty() ? "" : " -- ", outcome.detail.c_str());
  std::fflush(stdout);
}

/// 99th-percentile chi-square slack factor for a sample variance with k
/// degrees of freedom (Wilson-Hilferty approximation).
double variance_slack(std::size_t k) {
  const double z = 2.3263478740408408;
  const double a = 2.0 / (9.0 * static_cast<double>(k));
  const double f = 1.0 - a + z * std::sqrt(a);
  return f * f * f;
}

double slice_spsr_reference(const CircuitSlice& slice) {
  return spsr_expected(slice);
}

/// C(x + delta) of a slice, re-exponentiating the full generator so that
/// slices with a drift term are handled too.
double slice_value_at(const CircuitSlice& slice, double delta) {
  CircuitSlice shifted = slice;
  shifted.coefficient += delta;
  const ShiftedEvolution ev(shifted);
  StateVector psi = ev.gate_exp().apply(1.0, shifted.prefix);
  return ev.expectation(ev.apply_suffix(std::move(psi)));
}

std::vector<CircuitSlice> drift_slice_battery() {
  std::vector<CircuitSlice> slices;
  for (std::uint64_t seed : {31u, 32u, 33u, 34u, 35u, 36u, 37u, 38u})
    slices.push_back(random_drift_slice(seed));
  for (const CircuitCase& cc : gradient_battery()) {
    if (cc.drift_free) continue;
    const auto entries = cc.circuit.parameter_map().pattern(cc.param);
    for (std::size_t b : entries) {
      const ParamBinding& binding = cc.circuit.parameter_map().bindings()[b];
      slices.push_back(
          cc.circuit.slice(binding.gate, binding.axis, cc.theta));
    }
  }
  return slices;
}

/// Coverage counting shared by the sweep-reproduction criteria.
struct Coverage {
  std::size_t covered = 0;
  std::size_t total = 0;
  double fraction() const {
    return total == 0 ? 1.0
                      : static_cast<double>(covered) /
                            static_cast<double>(total);
  }
  void add(double mean, double sem, double reference) {
    ++total;
    if (std::abs(mean - reference) <= 3.0 * sem + 1e-9) ++covered;
  }
};

ParametricCircuit metric_probe_circuit() {
  auto obs = std::make_shared<const ObservableSpec>(
      PauliSum::from_terms(1, {{"Z", 1.0}}));
  ParametricCircuit c(StateVector::zero_state(1), obs, 3);
  const std::size_t g0 = c.add_gate(PauliSum::from_terms(1, {{"Z", 0.2}}));
  const std::size_t g1 = c.add_gate(PauliSum(1));
  c.bind(g0, PauliString::parse("X"),
         [](const Eigen::VectorXd& th) { return th[0]; },
         {{0, [](const Eigen::VectorXd&) { return 1.0; }}});
  c.bind(g1, PauliString::parse("Z"),
         [](const Eigen::VectorXd& th) { return th[1]; },
         {{1, [](const Eigen::VectorXd&) { return 1.0; }}});
  c.bind(g1, PauliString::parse("Y"),
         [](const Eigen::VectorXd& th) { return th[2]; },
         {{2, [](const Eigen::VectorXd&) { return 1.0; }}});
  return c;
}

Eigen::MatrixXd metric_density_fd(const ParametricCircuit& c,
                                  const Eigen::VectorXd& theta, double eps) {
  const std::size_t n = c.parameter_count();
  std::vector<Eigen::MatrixXcd> deriv(n);
  for (std::size_t p = 0; p < n; ++p) {
    Eigen::VectorXd plus = theta, minus = theta;
    plus[static_cast<Eigen::Index>(p)] += eps;
    minus[static_cast<Eigen::Index>(p)] -= eps;
    deriv[p] = (c.state_through(c.gate_count(), plus)
                    .to_density_matrix()
                    .matrix() -
                c.state_through(c.gate_count(), minus)
                    .to_density_matrix()
                    .matrix()) /
               (2.0 * eps);
  }
  Eigen::MatrixXd f(n, n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      f(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) =
          (deriv[p] * deriv[q]).trace().real();
  return f;
}

NoisyCircuit noisy_probe_circuit() {
  NoisyCircuit c{DensityMatrix::zero_state(1),
                 {PauliSum::from_terms(1, {{"X", 0.3}})},
                 make_noisy_gate("dephasing_drive",
                                 PauliSum::from_terms(1, {{"Z", 1.0}}),
                                 PauliSum::from_terms(2, {{"XX", 0.7},
                                                          {"ZY", 0.4}}),
                                 1, 1.0, 0.8),
                 {PauliSum::from_terms(1, {{"Y", 0.2}})},
                 std::make_shared<const ObservableSpec>(
                     PauliSum::from_terms(1, {{"Z", 1.0}}))};
  return c;
}

std::string render_csv(const CsvTable& table) {
  std::ostringstream out;
  write_csv(table, out);
  return out.str();
}

}  // namespace

int main() {
  criterion(1, "drift-free shifted difference equals the integral gradient",
            1.0,
            [](Outcome& o) {
              double worst = 0.0;
              for (std::uint64_t seed = 1; seed <= 20; ++seed) {
                const CircuitSlice slice = random_drift_free_slice(seed);
                const double diff = slice_value_at(slice, kPi / 4) -
                                    slice_value_at(slice, -kPi / 4);
                const double integral = slice_spsr_reference(slice);
                const double derivative = hadamard_gradient(slice);
                worst = std::max(worst, std::abs(diff - integral));
                worst = std::max(worst, std::abs(integral - derivative));
              }
              o.detail = "max deviation " + fmt(worst);
              o.pass = worst <= 1e-10;
            });

  criterion(2, "every sampled estimator is unbiased at 4 standard errors",
            60.0,
            [](Outcome& o) {
              const std::vector<GradientMethod> methods = {
                  GradientMethod::psr, GradientMethod::spsr,
                  GradientMethod::approx_spsr,
                  GradientMethod::doubly_stochastic,
                  GradientMethod::single_measurement};
              double worst = 0.0;
              std::size_t cases = 0;
              const auto battery = gradient_battery();
              for (std::size_t i = 0; i < battery.size(); ++i) {
                const CircuitCase& cc = battery[i];
                const double ref =
                    exact_gradient(cc.circuit, cc.theta, cc.param);
                for (std::size_t m = 0; m < methods.size(); ++m) {
                  if (methods[m] == GradientMethod::psr && !cc.drift_free)
                    continue;
                  EstimatorConfig cfg;
                  cfg.shots = 10000;
                  cfg.epsilon = 1e-2;
                  cfg.seed = derive_seed(9000 + m, i);
                  const GradientEstimate est = estimate_parameter(
                      cc.circuit, cc.theta, cc.param, methods[m], cfg);
                  const double se = est.standard_error();
                  const double pull =
                      std::abs(est.mean - ref) / (se + 1e-12);
                  worst = std::max(worst, pull);
                  ++cases;
                }
              }
              o.detail = std::to_string(cases) +
                         " estimator/case pairs, worst pull " + fmt(worst) +
                         " se";
              o.pass = worst <= 4.0;
            });

  criterion(3, "cross-resonance sweeps: 3-sigma bands cover the reference",
            300.0,
            [](Outcome& o) {
              for (const char* name : {"fig2a", "fig2b"}) {
                ExperimentSpec spec;
                spec.name = name;
                spec.shots = 1000;
                spec.seed = 25;
                const CsvTable table = run_experiment(spec);
                Coverage spsr, approx;
                for (const auto& row : table.rows) {
                  spsr.add(row[3], row[4], row[2]);
                  approx.add(row[5], row[6], row[2]);
                }
                o.detail += std::string(name) + " spsr " +
                            fmt(spsr.fraction()) + " approx " +
                            fmt(approx.fraction()) + "; ";
                o.pass = o.pass && spsr.fraction() >= 0.99 &&
                         approx.fraction() >= 0.99;
              }
            });

  criterion(4, "paired-sample variance stays within the observable bound",
            0.0,
            [](Outcome& o) {
              double worst_ratio = 0.0;
              const double slack = variance_slack(9999);
              const auto battery = gradient_battery();
              for (std::size_t i = 0; i < battery.size(); ++i) {
                const CircuitCase& cc = battery[i];
                const auto entries =
                    cc.circuit.parameter_map().pattern(cc.param);
                for (std::size_t b : entries) {
                  const ParamBinding& binding =
                      cc.circuit.parameter_map().bindings()[b];
                  const CircuitSlice slice =
                      cc.circuit.slice(binding.gate, binding.axis, cc.theta);
                  EstimatorConfig cfg;
                  cfg.shots = 10000;
                  cfg.seed = derive_seed(4242, i, b);
                  const GradientEstimate est = slice_gradient_sampled(
                      slice, SliceEstimator::spsr, cfg);
                  const double bound =
                      2.0 * slice.observable->coefficient_norm2();
                  worst_ratio = std::max(
                      worst_ratio, est.sample_variance / (bound * slack));
                }
              }
              o.detail = "worst variance/(bound*slack) " + fmt(worst_ratio);
              o.pass = worst_ratio <= 1.0;
            });

  criterion(5, "stochastic and standard rules have comparable spreads",
            0.0,
            [](Outcome& o) {
              ExperimentSpec spec;
              spec.name = "fig5";
              spec.seed = 5;
              const CsvTable table = run_experiment(spec);
              double lo = 1e300, hi = 0.0;
              for (const auto& row : table.rows) {
                const double psr_std = row[4];
                const double spsr_std = row[6];
                const double ratio = spsr_std / psr_std;
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
              }
              o.detail = "std ratio range [" + fmt(lo) + ", " + fmt(hi) + "]";
              o.pass = lo >= 0.5 && hi <= 2.0;
            });

  criterion(6, "ring-model spreads match across frames; bands cover the "
               "reference",
            600.0,
            [](Outcome& o) {
              ExperimentSpec spec;
              spec.shots = 1000;
              spec.seed = 24;
              spec.name = "fig6a";
              const CsvTable ring = run_experiment(spec);
              spec.name = "fig6b";
              const CsvTable dressed = run_experiment(spec);
              double worst_factor = 0.0;
              for (std::size_t r = 0; r < ring.rows.size(); ++r) {
                const double a = ring.rows[r][4];
                const double b = dressed.rows[r][4];
                const double factor = std::max(a / b, b / a);
                worst_factor = std::max(worst_factor, factor);
              }
              spec.name = "fig7";
              const CsvTable track = run_experiment(spec);
              Coverage coverage;
              for (const auto& row : track.rows)
                coverage.add(row[3], row[4], row[2]);
              o.detail = "worst std factor " + fmt(worst_factor) +
                         ", coverage " + fmt(coverage.fraction());
              o.pass = worst_factor <= 3.0 && coverage.fraction() >= 0.99;
            });

  criterion(7, "integral, commutator-series, and finite-difference gradients "
               "agree",
            0.0,
            [](Outcome& o) {
              double worst = 0.0;
              for (const CircuitSlice& slice : drift_slice_battery()) {
                const double integral = spsr_expected(slice);
                const double series = hadamard_gradient(slice);
                const double fd = (slice_value_at(slice, 1e-6) -
                                   slice_value_at(slice, -1e-6)) /
                                  2e-6;
                worst = std::max(worst, std::abs(integral - series));
                worst = std::max(worst, std::abs(integral - fd));
                worst = std::max(worst, std::abs(series - fd));
              }
              o.detail = "max pairwise deviation " + fmt(worst);
              o.pass = worst <= 1e-6;
            });

  criterion(8, "noisy-gate control gradient converges as the pulse sharpens",
            0.0,
            [](Outcome& o) {
              const NoisyCircuit c = noisy_probe_circuit();
              const double fd = noisy_theta_fd(c);
              double previous = 1e300;
              bool monotone = true;
              for (double eps : {0.1, 0.05, 0.025}) {
                const double bias =
                    std::abs(noisy_spsr_theta_expected(c, eps) - fd);
                monotone = monotone && bias < previous;
                previous = bias;
                o.detail += "eps " + fmt(eps) + ": bias " + fmt(bias) + "; ";
              }
              o.pass = monotone;
            });

  criterion(9, "metric tensor: shortcut, constant diagonal, and density "
               "derivatives",
            0.0,
            [](Outcome& o) {
              double worst_shortcut = 0.0;
              for (std::uint64_t seed : {61u, 62u, 63u, 64u}) {
                const CircuitSlice slice = random_drift_slice(seed);
                ParametricCircuit c(slice.prefix, slice.observable, 1);
                const std::size_t g = c.add_gate(slice.fixed);
                const PauliString axis = slice.target.terms().begin()->first;
                const double sign = slice.target.terms().begin()->second;
                const double x = slice.coefficient;
                c.bind(g, axis,
                       [x, sign](const Eigen::VectorXd&) { return sign * x; },
                       {{0, [sign](const Eigen::VectorXd&) { return sign; }}});
                for (const PauliSum& suffix : slice.suffix)
                  c.add_gate(suffix);
                Eigen::VectorXd theta(1);
                theta << 0.0;
                const MetricIndex idx{g, axis};
                const double via_overlaps =
                    metric_element_expected(c, theta, idx, idx);
                const CircuitSlice back = c.slice(g, axis, theta);
                worst_shortcut =
                    std::max(worst_shortcut,
                             std::abs(diagonal_via_f1f2(back) - via_overlaps));
              }

              double worst_constant = 0.0;
              {
                const ParametricCircuit c = testsupport::single_x_circuit();
                const MetricIndex idx{0, PauliString::parse("X")};
                for (double x : {0.0, 0.3, 1.0}) {
                  Eigen::VectorXd theta(1);
                  theta << x;
                  worst_constant = std::max(
                      worst_constant,
                      std::abs(metric_element_expected(c, theta, idx, idx) -
                               2.0));
                }
              }

              const ParametricCircuit probe = metric_probe_circuit();
              Eigen::VectorXd theta(3);
              theta << 0.3, 0.7, -0.4;
              const double assembled_gap =
                  (metric_tensor_expected(probe, theta) -
                   metric_density_fd(probe, theta, 1e-4))
                      .cwiseAbs()
                      .maxCoeff();

              o.detail = "shortcut " + fmt(worst_shortcut) + ", constant " +
                         fmt(worst_constant) + ", assembled " +
                         fmt(assembled_gap);
              o.pass = worst_shortcut <= 1e-6 && worst_constant <= 1e-8 &&
                       assembled_gap <= 1e-5;
            });

  criterion(10, "approximate-pulse bias shrinks monotonically with epsilon",
            0.0,
            [](Outcome& o) {
              const CircuitSlice slice = random_drift_slice(42);
              const double exact = spsr_expected(slice);
              double previous = 1e300;
              bool monotone = true;
              for (double eps : {0.2, 0.1, 0.05, 0.025}) {
                const double bias =
                    std::abs(approx_spsr_expected(slice, eps) - exact);
                monotone = monotone && bias < previous;
                previous = bias;
                o.detail += "eps " + fmt(eps) + ": " + fmt(bias) + "; ";
              }
              o.pass = monotone;
            });

  criterion(11, "experiment output is byte-identical across thread counts",
            0.0,
            [](Outcome& o) {
              ExperimentSpec spec;
              spec.name = "fig2a";
              spec.shots = 50;
              spec.seed = 7;
              spec.grid_points = 5;
              spec.threads = 1;
              const std::string reference = render_csv(run_experiment(spec));
              bool identical = true;
              for (std::size_t threads : {2u, 4u}) {
                spec.threads = threads;
                identical =
                    identical && render_csv(run_experiment(spec)) == reference;
              }
              spec.name = "fig6a";
              spec.grid_points = 3;
              spec.shots = 30;
              spec.threads = 1;
              const std::string ring_ref = render_csv(run_experiment(spec));
              spec.threads = 3;
              identical =
                  identical && render_csv(run_experiment(spec)) == ring_ref;
              o.pass = identical;
              o.detail = identical ? "all renders identical"
                                   : "outputs diverged";
            });

  if (failures == 0) {
    std::printf("all 11 acceptance checks passed\n");
    return 0;
  }
  std::printf("%d acceptance check(s) failed\n", failures);
  return 1;
}
