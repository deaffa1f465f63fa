// Command-line front end: gradient estimation, metric evaluation, hybrid
// optimization loops, and named sweep experiments over a JSON circuit
// schema.  Exit codes: 0 success, 1 runtime error, 2 schema violation,
// 3 estimator precondition violation.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shiftrule/circuit.hpp"
#include "shiftrule/experiments.hpp"
#include "shiftrule/gradients.hpp"
#include "shiftrule/metric.hpp"
#include "shiftrule/noise.hpp"
#include "shiftrule/optimize.hpp"
#include "shiftrule/schema.hpp"

namespace {

using nlohmann::json;

constexpr double kPi = 3.14159265358979323846;

/// Parse "0.3,-1.2,0" into a vector of `expected` entries; an empty string
/// yields the zero vector.
Eigen::VectorXd parse_theta_list(const std::string& text,
                                 std::size_t expected,
                                 const std::string& flag) {
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(
      static_cast<Eigen::Index>(expected));
  if (text.empty()) return theta;
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      while (used < item.size() && std::isspace(
                 static_cast<unsigned char>(item[used])))
        ++used;
      if (used != item.size())
        throw std::invalid_argument("trailing characters");
      values.push_back(v);
    } catch (const std::exception&) {
      throw shiftrule::SchemaError(
          flag, "cannot parse \"" + item + "\" as a number");
    }
  }
  if (values.size() != expected)
    throw shiftrule::SchemaError(
        flag, "expected " + std::to_string(expected) +
                  " comma-separated values, got " +
                  std::to_string(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i)
    theta[static_cast<Eigen::Index>(i)] = values[i];
  return theta;
}

shiftrule::PauliString parse_word_flag(const std::string& text,
                                       std::size_t qubits,
                                       const std::string& flag) {
  shiftrule::PauliString word;
  try {
    word = shiftrule::PauliString::parse(text);
  } catch (const std::invalid_argument& e) {
    throw shiftrule::SchemaError(flag, e.what());
  }
  if (word.qubit_count() != qubits)
    throw shiftrule::SchemaError(
        flag, "Pauli word \"" + text + "\" has " +
                  std::to_string(word.qubit_count()) +
                  " characters; the circuit has " + std::to_string(qubits) +
                  " qubits");
  return word;
}

void emit_json(const json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file)
    throw std::runtime_error("cannot open output file: " + out_path);
  file << text;
}

void emit_csv(const shiftrule::CsvTable& table, const std::string& out_path) {
  if (out_path.empty()) {
    shiftrule::write_csv(table, std::cout);
    return;
  }
  shiftrule::write_csv_file(table, out_path);
}

const shiftrule::ParametricCircuit& require_unitary(
    const shiftrule::CircuitDocument& doc, const std::string& command) {
  if (!doc.unitary)
    throw shiftrule::SchemaError(
        "circuit", command + " requires a unitary circuit; this file "
                             "declares a noisy gate");
  return *doc.unitary;
}

// ---------------------------------------------------------------------------
// grad

struct GradOptions {
  std::string circuit_path;
  std::string theta_text;
  std::size_t param = 0;
  std::string estimator = "spsr";
  std::string wrt = "theta";
  std::size_t shots = 1000;
  std::uint64_t seed = 0;
  double epsilon = 1e-2;
  std::size_t threads = 0;
  std::size_t quad_points = 64;
  std::string out_path;
  bool param_given = false;
  bool theta_given = false;
  bool estimator_given = false;
};

int run_grad(const GradOptions& opt) {
  const shiftrule::CircuitDocument doc =
      shiftrule::load_circuit_file(opt.circuit_path);

  shiftrule::EstimatorConfig cfg;
  cfg.shots = opt.shots;
  cfg.seed = opt.seed;
  cfg.epsilon = opt.epsilon;
  cfg.threads = opt.threads;

  if (doc.noisy) {
    if (opt.param_given)
      throw shiftrule::SchemaError(
          "param", "a noisy circuit's only differentiable knob is the "
                   "gate's own theta; --param does not apply");
    if (opt.theta_given)
      throw shiftrule::SchemaError(
          "theta", "a noisy circuit carries its control amplitude inside "
                   "the gate block; --theta does not apply");
    if (opt.wrt == "tau") {
      const shiftrule::TauGradientRefusal refusal =
          shiftrule::tau_gradient_unsupported(doc.noisy->gate);
      json out;
      out["refused"] = true;
      out["gate"] = refusal.gate_label;
      out["reason"] = refusal.reason;
      out["tau_fd_simulator_oracle"] =
          shiftrule::tau_fd_simulator_oracle(*doc.noisy);
      emit_json(out, opt.out_path);
      std::cerr << "precondition error: " << refusal.reason << "\n";
      return 3;
    }
    if (opt.estimator_given && opt.estimator != "spsr")
      throw shiftrule::SchemaError(
          "estimator", "noisy gates support only the stochastic (spsr) "
                       "theta estimator");
    const shiftrule::GradientEstimate est =
        shiftrule::noisy_spsr_theta_gradient(*doc.noisy, cfg);
    json out = shiftrule::to_json(est);
    out["wrt"] = "theta";
    out["gate"] = doc.noisy->gate.label;
    emit_json(out, opt.out_path);
    return 0;
  }

  if (opt.wrt == "tau")
    throw shiftrule::SchemaError(
        "wrt", "tau is a noisy-gate knob; this circuit has no noisy gate");

  const shiftrule::ParametricCircuit& c = *doc.unitary;
  if (opt.param >= c.parameter_count())
    throw shiftrule::SchemaError(
        "param", "parameter index " + std::to_string(opt.param) +
                     " out of range; the circuit has " +
                     std::to_string(c.parameter_count()) + " parameters");
  const Eigen::VectorXd theta =
      parse_theta_list(opt.theta_text, c.parameter_count(), "theta");
  const shiftrule::GradientMethod method =
      shiftrule::parse_gradient_method(opt.estimator, "estimator");

  const shiftrule::GradientEstimate est = shiftrule::estimate_parameter(
      c, theta, opt.param, method, cfg, opt.quad_points);
  json out = shiftrule::to_json(est);
  out["param"] = opt.param;
  emit_json(out, opt.out_path);
  return 0;
}

// ---------------------------------------------------------------------------
// optimize

struct OptimizeOptions {
  std::string circuit_path;
  std::string config_path;
  std::string estimator;
  std::string optimizer;
  std::size_t shots = 0;
  double eta = 0.0;
  std::size_t iterations = 0;
  std::string direction;
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  std::size_t threads = 0;
  std::size_t quad_points = 0;
  bool natural_gradient = false;
  std::string metric_kind;
  double metric_regularizer = 0.0;
  std::string theta0_text;
  std::string out_path;
  CLI::App* cmd = nullptr;  ///< for explicit-flag detection
};

int run_optimize(const OptimizeOptions& opt) {
  const shiftrule::CircuitDocument doc =
      shiftrule::load_circuit_file(opt.circuit_path);
  const shiftrule::ParametricCircuit& c = require_unitary(doc, "optimize");

  shiftrule::RunSpec run;
  if (!opt.config_path.empty())
    run = shiftrule::load_run_config_file(opt.config_path);

  const auto given = [&](const std::string& flag) {
    return opt.cmd->count(flag) > 0;
  };
  shiftrule::OptimizeConfig& cfg = run.config;
  if (given("--estimator"))
    cfg.method = shiftrule::parse_gradient_method(opt.estimator, "estimator");
  if (given("--optimizer")) run.adam = (opt.optimizer == "adam");
  if (given("--shots")) cfg.estimator.shots = opt.shots;
  if (given("--eta")) {
    if (opt.eta <= 0.0)
      throw shiftrule::SchemaError("eta", "learning rate must be positive");
    cfg.learning_rate = opt.eta;
  }
  if (given("--iterations")) {
    if (opt.iterations == 0)
      throw shiftrule::SchemaError("iterations", "must be at least 1");
    cfg.iterations = opt.iterations;
  }
  if (given("--direction"))
    cfg.direction = (opt.direction == "max")
                        ? shiftrule::Direction::maximize
                        : shiftrule::Direction::minimize;
  if (given("--seed")) cfg.estimator.seed = opt.seed;
  if (given("--epsilon")) {
    if (opt.epsilon <= 0.0)
      throw shiftrule::SchemaError("epsilon", "must be positive");
    cfg.estimator.epsilon = opt.epsilon;
  }
  if (given("--threads")) cfg.estimator.threads = opt.threads;
  if (given("--quad")) cfg.quad_points = opt.quad_points;
  if (given("--natural-gradient")) cfg.natural_gradient = true;
  if (given("--metric"))
    cfg.metric_kind = (opt.metric_kind == "diagonal")
                          ? shiftrule::MetricKind::diagonal
                          : shiftrule::MetricKind::full;
  if (given("--metric-reg")) {
    if (opt.metric_regularizer < 0.0)
      throw shiftrule::SchemaError("metric-reg", "must be non-negative");
    cfg.metric_regularizer = opt.metric_regularizer;
  }

  Eigen::VectorXd theta0;
  if (given("--theta0")) {
    theta0 = parse_theta_list(opt.theta0_text, c.parameter_count(), "theta0");
  } else if (run.theta0) {
    theta0 = *run.theta0;
    if (theta0.size() != static_cast<Eigen::Index>(c.parameter_count()))
      throw shiftrule::SchemaError(
          "theta0", "dimension " + std::to_string(theta0.size()) +
                        " does not match the circuit's " +
                        std::to_string(c.parameter_count()) + " parameters");
  } else {
    theta0 = Eigen::VectorXd::Zero(
        static_cast<Eigen::Index>(c.parameter_count()));
  }

  const shiftrule::OptimizerState state =
      run.adam ? shiftrule::adam_run(c, theta0, cfg)
               : shiftrule::sgd_run(c, theta0, cfg);

  shiftrule::CsvTable table;
  table.config = {
      {"command", "optimize"},
      {"estimator", shiftrule::gradient_method_name(cfg.method)},
      {"optimizer", run.adam ? "adam" : "sgd"},
      {"shots", cfg.estimator.shots},
      {"seed", cfg.estimator.seed},
      {"epsilon", cfg.estimator.epsilon},
      {"eta", cfg.learning_rate},
      {"iterations", cfg.iterations},
      {"direction",
       cfg.direction == shiftrule::Direction::maximize ? "max" : "min"},
      {"natural_gradient", cfg.natural_gradient},
      {"metric",
       cfg.metric_kind == shiftrule::MetricKind::diagonal ? "diagonal"
                                                          : "full"},
      {"metric_reg", cfg.metric_regularizer},
      {"quad_points", cfg.quad_points},
  };
  table.columns.push_back("iteration");
  for (std::size_t p = 0; p < c.parameter_count(); ++p)
    table.columns.push_back("theta" + std::to_string(p));
  table.columns.push_back("c_estimate");
  for (std::size_t i = 0; i < state.history.size(); ++i) {
    std::vector<double> row;
    row.push_back(static_cast<double>(i));
    for (Eigen::Index p = 0; p < state.history[i].theta.size(); ++p)
      row.push_back(state.history[i].theta[p]);
    row.push_back(state.history[i].value);
    table.rows.push_back(std::move(row));
  }
  emit_csv(table, opt.out_path);
  return 0;
}

// ---------------------------------------------------------------------------
// metric

struct MetricOptions {
  std::string circuit_path;
  std::string theta_text;
  std::string kind = "full";
  std::size_t quad_points = 32;
  long long row_gate = -1;
  long long col_gate = -1;
  std::string row_pauli;
  std::string col_pauli;
  std::size_t shots = 1000;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::string out_path;
};

int run_metric(const MetricOptions& opt) {
  const shiftrule::CircuitDocument doc =
      shiftrule::load_circuit_file(opt.circuit_path);
  const shiftrule::ParametricCircuit& c = require_unitary(doc, "metric");
  const Eigen::VectorXd theta =
      parse_theta_list(opt.theta_text, c.parameter_count(), "theta");

  const bool element_mode = opt.row_gate >= 0 || opt.col_gate >= 0 ||
                            !opt.row_pauli.empty() || !opt.col_pauli.empty();
  if (element_mode) {
    if (opt.row_gate < 0 || opt.col_gate < 0 || opt.row_pauli.empty() ||
        opt.col_pauli.empty())
      throw shiftrule::SchemaError(
          "row-gate", "sampled-element mode needs all of --row-gate, "
                      "--row-pauli, --col-gate, --col-pauli");
    shiftrule::MetricIndex row{
        static_cast<std::size_t>(opt.row_gate),
        parse_word_flag(opt.row_pauli, c.qubit_count(), "row-pauli")};
    shiftrule::MetricIndex col{
        static_cast<std::size_t>(opt.col_gate),
        parse_word_flag(opt.col_pauli, c.qubit_count(), "col-pauli")};
    shiftrule::EstimatorConfig cfg;
    cfg.shots = opt.shots;
    cfg.seed = opt.seed;
    cfg.threads = opt.threads;
    const shiftrule::MetricEstimate est =
        shiftrule::metric_element_sampled(c, theta, row, col, cfg);
    emit_json(shiftrule::to_json(est), opt.out_path);
    return 0;
  }

  json out;
  out["kind"] = opt.kind;
  out["quad_points"] = opt.quad_points;
  if (opt.kind == "diagonal") {
    const Eigen::VectorXd diag =
        shiftrule::metric_diagonal_expected(c, theta, opt.quad_points);
    std::vector<double> values(diag.data(), diag.data() + diag.size());
    out["diagonal"] = values;
  } else {
    const Eigen::MatrixXd f =
        shiftrule::metric_tensor_expected(c, theta, opt.quad_points);
    std::vector<std::vector<double>> rows;
    for (Eigen::Index i = 0; i < f.rows(); ++i) {
      std::vector<double> row;
      for (Eigen::Index j = 0; j < f.cols(); ++j) row.push_back(f(i, j));
      rows.push_back(std::move(row));
    }
    out["metric"] = rows;
  }
  emit_json(out, opt.out_path);
  return 0;
}

// ---------------------------------------------------------------------------
// experiment

struct ExperimentOptions {
  std::string name;
  std::size_t shots = 0;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::size_t grid_points = 41;
  double epsilon = 1e-2;
  std::string out_path;
  // custom sweep
  std::string circuit_path;
  std::size_t param = 0;
  std::string estimator = "spsr";
  double lo = 0.0;
  double hi = kPi;
  std::string theta0_text;
};

int run_experiment_command(const ExperimentOptions& opt) {
  shiftrule::ExperimentSpec spec;
  spec.name = opt.name;
  spec.shots = opt.shots;
  spec.seed = opt.seed;
  spec.threads = opt.threads;
  spec.grid_points = opt.grid_points;
  spec.epsilon = opt.epsilon;
  if (spec.grid_points < 2)
    throw shiftrule::SchemaError("grid-points", "must be at least 2");

  shiftrule::CsvTable table;
  if (opt.name == "custom") {
    if (opt.circuit_path.empty())
      throw shiftrule::SchemaError(
          "circuit", "the custom experiment requires --circuit");
    const shiftrule::CircuitDocument doc =
        shiftrule::load_circuit_file(opt.circuit_path);
    const shiftrule::ParametricCircuit& c =
        require_unitary(doc, "the custom experiment");
    shiftrule::CustomSweep sweep;
    sweep.param = opt.param;
    sweep.method = shiftrule::parse_gradient_method(opt.estimator,
                                                    "estimator");
    sweep.lo = opt.lo;
    sweep.hi = opt.hi;
    sweep.theta0 =
        parse_theta_list(opt.theta0_text, c.parameter_count(), "theta0");
    if (sweep.param >= c.parameter_count())
      throw shiftrule::SchemaError(
          "param", "parameter index out of range; the circuit has " +
                       std::to_string(c.parameter_count()) + " parameters");
    table = shiftrule::run_custom(spec, c, sweep);
  } else {
    table = shiftrule::run_experiment(spec);
  }
  emit_csv(table, opt.out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Parameter-shift and stochastic parameter-shift gradient toolkit: "
      "gradients, metric tensors, optimizer loops, and named sweep "
      "experiments over a JSON circuit schema."};
  app.require_subcommand(1);

  GradOptions grad;
  CLI::App* grad_cmd = app.add_subcommand(
      "grad", "Estimate one gradient component of a circuit expectation");
  grad_cmd->add_option("--circuit", grad.circuit_path,
                       "Circuit JSON file")->required();
  CLI::Option* grad_theta =
      grad_cmd->add_option("--theta", grad.theta_text,
                           "Comma-separated parameter values (default: 0)");
  CLI::Option* grad_param = grad_cmd->add_option(
      "--param", grad.param, "Parameter index to differentiate (default 0)");
  CLI::Option* grad_estimator =
      grad_cmd->add_option("--estimator", grad.estimator,
                           "exact | psr | spsr | approx_spsr | "
                           "doubly_stochastic | single_measurement")
          ->default_val("spsr");
  grad_cmd->add_option("--wrt", grad.wrt,
                       "Differentiate theta or a noisy gate's tau")
      ->check(CLI::IsMember({"theta", "tau"}))
      ->default_val("theta");
  grad_cmd->add_option("--shots", grad.shots, "Sample count")
      ->default_val(1000);
  grad_cmd->add_option("--seed", grad.seed, "RNG seed")->default_val(0);
  grad_cmd->add_option("--epsilon", grad.epsilon,
                       "Approximate-pulse strength")
      ->default_val(1e-2);
  grad_cmd->add_option("--threads", grad.threads,
                       "Worker threads (0 = SHIFTRULE_THREADS or hardware)")
      ->default_val(0);
  grad_cmd->add_option("--quad", grad.quad_points,
                       "Quadrature nodes for the exact method")
      ->default_val(64);
  grad_cmd->add_option("--out", grad.out_path,
                       "Output JSON path (default: stdout)");

  OptimizeOptions optimize;
  CLI::App* optimize_cmd = app.add_subcommand(
      "optimize", "Run a gradient-descent/ascent loop and emit the "
                  "trajectory as CSV");
  optimize_cmd->add_option("--circuit", optimize.circuit_path,
                           "Circuit JSON file")->required();
  optimize_cmd->add_option("--config", optimize.config_path,
                           "Run-config JSON file");
  optimize_cmd->add_option("--estimator", optimize.estimator,
                           "Gradient estimator (overrides config)");
  optimize_cmd->add_option("--optimizer", optimize.optimizer, "sgd | adam")
      ->check(CLI::IsMember({"sgd", "adam"}));
  optimize_cmd->add_option("--shots", optimize.shots,
                           "Shots per gradient component");
  optimize_cmd->add_option("--eta", optimize.eta, "Learning rate");
  optimize_cmd->add_option("--iterations", optimize.iterations,
                           "Iteration count");
  optimize_cmd->add_option("--direction", optimize.direction, "min | max")
      ->check(CLI::IsMember({"min", "max"}));
  optimize_cmd->add_option("--seed", optimize.seed, "RNG seed");
  optimize_cmd->add_option("--epsilon", optimize.epsilon,
                           "Approximate-pulse strength");
  optimize_cmd->add_option("--threads", optimize.threads,
                           "Worker threads (0 = SHIFTRULE_THREADS or "
                           "hardware)");
  optimize_cmd->add_option("--quad", optimize.quad_points,
                           "Quadrature nodes for exact gradients");
  optimize_cmd->add_flag("--natural-gradient", optimize.natural_gradient,
                         "Precondition steps with the regularized metric");
  optimize_cmd->add_option("--metric", optimize.metric_kind,
                           "full | diagonal")
      ->check(CLI::IsMember({"full", "diagonal"}));
  optimize_cmd->add_option("--metric-reg", optimize.metric_regularizer,
                           "Metric regularizer");
  optimize_cmd->add_option("--theta0", optimize.theta0_text,
                           "Comma-separated starting point");
  optimize_cmd->add_option("--out", optimize.out_path,
                           "Output CSV path (default: stdout)");
  optimize.cmd = optimize_cmd;

  MetricOptions metric;
  CLI::App* metric_cmd = app.add_subcommand(
      "metric", "Evaluate the gate-coefficient metric tensor");
  metric_cmd->add_option("--circuit", metric.circuit_path,
                         "Circuit JSON file")->required();
  metric_cmd->add_option("--theta", metric.theta_text,
                         "Comma-separated parameter values (default: 0)");
  metric_cmd->add_option("--kind", metric.kind, "full | diagonal")
      ->check(CLI::IsMember({"full", "diagonal"}))
      ->default_val("full");
  metric_cmd->add_option("--quad", metric.quad_points,
                         "Quadrature nodes per integral axis")
      ->default_val(32);
  metric_cmd->add_option("--row-gate", metric.row_gate,
                         "Sampled element: row gate index");
  metric_cmd->add_option("--row-pauli", metric.row_pauli,
                         "Sampled element: row Pauli word");
  metric_cmd->add_option("--col-gate", metric.col_gate,
                         "Sampled element: column gate index");
  metric_cmd->add_option("--col-pauli", metric.col_pauli,
                         "Sampled element: column Pauli word");
  metric_cmd->add_option("--shots", metric.shots,
                         "Sample count (sampled element)")
      ->default_val(1000);
  metric_cmd->add_option("--seed", metric.seed, "RNG seed")->default_val(0);
  metric_cmd->add_option("--threads", metric.threads,
                         "Worker threads (0 = SHIFTRULE_THREADS or "
                         "hardware)")
      ->default_val(0);
  metric_cmd->add_option("--out", metric.out_path,
                         "Output JSON path (default: stdout)");

  ExperimentOptions experiment;
  CLI::App* experiment_cmd = app.add_subcommand(
      "experiment", "Run a named sweep experiment and emit CSV");
  experiment_cmd
      ->add_option("name", experiment.name,
                   "fig2a | fig2b | fig5 | fig6a | fig6b | fig7 | custom")
      ->required()
      ->check(CLI::IsMember(
          {"fig2a", "fig2b", "fig5", "fig6a", "fig6b", "fig7", "custom"}));
  experiment_cmd->add_option("--shots", experiment.shots,
                             "Shots per estimate (0 = experiment default)")
      ->default_val(0);
  experiment_cmd->add_option("--seed", experiment.seed, "RNG seed")
      ->default_val(0);
  experiment_cmd->add_option("--threads", experiment.threads,
                             "Worker threads (0 = SHIFTRULE_THREADS or "
                             "hardware); never changes output bytes")
      ->default_val(0);
  experiment_cmd->add_option("--grid-points", experiment.grid_points,
                             "Sweep resolution")
      ->default_val(41);
  experiment_cmd->add_option("--epsilon", experiment.epsilon,
                             "Approximate-pulse strength")
      ->default_val(1e-2);
  experiment_cmd->add_option("--out", experiment.out_path,
                             "Output CSV path (default: stdout)");
  experiment_cmd->add_option("--circuit", experiment.circuit_path,
                             "custom: circuit JSON file");
  experiment_cmd->add_option("--param", experiment.param,
                             "custom: parameter index to sweep")
      ->default_val(0);
  experiment_cmd->add_option("--estimator", experiment.estimator,
                             "custom: gradient estimator")
      ->default_val("spsr");
  experiment_cmd->add_option("--lo", experiment.lo, "custom: sweep start")
      ->default_val(0.0);
  experiment_cmd->add_option("--hi", experiment.hi, "custom: sweep end")
      ->default_val(kPi);
  experiment_cmd->add_option("--theta0", experiment.theta0_text,
                             "custom: comma-separated base point");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  grad.param_given = grad_param->count() > 0;
  grad.theta_given = grad_theta->count() > 0;
  grad.estimator_given = grad_estimator->count() > 0;

  try {
    if (grad_cmd->parsed()) return run_grad(grad);
    if (optimize_cmd->parsed()) return run_optimize(optimize);
    if (metric_cmd->parsed()) return run_metric(metric);
    if (experiment_cmd->parsed()) return run_experiment_command(experiment);
  } catch (const shiftrule::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const shiftrule::PreconditionError& e) {
    std::cerr << "precondition error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
