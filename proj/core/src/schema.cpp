// Copyright (c) 2026 The shiftrule developers.
// Licensed under the MIT License; see LICENSE for details.

#include "shiftrule/schema.hpp"

#include <cmath>
#include <cstddef>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace shiftrule {

namespace {

using nlohmann::json;

std::string location_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    throw SchemaError(location_of(text, byte), e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError(path, "cannot open file");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void expect_object(const json& j, const std::string& field) {
  if (!j.is_object())
    throw SchemaError(field, "expected a JSON object, got " +
                                 std::string(j.type_name()));
}

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& field) {
  for (const auto& [key, value] : j.items())
    if (!allowed.contains(key))
      throw SchemaError(field, "unknown field \"" + key + "\"");
}

const json* find(const json& j, const char* key) {
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

const json& require(const json& j, const char* key, const std::string& field) {
  const json* v = find(j, key);
  if (!v) throw SchemaError(field, std::string("missing field \"") + key + "\"");
  return *v;
}

double as_number(const json& j, const std::string& field) {
  if (!j.is_number())
    throw SchemaError(field,
                      "expected a number, got " + std::string(j.type_name()));
  return j.get<double>();
}

std::size_t as_count(const json& j, const std::string& field) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    throw SchemaError(field, "expected a non-negative integer, got " +
                                 (j.is_number() ? j.dump()
                                                : std::string(j.type_name())));
  return static_cast<std::size_t>(j.get<long long>());
}

std::string as_string(const json& j, const std::string& field) {
  if (!j.is_string())
    throw SchemaError(field,
                      "expected a string, got " + std::string(j.type_name()));
  return j.get<std::string>();
}

bool as_bool(const json& j, const std::string& field) {
  if (!j.is_boolean())
    throw SchemaError(field,
                      "expected a boolean, got " + std::string(j.type_name()));
  return j.get<bool>();
}

PauliString parse_word(const std::string& key, std::size_t qubits,
                       const std::string& field) {
  PauliString word;
  try {
    word = PauliString::parse(key);
  } catch (const std::invalid_argument&) {
    throw SchemaError(field, "invalid Pauli word \"" + key +
                                 "\" (allowed characters: I, X, Y, Z)");
  }
  if (word.qubit_count() != qubits)
    throw SchemaError(field, "Pauli word \"" + key + "\" has length " +
                                 std::to_string(word.qubit_count()) +
                                 ", expected " + std::to_string(qubits));
  return word;
}

// ---- built-in parameter expressions ------------------------------------

struct ParamExpr {
  enum class Kind { linear, product } kind = Kind::linear;
  std::size_t p = 0;
  std::size_t q = 0;
  double scale = 1.0;
};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

std::size_t parse_slot(const std::string& token, const std::string& field) {
  if (token.empty() ||
      token.find_first_not_of("0123456789") != std::string::npos)
    throw SchemaError(field, "expected a parameter index, got \"" + token +
                                 "\"");
  return static_cast<std::size_t>(std::stoull(token));
}

double parse_scale(const std::string& token, const std::string& field) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &used);
  } catch (const std::exception&) {
    throw SchemaError(field, "expected a numeric scale, got \"" + token +
                                 "\"");
  }
  if (used != token.size())
    throw SchemaError(field, "expected a numeric scale, got \"" + token +
                                 "\"");
  return value;
}

ParamExpr parse_expr(const std::string& text, const std::string& field) {
  const auto open = text.find('(');
  const auto close = text.rfind(')');
  if (open == std::string::npos || close == std::string::npos ||
      close < open || !trim(text.substr(close + 1)).empty())
    throw SchemaError(field, "malformed expression \"" + text +
                                 "\"; expected name(args)");
  const std::string name = trim(text.substr(0, open));
  std::vector<std::string> args;
  std::string inner = text.substr(open + 1, close - open - 1);
  std::size_t start = 0;
  while (true) {
    const auto comma = inner.find(',', start);
    args.push_back(trim(inner.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (args.size() == 1 && args[0].empty()) args.clear();

  ParamExpr expr;
  if (name == "linear") {
    expr.kind = ParamExpr::Kind::linear;
    if (args.size() < 1 || args.size() > 2)
      throw SchemaError(field, "linear takes 1 or 2 arguments: linear(p[, "
                               "scale])");
    expr.p = parse_slot(args[0], field);
    if (args.size() == 2) expr.scale = parse_scale(args[1], field);
  } else if (name == "product") {
    expr.kind = ParamExpr::Kind::product;
    if (args.size() < 2 || args.size() > 3)
      throw SchemaError(field, "product takes 2 or 3 arguments: product(p, "
                               "q[, scale])");
    expr.p = parse_slot(args[0], field);
    expr.q = parse_slot(args[1], field);
    if (expr.p == expr.q)
      throw SchemaError(field, "product parameter indices must be distinct");
    if (args.size() == 3) expr.scale = parse_scale(args[2], field);
  } else {
    throw SchemaError(field, "unknown expression \"" + name +
                                 "\"; built-ins are linear and product");
  }
  return expr;
}

std::size_t max_slot(const ParamExpr& e) {
  return e.kind == ParamExpr::Kind::product ? std::max(e.p, e.q) : e.p;
}

// ---- circuit pieces ------------------------------------------------------

StateVector parse_initial(const json* j, std::size_t qubits,
                          const std::string& field) {
  if (!j || (j->is_string() && j->get<std::string>() == "zeros"))
    return StateVector::zero_state(qubits);
  if (j->is_string())
    throw SchemaError(field, "expected \"zeros\" or an amplitude array, got "
                             "\"" +
                                 j->get<std::string>() + "\"");
  if (!j->is_array())
    throw SchemaError(field, "expected \"zeros\" or an amplitude array");
  const std::size_t dim = std::size_t{1} << qubits;
  if (j->size() != dim)
    throw SchemaError(field, "expected " + std::to_string(dim) +
                                 " amplitudes, got " +
                                 std::to_string(j->size()));
  Eigen::VectorXcd amps(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    const json& entry = (*j)[i];
    const std::string at = field + "[" + std::to_string(i) + "]";
    if (!entry.is_array() || entry.size() != 2)
      throw SchemaError(at, "expected an amplitude pair [re, im]");
    amps[static_cast<Eigen::Index>(i)] = {as_number(entry[0], at),
                                          as_number(entry[1], at)};
  }
  const double norm = amps.norm();
  if (std::abs(norm - 1.0) > 1e-6)
    throw SchemaError(field, "amplitudes are not normalized (norm = " +
                                 std::to_string(norm) + ")");
  amps /= norm;
  return StateVector(qubits, std::move(amps));
}

struct ParsedParam {
  PauliString axis;
  ParamExpr expr;
};

NoisyGateSpec parse_noisy_gate(const json& j, std::size_t qubits,
                               const std::string& field) {
  reject_unknown(
      j, {"label", "register_h", "coupling_h", "env_qubits", "tau", "theta"},
      field);
  const std::size_t env =
      as_count(require(j, "env_qubits", field), field + ".env_qubits");
  if (env < 1 || env > 2)
    throw SchemaError(field + ".env_qubits",
                      "environment must have 1 or 2 qubits");
  PauliSum reg = parse_pauli_sum(require(j, "register_h", field), qubits,
                                 field + ".register_h");
  PauliSum coupling = parse_pauli_sum(require(j, "coupling_h", field),
                                      qubits + env, field + ".coupling_h");
  const double tau = as_number(require(j, "tau", field), field + ".tau");
  if (tau <= 0.0)
    throw SchemaError(field + ".tau", "control time tau must be > 0");
  const double theta =
      as_number(require(j, "theta", field), field + ".theta");
  std::string label = "noisy";
  if (const json* l = find(j, "label")) label = as_string(*l, field + ".label");
  NoisyGateSpec spec = make_noisy_gate(std::move(label), std::move(reg),
                                       std::move(coupling), env, tau, theta);
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(field, e.what());
  }
  return spec;
}

void bind_expr(ParametricCircuit& c, std::size_t gate, const ParsedParam& pp,
               const std::string& field) {
  const ParamExpr& e = pp.expr;
  std::vector<std::pair<std::size_t, ValueFn>> partials;
  ValueFn value;
  if (e.kind == ParamExpr::Kind::linear) {
    const double scale = e.scale;
    const std::size_t p = e.p;
    value = [scale, p](const Eigen::VectorXd& th) { return scale * th[p]; };
    partials.emplace_back(
        p, [scale](const Eigen::VectorXd&) { return scale; });
  } else {
    const double scale = e.scale;
    const std::size_t p = e.p, q = e.q;
    value = [scale, p, q](const Eigen::VectorXd& th) {
      return scale * th[p] * th[q];
    };
    partials.emplace_back(
        p, [scale, q](const Eigen::VectorXd& th) { return scale * th[q]; });
    partials.emplace_back(
        q, [scale, p](const Eigen::VectorXd& th) { return scale * th[p]; });
  }
  try {
    c.bind(gate, pp.axis, std::move(value), std::move(partials));
  } catch (const std::invalid_argument& e2) {
    throw SchemaError(field, e2.what());
  }
}

PulseModel parse_pulse_model(const json& j, std::size_t qubits,
                             const std::string& field) {
  expect_object(j, field);
  reject_unknown(
      j, {"kind", "steps", "horizon", "frequencies", "drift", "controls"},
      field);
  PulseModel model;
  const std::string kind =
      as_string(require(j, "kind", field), field + ".kind");
  if (kind == "piecewise") {
    model.kind = PulseModel::Kind::piecewise;
  } else if (kind == "fourier") {
    model.kind = PulseModel::Kind::fourier;
  } else {
    throw SchemaError(field + ".kind",
                      "expected \"piecewise\" or \"fourier\", got \"" + kind +
                          "\"");
  }
  model.steps = as_count(require(j, "steps", field), field + ".steps");
  if (model.steps == 0)
    throw SchemaError(field + ".steps", "steps must be >= 1");
  model.horizon =
      as_number(require(j, "horizon", field), field + ".horizon");
  if (model.horizon <= 0.0)
    throw SchemaError(field + ".horizon", "horizon must be > 0");
  if (const json* f = find(j, "frequencies")) {
    if (model.kind == PulseModel::Kind::piecewise)
      throw SchemaError(field + ".frequencies",
                        "frequencies apply only to the fourier kind");
    if (!f->is_array() || f->empty())
      throw SchemaError(field + ".frequencies",
                        "expected a non-empty array of numbers");
    for (std::size_t m = 0; m < f->size(); ++m)
      model.frequencies.push_back(as_number(
          (*f)[m], field + ".frequencies[" + std::to_string(m) + "]"));
  } else if (model.kind == PulseModel::Kind::fourier) {
    throw SchemaError(field, "missing field \"frequencies\"");
  }
  model.drift =
      parse_pauli_sum(require(j, "drift", field), qubits, field + ".drift");
  const json& controls = require(j, "controls", field);
  if (!controls.is_array() || controls.empty())
    throw SchemaError(field + ".controls",
                      "expected a non-empty array of Pauli-sum maps");
  for (std::size_t k = 0; k < controls.size(); ++k)
    model.controls.push_back(
        parse_pauli_sum(controls[k], qubits,
                        field + ".controls[" + std::to_string(k) + "]"));
  return model;
}

}  // namespace

PauliSum parse_pauli_sum(const nlohmann::json& j, std::size_t qubits,
                         const std::string& field) {
  expect_object(j, field);
  PauliSum sum(qubits);
  for (const auto& [key, value] : j.items()) {
    const PauliString word = parse_word(key, qubits, field);
    if (!value.is_number())
      throw SchemaError(field, "coefficient of \"" + key +
                                   "\" must be a number, got " +
                                   std::string(value.type_name()));
    sum.add(word, value.get<double>());
  }
  return sum;
}

CircuitDocument parse_circuit_json(const nlohmann::json& j) {
  expect_object(j, "circuit");
  reject_unknown(j,
                 {"qubits", "gates", "pulse_model", "initial", "observable",
                  "parameters"},
                 "circuit");
  const std::size_t qubits =
      as_count(require(j, "qubits", "circuit"), "qubits");
  if (qubits < 1 || qubits > kDenseQubitCap)
    throw SchemaError("qubits", "expected an integer in [1, " +
                                    std::to_string(kDenseQubitCap) +
                                    "] (dense simulation cap)");
  StateVector initial = parse_initial(find(j, "initial"), qubits, "initial");
  PauliSum obs_sum = parse_pauli_sum(require(j, "observable", "circuit"),
                                     qubits, "observable");
  if (obs_sum.is_zero())
    throw SchemaError("observable", "observable must be nonzero");
  ObservablePtr observable = std::make_shared<const ObservableSpec>(obs_sum);

  const json* gates = find(j, "gates");
  const json* pulse = find(j, "pulse_model");
  if ((gates == nullptr) == (pulse == nullptr))
    throw SchemaError("circuit",
                      "provide exactly one of \"gates\" or \"pulse_model\"");

  CircuitDocument doc;
  if (pulse) {
    if (find(j, "parameters"))
      throw SchemaError("parameters",
                        "a pulse model determines its own parameter count");
    const PulseModel model = parse_pulse_model(*pulse, qubits, "pulse_model");
    doc.parameter_count = model.parameter_count();
    doc.unitary = build_control_circuit(model, std::move(initial),
                                        std::move(observable));
    return doc;
  }

  if (!gates->is_array())
    throw SchemaError("gates", "expected an array of gate objects");

  // First pass: parse every entry, find the noisy gate if any, and infer the
  // parameter count from the referenced indices.
  struct GateEntry {
    PauliSum generator{1};
    std::vector<ParsedParam> params;
  };
  std::vector<GateEntry> unitary_gates;
  std::optional<NoisyGateSpec> noisy_gate;
  std::size_t noisy_position = 0;
  bool any_params = false;
  std::size_t max_index = 0;

  for (std::size_t g = 0; g < gates->size(); ++g) {
    const json& gate = (*gates)[g];
    const std::string field = "gates[" + std::to_string(g) + "]";
    expect_object(gate, field);
    if (find(gate, "register_h")) {
      if (noisy_gate)
        throw SchemaError(field, "only one noisy gate is supported");
      noisy_gate = parse_noisy_gate(gate, qubits, field);
      noisy_position = unitary_gates.size();
      continue;
    }
    reject_unknown(gate, {"generator", "params"}, field);
    GateEntry entry{PauliSum(qubits), {}};
    if (const json* gen = find(gate, "generator"))
      entry.generator = parse_pauli_sum(*gen, qubits, field + ".generator");
    if (const json* params = find(gate, "params")) {
      if (!params->is_array())
        throw SchemaError(field + ".params", "expected an array");
      for (std::size_t k = 0; k < params->size(); ++k) {
        const json& pj = (*params)[k];
        const std::string pfield =
            field + ".params[" + std::to_string(k) + "]";
        expect_object(pj, pfield);
        reject_unknown(pj, {"pauli", "expr"}, pfield);
        ParsedParam pp;
        pp.axis = parse_word(
            as_string(require(pj, "pauli", pfield), pfield + ".pauli"),
            qubits, pfield + ".pauli");
        pp.expr = parse_expr(
            as_string(require(pj, "expr", pfield), pfield + ".expr"),
            pfield + ".expr");
        any_params = true;
        max_index = std::max(max_index, max_slot(pp.expr));
        entry.params.push_back(std::move(pp));
      }
    }
    if (entry.generator.is_zero() && entry.params.empty())
      throw SchemaError(field,
                        "gate needs a \"generator\" and/or \"params\"");
    unitary_gates.push_back(std::move(entry));
  }

  std::size_t parameters = any_params ? max_index + 1 : 0;
  if (const json* p = find(j, "parameters")) {
    const std::size_t declared = as_count(*p, "parameters");
    if (declared < parameters)
      throw SchemaError("parameters",
                        "circuit references parameter index " +
                            std::to_string(max_index) + " but declares only " +
                            std::to_string(declared) + " parameters");
    parameters = declared;
  }

  if (noisy_gate) {
    if (any_params)
      throw SchemaError(
          "gates", "parametric gates are not supported alongside a noisy "
                   "gate; the sampled knob is the gate's own theta");
    NoisyCircuit nc{DensityMatrix::pure(initial), {}, std::move(*noisy_gate),
                    {}, std::move(observable)};
    for (std::size_t g = 0; g < unitary_gates.size(); ++g)
      (g < noisy_position ? nc.pre : nc.post)
          .push_back(std::move(unitary_gates[g].generator));
    doc.noisy = std::move(nc);
    return doc;
  }

  ParametricCircuit circuit(std::move(initial), std::move(observable),
                            parameters);
  for (std::size_t g = 0; g < unitary_gates.size(); ++g) {
    const std::size_t gate = circuit.add_gate(unitary_gates[g].generator);
    for (const ParsedParam& pp : unitary_gates[g].params)
      bind_expr(circuit, gate, pp,
                "gates[" + std::to_string(g) + "].params");
  }
  doc.parameter_count = parameters;
  doc.unitary = std::move(circuit);
  return doc;
}

CircuitDocument parse_circuit_text(const std::string& text) {
  return parse_circuit_json(parse_text(text));
}

CircuitDocument load_circuit_file(const std::string& path) {
  return parse_circuit_text(read_file(path));
}

GradientMethod parse_gradient_method(const std::string& name,
                                     const std::string& field) {
  if (name == "exact") return GradientMethod::exact;
  if (name == "psr") return GradientMethod::psr;
  if (name == "spsr") return GradientMethod::spsr;
  if (name == "approx_spsr") return GradientMethod::approx_spsr;
  if (name == "doubly_stochastic") return GradientMethod::doubly_stochastic;
  if (name == "single_measurement") return GradientMethod::single_measurement;
  throw SchemaError(field,
                    "unknown estimator \"" + name +
                        "\"; expected one of exact, psr, spsr, approx_spsr, "
                        "doubly_stochastic, single_measurement");
}

RunSpec parse_run_config_json(const nlohmann::json& j) {
  expect_object(j, "run config");
  reject_unknown(j,
                 {"estimator", "optimizer", "shots", "eta", "iterations",
                  "direction", "seed", "epsilon", "threads", "quad_points",
                  "natural_gradient", "metric", "metric_reg",
                  "metric_quad_points", "beta1", "beta2", "adam_epsilon",
                  "theta0"},
                 "run config");
  RunSpec spec;
  if (const json* v = find(j, "estimator"))
    spec.config.method =
        parse_gradient_method(as_string(*v, "estimator"), "estimator");
  if (const json* v = find(j, "optimizer")) {
    const std::string name = as_string(*v, "optimizer");
    if (name == "sgd") {
      spec.adam = false;
    } else if (name == "adam") {
      spec.adam = true;
    } else {
      throw SchemaError("optimizer",
                        "expected \"sgd\" or \"adam\", got \"" + name + "\"");
    }
  }
  if (const json* v = find(j, "shots")) {
    spec.config.estimator.shots = as_count(*v, "shots");
    if (spec.config.estimator.shots == 0)
      throw SchemaError("shots", "shots must be >= 1");
  }
  if (const json* v = find(j, "eta")) {
    spec.config.learning_rate = as_number(*v, "eta");
    if (spec.config.learning_rate <= 0.0)
      throw SchemaError("eta", "learning rate must be > 0");
  }
  if (const json* v = find(j, "iterations")) {
    spec.config.iterations = as_count(*v, "iterations");
    if (spec.config.iterations == 0)
      throw SchemaError("iterations", "iterations must be >= 1");
  }
  if (const json* v = find(j, "direction")) {
    const std::string name = as_string(*v, "direction");
    if (name == "min") {
      spec.config.direction = Direction::minimize;
    } else if (name == "max") {
      spec.config.direction = Direction::maximize;
    } else {
      throw SchemaError("direction",
                        "expected \"min\" or \"max\", got \"" + name + "\"");
    }
  }
  if (const json* v = find(j, "seed"))
    spec.config.estimator.seed =
        static_cast<std::uint64_t>(as_count(*v, "seed"));
  if (const json* v = find(j, "epsilon")) {
    spec.config.estimator.epsilon = as_number(*v, "epsilon");
    if (spec.config.estimator.epsilon <= 0.0)
      throw SchemaError("epsilon", "epsilon must be > 0");
  }
  if (const json* v = find(j, "threads"))
    spec.config.estimator.threads = as_count(*v, "threads");
  if (const json* v = find(j, "quad_points")) {
    spec.config.quad_points = as_count(*v, "quad_points");
    if (spec.config.quad_points == 0)
      throw SchemaError("quad_points", "quad_points must be >= 1");
  }
  if (const json* v = find(j, "natural_gradient"))
    spec.config.natural_gradient = as_bool(*v, "natural_gradient");
  if (const json* v = find(j, "metric")) {
    const std::string name = as_string(*v, "metric");
    if (name == "full") {
      spec.config.metric_kind = MetricKind::full;
    } else if (name == "diagonal") {
      spec.config.metric_kind = MetricKind::diagonal;
    } else {
      throw SchemaError(
          "metric", "expected \"full\" or \"diagonal\", got \"" + name + "\"");
    }
  }
  if (const json* v = find(j, "metric_reg")) {
    spec.config.metric_regularizer = as_number(*v, "metric_reg");
    if (spec.config.metric_regularizer < 0.0)
      throw SchemaError("metric_reg", "regularizer must be >= 0");
  }
  if (const json* v = find(j, "metric_quad_points")) {
    spec.config.metric_quad_points = as_count(*v, "metric_quad_points");
    if (spec.config.metric_quad_points == 0)
      throw SchemaError("metric_quad_points",
                        "metric_quad_points must be >= 1");
  }
  if (const json* v = find(j, "beta1"))
    spec.config.beta1 = as_number(*v, "beta1");
  if (const json* v = find(j, "beta2"))
    spec.config.beta2 = as_number(*v, "beta2");
  if (const json* v = find(j, "adam_epsilon"))
    spec.config.adam_epsilon = as_number(*v, "adam_epsilon");
  if (const json* v = find(j, "theta0")) {
    if (!v->is_array())
      throw SchemaError("theta0", "expected an array of numbers");
    Eigen::VectorXd theta0(static_cast<Eigen::Index>(v->size()));
    for (std::size_t i = 0; i < v->size(); ++i)
      theta0[static_cast<Eigen::Index>(i)] =
          as_number((*v)[i], "theta0[" + std::to_string(i) + "]");
    spec.theta0 = std::move(theta0);
  }
  return spec;
}

RunSpec parse_run_config_text(const std::string& text) {
  return parse_run_config_json(parse_text(text));
}

RunSpec load_run_config_file(const std::string& path) {
  return parse_run_config_text(read_file(path));
}

nlohmann::json to_json(const GradientEstimate& est) {
  return nlohmann::json{{"mean", est.mean},
                        {"variance", est.sample_variance},
                        {"standard_error", est.standard_error()},
                        {"shots", est.shots},
                        {"seed", est.seed},
                        {"estimator", est.estimator}};
}

nlohmann::json to_json(const MetricEstimate& est) {
  const double se =
      est.shots == 0
          ? 0.0
          : std::sqrt(est.sample_variance / static_cast<double>(est.shots));
  return nlohmann::json{
      {"row", {{"gate", est.row.gate}, {"pauli", est.row.axis.str()}}},
      {"col", {{"gate", est.col.gate}, {"pauli", est.col.axis.str()}}},
      {"mean", est.mean},
      {"variance", est.sample_variance},
      {"standard_error", se},
      {"shots", est.shots},
      {"seed", est.seed}};
}

}  // namespace shiftrule
