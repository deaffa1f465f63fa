#include <sys/wait.h>
#include <unistd.h>

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("shiftrule_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path path = scratch_dir() / name;
  std::ofstream out(path, std::ios::binary);
  out << text;
  return path;
}

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path errfile =
      scratch_dir() / ("stderr_" + std::to_string(counter++) + ".txt");
  const std::string cmd = std::string(SHIFTRULE_CLI_PATH) + " " + args +
                          " 2>" + errfile.string();
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult result;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0)
    result.out.append(buf, n);
  const int status = ::pclose(pipe);
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.err = slurp(errfile);
  fs::remove(errfile);
  return result;
}

std::string single_rotation_json() {
  return R"json({
    "qubits": 1,
    "gates": [{"params": [{"pauli": "X", "expr": "linear(0)"}]}],
    "observable": {"Z": 1.0}
  })json";
}

std::string drift_rotation_json() {
  return R"json({
    "qubits": 1,
    "gates": [{"generator": {"Z": 0.2},
               "params": [{"pauli": "X", "expr": "linear(0)"}]}],
    "observable": {"Z": 1.0}
  })json";
}

std::string noisy_json() {
  return R"({
    "qubits": 1,
    "gates": [
      {"generator": {"X": 0.3}},
      {"register_h": {"Z": 1.0}, "coupling_h": {"XX": 0.7},
       "env_qubits": 1, "tau": 1.0, "theta": 0.8, "label": "drive"}
    ],
    "observable": {"Z": 1.0}
  })";
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("grad: standard rule on a drift-free rotation") {
  const fs::path circuit = write_file("single.json", single_rotation_json());
  const CliResult r = run_cli("grad --circuit " + circuit.string() +
                              " --theta 0.3 --estimator psr --shots 10000"
                              " --seed 1");
  CAPTURE(r.err);
  REQUIRE(r.code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j.at("estimator") == "psr");
  CHECK(j.at("shots") == 10000);
  CHECK(j.at("param") == 0);
  const double mean = j.at("mean");
  const double se = j.at("standard_error");
  CHECK(std::abs(mean - (-1.1292849467900707)) < 4 * se + 1e-12);
}

TEST_CASE("grad: exact method and output redirection") {
  const fs::path circuit = write_file("single2.json", single_rotation_json());
  const fs::path out = scratch_dir() / "grad.json";
  const CliResult r = run_cli("grad --circuit " + circuit.string() +
                              " --theta 0.3 --estimator exact --out " +
                              out.string());
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  const nlohmann::json j = nlohmann::json::parse(slurp(out));
  CHECK(std::abs(double(j.at("mean")) - (-1.1292849467900707)) < 1e-9);
  CHECK(j.at("shots") == 0);
}

TEST_CASE("grad: schema violations exit 2 with diagnostics") {
  const fs::path bad = write_file("bad.json", R"({
    "qubits": 1,
    "gates": [{"generator": {"XQ": 1.0}}],
    "observable": {"Z": 1.0}
  })");
  const CliResult r =
      run_cli("grad --circuit " + bad.string() + " --estimator exact");
  CHECK(r.code == 2);
  CHECK(r.err.find("schema error") != std::string::npos);
  CHECK(r.err.find("XQ") != std::string::npos);

  const CliResult missing = run_cli("grad --circuit /nonexistent.json");
  CHECK(missing.code == 2);
  CHECK(missing.err.find("cannot open file") != std::string::npos);
}

TEST_CASE("grad: estimator preconditions exit 3") {
  const fs::path circuit = write_file("drift.json", drift_rotation_json());
  const CliResult r = run_cli("grad --circuit " + circuit.string() +
                              " --theta 0.3 --estimator psr --shots 100");
  CHECK(r.code == 3);
  CHECK(r.err.find("precondition error") != std::string::npos);
  CHECK(r.err.find("drift-free") != std::string::npos);
}

TEST_CASE("grad: noisy circuits expose the channel knob") {
  const fs::path circuit = write_file("noisy.json", noisy_json());

  const CliResult ok = run_cli("grad --circuit " + circuit.string() +
                               " --shots 400 --seed 2");
  CAPTURE(ok.err);
  REQUIRE(ok.code == 0);
  const nlohmann::json j = nlohmann::json::parse(ok.out);
  CHECK(j.at("estimator") == "noisy_spsr_theta");
  CHECK(j.at("wrt") == "theta");
  CHECK(j.at("gate") == "drive");

  // The evolution time is not a controllable parameter: the request is
  // refused with a machine-readable explanation and a simulator-only oracle.
  const CliResult tau =
      run_cli("grad --circuit " + circuit.string() + " --wrt tau");
  CHECK(tau.code == 3);
  CHECK(tau.err.find("precondition error") != std::string::npos);
  const nlohmann::json refusal = nlohmann::json::parse(tau.out);
  CHECK(refusal.at("refused") == true);
  CHECK(refusal.at("gate") == "drive");
  CHECK(std::isfinite(double(refusal.at("tau_fd_simulator_oracle"))));
  const std::string reason = refusal.at("reason");
  CHECK(reason.find("environment") != std::string::npos);

  // Unitary-circuit knobs do not exist on noisy circuits.
  const CliResult param =
      run_cli("grad --circuit " + circuit.string() + " --param 0");
  CHECK(param.code == 2);

  // And vice versa: tau only exists on noisy circuits.
  const fs::path unitary = write_file("single3.json", single_rotation_json());
  const CliResult wrongwrt =
      run_cli("grad --circuit " + unitary.string() + " --wrt tau");
  CHECK(wrongwrt.code == 2);
}

TEST_CASE("experiment: named sweeps write csv to stdout") {
  const CliResult r =
      run_cli("experiment fig2a --grid-points 3 --shots 20 --seed 4");
  CAPTURE(r.err);
  REQUIRE(r.code == 0);
  REQUIRE(r.out.rfind("# {", 0) == 0);
  const std::vector<std::string> lines = split_lines(r.out);
  REQUIRE(lines.size() == 2 + 3 * 3);
  CHECK(lines[1] ==
        "b,t,fd_value,spsr_mean,spsr_sem,approx_mean,approx_sem");

  const CliResult threaded =
      run_cli("experiment fig2a --grid-points 3 --shots 20 --seed 4"
              " --threads 2");
  REQUIRE(threaded.code == 0);
  CHECK(threaded.out == r.out);
}

TEST_CASE("experiment: custom sweeps take a circuit file") {
  const fs::path circuit = write_file("single4.json", single_rotation_json());
  const CliResult r = run_cli("experiment custom --circuit " +
                              circuit.string() +
                              " --grid-points 3 --estimator exact");
  CAPTURE(r.err);
  REQUIRE(r.code == 0);
  REQUIRE(r.out.rfind("# {", 0) == 0);
  const std::vector<std::string> lines = split_lines(r.out);
  CHECK(lines[0].find("\"custom\"") != std::string::npos);
  CHECK(lines[1] == "theta,fd_value,mean,sem,std");
  CHECK(lines.size() == 2 + 3);

  const CliResult unknown = run_cli("experiment fig9");
  CHECK(unknown.code != 0);
}

TEST_CASE("optimize: descends the objective and honors overrides") {
  const fs::path circuit = write_file("single5.json", single_rotation_json());
  const CliResult r = run_cli("optimize --circuit " + circuit.string() +
                              " --estimator exact --iterations 30"
                              " --eta 0.1 --theta0 0.3");
  CAPTURE(r.err);
  REQUIRE(r.code == 0);
  const std::vector<std::string> lines = split_lines(r.out);
  REQUIRE(lines.size() == 2 + 31);
  CHECK(lines[1] == "iteration,theta0,c_estimate");
  const nlohmann::json config = nlohmann::json::parse(lines[0].substr(2));
  CHECK(config.at("iterations") == 30);
  CHECK(config.at("estimator") == "exact");

  auto last_field = [](const std::string& line) {
    return std::stod(line.substr(line.rfind(',') + 1));
  };
  CHECK(last_field(lines.back()) < last_field(lines[2]));

  // Config file supplies values; explicit flags win over it.
  const fs::path cfg = write_file(
      "run.json", R"({"optimizer": "adam", "iterations": 9, "eta": 0.05})");
  const CliResult merged =
      run_cli("optimize --circuit " + circuit.string() + " --config " +
              cfg.string() + " --estimator exact --iterations 3");
  CAPTURE(merged.err);
  REQUIRE(merged.code == 0);
  const std::vector<std::string> mlines = split_lines(merged.out);
  CHECK(mlines.size() == 2 + 4);
  const nlohmann::json mconfig = nlohmann::json::parse(mlines[0].substr(2));
  CHECK(mconfig.at("iterations") == 3);
  CHECK(mconfig.at("optimizer") == "adam");
}

TEST_CASE("metric: full tensor and sampled elements") {
  const fs::path circuit = write_file("single6.json", single_rotation_json());
  const CliResult full = run_cli("metric --circuit " + circuit.string() +
                                 " --theta 0.3 --kind full");
  CAPTURE(full.err);
  REQUIRE(full.code == 0);
  const nlohmann::json j = nlohmann::json::parse(full.out);
  CHECK(j.at("kind") == "full");
  CHECK(std::abs(double(j.at("metric")[0][0]) - 2.0) < 1e-8);

  const CliResult elem = run_cli(
      "metric --circuit " + circuit.string() +
      " --theta 0.3 --row-gate 0 --row-pauli X --col-gate 0 --col-pauli X"
      " --shots 500 --seed 5");
  CAPTURE(elem.err);
  REQUIRE(elem.code == 0);
  const nlohmann::json ej = nlohmann::json::parse(elem.out);
  CHECK(ej.at("shots") == 500);
  CHECK(std::abs(double(ej.at("mean")) - 2.0) <
        5 * double(ej.at("standard_error")) + 1e-12);

  // All four element flags are required together.
  const CliResult partial = run_cli("metric --circuit " + circuit.string() +
                                    " --theta 0.3 --row-gate 0");
  CHECK(partial.code == 2);
}
