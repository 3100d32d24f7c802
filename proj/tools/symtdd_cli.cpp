#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "symtdd/circuit.hpp"
#include "symtdd/simulate.hpp"
#include "symtdd/verify.hpp"

namespace {

using namespace symtdd;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitVerifyFailed = 3;

// Input problems that map to exit code 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Missing files and other environment problems that map to exit code 2.
struct RuntimeFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!std::filesystem::is_regular_file(path) || !in) {
    throw RuntimeFailure("file not found: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Circuit load_circuit(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_circuit(text);
  } catch (const ParseError& e) {
    throw UsageError(path + ":" + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(path + ": " + e.what());
  }
}

std::vector<int> parse_order(const std::string& text) {
  std::vector<int> order;
  if (text.empty()) {
    return order;
  }
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      order.push_back(std::stoi(item, &used));
      if (used != item.size()) {
        throw std::invalid_argument(item);
      }
    } catch (const std::exception&) {
      throw UsageError("--order expects a comma-separated qubit permutation, got '" + text + "'");
    }
  }
  return order;
}

std::vector<std::uint8_t> parse_bits(const std::string& text, std::size_t expected, const std::string& flag) {
  if (text.size() != expected) {
    throw UsageError(flag + " expects " + std::to_string(expected) + " bits, got " + std::to_string(text.size()));
  }
  std::vector<std::uint8_t> bits;
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw UsageError(flag + " accepts only 0 and 1");
    }
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return bits;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw RuntimeFailure("cannot write " + path);
  }
  out << text;
}

nlohmann::json stats_json(const SimulationStats& stats) {
  return {{"schema", 1},
          {"qubits", stats.qubits},
          {"gates_applied", stats.gates_applied},
          {"quantum_nodes", stats.nodes.quantum_nodes},
          {"weight_nodes", stats.nodes.weight_nodes},
          {"total_nodes", stats.nodes.total},
          {"wall_time_ms", stats.wall_time_ms},
          {"cache_hits", stats.cache_hits}};
}

struct SimConfig {
  std::string file;
  std::string dot_path;
  std::string json_path;
  double epsilon = 1e-10;
  bool no_rr3 = false;
  std::string order;
};

int run_sim(const SimConfig& cfg) {
  const Circuit circuit = load_circuit(cfg.file);
  std::vector<int> order = parse_order(cfg.order);
  if (!order.empty()) {
    std::vector<int> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < static_cast<int>(sorted.size()); ++i) {
      if (sorted[i] != i || static_cast<int>(sorted.size()) != circuit.n_qubits) {
        throw UsageError("--order must be a permutation of 0.." + std::to_string(circuit.n_qubits - 1));
      }
    }
  }
  Manager manager(ManagerOptions{cfg.epsilon, std::move(order)});
  SimulationOptions options;
  options.rr3 = !cfg.no_rr3;
  const SimulationResult result = simulate(circuit, manager, options);
  const std::string json = stats_json(result.stats).dump(2) + "\n";
  if (cfg.json_path.empty()) {
    std::cout << json;
  } else {
    write_text(cfg.json_path, json);
  }
  if (!cfg.dot_path.empty()) {
    write_text(cfg.dot_path, manager.to_dot(result.state));
  }
  return kExitOk;
}

struct EvalConfig {
  std::string file;
  std::string qubits;
  std::string symbols;
  double epsilon = 1e-10;
  bool no_rr3 = false;
};

double tidy(double v) { return std::abs(v) < 5e-11 ? 0.0 : v; }

int run_eval(const EvalConfig& cfg) {
  const Circuit circuit = load_circuit(cfg.file);
  const auto qubit_bits = parse_bits(cfg.qubits, static_cast<std::size_t>(circuit.n_qubits), "--qubits");
  const auto symbol_bits = parse_bits(cfg.symbols, circuit.symbols.size(), "--symbols");
  Manager manager(ManagerOptions{cfg.epsilon, {}});
  SimulationOptions options;
  options.rr3 = !cfg.no_rr3;
  const SimulationResult result = simulate(circuit, manager, options);
  std::uint64_t basis = 0;
  for (auto b : qubit_bits) {
    basis = (basis << 1) | b;
  }
  const Complex value = manager.evaluate_state(result.state, basis, circuit.n_qubits, symbol_bits);
  std::printf("%.10f %.10f\n", tidy(value.real()), tidy(value.imag()));
  return kExitOk;
}

struct VerifyConfig {
  std::string which;
  int n = 3;
  int search = 2;
  int iterations = -1;
  std::string sweep;
  int sweep_cap = 64;
  std::string file;
  bool no_rr3 = false;
};

struct SweepRange {
  int first;
  int last;
  int step;
};

SweepRange parse_sweep(const std::string& text) {
  SweepRange r{};
  char c1 = 0;
  char c2 = 0;
  std::istringstream in(text);
  if (!(in >> r.first >> c1 >> r.last >> c2 >> r.step) || c1 != ':' || c2 != ':' || !in.eof() || r.step < 1 ||
      r.first < 1 || r.last < r.first) {
    throw UsageError("--sweep expects FIRST:LAST:STEP with 1 <= FIRST <= LAST and STEP >= 1");
  }
  return r;
}

int run_sweep(const VerifyConfig& cfg) {
  if (cfg.which != "qft" && cfg.which != "bv") {
    throw UsageError("--sweep is available for qft and bv only");
  }
  const SweepRange range = parse_sweep(cfg.sweep);
  bool all_pass = true;
  std::cout << "n,time_ms,total_nodes\n";
  for (int n = range.first; n <= range.last; n += range.step) {
    if (n > cfg.sweep_cap) {
      std::cerr << "skipping n=" << n << " above --sweep-cap " << cfg.sweep_cap << "\n";
      continue;
    }
    const VerificationReport r = cfg.which == "qft" ? verify_qft(n, !cfg.no_rr3) : verify_bv(n, !cfg.no_rr3);
    all_pass = all_pass && r.pass;
    std::cout << n << "," << r.wall_time_ms << "," << r.nodes.total << "\n";
  }
  return all_pass ? kExitOk : kExitVerifyFailed;
}

int run_verify(const VerifyConfig& cfg) {
  if (!cfg.sweep.empty()) {
    return run_sweep(cfg);
  }
  const bool rr3 = !cfg.no_rr3;
  VerificationReport report;
  if (cfg.which == "qft" || cfg.which == "bv") {
    if (cfg.n < 1) {
      throw UsageError("-n must be at least 1");
    }
    report = cfg.which == "qft" ? verify_qft(cfg.n, rr3) : verify_bv(cfg.n, rr3);
  } else if (cfg.which == "grover") {
    if (cfg.search < 2) {
      throw UsageError("--search must be at least 2");
    }
    Manager manager;
    report = grover_success_probability(manager, cfg.search, cfg.iterations, rr3).report;
  } else if (cfg.which == "bitflip") {
    report = verify_bitflip(rr3);
  } else {
    if (cfg.file.empty()) {
      throw UsageError("verify exhaustive needs --file");
    }
    report = exhaustive_check(load_circuit(cfg.file), 1e-9, rr3);
  }
  nlohmann::json j = report.to_json();
  j["schema"] = 1;
  std::cout << j.dump(2) << "\n";
  return report.pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symbolic tensor decision diagram simulator and verifier"};
  app.require_subcommand(1);

  SimConfig sim;
  CLI::App* sim_cmd = app.add_subcommand("sim", "Simulate a circuit file and print statistics as JSON");
  sim_cmd->add_option("file", sim.file, "Circuit file")->required();
  sim_cmd->add_option("--dot", sim.dot_path, "Write the final diagram as DOT");
  sim_cmd->add_option("--json", sim.json_path, "Write statistics here instead of stdout");
  sim_cmd->add_option("--eps", sim.epsilon, "Complex comparison tolerance")->check(CLI::PositiveNumber);
  sim_cmd->add_flag("--no-rr3", sim.no_rr3, "Disable RR3 merging after each gate");
  sim_cmd->add_option("--order", sim.order, "Qubit order as a comma-separated permutation");

  VerifyConfig verify;
  CLI::App* verify_cmd = app.add_subcommand("verify", "Run a built-in verification and print its report as JSON");
  verify_cmd->add_option("case", verify.which, "qft, bv, grover, bitflip or exhaustive")
      ->required()
      ->check(CLI::IsMember({"qft", "bv", "grover", "bitflip", "exhaustive"}));
  verify_cmd->add_option("-n", verify.n, "Number of qubits (qft) or secret bits (bv)");
  verify_cmd->add_option("--search", verify.search, "Grover search qubits");
  verify_cmd->add_option("--iters", verify.iterations, "Grover iterations (default floor(pi/4*sqrt(2^n)))");
  verify_cmd->add_option("--sweep", verify.sweep, "FIRST:LAST:STEP; print CSV n,time_ms,total_nodes");
  verify_cmd->add_option("--sweep-cap", verify.sweep_cap, "Largest n run by --sweep");
  verify_cmd->add_option("--file", verify.file, "Circuit file for the exhaustive check");
  verify_cmd->add_flag("--no-rr3", verify.no_rr3, "Disable RR3 merging after each gate");

  EvalConfig eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Print one amplitude of the simulated output state");
  eval_cmd->add_option("file", eval.file, "Circuit file")->required();
  eval_cmd->add_option("--qubits", eval.qubits, "Basis state bits, q0 first")->required();
  eval_cmd->add_option("--symbols", eval.symbols, "Symbol bits, s0 first")->required();
  eval_cmd->add_option("--eps", eval.epsilon, "Complex comparison tolerance")->check(CLI::PositiveNumber);
  eval_cmd->add_flag("--no-rr3", eval.no_rr3, "Disable RR3 merging after each gate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sim_cmd->parsed()) {
      return run_sim(sim);
    }
    if (verify_cmd->parsed()) {
      return run_verify(verify);
    }
    return run_eval(eval);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
