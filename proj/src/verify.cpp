#include "symtdd/verify.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "symtdd/dense.hpp"

namespace symtdd {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

Circuit blank(int n_qubits, int n_symbols) {
  Circuit c;
  c.n_qubits = n_qubits;
  for (int i = 0; i < n_symbols; ++i) {
    c.symbols.push_back("s" + std::to_string(i));
  }
  c.init.assign(static_cast<std::size_t>(n_qubits), QubitInit{});
  return c;
}

Gate single(GateKind kind, int target) {
  Gate g;
  g.kind = kind;
  g.target = target;
  return g;
}

Gate multi_x(std::vector<int> controls, int target) {
  Gate g;
  switch (controls.size()) {
    case 0: g.kind = GateKind::x; break;
    case 1: g.kind = GateKind::cx; break;
    case 2: g.kind = GateKind::ccx; break;
    default: g.kind = GateKind::mcx; break;
  }
  g.controls = std::move(controls);
  g.target = target;
  return g;
}

Gate sym_x(std::vector<int> controls, int target, std::uint32_t symbol, Polarity polarity) {
  Gate g;
  g.kind = GateKind::symx;
  g.controls = std::move(controls);
  g.target = target;
  g.symbolic = SymbolicControl{symbol, polarity};
  return g;
}

void fill_stats(VerificationReport& report, const SimulationStats& stats) {
  report.nodes = stats.nodes;
  report.cache_hits = stats.cache_hits;
}

nlohmann::json complex_json(Complex c) { return nlohmann::json::array({c.real(), c.imag()}); }

std::string bit_string(std::span<const std::uint8_t> bits) {
  std::string out;
  for (auto b : bits) {
    out += b != 0 ? '1' : '0';
  }
  return out;
}

}  // namespace

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["case"] = case_name;
  j["pass"] = pass;
  j["quantum_nodes"] = nodes.quantum_nodes;
  j["weight_nodes"] = nodes.weight_nodes;
  j["total_nodes"] = nodes.total;
  j["wall_time_ms"] = wall_time_ms;
  j["cache_hits"] = cache_hits;
  j["payload"] = payload;
  return j;
}

Circuit qft_circuit(int n) {
  if (n < 1) {
    throw std::invalid_argument("qft needs n >= 1");
  }
  Circuit c = blank(n, n);
  for (int k = 0; k < n; ++k) {
    c.init[k] = QubitInit{InitKind::symbol, static_cast<std::uint32_t>(k)};
  }
  for (int k = 0; k < n; ++k) {
    c.gates.push_back(single(GateKind::h, k));
    for (int j = k + 1; j < n; ++j) {
      Gate g;
      g.kind = GateKind::crk;
      g.controls = {j};
      g.target = k;
      g.k = j - k + 1;
      c.gates.push_back(g);
    }
  }
  return c;
}

Circuit bv_circuit(int n) {
  if (n < 1) {
    throw std::invalid_argument("bv needs n >= 1");
  }
  Circuit c = blank(n + 1, n);
  c.init[n] = QubitInit{InitKind::one, 0};
  for (int q = 0; q <= n; ++q) {
    c.gates.push_back(single(GateKind::h, q));
  }
  for (int i = 0; i < n; ++i) {
    c.gates.push_back(sym_x({i}, n, static_cast<std::uint32_t>(i), Polarity::positive));
  }
  for (int q = 0; q <= n; ++q) {
    c.gates.push_back(single(GateKind::h, q));
  }
  return c;
}

int default_grover_iterations(int n_search) {
  return static_cast<int>(std::floor(std::numbers::pi / 4.0 * std::sqrt(std::ldexp(1.0, n_search))));
}

Circuit grover_circuit(int n_search, int iterations) {
  if (n_search < 2) {
    throw std::invalid_argument("grover needs at least two search qubits");
  }
  if (iterations < 0) {
    iterations = default_grover_iterations(n_search);
  }
  const int n = n_search;
  const int ancilla = n;
  Circuit c = blank(n + 1, n);
  c.init[ancilla] = QubitInit{InitKind::one, 0};
  std::vector<int> search;
  for (int q = 0; q < n; ++q) {
    search.push_back(q);
  }
  for (int q = 0; q <= n; ++q) {
    c.gates.push_back(single(GateKind::h, q));
  }
  for (int it = 0; it < iterations; ++it) {
    for (int q = 0; q < n; ++q) {
      c.gates.push_back(sym_x({}, q, static_cast<std::uint32_t>(q), Polarity::complement));
    }
    c.gates.push_back(multi_x(search, ancilla));
    for (int q = 0; q < n; ++q) {
      c.gates.push_back(sym_x({}, q, static_cast<std::uint32_t>(q), Polarity::complement));
    }
    for (int q = 0; q < n; ++q) {
      c.gates.push_back(single(GateKind::h, q));
    }
    for (int q = 0; q < n; ++q) {
      c.gates.push_back(single(GateKind::x, q));
    }
    c.gates.push_back(single(GateKind::h, n - 1));
    c.gates.push_back(multi_x(std::vector<int>(search.begin(), search.end() - 1), n - 1));
    c.gates.push_back(single(GateKind::h, n - 1));
    for (int q = 0; q < n; ++q) {
      c.gates.push_back(single(GateKind::x, q));
    }
    for (int q = 0; q < n; ++q) {
      c.gates.push_back(single(GateKind::h, q));
    }
  }
  c.gates.push_back(single(GateKind::h, ancilla));
  return c;
}

Circuit bitflip_circuit() {
  Circuit c = blank(6, 3);
  for (int k = 0; k < 3; ++k) {
    c.init[k] = QubitInit{InitKind::symbol, static_cast<std::uint32_t>(k)};
  }
  c.gates = {multi_x({0}, 3),    multi_x({1}, 3),    multi_x({0}, 5),    multi_x({1}, 4),    multi_x({2}, 4),
             multi_x({2}, 5),    multi_x({3, 5}, 0), multi_x({3, 4}, 1), multi_x({4, 5}, 2)};
  return c;
}

VerificationReport exhaustive_check(const Circuit& circuit, double tolerance, bool rr3) {
  return exhaustive_check(circuit, circuit, tolerance, rr3);
}

VerificationReport exhaustive_check(const Circuit& circuit, const Circuit& reference, double tolerance, bool rr3) {
  circuit.validate();
  reference.validate();
  if (circuit.n_qubits > 12 || circuit.symbols.size() > 8) {
    throw CapacityError("exhaustive check is limited to 12 qubits and 8 symbols");
  }
  if (reference.n_qubits != circuit.n_qubits || reference.symbols.size() != circuit.symbols.size()) {
    throw std::invalid_argument("reference circuit must have the same qubit and symbol counts");
  }
  const auto start = Clock::now();
  VerificationReport report;
  report.case_name = "exhaustive";
  Manager manager;
  SimulationOptions options;
  options.rr3 = rr3;
  const SimulationResult result = simulate(circuit, manager, options);
  fill_stats(report, result.stats);

  const int n = circuit.n_qubits;
  const std::size_t m = circuit.symbols.size();
  std::vector<std::uint8_t> symbol_bits(m);
  double worst = 0.0;
  report.pass = true;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << m) && report.pass; ++a) {
    for (std::size_t s = 0; s < m; ++s) {
      symbol_bits[s] = static_cast<std::uint8_t>((a >> (m - 1 - s)) & 1U);
    }
    const DenseState dense = dense_simulate(reference, symbol_bits);
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
      const Complex expected = dense.amplitudes(static_cast<Eigen::Index>(b));
      const Complex actual = manager.evaluate_state(result.state, b, n, symbol_bits);
      const double diff = std::abs(expected - actual);
      worst = std::max(worst, diff);
      if (diff > tolerance) {
        report.pass = false;
        report.payload["first_mismatch"] = {{"symbols", bit_string(symbol_bits)},
                                            {"index", b},
                                            {"expected", complex_json(expected)},
                                            {"actual", complex_json(actual)}};
        break;
      }
    }
  }
  report.payload["assignments"] = std::uint64_t{1} << m;
  report.payload["max_abs_error"] = worst;
  report.payload["tolerance"] = tolerance;
  report.wall_time_ms = elapsed_ms(start);
  return report;
}

VerificationReport verify_qft(int n, bool rr3) {
  const auto start = Clock::now();
  VerificationReport report;
  report.case_name = "qft";
  Manager manager;
  SimulationOptions options;
  options.rr3 = rr3;
  const SimulationResult result = simulate(qft_circuit(n), manager, options);
  fill_stats(report, result.stats);

  WeightStore& w = manager.weights();
  const Complex amplitude{1.0 / std::sqrt(2.0), 0.0};
  std::vector<std::pair<WeightTensor, WeightTensor>> factors;
  for (int k = 0; k < n; ++k) {
    WeightTensor f = w.one();
    for (int j = k; j < n; ++j) {
      const SymbolId s{static_cast<std::uint32_t>(j)};
      const WeightTensor term =
          w.add(w.literal(s, Polarity::complement), w.scale(w.literal(s, Polarity::positive), root_of_unity(j - k + 1)));
      f = w.mul(f, term);
    }
    factors.emplace_back(w.constant(amplitude), w.scale(f, amplitude));
  }
  const SymTdd expected = manager.product_state(factors, true);
  const bool equal = diagram_equal(result.state, expected);
  const NodeCount counts = result.stats.nodes;
  report.pass = equal && counts.quantum_layer() == static_cast<std::size_t>(n) + 1;
  report.payload["n"] = n;
  report.payload["matches_expected"] = equal;
  report.payload["quantum_layer_nodes"] = counts.quantum_layer();
  report.payload["envelope"] = 10.0 * std::pow(static_cast<double>(n), 2.4);
  report.wall_time_ms = elapsed_ms(start);
  return report;
}

VerificationReport verify_bv(int n, bool rr3) {
  const auto start = Clock::now();
  VerificationReport report;
  report.case_name = "bv";
  Manager manager;
  SimulationOptions options;
  options.rr3 = rr3;
  bool all_towers = true;
  std::size_t first_non_tower = 0;
  options.on_gate = [&](std::size_t position, const SymTdd& state) {
    if (all_towers && !manager.is_tower(state)) {
      all_towers = false;
      first_non_tower = position;
    }
  };
  const SimulationResult result = simulate(bv_circuit(n), manager, options);
  fill_stats(report, result.stats);

  WeightStore& w = manager.weights();
  std::vector<std::pair<WeightTensor, WeightTensor>> expected_factors;
  for (int i = 0; i < n; ++i) {
    const SymbolId s{static_cast<std::uint32_t>(i)};
    expected_factors.emplace_back(w.literal(s, Polarity::complement), w.literal(s, Polarity::positive));
  }
  expected_factors.emplace_back(w.zero(), w.one());
  const bool equal = diagram_equal(result.state, manager.product_state(expected_factors, true));
  report.pass = equal && all_towers;
  report.payload["n"] = n;
  report.payload["matches_expected"] = equal;
  report.payload["all_towers"] = all_towers;
  if (!all_towers) {
    report.payload["first_non_tower_gate"] = first_non_tower;
  }
  report.wall_time_ms = elapsed_ms(start);
  return report;
}

GroverResult grover_success_probability(Manager& manager, int n_search, int iterations, bool rr3) {
  const auto start = Clock::now();
  if (iterations < 0) {
    iterations = default_grover_iterations(n_search);
  }
  GroverResult out;
  out.report.case_name = "grover";
  SimulationOptions options;
  options.rr3 = rr3;
  const SimulationResult result = simulate(grover_circuit(n_search, iterations), manager, options);
  fill_stats(out.report, result.stats);
  out.output = result.state;

  WeightStore& w = manager.weights();
  std::vector<std::pair<WeightTensor, WeightTensor>> target;
  for (int i = 0; i < n_search; ++i) {
    const SymbolId s{static_cast<std::uint32_t>(i)};
    target.emplace_back(w.literal(s, Polarity::complement), w.literal(s, Polarity::positive));
  }
  target.emplace_back(w.zero(), w.one());
  const SymTdd success = manager.product_state(target, true);
  std::vector<IndexRank> all;
  for (int q = 0; q <= n_search; ++q) {
    all.push_back(manager.rank(q, Port::in));
  }
  const SymTdd overlap = manager.contract(success, result.state, all);
  const WeightTensor g = overlap.root.node == kTerminal ? overlap.root.weight : w.zero();
  out.probability = w.mul(g, w.conj(g));

  const bool constant = out.probability.is_constant() && overlap.root.node == kTerminal;
  out.report.pass = constant;
  out.report.payload["search_qubits"] = n_search;
  out.report.payload["iterations"] = iterations;
  out.report.payload["constant"] = constant;
  out.report.payload["probability_text"] = w.to_string(out.probability);
  if (constant) {
    out.report.payload["probability"] = out.probability.top_weight.real();
  }
  out.report.wall_time_ms = elapsed_ms(start);
  return out;
}

std::map<int, std::pair<WeightTensor, WeightTensor>> bitflip_relations(Manager& manager, const Circuit& circuit) {
  const SymTdd state = simulate(circuit, manager).state;
  if (!manager.is_tower(state)) {
    throw NonTowerError("output diagram is not in tower form");
  }
  std::map<int, std::pair<WeightTensor, WeightTensor>> relations;
  NodeId current = state.root.node;
  while (current != kTerminal) {
    const Manager::NodeView v = manager.node(current);
    relations[manager.qubit_of(v.index)] = {v.low.weight, v.high.weight};
    current = v.low.is_zero() ? v.high.node : v.low.node;
  }
  return relations;
}

VerificationReport verify_bitflip(bool rr3) {
  const auto start = Clock::now();
  VerificationReport report;
  report.case_name = "bitflip";
  Manager manager;
  const Circuit circuit = bitflip_circuit();
  SimulationOptions options;
  options.rr3 = rr3;
  const SimulationResult result = simulate(circuit, manager, options);
  fill_stats(report, result.stats);
  WeightStore& w = manager.weights();
  auto lit = [&](std::uint32_t s, bool positive) {
    return w.literal(SymbolId{s}, positive ? Polarity::positive : Polarity::complement);
  };
  auto both = [&](std::uint32_t a, std::uint32_t b) {
    return w.add(w.mul(lit(a, true), lit(b, true)), w.mul(lit(a, false), lit(b, false)));
  };
  const WeightTensor data_low =
      w.add(w.add(w.mul(w.mul(lit(0, false), lit(1, false)), lit(2, true)),
                  w.mul(w.mul(lit(0, false), lit(1, true)), lit(2, false))),
            w.mul(lit(1, false), lit(2, false)));
  const std::map<int, WeightTensor> expected_low{{0, data_low}, {1, data_low}, {2, data_low},
                                                 {3, both(0, 1)},  {4, both(1, 2)},  {5, both(0, 2)}};
  bool pass = manager.is_tower(result.state);
  try {
    const auto relations = bitflip_relations(manager, circuit);
    pass = pass && relations.size() == expected_low.size();
    for (const auto& [qubit, pair] : relations) {
      const auto& [low, high] = pair;
      const bool complementary = w.add(low, high) == w.one() && w.mul(low, high).is_zero();
      const auto it = expected_low.find(qubit);
      const bool matches = it != expected_low.end() && it->second == low;
      pass = pass && complementary && matches;
      report.payload["relations"]["q" + std::to_string(qubit)] = {
          {"low", w.to_string(low)}, {"high", w.to_string(high)}, {"complementary", complementary},
          {"matches_expected", matches}};
    }
  } catch (const NonTowerError& e) {
    pass = false;
    report.payload["error"] = e.what();
  }
  report.pass = pass;
  report.wall_time_ms = elapsed_ms(start);
  return report;
}

}  // namespace symtdd
