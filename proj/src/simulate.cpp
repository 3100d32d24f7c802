#include <chrono>
#include <map>

#include "symtdd/simulate.hpp"

namespace symtdd {

namespace {

std::string gate_signature(const Gate& g) {
  std::string sig = std::to_string(static_cast<int>(g.kind)) + ":" + std::to_string(g.k) + ":" +
                    std::to_string(g.target);
  for (int c : g.controls) {
    sig += "," + std::to_string(c);
  }
  if (g.symbolic) {
    sig += "|" + std::to_string(g.symbolic->symbol) + (g.symbolic->polarity == Polarity::positive ? "+" : "-");
  }
  return sig;
}

}  // namespace

SymTdd initial_state(const Circuit& circuit, Manager& manager) {
  circuit.validate();
  while (manager.symbol_count() < circuit.symbols.size()) {
    manager.declare_symbol(circuit.symbols[manager.symbol_count()]);
  }
  WeightStore& w = manager.weights();
  std::vector<std::pair<WeightTensor, WeightTensor>> amplitudes;
  for (const QubitInit& init : circuit.init) {
    switch (init.kind) {
      case InitKind::zero: amplitudes.emplace_back(w.one(), w.zero()); break;
      case InitKind::one: amplitudes.emplace_back(w.zero(), w.one()); break;
      case InitKind::symbol:
        amplitudes.emplace_back(w.literal(SymbolId{init.symbol}, Polarity::complement),
                                w.literal(SymbolId{init.symbol}, Polarity::positive));
        break;
    }
  }
  return manager.product_state(amplitudes, true);
}

SimulationResult simulate(const Circuit& circuit, Manager& manager, const SimulationOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t hits_before = manager.cache_hits();
  SymTdd state = initial_state(circuit, manager);
  std::map<std::string, SymTdd> gate_cache;
  std::size_t applied = 0;
  for (const Gate& gate : circuit.gates) {
    const std::string sig = gate_signature(gate);
    auto it = gate_cache.find(sig);
    if (it == gate_cache.end()) {
      it = gate_cache.emplace(sig, gate_tensor(gate, manager)).first;
    }
    const auto qubits = gate.qubits();
    state = manager.apply_gate(state, it->second, qubits);
    if (options.rr3) {
      state = manager.rr3_pass(state);
    }
    if (options.on_gate) {
      options.on_gate(applied, state);
    }
    ++applied;
    manager.trim_caches(options.cache_limit);
  }
  SimulationResult result{state, {}};
  result.stats.qubits = circuit.n_qubits;
  result.stats.gates_applied = applied;
  result.stats.nodes = manager.node_count(state);
  result.stats.cache_hits = manager.cache_hits() - hits_before;
  result.stats.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace symtdd
