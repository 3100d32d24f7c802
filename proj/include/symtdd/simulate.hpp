#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <unordered_map>

#include "symtdd/circuit.hpp"
#include "symtdd/symtdd.hpp"

namespace symtdd {

/// Operator diagram of `gate` over the interleaved in/out ranks of its
/// qubits. Controlled gates are built as I + P1^{controls} ⊗ (U - I).
SymTdd gate_tensor(const Gate& gate, Manager& manager);

/// Declares the circuit's symbols in `manager` (if not already present) and
/// builds the initial product state.
SymTdd initial_state(const Circuit& circuit, Manager& manager);

struct SimulationOptions {
  bool rr3 = true;
  /// Called after every gate with the zero-based gate position.
  std::function<void(std::size_t, const SymTdd&)> on_gate;
  /// Computed caches are dropped between gates above this many entries.
  std::size_t cache_limit = std::size_t{1} << 22;
};

struct SimulationStats {
  int qubits = 0;
  std::size_t gates_applied = 0;
  NodeCount nodes;
  double wall_time_ms = 0.0;
  std::size_t cache_hits = 0;
};

struct SimulationResult {
  SymTdd state;
  SimulationStats stats;
};

SimulationResult simulate(const Circuit& circuit, Manager& manager, const SimulationOptions& options = {});

}  // namespace symtdd
