#include "symtdd/dense.hpp"

#include <string>

namespace symtdd {

DenseState dense_simulate(const Circuit& circuit, std::span<const std::uint8_t> symbol_bits,
                          std::optional<std::uint64_t> basis_input, int max_qubits) {
  circuit.validate();
  const int n = circuit.n_qubits;
  if (n > max_qubits) {
    throw CapacityError("dense oracle is capped at " + std::to_string(max_qubits) + " qubits");
  }
  if (symbol_bits.size() < circuit.symbols.size()) {
    throw std::invalid_argument("symbol assignment is shorter than the declared symbol list");
  }
  auto bit_of_qubit = [n](int q) { return std::uint64_t{1} << (n - 1 - q); };

  std::uint64_t basis = 0;
  if (basis_input) {
    basis = *basis_input;
  } else {
    for (int q = 0; q < n; ++q) {
      const QubitInit& init = circuit.init[q];
      const bool one = init.kind == InitKind::one || (init.kind == InitKind::symbol && symbol_bits[init.symbol] != 0);
      if (one) {
        basis |= bit_of_qubit(q);
      }
    }
  }
  DenseState state{n, Eigen::VectorXcd::Zero(Eigen::Index{1} << n)};
  state.amplitudes(static_cast<Eigen::Index>(basis)) = 1.0;

  for (const Gate& gate : circuit.gates) {
    if (gate.kind == GateKind::symx) {
      const bool bit = symbol_bits[gate.symbolic->symbol] != 0;
      const bool fires = gate.symbolic->polarity == Polarity::positive ? bit : !bit;
      if (!fires) {
        continue;
      }
    }
    const Eigen::Matrix2cd u = target_matrix(gate);
    std::uint64_t control_mask = 0;
    for (int c : gate.controls) {
      control_mask |= bit_of_qubit(c);
    }
    const std::uint64_t target = bit_of_qubit(gate.target);
    const auto size = static_cast<std::uint64_t>(state.amplitudes.size());
    for (std::uint64_t i = 0; i < size; ++i) {
      if ((i & target) != 0 || (i & control_mask) != control_mask) {
        continue;
      }
      const auto i0 = static_cast<Eigen::Index>(i);
      const auto i1 = static_cast<Eigen::Index>(i | target);
      const Eigen::Vector2cd pair(state.amplitudes(i0), state.amplitudes(i1));
      const Eigen::Vector2cd out = u * pair;
      state.amplitudes(i0) = out(0);
      state.amplitudes(i1) = out(1);
    }
  }
  return state;
}

}  // namespace symtdd
