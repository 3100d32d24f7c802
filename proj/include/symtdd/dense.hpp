#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>

#include <Eigen/Dense>

#include "symtdd/circuit.hpp"

namespace symtdd {

class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat state vector; basis index b has q_0 as its most significant bit.
struct DenseState {
  int n_qubits = 0;
  Eigen::VectorXcd amplitudes;
};

/// Plain state-vector simulation with every symbol replaced by
/// symbol_bits[ordinal]. The initial basis state comes from the circuit's
/// init list unless `basis_input` overrides it.
DenseState dense_simulate(const Circuit& circuit, std::span<const std::uint8_t> symbol_bits,
                          std::optional<std::uint64_t> basis_input = std::nullopt, int max_qubits = 12);

}  // namespace symtdd
