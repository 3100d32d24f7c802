#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "symtdd/weight_tensor.hpp"

namespace symtdd {

enum class GateKind { h, x, y, z, s, sdg, t, tdg, rk, rkdg, cx, crk, ccx, mcx, symx };

struct SymbolicControl {
  std::uint32_t symbol = 0;
  Polarity polarity = Polarity::positive;
  bool operator==(const SymbolicControl&) const = default;
};

// Every supported gate is a (possibly empty) set of quantum controls on a
// single-qubit target operation. symx is X^s (or X^{s'}) on the target,
// optionally under quantum controls.
struct Gate {
  GateKind kind = GateKind::h;
  std::vector<int> controls;
  int target = 0;
  int k = 0;  // rk, rkdg, crk
  std::optional<SymbolicControl> symbolic;

  bool operator==(const Gate&) const = default;

  std::vector<int> qubits() const;
};

enum class InitKind { zero, one, symbol };

struct QubitInit {
  InitKind kind = InitKind::zero;
  std::uint32_t symbol = 0;
  bool operator==(const QubitInit&) const = default;
};

struct Circuit {
  int n_qubits = 0;
  std::vector<std::string> symbols;
  std::vector<QubitInit> init;
  std::vector<Gate> gates;

  bool operator==(const Circuit&) const = default;

  /// Throws std::invalid_argument on out-of-range qubits, undeclared symbols,
  /// repeated operands or k < 1.
  void validate() const;
};

struct SourceLocation {
  int line = 0;
  int column = 0;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(SourceLocation where, const std::string& message);
  SourceLocation where() const { return where_; }

 private:
  SourceLocation where_;
};

Circuit parse_circuit(std::string_view text);
std::string unparse_circuit(const Circuit& circuit);

/// Concrete target matrix of a non-symbolic gate (X for cx/ccx/mcx).
Eigen::Matrix2cd target_matrix(const Gate& gate);

/// exp(2*pi*i / 2^k), computed so that small k are exact.
std::complex<double> root_of_unity(int k);

}  // namespace symtdd
