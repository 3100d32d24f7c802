#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>

#include "json.hpp"
#include "symtdd/circuit.hpp"
#include "symtdd/simulate.hpp"
#include "symtdd/symtdd.hpp"

namespace symtdd {

struct VerificationReport {
  std::string case_name;
  bool pass = false;
  NodeCount nodes;
  double wall_time_ms = 0.0;
  std::size_t cache_hits = 0;
  nlohmann::json payload = nlohmann::json::object();

  nlohmann::json to_json() const;
};

// Case-study circuit builders. Symbols are named s0, s1, ...

/// H on q_k then crk(j-k+1) q_k q_j for every j > k; no final swaps.
/// Each qubit starts in |s_k>.
Circuit qft_circuit(int n);
/// n search qubits in |0> plus an ancilla in |1>; the oracle is one
/// cx q_i q_n ctrlsym s_i per search qubit.
Circuit bv_circuit(int n);
/// n_search qubits plus an ancilla in |1>. iterations < 0 selects
/// floor(pi/4 * sqrt(2^n_search)).
Circuit grover_circuit(int n_search, int iterations = -1);
/// Three-qubit bit-flip code with syndrome extraction and Toffoli
/// correction; data qubits start in |s_0 s_1 s_2>, syndromes in |0>.
Circuit bitflip_circuit();
int default_grover_iterations(int n_search);

/// Simulates `circuit` once symbolically and compares every amplitude
/// against the dense oracle under every symbol assignment.
VerificationReport exhaustive_check(const Circuit& circuit, double tolerance = 1e-9, bool rr3 = true);
/// As above, but the dense side runs `reference`, which must have the same
/// qubit and symbol counts. A mismatch reports the first differing
/// (symbol assignment, basis index) pair.
VerificationReport exhaustive_check(const Circuit& circuit, const Circuit& reference, double tolerance = 1e-9,
                                    bool rr3 = true);

VerificationReport verify_qft(int n, bool rr3 = true);
VerificationReport verify_bv(int n, bool rr3 = true);

struct GroverResult {
  WeightTensor probability;
  SymTdd output;
  VerificationReport report;
};
/// probability(s) = |<s_0..s_{n-1} 1|output>|^2; the report passes when the
/// probability tensor is constant over s.
GroverResult grover_success_probability(Manager& manager, int n_search, int iterations = -1, bool rr3 = true);

class NonTowerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Outgoing (low, high) weight pair of every quantum-layer node of the
/// RR3-reduced simulation output, keyed by qubit. Throws NonTowerError
/// unless the output is a tower.
std::map<int, std::pair<WeightTensor, WeightTensor>> bitflip_relations(Manager& manager, const Circuit& circuit);

/// Bit-flip code case study: the output is a tower whose weight pairs are
/// complementary indicators, with the data qubits carrying the complement of
/// majority(s0, s1, s2) on their low edge and the syndromes carrying parity
/// checks.
VerificationReport verify_bitflip(bool rr3 = true);

}  // namespace symtdd
