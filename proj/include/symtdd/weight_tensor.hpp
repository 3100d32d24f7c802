#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "symtdd/complex_table.hpp"
#include "symtdd/hashing.hpp"

namespace symtdd {

/// Position of a Boolean symbol in the global symbol order s_0 < s_1 < ...
struct SymbolId {
  std::uint32_t ordinal = 0;
  auto operator<=>(const SymbolId&) const = default;
};

enum class Polarity { positive, complement };

using WeightNodeId = std::uint32_t;
inline constexpr WeightNodeId kWeightTerminal = 0;

/// A complex-valued tensor over Boolean symbols, stored as a rooted edge
/// (top weight, node) into a WeightStore. Handles are canonical: two tensors
/// are equal (up to the store's epsilon) iff their handles compare equal.
struct WeightTensor {
  Complex top_weight{0.0, 0.0};
  WeightNodeId node = kWeightTerminal;

  bool operator==(const WeightTensor&) const = default;

  bool is_zero() const { return top_weight == Complex{}; }
  bool is_constant() const { return node == kWeightTerminal; }
};

struct WeightTensorHash {
  std::size_t operator()(const WeightTensor& w) const {
    return detail::hash_complex(detail::hash_mix(0, w.node), w.top_weight);
  }
};

/// Result of local normalisation of an outgoing weight pair (f, g):
/// f = extracted ⊙ low and g = extracted ⊙ high.
struct LocalNormalization {
  WeightTensor extracted;
  WeightTensor low;
  WeightTensor high;

  bool operator==(const LocalNormalization&) const = default;
};

/// Thrown by sqcup when the operands disagree on their common support.
class SupportConflict : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Owns the weight-node store, unique table, and computed caches for the
// symbol layer. Nodes are normalised so that the low edge weight is 1 when
// nonzero (otherwise the high edge weight is 1) and the divisor moves to the
// incoming edge. Single-threaded.
class WeightStore {
 public:
  explicit WeightStore(double epsilon = 1e-10);

  WeightStore(const WeightStore&) = delete;
  WeightStore& operator=(const WeightStore&) = delete;
  WeightStore(WeightStore&&) = default;
  WeightStore& operator=(WeightStore&&) = default;

  double epsilon() const { return complex_table_.epsilon(); }
  Complex canonical(Complex value) { return complex_table_.canonical(value); }

  SymbolId declare_symbol(std::string name = {});
  std::size_t symbol_count() const { return symbol_names_.size(); }
  const std::string& symbol_name(SymbolId s) const;

  WeightTensor zero() const { return {}; }
  WeightTensor one() const { return {Complex{1.0, 0.0}, kWeightTerminal}; }
  WeightTensor constant(Complex c);
  WeightTensor literal(SymbolId s, Polarity polarity);

  /// Builds the tensor whose value at assignment index a (s_0 most
  /// significant) over the first log2(values.size()) symbols is values[a].
  WeightTensor from_values(std::span<const Complex> values);

  WeightTensor add(const WeightTensor& f, const WeightTensor& g);
  WeightTensor subtract(const WeightTensor& f, const WeightTensor& g);
  /// Hadamard (pointwise) product.
  WeightTensor mul(const WeightTensor& f, const WeightTensor& g);
  WeightTensor scale(const WeightTensor& f, Complex c);
  WeightTensor conj(const WeightTensor& f);

  /// 0/1 indicator of supp(f).
  WeightTensor support(const WeightTensor& f);
  /// f on supp(f), g elsewhere. Throws SupportConflict when f and g differ
  /// on their common support.
  WeightTensor sqcup(const WeightTensor& f, const WeightTensor& g);
  /// g/f on supp(f); 1 where only g is nonzero; 0 elsewhere.
  WeightTensor divide_on_support(const WeightTensor& g, const WeightTensor& f);
  LocalNormalization loc_norm(const WeightTensor& f, const WeightTensor& g);

  /// True iff f and g agree (within epsilon) wherever both are nonzero.
  bool agree_on_common_support(const WeightTensor& f, const WeightTensor& g);

  /// Shannon node s' * low + s * high, normalised and interned.
  WeightTensor make_node(SymbolId s, const WeightTensor& low, const WeightTensor& high);

  /// Value at the assignment given by bits[ordinal]. Throws std::out_of_range
  /// if a symbol tested by f has no entry.
  Complex evaluate(const WeightTensor& f, std::span<const std::uint8_t> bits) const;
  /// All 2^m values over the first m symbols, s_0 most significant.
  std::vector<Complex> to_values(const WeightTensor& f, std::size_t m) const;

  /// Sum-of-products rendering over literals, e.g. "s0'*s1 + s1'".
  std::string to_string(const WeightTensor& f) const;

  /// Adds the internal nodes reachable from f to `seen`.
  void collect_nodes(const WeightTensor& f, std::unordered_set<WeightNodeId>& seen) const;
  std::size_t reachable_nodes(const WeightTensor& f) const;
  /// Largest |f(a)| over all assignments.
  double max_abs(const WeightTensor& f) const;

  std::uint32_t top_symbol(const WeightTensor& f) const;
  std::size_t node_count() const { return nodes_.size() - 1; }
  std::size_t cache_hits() const { return cache_hits_; }
  std::size_t cache_size() const;
  void clear_caches();

 private:
  struct Node {
    std::uint32_t symbol;
    WeightTensor low;
    WeightTensor high;
    bool operator==(const Node&) const = default;
  };
  struct NodeHash {
    std::size_t operator()(const Node& n) const {
      WeightTensorHash h;
      return detail::hash_mix(detail::hash_mix(h(n.low), h(n.high)), n.symbol);
    }
  };
  struct PairKey {
    WeightTensor a;
    WeightTensor b;
    std::uint32_t tag = 0;
    bool operator==(const PairKey&) const = default;
  };
  struct PairKeyHash {
    std::size_t operator()(const PairKey& k) const {
      WeightTensorHash h;
      return detail::hash_mix(detail::hash_mix(h(k.a), h(k.b)), k.tag);
    }
  };

  WeightTensor edge(Complex weight, WeightNodeId node);
  WeightTensor cofactor(const WeightTensor& f, std::uint32_t symbol, bool high);
  std::uint32_t symbol_of(WeightNodeId node) const { return nodes_[node].symbol; }
  WeightTensor mul_nodes(WeightNodeId a, WeightNodeId b);
  WeightTensor support_node(WeightNodeId n);
  WeightTensor conj_node(WeightNodeId n);
  WeightTensor override_with(const WeightTensor& f, const WeightTensor& g, bool check);

  ComplexTable complex_table_;
  std::vector<std::string> symbol_names_;
  std::vector<Node> nodes_;
  std::unordered_map<Node, WeightNodeId, NodeHash> unique_;

  std::unordered_map<PairKey, WeightTensor, PairKeyHash> add_cache_;
  std::unordered_map<PairKey, WeightTensor, PairKeyHash> binary_cache_;
  std::unordered_map<WeightNodeId, WeightTensor> support_cache_;
  std::unordered_map<WeightNodeId, WeightTensor> conj_cache_;
  std::size_t cache_hits_ = 0;
};

}  // namespace symtdd
