#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "symtdd/weight_tensor.hpp"

namespace symtdd {

using NodeId = std::uint32_t;
inline constexpr NodeId kTerminal = 0;

/// Position of a quantum index in the global order. Qubit at order position
/// p owns rank 2p (state index, gate input) and 2p+1 (gate output).
using IndexRank = std::int32_t;
inline constexpr IndexRank kTerminalRank = std::numeric_limits<IndexRank>::max();

enum class Port { in, out };

/// Edge into the quantum layer: the tensor weight ⊙ [[node]].
struct Edge {
  WeightTensor weight;
  NodeId node = kTerminal;

  bool operator==(const Edge&) const = default;
  bool is_zero() const { return weight.is_zero(); }
};

struct EdgeHash {
  std::size_t operator()(const Edge& e) const { return detail::hash_mix(WeightTensorHash{}(e.weight), e.node); }
};

class Manager;

/// A rooted symbolic tensor decision diagram. Meaningful only within the
/// Manager that built it. A relaxed diagram is locally normalised at every
/// node but need not satisfy the incoming-support condition; RR3 output and
/// simulation states are relaxed. Operations with a relaxed operand return
/// relaxed results and never split nodes to restrict supports.
struct SymTdd {
  Edge root;
  const Manager* owner = nullptr;
  bool relaxed = false;
};

struct NodeCount {
  std::size_t quantum_nodes = 0;  // internal symTDD nodes
  std::size_t weight_nodes = 0;   // internal weight-tensor nodes over all edge weights
  std::size_t total = 0;          // quantum_nodes + weight_nodes + the terminal

  std::size_t quantum_layer() const { return quantum_nodes + 1; }
};

struct ManagerOptions {
  double epsilon = 1e-10;
  /// qubit_order[p] is the qubit placed at order position p; empty = identity.
  std::vector<int> qubit_order;
};

class CrossManagerError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Owns both decision-diagram layers: the weight store over Boolean symbols
// and the quantum-index node store with its unique table and caches.
// Single-threaded; diagrams are immutable handles.
class Manager {
 public:
  explicit Manager(ManagerOptions options = {});

  Manager(const Manager&) = delete;
  Manager& operator=(const Manager&) = delete;

  WeightStore& weights() { return weights_; }
  const WeightStore& weights() const { return weights_; }
  double epsilon() const { return weights_.epsilon(); }

  SymbolId declare_symbol(std::string name = {}) { return weights_.declare_symbol(std::move(name)); }
  std::size_t symbol_count() const { return weights_.symbol_count(); }

  IndexRank rank(int qubit, Port port = Port::in) const;
  int qubit_of(IndexRank rank) const;
  std::string index_label(IndexRank rank, bool operator_labels) const;

  // --- construction ------------------------------------------------------

  SymTdd wrap(const Edge& root, bool relaxed = false) const { return SymTdd{root, this, relaxed}; }
  SymTdd zero() const { return wrap(Edge{}); }
  SymTdd constant(const WeightTensor& w) const { return wrap(Edge{w, kTerminal}); }
  Edge edge(const WeightTensor& w, NodeId node) const;

  /// Applies loc_norm to the outgoing weights, interns the node with the
  /// residues and returns an edge carrying the extracted weight. RR1 and RR2
  /// hold by construction.
  Edge make_node(IndexRank index, const Edge& low, const Edge& high);
  /// Interns a node exactly as given (no normalisation, no RR1). For tests
  /// and hand-built diagrams.
  Edge make_raw_node(IndexRank index, const Edge& low, const Edge& high);

  /// Product state: qubit k contributes amplitudes[k].first |0> + amplitudes[k].second |1>.
  SymTdd product_state(std::span<const std::pair<WeightTensor, WeightTensor>> amplitudes, bool relaxed = false);
  /// |s_0>|s_1>...|s_{n-1}> over the first n declared symbols.
  SymTdd symbolic_basis_state(int n, bool relaxed = false);
  /// State whose amplitude at basis b (q_0 most significant) is amplitudes[b].
  SymTdd from_amplitudes(std::span<const WeightTensor> amplitudes);

  // --- algebra -----------------------------------------------------------

  SymTdd add(const SymTdd& f, const SymTdd& g);
  SymTdd scale(const SymTdd& f, const WeightTensor& w);
  /// Entrywise complex conjugate.
  SymTdd conj(const SymTdd& f);
  /// Sums over every assignment of the shared indices (which must be open in
  /// at least one operand). Indices absent from both diagrams count twice.
  SymTdd contract(const SymTdd& f, const SymTdd& g, std::span<const IndexRank> shared);
  /// Contracts an operator diagram (built over the given qubits' in/out
  /// ranks) with a state, then renames the outputs back to state indices.
  SymTdd apply_gate(const SymTdd& state, const SymTdd& gate, std::span<const int> qubits);

  SymTdd normalize_full(const SymTdd& f);
  bool is_fully_normalized(const SymTdd& f);
  SymTdd rr3_pass(const SymTdd& f);

  Complex evaluate(const SymTdd& f, std::span<const std::uint8_t> index_bits,
                   std::span<const std::uint8_t> symbol_bits) const;
  /// Amplitude of basis state `basis` (q_0 most significant) of an n-qubit state.
  Complex evaluate_state(const SymTdd& f, std::uint64_t basis, int n, std::span<const std::uint8_t> symbol_bits) const;
  std::vector<std::uint8_t> state_index_bits(std::uint64_t basis, int n) const;

  /// Handle comparison for two fully normalised diagrams. Otherwise the
  /// squared distance <F-G, F-G>(s) is computed by contraction and must vanish
  /// for every symbol assignment, relative to the operands' norms.
  bool equal(const SymTdd& f, const SymTdd& g);
  /// Quantum indices occurring in the diagram, ascending.
  std::vector<IndexRank> open_indices(const SymTdd& f) const;
  NodeCount node_count(const SymTdd& f) const;
  /// At most one internal node per index rank.
  bool is_tower(const SymTdd& f) const;
  std::string to_dot(const SymTdd& f) const;

  struct NodeView {
    IndexRank index;
    Edge low;
    Edge high;
  };
  NodeView node(NodeId id) const;
  IndexRank index_of(NodeId id) const { return nodes_[id].index; }

  std::size_t cache_hits() const { return cache_hits_ + weights_.cache_hits(); }
  void clear_caches();
  /// Drops computed caches once they exceed `limit` entries in total.
  void trim_caches(std::size_t limit);

 private:
  struct Node {
    IndexRank index;
    Edge low;
    Edge high;
    bool operator==(const Node&) const = default;
  };
  struct NodeHash {
    std::size_t operator()(const Node& n) const {
      EdgeHash h;
      return detail::hash_mix(detail::hash_mix(h(n.low), h(n.high)), static_cast<std::uint64_t>(n.index));
    }
  };
  struct EdgePairKey {
    Edge a;
    Edge b;
    std::uint32_t tag = 0;
    bool operator==(const EdgePairKey&) const = default;
  };
  struct EdgePairHash {
    std::size_t operator()(const EdgePairKey& k) const {
      EdgeHash h;
      return detail::hash_mix(detail::hash_mix(h(k.a), h(k.b)), k.tag);
    }
  };
  struct ScaleKey {
    Edge e;
    WeightTensor w;
    bool operator==(const ScaleKey&) const = default;
  };
  struct ScaleKeyHash {
    std::size_t operator()(const ScaleKey& k) const {
      return detail::hash_mix(EdgeHash{}(k.e), WeightTensorHash{}(k.w));
    }
  };
  struct NodePairKey {
    NodeId a;
    NodeId b;
    std::uint32_t tag = 0;
    bool operator==(const NodePairKey&) const = default;
  };
  struct NodePairHash {
    std::size_t operator()(const NodePairKey& k) const { return detail::hash_mix(detail::hash_mix(k.a, k.b), k.tag); }
  };
  // Sets the restriction mode for the duration of a public operation.
  class ModeScope {
   public:
    ModeScope(Manager& m, bool relaxed) : m_(m), saved_(m.restrict_) { m.restrict_ = !relaxed; }
    ~ModeScope() { m_.restrict_ = saved_; }
    ModeScope(const ModeScope&) = delete;
    ModeScope& operator=(const ModeScope&) = delete;

   private:
    Manager& m_;
    bool saved_;
  };
  struct RenameKey {
    NodeId node;
    std::uint32_t map;
    bool operator==(const RenameKey&) const = default;
  };
  struct RenameKeyHash {
    std::size_t operator()(const RenameKey& k) const { return detail::hash_mix(k.node, k.map); }
  };

  void check_owner(const SymTdd& f) const;
  Edge intern(const Node& node);
  Edge cofactor(const Edge& e, IndexRank index, bool high);
  Edge scale_edge(const Edge& e, const WeightTensor& w);
  Edge add_edges(const Edge& f, const Edge& g);
  Edge contract_edges(const Edge& f, const Edge& g, std::uint32_t shared_id);
  Edge contract_nodes(NodeId a, NodeId b, std::uint32_t shared_id);
  Edge conj_edge(const Edge& e);
  Edge conj_node(NodeId n);
  std::uint32_t mode_tag(std::uint32_t tag) const { return (tag << 1) | (restrict_ ? 0U : 1U); }
  Edge normalize_node(NodeId n);
  NodeId rename_node(NodeId n, std::uint32_t map_id);
  Edge power_of_two(const Edge& e, std::size_t exponent);
  std::size_t shared_between(std::uint32_t shared_id, IndexRank lo_exclusive, IndexRank hi_exclusive) const;
  std::uint32_t intern_shared(std::vector<IndexRank> shared);
  std::uint32_t intern_rename(std::vector<std::pair<IndexRank, IndexRank>> map);

  WeightStore weights_;
  std::vector<int> position_of_qubit_;
  std::vector<int> qubit_at_position_;

  std::vector<Node> nodes_;
  std::unordered_map<Node, NodeId, NodeHash> unique_;

  std::vector<std::vector<IndexRank>> shared_sets_;
  std::map<std::vector<IndexRank>, std::uint32_t> shared_ids_;
  std::vector<std::map<IndexRank, IndexRank>> rename_maps_;
  std::map<std::vector<std::pair<IndexRank, IndexRank>>, std::uint32_t> rename_ids_;

  std::unordered_map<EdgePairKey, Edge, EdgePairHash> add_cache_;
  std::unordered_map<NodePairKey, Edge, NodePairHash> contract_cache_;
  std::unordered_map<NodeId, Edge> conj_cache_;
  std::unordered_map<ScaleKey, Edge, ScaleKeyHash> scale_cache_;
  std::unordered_map<NodeId, Edge> normalize_cache_;
  std::unordered_map<RenameKey, NodeId, RenameKeyHash> rename_cache_;
  std::size_t cache_hits_ = 0;
  // When set, scaling an edge by a weight of smaller support pushes the
  // restriction into the children so results stay fully normalised.
  bool restrict_ = true;
};

/// Handle equality of the normalised forms; decides tensor equality up to
/// epsilon. Throws CrossManagerError for diagrams from different managers.
bool diagram_equal(const SymTdd& f, const SymTdd& g);

}  // namespace symtdd
