#include "symtdd/symtdd.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_set>

namespace symtdd {

namespace {

bool edge_less(const Edge& a, const Edge& b) {
  return std::tuple(a.node, a.weight.node, a.weight.top_weight.real(), a.weight.top_weight.imag()) <
         std::tuple(b.node, b.weight.node, b.weight.top_weight.real(), b.weight.top_weight.imag());
}

std::string dot_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (c == '"' || c == '\\') {
      out += '\\';
    }
    out += c;
  }
  return out;
}

}  // namespace

Manager::Manager(ManagerOptions options) : weights_(options.epsilon) {
  nodes_.push_back(Node{kTerminalRank, {}, {}});
  if (!options.qubit_order.empty()) {
    const auto n = options.qubit_order.size();
    position_of_qubit_.assign(n, -1);
    for (std::size_t p = 0; p < n; ++p) {
      const int q = options.qubit_order[p];
      if (q < 0 || static_cast<std::size_t>(q) >= n || position_of_qubit_[q] != -1) {
        throw std::invalid_argument("qubit order must be a permutation of 0..n-1");
      }
      position_of_qubit_[q] = static_cast<int>(p);
    }
    qubit_at_position_ = options.qubit_order;
  }
}

IndexRank Manager::rank(int qubit, Port port) const {
  if (qubit < 0) {
    throw std::out_of_range("negative qubit index");
  }
  int position = qubit;
  if (!position_of_qubit_.empty()) {
    if (static_cast<std::size_t>(qubit) >= position_of_qubit_.size()) {
      throw std::out_of_range("qubit " + std::to_string(qubit) + " is not in the configured index order");
    }
    position = position_of_qubit_[qubit];
  }
  return 2 * position + (port == Port::out ? 1 : 0);
}

int Manager::qubit_of(IndexRank rank) const {
  const int position = rank / 2;
  if (qubit_at_position_.empty()) {
    return position;
  }
  return qubit_at_position_.at(position);
}

std::string Manager::index_label(IndexRank rank, bool operator_labels) const {
  std::string label = "q" + std::to_string(qubit_of(rank));
  if (operator_labels) {
    label += (rank % 2 == 0) ? "_in" : "_out";
  }
  return label;
}

Edge Manager::edge(const WeightTensor& w, NodeId node) const {
  if (w.is_zero()) {
    return Edge{};
  }
  return Edge{w, node};
}

Manager::NodeView Manager::node(NodeId id) const {
  const Node& n = nodes_.at(id);
  return {n.index, n.low, n.high};
}

void Manager::check_owner(const SymTdd& f) const {
  if (f.owner != this) {
    throw CrossManagerError("diagram belongs to a different manager");
  }
}

Edge Manager::intern(const Node& node) {
  auto [it, inserted] = unique_.try_emplace(node, static_cast<NodeId>(nodes_.size()));
  if (inserted) {
    nodes_.push_back(node);
  }
  return Edge{weights_.one(), it->second};
}

Edge Manager::make_raw_node(IndexRank index, const Edge& low, const Edge& high) {
  const Edge lo = edge(low.weight, low.node);
  const Edge hi = edge(high.weight, high.node);
  if (index_of(lo.node) <= index || index_of(hi.node) <= index) {
    throw std::logic_error("child index must follow the parent index in the order");
  }
  return intern(Node{index, lo, hi});
}

Edge Manager::make_node(IndexRank index, const Edge& low, const Edge& high) {
  const Edge lo = edge(low.weight, low.node);
  const Edge hi = edge(high.weight, high.node);
  if (index_of(lo.node) <= index || index_of(hi.node) <= index) {
    throw std::logic_error("child index must follow the parent index in the order");
  }
  if (lo == hi) {
    return lo;
  }
  const LocalNormalization ln = weights_.loc_norm(lo.weight, hi.weight);
  const Edge l = edge(ln.low, lo.node);
  const Edge h = edge(ln.high, hi.node);
  if (l == h) {
    return Edge{ln.extracted, l.node};
  }
  const Edge interned = intern(Node{index, l, h});
  return Edge{ln.extracted, interned.node};
}

Edge Manager::scale_edge(const Edge& e, const WeightTensor& w) {
  if (e.is_zero() || w.is_zero()) {
    return Edge{};
  }
  const WeightTensor scaled = weights_.mul(e.weight, w);
  if (scaled.is_zero()) {
    return Edge{};
  }
  if (!restrict_ || e.node == kTerminal || weights_.support(scaled) == weights_.support(e.weight)) {
    return Edge{scaled, e.node};
  }
  const ScaleKey key{e, w};
  if (auto it = scale_cache_.find(key); it != scale_cache_.end()) {
    ++cache_hits_;
    return it->second;
  }
  // The support shrank: push the restriction into the children.
  const Node n = nodes_[e.node];
  const Edge result = make_node(n.index, scale_edge(n.low, scaled), scale_edge(n.high, scaled));
  scale_cache_.emplace(key, result);
  return result;
}

Edge Manager::cofactor(const Edge& e, IndexRank index, bool high) {
  if (index_of(e.node) != index) {
    return e;
  }
  const Node& n = nodes_[e.node];
  return scale_edge(high ? n.high : n.low, e.weight);
}

Edge Manager::add_edges(const Edge& f, const Edge& g) {
  if (f.is_zero()) {
    return g;
  }
  if (g.is_zero()) {
    return f;
  }
  if (f.node == g.node) {
    const WeightTensor sum = weights_.add(f.weight, g.weight);
    if (!restrict_ || f.node == kTerminal || sum.is_zero()) {
      return edge(sum, f.node);
    }
    const WeightTensor supp = weights_.support(f.weight);
    if (weights_.support(sum) == supp && weights_.support(g.weight) == supp) {
      return Edge{sum, f.node};
    }
  }
  const auto& [a, b] = edge_less(f, g) ? std::tie(f, g) : std::tie(g, f);
  const EdgePairKey key{a, b, mode_tag(0)};
  if (auto it = add_cache_.find(key); it != add_cache_.end()) {
    ++cache_hits_;
    return it->second;
  }
  const IndexRank q = std::min(index_of(a.node), index_of(b.node));
  const Edge low = add_edges(cofactor(a, q, false), cofactor(b, q, false));
  const Edge high = add_edges(cofactor(a, q, true), cofactor(b, q, true));
  const Edge result = make_node(q, low, high);
  add_cache_.emplace(key, result);
  return result;
}

Edge Manager::power_of_two(const Edge& e, std::size_t exponent) {
  if (exponent == 0 || e.is_zero()) {
    return e;
  }
  return Edge{weights_.scale(e.weight, std::ldexp(1.0, static_cast<int>(exponent))), e.node};
}

std::size_t Manager::shared_between(std::uint32_t shared_id, IndexRank lo_exclusive, IndexRank hi_exclusive) const {
  const auto& shared = shared_sets_[shared_id];
  auto first = std::upper_bound(shared.begin(), shared.end(), lo_exclusive);
  auto last = std::lower_bound(shared.begin(), shared.end(), hi_exclusive);
  return first < last ? static_cast<std::size_t>(last - first) : 0;
}

std::uint32_t Manager::intern_shared(std::vector<IndexRank> shared) {
  std::sort(shared.begin(), shared.end());
  if (std::adjacent_find(shared.begin(), shared.end()) != shared.end()) {
    throw std::invalid_argument("duplicate index in contraction set");
  }
  auto [it, inserted] = shared_ids_.try_emplace(shared, static_cast<std::uint32_t>(shared_sets_.size()));
  if (inserted) {
    shared_sets_.push_back(std::move(shared));
  }
  return it->second;
}

Edge Manager::contract_edges(const Edge& f, const Edge& g, std::uint32_t shared_id) {
  if (f.is_zero() || g.is_zero()) {
    return Edge{};
  }
  const WeightTensor w = weights_.mul(f.weight, g.weight);
  if (w.is_zero()) {
    return Edge{};
  }
  return scale_edge(contract_nodes(f.node, g.node, shared_id), w);
}

Edge Manager::contract_nodes(NodeId a, NodeId b, std::uint32_t shared_id) {
  if (a == kTerminal && b == kTerminal) {
    return Edge{weights_.one(), kTerminal};
  }
  if (b < a) {
    std::swap(a, b);
  }
  const NodePairKey key{a, b, mode_tag(shared_id)};
  if (auto it = contract_cache_.find(key); it != contract_cache_.end()) {
    ++cache_hits_;
    return it->second;
  }
  const IndexRank q = std::min(index_of(a), index_of(b));
  auto child = [&](NodeId n, bool high) {
    if (index_of(n) != q) {
      return Edge{weights_.one(), n};
    }
    return high ? nodes_[n].high : nodes_[n].low;
  };
  Edge branch[2];
  for (int bit = 0; bit < 2; ++bit) {
    const Edge ca = child(a, bit == 1);
    const Edge cb = child(b, bit == 1);
    const IndexRank next = std::min(index_of(ca.node), index_of(cb.node));
    branch[bit] = power_of_two(contract_edges(ca, cb, shared_id), shared_between(shared_id, q, next));
  }
  const auto& shared = shared_sets_[shared_id];
  const Edge result = std::binary_search(shared.begin(), shared.end(), q) ? add_edges(branch[0], branch[1])
                                                                          : make_node(q, branch[0], branch[1]);
  contract_cache_.emplace(key, result);
  return result;
}

Edge Manager::conj_node(NodeId n) {
  if (n == kTerminal) {
    return Edge{weights_.one(), kTerminal};
  }
  if (auto it = conj_cache_.find(n); it != conj_cache_.end()) {
    ++cache_hits_;
    return it->second;
  }
  const Node node = nodes_[n];
  const Edge result = make_node(node.index, conj_edge(node.low), conj_edge(node.high));
  conj_cache_.emplace(n, result);
  return result;
}

Edge Manager::conj_edge(const Edge& e) {
  if (e.is_zero()) {
    return Edge{};
  }
  const Edge r = conj_node(e.node);
  return edge(weights_.mul(weights_.conj(e.weight), r.weight), r.node);
}

std::uint32_t Manager::intern_rename(std::vector<std::pair<IndexRank, IndexRank>> map) {
  std::sort(map.begin(), map.end());
  auto [it, inserted] = rename_ids_.try_emplace(map, static_cast<std::uint32_t>(rename_maps_.size()));
  if (inserted) {
    rename_maps_.emplace_back(map.begin(), map.end());
  }
  return it->second;
}

NodeId Manager::rename_node(NodeId n, std::uint32_t map_id) {
  if (n == kTerminal) {
    return kTerminal;
  }
  const RenameKey key{n, map_id};
  if (auto it = rename_cache_.find(key); it != rename_cache_.end()) {
    ++cache_hits_;
    return it->second;
  }
  const Node node = nodes_[n];
  const auto& map = rename_maps_[map_id];
  auto found = map.find(node.index);
  const IndexRank index = found == map.end() ? node.index : found->second;
  Edge low{node.low.weight, rename_node(node.low.node, map_id)};
  Edge high{node.high.weight, rename_node(node.high.node, map_id)};
  if (index_of(low.node) <= index || index_of(high.node) <= index) {
    throw std::logic_error("index renaming must preserve the order");
  }
  const NodeId result = intern(Node{index, low, high}).node;
  rename_cache_.emplace(key, result);
  return result;
}

SymTdd Manager::product_state(std::span<const std::pair<WeightTensor, WeightTensor>> amplitudes, bool relaxed) {
  const ModeScope scope(*this, relaxed);
  const int n = static_cast<int>(amplitudes.size());
  if (!qubit_at_position_.empty() && static_cast<std::size_t>(n) != qubit_at_position_.size()) {
    throw std::invalid_argument("state size does not match the configured qubit order");
  }
  Edge e{weights_.one(), kTerminal};
  for (int p = n - 1; p >= 0; --p) {
    const int q = qubit_at_position_.empty() ? p : qubit_at_position_[p];
    e = make_node(rank(q), scale_edge(e, amplitudes[q].first), scale_edge(e, amplitudes[q].second));
  }
  return wrap(e, relaxed);
}

SymTdd Manager::symbolic_basis_state(int n, bool relaxed) {
  if (n < 0 || static_cast<std::size_t>(n) > symbol_count()) {
    throw std::out_of_range("symbolic basis state needs " + std::to_string(n) + " declared symbols");
  }
  std::vector<std::pair<WeightTensor, WeightTensor>> amplitudes;
  for (int k = 0; k < n; ++k) {
    const SymbolId s{static_cast<std::uint32_t>(k)};
    amplitudes.emplace_back(weights_.literal(s, Polarity::complement), weights_.literal(s, Polarity::positive));
  }
  return product_state(amplitudes, relaxed);
}

SymTdd Manager::from_amplitudes(std::span<const WeightTensor> amplitudes) {
  const std::size_t size = amplitudes.size();
  if (size == 0 || (size & (size - 1)) != 0) {
    throw std::invalid_argument("amplitude table length must be a power of two");
  }
  int n = 0;
  while ((std::size_t{1} << n) < size) {
    ++n;
  }
  auto build = [&](auto&& self, int position, std::uint64_t basis) -> Edge {
    if (position == n) {
      return edge(amplitudes[basis], kTerminal);
    }
    const int q = qubit_at_position_.empty() ? position : qubit_at_position_.at(position);
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
    return make_node(rank(q), self(self, position + 1, basis), self(self, position + 1, basis | bit));
  };
  return wrap(build(build, 0, 0));
}

SymTdd Manager::add(const SymTdd& f, const SymTdd& g) {
  check_owner(f);
  check_owner(g);
  const bool relaxed = f.relaxed || g.relaxed;
  const ModeScope scope(*this, relaxed);
  return wrap(add_edges(f.root, g.root), relaxed);
}

SymTdd Manager::scale(const SymTdd& f, const WeightTensor& w) {
  check_owner(f);
  const ModeScope scope(*this, f.relaxed);
  return wrap(scale_edge(f.root, w), f.relaxed);
}

SymTdd Manager::conj(const SymTdd& f) {
  check_owner(f);
  const ModeScope scope(*this, f.relaxed);
  return wrap(conj_edge(f.root), f.relaxed);
}

SymTdd Manager::contract(const SymTdd& f, const SymTdd& g, std::span<const IndexRank> shared) {
  check_owner(f);
  check_owner(g);
  const bool relaxed = f.relaxed || g.relaxed;
  const ModeScope scope(*this, relaxed);
  const std::uint32_t id = intern_shared({shared.begin(), shared.end()});
  const IndexRank top = std::min(index_of(f.root.node), index_of(g.root.node));
  const Edge result = contract_edges(f.root, g.root, id);
  return wrap(power_of_two(result, shared_between(id, std::numeric_limits<IndexRank>::min(), top)), relaxed);
}

SymTdd Manager::apply_gate(const SymTdd& state, const SymTdd& gate, std::span<const int> qubits) {
  std::vector<IndexRank> shared;
  std::vector<std::pair<IndexRank, IndexRank>> rename;
  std::set<IndexRank> allowed;
  for (int q : qubits) {
    shared.push_back(rank(q, Port::in));
    rename.emplace_back(rank(q, Port::out), rank(q, Port::in));
    allowed.insert(rank(q, Port::in));
    allowed.insert(rank(q, Port::out));
  }
  if (std::set<int>(qubits.begin(), qubits.end()).size() != qubits.size()) {
    throw std::invalid_argument("gate qubits must be distinct");
  }
  check_owner(state);
  check_owner(gate);
  const SymTdd& g = gate;
  std::vector<NodeId> stack{g.root.node};
  std::unordered_set<NodeId> seen;
  while (!stack.empty()) {
    const NodeId n = stack.back();
    stack.pop_back();
    if (n == kTerminal || !seen.insert(n).second) {
      continue;
    }
    if (!allowed.contains(nodes_[n].index)) {
      throw std::invalid_argument("gate diagram uses an index outside its qubit operands (arity mismatch)");
    }
    stack.push_back(nodes_[n].low.node);
    stack.push_back(nodes_[n].high.node);
  }
  const SymTdd contracted = contract(state, g, shared);
  const std::uint32_t map_id = intern_rename(std::move(rename));
  return wrap(Edge{contracted.root.weight, rename_node(contracted.root.node, map_id)}, contracted.relaxed);
}

Edge Manager::normalize_node(NodeId n) {
  if (n == kTerminal) {
    return Edge{weights_.one(), kTerminal};
  }
  if (auto it = normalize_cache_.find(n); it != normalize_cache_.end()) {
    ++cache_hits_;
    return it->second;
  }
  const Node node = nodes_[n];
  const Edge low = node.low.is_zero() ? Edge{} : scale_edge(normalize_node(node.low.node), node.low.weight);
  const Edge high = node.high.is_zero() ? Edge{} : scale_edge(normalize_node(node.high.node), node.high.weight);
  const Edge result = make_node(node.index, low, high);
  normalize_cache_.emplace(n, result);
  return result;
}

SymTdd Manager::normalize_full(const SymTdd& f) {
  check_owner(f);
  const ModeScope scope(*this, false);
  // Bottom-up local normalisation of every node; scale_edge performs the
  // top-down support restriction wherever an incoming weight is narrower
  // than the supports below it.
  if (f.root.is_zero()) {
    return zero();
  }
  return wrap(scale_edge(normalize_node(f.root.node), f.root.weight));
}

bool Manager::is_fully_normalized(const SymTdd& f) {
  check_owner(f);
  std::vector<Edge> stack{f.root};
  std::unordered_set<Edge, EdgeHash> seen;
  while (!stack.empty()) {
    const Edge e = stack.back();
    stack.pop_back();
    if (e.is_zero()) {
      if (e.node != kTerminal) {
        return false;
      }
      continue;
    }
    if (e.node == kTerminal || !seen.insert(e).second) {
      continue;
    }
    const Node& v = nodes_[e.node];
    if (v.low == v.high) {
      return false;
    }
    const LocalNormalization expected{e.weight, v.low.weight, v.high.weight};
    const LocalNormalization actual =
        weights_.loc_norm(weights_.mul(e.weight, v.low.weight), weights_.mul(e.weight, v.high.weight));
    if (actual != expected) {
      return false;
    }
    stack.push_back(v.low);
    stack.push_back(v.high);
  }
  return true;
}

SymTdd Manager::rr3_pass(const SymTdd& f) {
  check_owner(f);
  const ModeScope scope(*this, true);
  Edge current = f.root;
  bool merged_any = false;
  while (current.node != kTerminal) {
    std::vector<NodeId> order;
    {
      std::vector<NodeId> stack{current.node};
      std::unordered_set<NodeId> seen;
      while (!stack.empty()) {
        const NodeId n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second) {
          continue;
        }
        order.push_back(n);
        for (const Edge& c : {nodes_[n].low, nodes_[n].high}) {
          if (!c.is_zero() && c.node != kTerminal) {
            stack.push_back(c.node);
          }
        }
      }
    }
    std::sort(order.begin(), order.end(),
              [this](NodeId a, NodeId b) { return std::pair(nodes_[a].index, a) < std::pair(nodes_[b].index, b); });

    // reach[n] indicates the assignments under which some root path
    // evaluates n. Outside it n never contributes, so its weights may be
    // restricted to it.
    std::unordered_map<NodeId, WeightTensor> reach;
    reach[current.node] = weights_.support(current.weight);
    for (NodeId n : order) {
      const WeightTensor here = reach[n];
      for (const Edge& c : {nodes_[n].low, nodes_[n].high}) {
        if (c.is_zero() || c.node == kTerminal) {
          continue;
        }
        auto [it, fresh] = reach.try_emplace(c.node, weights_.zero());
        const WeightTensor via = weights_.support(weights_.mul(here, c.weight));
        it->second = weights_.support(weights_.add(it->second, via));
      }
    }

    struct Candidate {
      NodeId node;
      Edge low;
      Edge high;
    };
    std::map<IndexRank, std::vector<Candidate>, std::greater<>> groups;
    for (NodeId n : order) {
      if (n == current.node) {
        continue;
      }
      const Node& node = nodes_[n];
      const WeightTensor& r = reach[n];
      groups[node.index].push_back(Candidate{n, edge(weights_.mul(node.low.weight, r), node.low.node),
                                             edge(weights_.mul(node.high.weight, r), node.high.node)});
    }

    // Zero edges match any successor.
    auto successor = [](const Edge& x, const Edge& y, NodeId& out) {
      if (x.is_zero()) {
        out = y.node;
        return true;
      }
      if (y.is_zero() || x.node == y.node) {
        out = x.node;
        return true;
      }
      return false;
    };

    // Merge disjoint pairs on the deepest rank that admits any merge.
    std::unordered_map<NodeId, Edge> replacement;
    IndexRank merged_rank = kTerminalRank;
    for (auto& [rank, candidates] : groups) {
      if (merged_rank != kTerminalRank && rank != merged_rank) {
        break;
      }
      std::sort(candidates.begin(), candidates.end(),
                [](const Candidate& a, const Candidate& b) { return a.node < b.node; });
      std::vector<bool> used(candidates.size(), false);
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        for (std::size_t j = i + 1; j < candidates.size() && !used[i]; ++j) {
          if (used[j]) {
            continue;
          }
          const Candidate& u = candidates[i];
          const Candidate& w = candidates[j];
          NodeId succ0 = kTerminal;
          NodeId succ1 = kTerminal;
          const WeightTensor& f0 = u.low.weight;
          const WeightTensor& f1 = u.high.weight;
          const WeightTensor& g0 = w.low.weight;
          const WeightTensor& g1 = w.high.weight;
          if (!successor(u.low, w.low, succ0) || !successor(u.high, w.high, succ1) ||
              !weights_.agree_on_common_support(f0, g0) || !weights_.agree_on_common_support(f1, g1) ||
              weights_.mul(weights_.support(f0), weights_.support(g1)) !=
                  weights_.mul(weights_.support(f1), weights_.support(g0))) {
            continue;
          }
          const Edge m = make_node(rank, edge(weights_.sqcup(f0, g0), succ0), edge(weights_.sqcup(f1, g1), succ1));
          const WeightTensor u_filter = weights_.sqcup(weights_.support(f0), weights_.support(f1));
          const WeightTensor w_filter = weights_.sqcup(weights_.support(g0), weights_.support(g1));
          replacement[u.node] = edge(weights_.mul(u_filter, m.weight), m.node);
          replacement[w.node] = edge(weights_.mul(w_filter, m.weight), m.node);
          used[i] = used[j] = true;
          merged_rank = rank;
        }
      }
    }
    if (replacement.empty()) {
      break;
    }
    merged_any = true;

    std::unordered_map<NodeId, Edge> rebuilt;
    auto rebuild = [&](auto&& self, NodeId n) -> Edge {
      if (n == kTerminal) {
        return Edge{weights_.one(), kTerminal};
      }
      if (auto it = replacement.find(n); it != replacement.end()) {
        return it->second;
      }
      if (auto it = rebuilt.find(n); it != rebuilt.end()) {
        return it->second;
      }
      const Node node = nodes_[n];
      auto child = [&](const Edge& c) {
        if (c.is_zero()) {
          return Edge{};
        }
        const Edge r = self(self, c.node);
        if (r.node == c.node && r.weight == weights_.one()) {
          return c;
        }
        return edge(weights_.mul(c.weight, r.weight), r.node);
      };
      const Edge low = child(node.low);
      const Edge high = child(node.high);
      const Edge result =
          (low == node.low && high == node.high) ? Edge{weights_.one(), n} : make_node(node.index, low, high);
      rebuilt.emplace(n, result);
      return result;
    };
    const Edge r = rebuild(rebuild, current.node);
    current = edge(weights_.mul(current.weight, r.weight), r.node);
  }
  return wrap(current, f.relaxed || merged_any);
}

Complex Manager::evaluate(const SymTdd& f, std::span<const std::uint8_t> index_bits,
                          std::span<const std::uint8_t> symbol_bits) const {
  check_owner(f);
  Complex value = weights_.evaluate(f.root.weight, symbol_bits);
  NodeId n = f.root.node;
  while (n != kTerminal && value != Complex{}) {
    const Node& node = nodes_[n];
    if (node.index < 0 || static_cast<std::size_t>(node.index) >= index_bits.size()) {
      throw std::out_of_range("assignment is missing index " + index_label(node.index, true));
    }
    const Edge& next = index_bits[node.index] != 0 ? node.high : node.low;
    value *= weights_.evaluate(next.weight, symbol_bits);
    n = next.node;
  }
  return value;
}

std::vector<std::uint8_t> Manager::state_index_bits(std::uint64_t basis, int n) const {
  std::vector<std::uint8_t> bits(2 * static_cast<std::size_t>(n), 0);
  for (int q = 0; q < n; ++q) {
    bits[rank(q)] = static_cast<std::uint8_t>((basis >> (n - 1 - q)) & 1U);
  }
  return bits;
}

Complex Manager::evaluate_state(const SymTdd& f, std::uint64_t basis, int n,
                                std::span<const std::uint8_t> symbol_bits) const {
  return evaluate(f, state_index_bits(basis, n), symbol_bits);
}

bool Manager::equal(const SymTdd& f, const SymTdd& g) {
  check_owner(f);
  check_owner(g);
  if (f.root == g.root) {
    return true;
  }
  if (!f.relaxed && !g.relaxed) {
    return false;
  }
  std::vector<IndexRank> indices = open_indices(f);
  const std::vector<IndexRank> other = open_indices(g);
  indices.insert(indices.end(), other.begin(), other.end());
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  const SymTdd fr = wrap(f.root, true);
  const SymTdd gr = wrap(g.root, true);
  const SymTdd fc = conj(fr);
  const SymTdd gc = conj(gr);
  auto inner = [&](const SymTdd& a, const SymTdd& b) { return contract(a, b, indices).root.weight; };
  const WeightTensor ff = inner(fc, fr);
  const WeightTensor gg = inner(gc, gr);
  const WeightTensor cross = weights_.add(inner(fc, gr), inner(gc, fr));
  const WeightTensor distance = weights_.subtract(weights_.add(ff, gg), cross);
  const double scale = std::max({1.0, weights_.max_abs(ff), weights_.max_abs(gg)});
  return weights_.max_abs(distance) <= 100.0 * epsilon() * scale;
}

std::vector<IndexRank> Manager::open_indices(const SymTdd& f) const {
  check_owner(f);
  std::set<IndexRank> found;
  std::unordered_set<NodeId> seen;
  std::vector<NodeId> stack{f.root.node};
  while (!stack.empty()) {
    const NodeId n = stack.back();
    stack.pop_back();
    if (n == kTerminal || !seen.insert(n).second) {
      continue;
    }
    found.insert(nodes_[n].index);
    stack.push_back(nodes_[n].low.node);
    stack.push_back(nodes_[n].high.node);
  }
  return {found.begin(), found.end()};
}

bool diagram_equal(const SymTdd& f, const SymTdd& g) {
  if (f.owner == nullptr || f.owner != g.owner) {
    throw CrossManagerError("cannot compare diagrams from different managers");
  }
  return const_cast<Manager*>(f.owner)->equal(f, g);
}

NodeCount Manager::node_count(const SymTdd& f) const {
  check_owner(f);
  std::unordered_set<NodeId> quantum;
  std::unordered_set<WeightNodeId> weight;
  weights_.collect_nodes(f.root.weight, weight);
  std::vector<NodeId> stack{f.root.node};
  while (!stack.empty()) {
    const NodeId n = stack.back();
    stack.pop_back();
    if (n == kTerminal || !quantum.insert(n).second) {
      continue;
    }
    const Node& node = nodes_[n];
    weights_.collect_nodes(node.low.weight, weight);
    weights_.collect_nodes(node.high.weight, weight);
    stack.push_back(node.low.node);
    stack.push_back(node.high.node);
  }
  return NodeCount{quantum.size(), weight.size(), quantum.size() + weight.size() + 1};
}

bool Manager::is_tower(const SymTdd& f) const {
  check_owner(f);
  std::unordered_set<NodeId> seen;
  std::set<IndexRank> ranks;
  std::vector<NodeId> stack{f.root.node};
  while (!stack.empty()) {
    const NodeId n = stack.back();
    stack.pop_back();
    if (n == kTerminal || !seen.insert(n).second) {
      continue;
    }
    if (!ranks.insert(nodes_[n].index).second) {
      return false;
    }
    stack.push_back(nodes_[n].low.node);
    stack.push_back(nodes_[n].high.node);
  }
  return true;
}

std::string Manager::to_dot(const SymTdd& f) const {
  check_owner(f);
  std::vector<NodeId> order;
  std::unordered_set<NodeId> seen;
  std::vector<NodeId> stack{f.root.node};
  bool operator_labels = false;
  while (!stack.empty()) {
    const NodeId n = stack.back();
    stack.pop_back();
    if (!seen.insert(n).second) {
      continue;
    }
    order.push_back(n);
    if (n == kTerminal) {
      continue;
    }
    operator_labels = operator_labels || nodes_[n].index % 2 != 0;
    stack.push_back(nodes_[n].high.node);
    stack.push_back(nodes_[n].low.node);
  }
  std::ostringstream out;
  out << "digraph symtdd {\n";
  out << "  root [shape=point];\n";
  for (NodeId n : order) {
    if (n == kTerminal) {
      out << "  n0 [label=\"1\", shape=box];\n";
    } else {
      out << "  n" << n << " [label=\"" << index_label(nodes_[n].index, operator_labels) << "\", shape=circle];\n";
    }
  }
  out << "  root -> n" << f.root.node << " [label=\"" << dot_escape(weights_.to_string(f.root.weight)) << "\"];\n";
  for (NodeId n : order) {
    if (n == kTerminal) {
      continue;
    }
    const Node& node = nodes_[n];
    if (!node.low.is_zero()) {
      out << "  n" << n << " -> n" << node.low.node << " [color=red, label=\""
          << dot_escape(weights_.to_string(node.low.weight)) << "\"];\n";
    }
    if (!node.high.is_zero()) {
      out << "  n" << n << " -> n" << node.high.node << " [color=blue, label=\""
          << dot_escape(weights_.to_string(node.high.weight)) << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

void Manager::clear_caches() {
  weights_.clear_caches();
  add_cache_.clear();
  contract_cache_.clear();
  scale_cache_.clear();
  normalize_cache_.clear();
  conj_cache_.clear();
  rename_cache_.clear();
}

void Manager::trim_caches(std::size_t limit) {
  const std::size_t size = weights_.cache_size() + add_cache_.size() + contract_cache_.size() +
                           scale_cache_.size() + normalize_cache_.size() + rename_cache_.size() + conj_cache_.size();
  if (size > limit) {
    clear_caches();
  }
}

}  // namespace symtdd
