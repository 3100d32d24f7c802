#include "symtdd/weight_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <tuple>

namespace symtdd {

namespace {

constexpr std::uint32_t kNoSymbol = std::numeric_limits<std::uint32_t>::max();

enum CacheTag : std::uint32_t { kMul = 1, kOverride = 2, kSqcup = 3, kDivide = 4 };

bool handle_less(const WeightTensor& a, const WeightTensor& b) {
  return std::tuple(a.node, a.top_weight.real(), a.top_weight.imag()) <
         std::tuple(b.node, b.top_weight.real(), b.top_weight.imag());
}

std::string format_number(Complex c) {
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::string(buf);
  };
  constexpr double tiny = 1e-12;
  const bool has_re = std::abs(c.real()) > tiny;
  const bool has_im = std::abs(c.imag()) > tiny;
  if (!has_im) {
    return fmt(has_re ? c.real() : 0.0);
  }
  std::string im;
  if (std::abs(c.imag() - 1.0) <= tiny) {
    im = "i";
  } else if (std::abs(c.imag() + 1.0) <= tiny) {
    im = "-i";
  } else {
    im = fmt(c.imag()) + "i";
  }
  if (!has_re) {
    return im;
  }
  return "(" + fmt(c.real()) + (im.front() == '-' ? "" : "+") + im + ")";
}

}  // namespace

WeightStore::WeightStore(double epsilon) : complex_table_(epsilon) {
  nodes_.push_back(Node{kNoSymbol, {}, {}});
}

SymbolId WeightStore::declare_symbol(std::string name) {
  const auto ordinal = static_cast<std::uint32_t>(symbol_names_.size());
  if (name.empty()) {
    name = "s" + std::to_string(ordinal);
  }
  symbol_names_.push_back(std::move(name));
  return SymbolId{ordinal};
}

const std::string& WeightStore::symbol_name(SymbolId s) const {
  if (s.ordinal >= symbol_names_.size()) {
    throw std::out_of_range("undeclared symbol s" + std::to_string(s.ordinal));
  }
  return symbol_names_[s.ordinal];
}

WeightTensor WeightStore::edge(Complex weight, WeightNodeId node) {
  const Complex w = canonical(weight);
  if (w == Complex{}) {
    return zero();
  }
  return {w, node};
}

WeightTensor WeightStore::constant(Complex c) { return edge(c, kWeightTerminal); }

WeightTensor WeightStore::literal(SymbolId s, Polarity polarity) {
  if (s.ordinal >= symbol_names_.size()) {
    throw std::out_of_range("undeclared symbol s" + std::to_string(s.ordinal));
  }
  return polarity == Polarity::positive ? make_node(s, zero(), one()) : make_node(s, one(), zero());
}

WeightTensor WeightStore::from_values(std::span<const Complex> values) {
  const std::size_t size = values.size();
  if (size == 0 || (size & (size - 1)) != 0) {
    throw std::invalid_argument("value table length must be a power of two");
  }
  std::size_t m = 0;
  while ((std::size_t{1} << m) < size) {
    ++m;
  }
  if (m > symbol_count()) {
    throw std::out_of_range("value table needs more symbols than declared");
  }
  auto build = [&](auto&& self, std::uint32_t level, std::size_t offset) -> WeightTensor {
    if (level == m) {
      return constant(values[offset]);
    }
    const std::size_t half = std::size_t{1} << (m - level - 1);
    return make_node(SymbolId{level}, self(self, level + 1, offset), self(self, level + 1, offset + half));
  };
  return build(build, 0, 0);
}

WeightTensor WeightStore::make_node(SymbolId s, const WeightTensor& low, const WeightTensor& high) {
  if (low == high) {
    return low;
  }
  if (symbol_of(low.node) <= s.ordinal || symbol_of(high.node) <= s.ordinal) {
    throw std::logic_error("weight node children must test later symbols");
  }
  const Complex pivot = low.is_zero() ? high.top_weight : low.top_weight;
  Node node{s.ordinal, edge(low.top_weight / pivot, low.node), edge(high.top_weight / pivot, high.node)};
  auto [it, inserted] = unique_.try_emplace(node, static_cast<WeightNodeId>(nodes_.size()));
  if (inserted) {
    nodes_.push_back(node);
  }
  return {pivot, it->second};
}

std::uint32_t WeightStore::top_symbol(const WeightTensor& f) const { return symbol_of(f.node); }

WeightTensor WeightStore::cofactor(const WeightTensor& f, std::uint32_t symbol, bool high) {
  if (symbol_of(f.node) != symbol) {
    return f;
  }
  const WeightTensor& child = high ? nodes_[f.node].high : nodes_[f.node].low;
  if (child.is_zero()) {
    return zero();
  }
  return edge(f.top_weight * child.top_weight, child.node);
}

WeightTensor WeightStore::scale(const WeightTensor& f, Complex c) {
  if (f.is_zero()) {
    return f;
  }
  return edge(f.top_weight * c, f.node);
}

WeightTensor WeightStore::add(const WeightTensor& f, const WeightTensor& g) {
  if (f.is_zero()) {
    return g;
  }
  if (g.is_zero()) {
    return f;
  }
  if (f.node == g.node) {
    return edge(f.top_weight + g.top_weight, f.node);
  }
  const auto& [a, b] = handle_less(f, g) ? std::tie(f, g) : std::tie(g, f);
  // a + b = a.w * ([[a.node]] + (b.w / a.w) [[b.node]])
  const WeightTensor unit_a{Complex{1.0, 0.0}, a.node};
  const WeightTensor ratio_b = edge(b.top_weight / a.top_weight, b.node);
  const PairKey key{unit_a, ratio_b, 0};
  if (auto it = add_cache_.find(key); it != add_cache_.end()) {
    ++cache_hits_;
    return scale(it->second, a.top_weight);
  }
  const std::uint32_t s = std::min(symbol_of(unit_a.node), symbol_of(ratio_b.node));
  const WeightTensor result =
      make_node(SymbolId{s}, add(cofactor(unit_a, s, false), cofactor(ratio_b, s, false)),
                add(cofactor(unit_a, s, true), cofactor(ratio_b, s, true)));
  add_cache_.emplace(key, result);
  return scale(result, a.top_weight);
}

WeightTensor WeightStore::subtract(const WeightTensor& f, const WeightTensor& g) {
  return add(f, scale(g, Complex{-1.0, 0.0}));
}

WeightTensor WeightStore::mul(const WeightTensor& f, const WeightTensor& g) {
  if (f.is_zero() || g.is_zero()) {
    return zero();
  }
  const Complex w = f.top_weight * g.top_weight;
  return scale(mul_nodes(f.node, g.node), w);
}

WeightTensor WeightStore::mul_nodes(WeightNodeId a, WeightNodeId b) {
  if (a == kWeightTerminal) {
    return {Complex{1.0, 0.0}, b};
  }
  if (b == kWeightTerminal) {
    return {Complex{1.0, 0.0}, a};
  }
  if (a > b) {
    std::swap(a, b);
  }
  const PairKey key{{Complex{1.0, 0.0}, a}, {Complex{1.0, 0.0}, b}, kMul};
  if (auto it = binary_cache_.find(key); it != binary_cache_.end()) {
    ++cache_hits_;
    return it->second;
  }
  const std::uint32_t s = std::min(symbol_of(a), symbol_of(b));
  const WeightTensor fa{Complex{1.0, 0.0}, a};
  const WeightTensor fb{Complex{1.0, 0.0}, b};
  const WeightTensor result = make_node(SymbolId{s}, mul(cofactor(fa, s, false), cofactor(fb, s, false)),
                                        mul(cofactor(fa, s, true), cofactor(fb, s, true)));
  binary_cache_.emplace(key, result);
  return result;
}

WeightTensor WeightStore::conj(const WeightTensor& f) {
  if (f.is_zero()) {
    return f;
  }
  return scale(conj_node(f.node), std::conj(f.top_weight));
}

WeightTensor WeightStore::conj_node(WeightNodeId n) {
  if (n == kWeightTerminal) {
    return one();
  }
  if (auto it = conj_cache_.find(n); it != conj_cache_.end()) {
    ++cache_hits_;
    return it->second;
  }
  const Node node = nodes_[n];
  const WeightTensor result = make_node(SymbolId{node.symbol}, conj(node.low), conj(node.high));
  conj_cache_.emplace(n, result);
  return result;
}

WeightTensor WeightStore::support(const WeightTensor& f) {
  if (f.is_zero()) {
    return zero();
  }
  return support_node(f.node);
}

WeightTensor WeightStore::support_node(WeightNodeId n) {
  if (n == kWeightTerminal) {
    return one();
  }
  if (auto it = support_cache_.find(n); it != support_cache_.end()) {
    ++cache_hits_;
    return it->second;
  }
  const Node node = nodes_[n];
  const WeightTensor result = make_node(SymbolId{node.symbol}, support(node.low), support(node.high));
  support_cache_.emplace(n, result);
  return result;
}

WeightTensor WeightStore::override_with(const WeightTensor& f, const WeightTensor& g, bool check) {
  if (f.is_zero()) {
    return g;
  }
  if (g.is_zero() || f == g) {
    return f;
  }
  if (f.is_constant() && (g.is_constant() || !check)) {
    if (check && std::abs(f.top_weight - g.top_weight) > epsilon()) {
      throw SupportConflict("sqcup operands disagree on their common support");
    }
    return f;
  }
  const PairKey key{f, g, check ? kSqcup : kOverride};
  if (auto it = binary_cache_.find(key); it != binary_cache_.end()) {
    ++cache_hits_;
    return it->second;
  }
  const std::uint32_t s = std::min(symbol_of(f.node), symbol_of(g.node));
  const WeightTensor low = override_with(cofactor(f, s, false), cofactor(g, s, false), check);
  const WeightTensor high = override_with(cofactor(f, s, true), cofactor(g, s, true), check);
  const WeightTensor result = make_node(SymbolId{s}, low, high);
  binary_cache_.emplace(key, result);
  return result;
}

WeightTensor WeightStore::sqcup(const WeightTensor& f, const WeightTensor& g) { return override_with(f, g, true); }

WeightTensor WeightStore::divide_on_support(const WeightTensor& g, const WeightTensor& f) {
  if (g.is_zero()) {
    return zero();
  }
  if (f.is_zero()) {
    return support(g);
  }
  if (f.is_constant()) {
    return scale(g, 1.0 / f.top_weight);
  }
  const PairKey key{g, f, kDivide};
  if (auto it = binary_cache_.find(key); it != binary_cache_.end()) {
    ++cache_hits_;
    return it->second;
  }
  const std::uint32_t s = std::min(symbol_of(f.node), symbol_of(g.node));
  const WeightTensor low = divide_on_support(cofactor(g, s, false), cofactor(f, s, false));
  const WeightTensor high = divide_on_support(cofactor(g, s, true), cofactor(f, s, true));
  const WeightTensor result = make_node(SymbolId{s}, low, high);
  binary_cache_.emplace(key, result);
  return result;
}

LocalNormalization WeightStore::loc_norm(const WeightTensor& f, const WeightTensor& g) {
  return {override_with(f, g, false), support(f), divide_on_support(g, f)};
}

bool WeightStore::agree_on_common_support(const WeightTensor& f, const WeightTensor& g) {
  const WeightTensor common = mul(support(f), support(g));
  return mul(common, subtract(f, g)).is_zero();
}

Complex WeightStore::evaluate(const WeightTensor& f, std::span<const std::uint8_t> bits) const {
  Complex value = f.top_weight;
  WeightNodeId n = f.node;
  while (n != kWeightTerminal && value != Complex{}) {
    const Node& node = nodes_[n];
    if (node.symbol >= bits.size()) {
      throw std::out_of_range("assignment is missing symbol " + symbol_names_.at(node.symbol));
    }
    const WeightTensor& next = bits[node.symbol] != 0 ? node.high : node.low;
    value *= next.top_weight;
    n = next.node;
  }
  return value;
}

std::vector<Complex> WeightStore::to_values(const WeightTensor& f, std::size_t m) const {
  std::vector<Complex> values(std::size_t{1} << m);
  std::vector<std::uint8_t> bits(std::max(m, symbol_count()), 0);
  for (std::size_t a = 0; a < values.size(); ++a) {
    for (std::size_t j = 0; j < m; ++j) {
      bits[j] = static_cast<std::uint8_t>((a >> (m - 1 - j)) & 1U);
    }
    values[a] = evaluate(f, bits);
  }
  return values;
}

std::string WeightStore::to_string(const WeightTensor& f) const {
  if (f.is_zero()) {
    return "0";
  }
  std::vector<std::string> terms;
  std::vector<std::string> literals;
  auto walk = [&](auto&& self, WeightNodeId n, Complex coefficient) -> void {
    if (n == kWeightTerminal) {
      std::string term;
      const bool unit = std::abs(coefficient - Complex{1.0, 0.0}) <= 1e-12;
      const bool minus_unit = std::abs(coefficient + Complex{1.0, 0.0}) <= 1e-12;
      if (literals.empty()) {
        term = format_number(coefficient);
      } else {
        if (minus_unit) {
          term = "-";
        } else if (!unit) {
          term = format_number(coefficient) + "*";
        }
        for (std::size_t i = 0; i < literals.size(); ++i) {
          term += (i == 0 ? "" : "*") + literals[i];
        }
      }
      terms.push_back(std::move(term));
      return;
    }
    const Node& node = nodes_[n];
    const std::string& name = symbol_names_[node.symbol];
    if (!node.low.is_zero()) {
      literals.push_back(name + "'");
      self(self, node.low.node, coefficient * node.low.top_weight);
      literals.pop_back();
    }
    if (!node.high.is_zero()) {
      literals.push_back(name);
      self(self, node.high.node, coefficient * node.high.top_weight);
      literals.pop_back();
    }
  };
  walk(walk, f.node, f.top_weight);
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i > 0) {
      out += terms[i].front() == '-' ? " - " + terms[i].substr(1) : " + " + terms[i];
    } else {
      out += terms[i];
    }
  }
  return out;
}

void WeightStore::collect_nodes(const WeightTensor& f, std::unordered_set<WeightNodeId>& seen) const {
  std::vector<WeightNodeId> stack{f.node};
  while (!stack.empty()) {
    const WeightNodeId n = stack.back();
    stack.pop_back();
    if (n == kWeightTerminal || !seen.insert(n).second) {
      continue;
    }
    stack.push_back(nodes_[n].low.node);
    stack.push_back(nodes_[n].high.node);
  }
}

std::size_t WeightStore::reachable_nodes(const WeightTensor& f) const {
  std::unordered_set<WeightNodeId> seen;
  collect_nodes(f, seen);
  return seen.size();
}

double WeightStore::max_abs(const WeightTensor& f) const {
  std::unordered_map<WeightNodeId, double> memo;
  auto walk = [&](auto&& self, WeightNodeId n) -> double {
    if (n == kWeightTerminal) {
      return 1.0;
    }
    if (auto it = memo.find(n); it != memo.end()) {
      return it->second;
    }
    const Node& node = nodes_[n];
    const double low = std::abs(node.low.top_weight) * self(self, node.low.node);
    const double high = std::abs(node.high.top_weight) * self(self, node.high.node);
    return memo[n] = std::max(low, high);
  };
  return std::abs(f.top_weight) * walk(walk, f.node);
}

std::size_t WeightStore::cache_size() const {
  return add_cache_.size() + binary_cache_.size() + support_cache_.size() + conj_cache_.size();
}

void WeightStore::clear_caches() {
  add_cache_.clear();
  binary_cache_.clear();
  support_cache_.clear();
  conj_cache_.clear();
}

}  // namespace symtdd
