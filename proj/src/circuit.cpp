#include "symtdd/circuit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace symtdd {

namespace {

struct Token {
  std::string_view text;
  int column;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') {
      break;
    }
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != '#') {
      ++i;
    }
    tokens.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return tokens;
}

const std::map<std::string_view, GateKind, std::less<>> kSingleQubit = {
    {"h", GateKind::h}, {"x", GateKind::x},   {"y", GateKind::y},  {"z", GateKind::z},
    {"s", GateKind::s}, {"sdg", GateKind::sdg}, {"t", GateKind::t}, {"tdg", GateKind::tdg},
};

class LineParser {
 public:
  LineParser(int line, std::vector<Token> tokens) : line_(line), tokens_(std::move(tokens)) {}

  [[noreturn]] void fail(std::size_t token, const std::string& message) const {
    const int column = token < tokens_.size() ? tokens_[token].column
                                              : (tokens_.empty() ? 1
                                                                 : tokens_.back().column +
                                                                       static_cast<int>(tokens_.back().text.size()));
    throw ParseError({line_, column}, message);
  }

  std::size_t size() const { return tokens_.size(); }
  std::string_view text(std::size_t i) const { return tokens_[i].text; }

  void expect_count(std::size_t count, std::string_view statement) const {
    if (tokens_.size() < count) {
      fail(tokens_.size(), "'" + std::string(statement) + "' expects " + std::to_string(count - 1) + " operand(s)");
    }
    if (tokens_.size() > count) {
      fail(count, "unexpected token '" + std::string(tokens_[count].text) + "'");
    }
  }

  int integer(std::size_t i) const {
    if (i >= tokens_.size()) {
      fail(i, "expected an integer");
    }
    int value = 0;
    const auto t = tokens_[i].text;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size()) {
      fail(i, "expected an integer, got '" + std::string(t) + "'");
    }
    return value;
  }

  int qubit(std::size_t i, int n_qubits) const {
    if (i >= tokens_.size()) {
      fail(i, "expected a qubit operand");
    }
    const auto t = tokens_[i].text;
    int value = -1;
    if (t.size() >= 2 && t[0] == 'q') {
      auto [ptr, ec] = std::from_chars(t.data() + 1, t.data() + t.size(), value);
      if (ec != std::errc{} || ptr != t.data() + t.size()) {
        value = -1;
      }
    }
    if (value < 0) {
      fail(i, "expected a qubit like 'q0', got '" + std::string(t) + "'");
    }
    if (n_qubits < 0) {
      fail(i, "'qubits N' must come before any qubit is used");
    }
    if (value >= n_qubits) {
      fail(i, "qubit q" + std::to_string(value) + " is undeclared (circuit has " + std::to_string(n_qubits) + ")");
    }
    return value;
  }

 private:
  int line_;
  std::vector<Token> tokens_;
};

std::string kind_keyword(GateKind kind) {
  for (const auto& [word, k] : kSingleQubit) {
    if (k == kind) {
      return std::string(word);
    }
  }
  switch (kind) {
    case GateKind::rk: return "rk";
    case GateKind::rkdg: return "rkdg";
    case GateKind::cx: return "cx";
    case GateKind::crk: return "crk";
    case GateKind::ccx: return "ccx";
    case GateKind::mcx: return "mcx";
    default: return "?";
  }
}

}  // namespace

ParseError::ParseError(SourceLocation where, const std::string& message)
    : std::runtime_error(std::to_string(where.line) + ":" + std::to_string(where.column) + ": " + message),
      where_(where) {}

std::vector<int> Gate::qubits() const {
  std::vector<int> all = controls;
  all.push_back(target);
  return all;
}

void Circuit::validate() const {
  if (n_qubits < 1) {
    throw std::invalid_argument("circuit needs at least one qubit");
  }
  if (init.size() != static_cast<std::size_t>(n_qubits)) {
    throw std::invalid_argument("init list size does not match qubit count");
  }
  for (const QubitInit& q : init) {
    if (q.kind == InitKind::symbol && q.symbol >= symbols.size()) {
      throw std::invalid_argument("init references an undeclared symbol");
    }
  }
  for (const Gate& g : gates) {
    const auto qs = g.qubits();
    for (int q : qs) {
      if (q < 0 || q >= n_qubits) {
        throw std::invalid_argument("gate references qubit q" + std::to_string(q) + " out of range");
      }
    }
    if (std::set<int>(qs.begin(), qs.end()).size() != qs.size()) {
      throw std::invalid_argument("control and target qubits must be distinct");
    }
    if ((g.kind == GateKind::rk || g.kind == GateKind::rkdg || g.kind == GateKind::crk) && g.k < 1) {
      throw std::invalid_argument("rotation index k must be >= 1");
    }
    if (g.symbolic && g.symbolic->symbol >= symbols.size()) {
      throw std::invalid_argument("gate references an undeclared symbol");
    }
    if ((g.kind == GateKind::symx) != g.symbolic.has_value()) {
      throw std::invalid_argument("only symx gates carry a symbolic control");
    }
  }
}

Circuit parse_circuit(std::string_view text) {
  Circuit circuit;
  int n_qubits = -1;
  std::map<std::string, std::uint32_t, std::less<>> symbol_ids;
  int line_number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view raw = text.substr(pos, end - pos);
    if (!raw.empty() && raw.back() == '\r') {
      raw.remove_suffix(1);
    }
    pos = end + 1;
    ++line_number;
    LineParser p(line_number, tokenize(raw));
    if (p.size() == 0) {
      if (end == text.size()) {
        break;
      }
      continue;
    }
    const std::string_view op = p.text(0);

    auto symbol_at = [&](std::size_t i) -> std::uint32_t {
      if (i >= p.size()) {
        p.fail(i, "expected a symbol name");
      }
      auto it = symbol_ids.find(p.text(i));
      if (it == symbol_ids.end()) {
        p.fail(i, "undeclared symbol '" + std::string(p.text(i)) + "'");
      }
      return it->second;
    };
    auto distinct = [&](const Gate& g, std::size_t first_operand) {
      const auto qs = g.qubits();
      if (std::set<int>(qs.begin(), qs.end()).size() != qs.size()) {
        p.fail(first_operand, "control and target qubits must be distinct");
      }
    };
    // Parses an optional trailing "ctrlsym sJ" / "ctrlsymneg sJ"; returns the
    // number of operand tokens before it.
    auto symbolic_suffix = [&](Gate& g) -> std::size_t {
      if (p.size() >= 3) {
        const std::string_view kw = p.text(p.size() - 2);
        if (kw == "ctrlsym" || kw == "ctrlsymneg") {
          g.symbolic = SymbolicControl{symbol_at(p.size() - 1),
                                       kw == "ctrlsym" ? Polarity::positive : Polarity::complement};
          g.kind = GateKind::symx;
          return p.size() - 2;
        }
      }
      return p.size();
    };

    if (op == "qubits") {
      p.expect_count(2, op);
      if (n_qubits >= 0) {
        p.fail(0, "'qubits' declared twice");
      }
      n_qubits = p.integer(1);
      if (n_qubits < 1) {
        p.fail(1, "qubit count must be positive");
      }
      circuit.n_qubits = n_qubits;
      circuit.init.assign(n_qubits, QubitInit{});
    } else if (op == "symbols") {
      if (p.size() < 2) {
        p.fail(1, "'symbols' expects at least one name");
      }
      for (std::size_t i = 1; i < p.size(); ++i) {
        const std::string name(p.text(i));
        if (!std::isalpha(static_cast<unsigned char>(name[0]))) {
          p.fail(i, "symbol names must start with a letter");
        }
        if (!symbol_ids.emplace(name, static_cast<std::uint32_t>(circuit.symbols.size())).second) {
          p.fail(i, "symbol '" + name + "' declared twice");
        }
        circuit.symbols.push_back(name);
      }
    } else if (op == "init") {
      if (p.size() < 3) {
        p.fail(p.size(), "'init' expects a qubit and 0, 1 or 'sym <name>'");
      }
      const int q = p.qubit(1, n_qubits);
      if (p.text(2) == "sym") {
        p.expect_count(4, "init qK sym");
        circuit.init[q] = QubitInit{InitKind::symbol, symbol_at(3)};
      } else {
        p.expect_count(3, op);
        if (p.text(2) == "0") {
          circuit.init[q] = QubitInit{InitKind::zero, 0};
        } else if (p.text(2) == "1") {
          circuit.init[q] = QubitInit{InitKind::one, 0};
        } else {
          p.fail(2, "expected 0, 1 or 'sym', got '" + std::string(p.text(2)) + "'");
        }
      }
    } else if (auto it = kSingleQubit.find(op); it != kSingleQubit.end()) {
      Gate g;
      g.kind = it->second;
      const std::size_t operands = op == "x" ? symbolic_suffix(g) : p.size();
      if (operands != 2) {
        p.fail(std::min<std::size_t>(operands, 2), "'" + std::string(op) + "' expects exactly one qubit");
      }
      g.target = p.qubit(1, n_qubits);
      circuit.gates.push_back(g);
    } else if (op == "rk" || op == "rkdg") {
      p.expect_count(3, op);
      Gate g;
      g.kind = op == "rk" ? GateKind::rk : GateKind::rkdg;
      g.k = p.integer(1);
      if (g.k < 1) {
        p.fail(1, "rotation index k must be >= 1");
      }
      g.target = p.qubit(2, n_qubits);
      circuit.gates.push_back(g);
    } else if (op == "crk") {
      p.expect_count(4, op);
      Gate g;
      g.kind = GateKind::crk;
      g.k = p.integer(1);
      if (g.k < 1) {
        p.fail(1, "rotation index k must be >= 1");
      }
      g.controls = {p.qubit(2, n_qubits)};
      g.target = p.qubit(3, n_qubits);
      distinct(g, 2);
      circuit.gates.push_back(g);
    } else if (op == "cx" || op == "ccx" || op == "mcx") {
      Gate g;
      g.kind = op == "cx" ? GateKind::cx : (op == "ccx" ? GateKind::ccx : GateKind::mcx);
      const std::size_t operands = symbolic_suffix(g);
      const std::size_t expected = op == "cx" ? 3 : (op == "ccx" ? 4 : 0);
      if (expected != 0 && operands != expected) {
        p.fail(std::min(operands, expected), "'" + std::string(op) + "' expects " + std::to_string(expected - 1) +
                                                 " qubits");
      }
      if (expected == 0 && operands < 3) {
        p.fail(operands, "'mcx' expects at least one control and a target");
      }
      for (std::size_t i = 1; i + 1 < operands; ++i) {
        g.controls.push_back(p.qubit(i, n_qubits));
      }
      g.target = p.qubit(operands - 1, n_qubits);
      distinct(g, 1);
      circuit.gates.push_back(g);
    } else {
      p.fail(0, "unknown statement '" + std::string(op) + "'");
    }
    if (end == text.size()) {
      break;
    }
  }
  if (n_qubits < 0) {
    throw ParseError({line_number, 1}, "missing 'qubits N' declaration");
  }
  return circuit;
}

std::string unparse_circuit(const Circuit& circuit) {
  std::ostringstream out;
  out << "qubits " << circuit.n_qubits << "\n";
  if (!circuit.symbols.empty()) {
    out << "symbols";
    for (const auto& s : circuit.symbols) {
      out << ' ' << s;
    }
    out << "\n";
  }
  for (int q = 0; q < circuit.n_qubits; ++q) {
    const QubitInit& init = circuit.init[q];
    if (init.kind == InitKind::one) {
      out << "init q" << q << " 1\n";
    } else if (init.kind == InitKind::symbol) {
      out << "init q" << q << " sym " << circuit.symbols[init.symbol] << "\n";
    }
  }
  for (const Gate& g : circuit.gates) {
    switch (g.kind) {
      case GateKind::rk:
      case GateKind::rkdg:
        out << kind_keyword(g.kind) << ' ' << g.k << " q" << g.target;
        break;
      case GateKind::crk:
        out << "crk " << g.k << " q" << g.controls.at(0) << " q" << g.target;
        break;
      case GateKind::symx:
      case GateKind::cx:
      case GateKind::ccx:
      case GateKind::mcx: {
        const std::size_t c = g.controls.size();
        if (g.kind == GateKind::symx) {
          out << (c == 0 ? "x" : c == 1 ? "cx" : c == 2 ? "ccx" : "mcx");
        } else {
          out << kind_keyword(g.kind);
        }
        for (int q : g.controls) {
          out << " q" << q;
        }
        out << " q" << g.target;
        if (g.symbolic) {
          out << (g.symbolic->polarity == Polarity::positive ? " ctrlsym " : " ctrlsymneg ")
              << circuit.symbols[g.symbolic->symbol];
        }
        break;
      }
      default:
        out << kind_keyword(g.kind) << " q" << g.target;
    }
    out << "\n";
  }
  return out.str();
}

std::complex<double> root_of_unity(int k) {
  switch (k) {
    case 0: return {1.0, 0.0};
    case 1: return {-1.0, 0.0};
    case 2: return {0.0, 1.0};
    case 3: return {std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2};
    default: break;
  }
  const double angle = 2.0 * std::numbers::pi / std::ldexp(1.0, k);
  return {std::cos(angle), std::sin(angle)};
}

Eigen::Matrix2cd target_matrix(const Gate& gate) {
  using C = std::complex<double>;
  const double r = std::numbers::sqrt2 / 2;
  Eigen::Matrix2cd m;
  switch (gate.kind) {
    case GateKind::h: m << r, r, r, -r; break;
    case GateKind::x:
    case GateKind::cx:
    case GateKind::ccx:
    case GateKind::mcx:
    case GateKind::symx: m << 0, 1, 1, 0; break;
    case GateKind::y: m << 0, C(0, -1), C(0, 1), 0; break;
    case GateKind::z: m << 1, 0, 0, -1; break;
    case GateKind::s: m << 1, 0, 0, C(0, 1); break;
    case GateKind::sdg: m << 1, 0, 0, C(0, -1); break;
    case GateKind::t: m << 1, 0, 0, root_of_unity(3); break;
    case GateKind::tdg: m << 1, 0, 0, std::conj(root_of_unity(3)); break;
    case GateKind::rk:
    case GateKind::crk: m << 1, 0, 0, root_of_unity(gate.k); break;
    case GateKind::rkdg: m << 1, 0, 0, std::conj(root_of_unity(gate.k)); break;
  }
  return m;
}

}  // namespace symtdd
