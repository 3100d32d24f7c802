#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "support/oracle.hpp"
#include "symtdd/circuit.hpp"
#include "symtdd/simulate.hpp"
#include "symtdd/symtdd.hpp"

using namespace symtdd;

namespace {

constexpr double kTol = 1e-9;

std::vector<WeightTensor> random_amplitudes(Manager& m, std::mt19937_64& rng, int n, std::size_t symbols) {
  std::uniform_int_distribution<int> pick(-2, 2);
  std::bernoulli_distribution zero(0.4);
  std::vector<WeightTensor> amps;
  for (int b = 0; b < (1 << n); ++b) {
    std::vector<Complex> values(std::size_t{1} << symbols);
    for (auto& v : values) {
      v = zero(rng) ? Complex{} : Complex(pick(rng), pick(rng));
    }
    amps.push_back(m.weights().from_values(values));
  }
  return amps;
}

void expect_state(Manager& m, const SymTdd& f, int n, std::size_t symbols,
                  const std::function<Complex(std::uint64_t, const std::vector<std::uint8_t>&)>& want) {
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << symbols); ++a) {
    const auto sym = oracle::bits_of(a, symbols);
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
      EXPECT_NEAR(std::abs(m.evaluate_state(f, b, n, sym) - want(b, sym)), 0.0, kTol)
          << "basis " << b << " symbols " << a;
    }
  }
}

void declare(Manager& m, int count) {
  for (int i = 0; i < count; ++i) {
    m.declare_symbol("s" + std::to_string(i));
  }
}

}  // namespace

TEST(SymTdd, HadamardOnSymbolicBasisState) {
  const Circuit c = parse_circuit("qubits 1\nsymbols s\ninit q0 sym s\nh q0\n");
  Manager m;
  const SymTdd out = simulate(c, m).state;
  const double r = 1.0 / std::sqrt(2.0);
  expect_state(m, out, 1, 1, [&](std::uint64_t b, const std::vector<std::uint8_t>& s) {
    return b == 0 ? Complex(r) : Complex(s[0] ? -r : r);
  });
}

TEST(SymTdd, FromAmplitudesRoundTrip) {
  std::mt19937_64 rng(1);
  Manager m;
  declare(m, 2);
  const auto amps = random_amplitudes(m, rng, 3, 2);
  const SymTdd f = m.from_amplitudes(amps);
  EXPECT_FALSE(f.relaxed);
  EXPECT_TRUE(m.is_fully_normalized(f));
  expect_state(m, f, 3, 2, [&](std::uint64_t b, const std::vector<std::uint8_t>& s) {
    return m.weights().evaluate(amps[b], s);
  });
}

TEST(SymTdd, AddScaleAndInnerProduct) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    Manager m;
    declare(m, 2);
    const auto a = random_amplitudes(m, rng, 3, 2);
    const auto b = random_amplitudes(m, rng, 3, 2);
    const SymTdd fa = m.from_amplitudes(a);
    const SymTdd fb = m.from_amplitudes(b);
    const WeightTensor w = m.weights().literal(SymbolId{1}, Polarity::complement);
    const SymTdd sum = m.add(fa, m.scale(fb, w));
    EXPECT_TRUE(m.is_fully_normalized(sum));
    auto& ws = m.weights();
    expect_state(m, sum, 3, 2, [&](std::uint64_t i, const std::vector<std::uint8_t>& s) {
      return ws.evaluate(a[i], s) + (s[1] ? 0.0 : 1.0) * ws.evaluate(b[i], s);
    });

    std::vector<IndexRank> shared;
    for (int q = 0; q < 3; ++q) {
      shared.push_back(m.rank(q));
    }
    const SymTdd inner = m.contract(m.conj(fa), fb, shared);
    EXPECT_TRUE(m.is_fully_normalized(inner));
    EXPECT_EQ(inner.root.node, kTerminal);
    for (std::uint64_t x = 0; x < 4; ++x) {
      const auto s = oracle::bits_of(x, 2);
      Complex want{};
      for (std::size_t i = 0; i < a.size(); ++i) {
        want += std::conj(ws.evaluate(a[i], s)) * ws.evaluate(b[i], s);
      }
      EXPECT_NEAR(std::abs(ws.evaluate(inner.root.weight, s) - want), 0.0, kTol);
    }
  }
}

TEST(SymTdd, ContractSkippedIndexCountsTwice) {
  Manager m;
  const SymTdd one = m.constant(m.weights().one());
  const std::vector<IndexRank> shared{m.rank(0)};
  const SymTdd r = m.contract(one, one, shared);
  EXPECT_EQ(r.root.weight, m.weights().constant(2.0));
}

TEST(SymTdd, RandomCircuitsMatchReference) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    const Circuit c = oracle::random_circuit(rng, 4, 3, 14);
    for (bool rr3 : {true, false}) {
      Manager m;
      SimulationOptions opt;
      opt.rr3 = rr3;
      const SymTdd out = simulate(c, m, opt).state;
      const std::size_t k = c.symbols.size();
      for (std::uint64_t x = 0; x < (std::uint64_t{1} << k); ++x) {
        const auto sym = oracle::bits_of(x, k);
        const auto ref = oracle::run(c, sym);
        for (std::uint64_t b = 0; b < ref.size(); ++b) {
          ASSERT_NEAR(std::abs(m.evaluate_state(out, b, c.n_qubits, sym) - ref[b]), 0.0, kTol)
              << unparse_circuit(c) << "rr3=" << rr3;
        }
      }
    }
  }
}

TEST(SymTdd, ToffoliOnSymbolicInputStaysTower) {
  const Circuit c = parse_circuit(
      "qubits 3\nsymbols a b c\ninit q0 sym a\ninit q1 sym b\ninit q2 sym c\nccx q0 q1 q2\n");
  Manager m;
  const SymTdd out = simulate(c, m).state;
  EXPECT_TRUE(m.is_tower(out));
  EXPECT_EQ(m.node_count(out).quantum_layer(), 4U);
}

TEST(SymTdd, NormalizeFullIsIdempotentAndEqual) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const Circuit c = oracle::random_circuit(rng, 3, 3, 10);
    Manager m;
    const SymTdd out = simulate(c, m).state;
    const SymTdd once = m.normalize_full(out);
    EXPECT_TRUE(m.is_fully_normalized(once));
    EXPECT_FALSE(once.relaxed);
    EXPECT_EQ(m.normalize_full(once).root, once.root);
    EXPECT_TRUE(m.equal(out, once));
    EXPECT_TRUE(m.equal(once, out));
  }
}

TEST(SymTdd, EqualDetectsDifference) {
  Manager m;
  declare(m, 2);
  const SymTdd a = m.symbolic_basis_state(2, true);
  const SymTdd b = m.scale(a, m.weights().constant({0, 1}));
  EXPECT_FALSE(m.equal(a, b));
  EXPECT_TRUE(m.equal(a, m.symbolic_basis_state(2, false)));
}

TEST(SymTdd, Rr3PreservesValues) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const Circuit c = oracle::random_circuit(rng, 4, 3, 12);
    Manager m;
    SimulationOptions opt;
    opt.rr3 = false;
    const SymTdd out = simulate(c, m, opt).state;
    const SymTdd reduced = m.rr3_pass(out);
    EXPECT_LE(m.node_count(reduced).quantum_nodes, m.node_count(out).quantum_nodes);
    expect_state(m, reduced, c.n_qubits, c.symbols.size(),
                 [&](std::uint64_t b, const std::vector<std::uint8_t>& s) {
                   return m.evaluate_state(out, b, c.n_qubits, s);
                 });
  }
}

TEST(SymTdd, HandBuiltViolations) {
  Manager m;
  declare(m, 1);
  auto& ws = m.weights();
  const Edge leaf = m.edge(ws.one(), kTerminal);
  const Edge unnormalised = m.make_raw_node(m.rank(0), m.edge(ws.constant(2.0), kTerminal), leaf);
  EXPECT_FALSE(m.is_fully_normalized(m.wrap(unnormalised)));

  const WeightTensor s = ws.literal(SymbolId{0}, Polarity::positive);
  const WeightTensor sc = ws.literal(SymbolId{0}, Polarity::complement);
  const Edge child = m.make_raw_node(m.rank(1), leaf, m.edge(s, kTerminal));
  const Edge parent = m.make_raw_node(m.rank(0), m.edge(sc, child.node), m.edge(ws.zero(), kTerminal));
  EXPECT_FALSE(m.is_fully_normalized(m.wrap(parent)));
  EXPECT_TRUE(m.is_fully_normalized(m.normalize_full(m.wrap(parent))));

  const Edge same = m.make_raw_node(m.rank(0), leaf, leaf);
  EXPECT_FALSE(m.is_fully_normalized(m.wrap(same)));
}

TEST(SymTdd, QubitOrderDoesNotChangeAmplitudes) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const Circuit c = oracle::random_circuit(rng, 4, 2, 12);
    std::vector<int> order(c.n_qubits);
    std::iota(order.rbegin(), order.rend(), 0);
    Manager natural;
    Manager reversed(ManagerOptions{1e-10, order});
    const SymTdd a = simulate(c, natural).state;
    const SymTdd b = simulate(c, reversed).state;
    expect_state(reversed, b, c.n_qubits, c.symbols.size(),
                 [&](std::uint64_t i, const std::vector<std::uint8_t>& s) {
                   return natural.evaluate_state(a, i, c.n_qubits, s);
                 });
  }
}

TEST(SymTdd, Errors) {
  Manager a;
  Manager b;
  declare(a, 1);
  declare(b, 1);
  const SymTdd fa = a.symbolic_basis_state(1);
  const SymTdd fb = b.symbolic_basis_state(1);
  EXPECT_THROW(a.add(fa, fb), CrossManagerError);
  Gate g;
  g.kind = GateKind::cx;
  g.controls = {0};
  g.target = 1;
  const SymTdd cx = gate_tensor(g, a);
  const std::vector<int> repeated{0, 0};
  EXPECT_THROW(a.apply_gate(fa, cx, repeated), std::invalid_argument);
}

TEST(SymTdd, DotOutput) {
  Manager m;
  declare(m, 2);
  const std::string dot = m.to_dot(m.symbolic_basis_state(2));
  EXPECT_EQ(dot.rfind("digraph", 0), 0U);
  EXPECT_NE(dot.find("s0"), std::string::npos);
}
