#include <gtest/gtest.h>

#include <random>
#include <string>

#include "support/oracle.hpp"
#include "symtdd/circuit.hpp"
#include "symtdd/simulate.hpp"

using namespace symtdd;

namespace {

ParseError parse_failure(const std::string& text) {
  try {
    parse_circuit(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no ParseError for:\n" << text;
  return ParseError({0, 0}, "");
}

}  // namespace

TEST(Circuit, ParsesFullGrammar) {
  const Circuit c = parse_circuit(
      "# comment\n"
      "qubits 3\n"
      "symbols a b\n"
      "init q0 sym a\n"
      "init q2 1\n"
      "h q0\n"
      "rk 3 q1\n"
      "rkdg 2 q1\n"
      "crk 2 q0 q1\n"
      "ccx q0 q1 q2\n"
      "mcx q0 q1 q2\n"
      "x q2 ctrlsym b\n"
      "cx q0 q2 ctrlsymneg a\n");
  EXPECT_EQ(c.n_qubits, 3);
  ASSERT_EQ(c.symbols.size(), 2U);
  EXPECT_EQ(c.init[0].kind, InitKind::symbol);
  EXPECT_EQ(c.init[1].kind, InitKind::zero);
  EXPECT_EQ(c.init[2].kind, InitKind::one);
  ASSERT_EQ(c.gates.size(), 8U);
  EXPECT_EQ(c.gates[1].kind, GateKind::rk);
  EXPECT_EQ(c.gates[1].k, 3);
  EXPECT_EQ(c.gates[3].controls, std::vector<int>{0});
  EXPECT_EQ(c.gates[3].target, 1);
  EXPECT_EQ(c.gates[5].kind, GateKind::mcx);
  EXPECT_EQ(c.gates[6].kind, GateKind::symx);
  EXPECT_TRUE(c.gates[6].controls.empty());
  EXPECT_EQ(c.gates[7].kind, GateKind::symx);
  EXPECT_EQ(c.gates[7].controls, std::vector<int>{0});
  EXPECT_EQ(c.gates[7].symbolic->polarity, Polarity::complement);
}

TEST(Circuit, DiagnosticsCarryLineAndColumn) {
  const ParseError e = parse_failure("qubits 2\nh q0\ncx q0\n");
  EXPECT_EQ(e.where().line, 3);
  EXPECT_EQ(std::string(e.what()), "3:6: 'cx' expects 2 qubits");
  EXPECT_EQ(parse_failure("qubits 2\nh q5\n").where().line, 2);
  EXPECT_EQ(parse_failure("h q0\n").where().line, 1);
  EXPECT_EQ(parse_failure("qubits 1\nfoo q0\n").where().column, 1);
  EXPECT_EQ(parse_failure("qubits 2\ncx q1 q1\n").where().line, 2);
  EXPECT_EQ(parse_failure("qubits 1\nsymbols s\ninit q0 sym t\n").where().line, 3);
  EXPECT_EQ(parse_failure("qubits 1\nrk 0 q0\n").where().line, 2);
  EXPECT_THROW(parse_circuit("symbols s\n"), ParseError);
}

TEST(Circuit, RoundTripsRandomCircuits) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const Circuit c = oracle::random_circuit(rng, 5, 3, 15);
    EXPECT_EQ(parse_circuit(unparse_circuit(c)), c) << unparse_circuit(c);
  }
}

TEST(Circuit, ValidateRejectsBadGates) {
  Circuit c;
  c.n_qubits = 2;
  c.init.assign(2, QubitInit{});
  Gate g;
  g.kind = GateKind::cx;
  g.controls = {0};
  g.target = 0;
  c.gates = {g};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.gates[0].target = 2;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.gates[0].target = 1;
  EXPECT_NO_THROW(c.validate());
}

TEST(Circuit, RootOfUnity) {
  EXPECT_EQ(root_of_unity(1), Complex(-1, 0));
  EXPECT_EQ(root_of_unity(2), Complex(0, 1));
  EXPECT_NEAR(std::abs(root_of_unity(3) - oracle::phase(1.0 / 8)), 0.0, 1e-15);
}

TEST(Circuit, TargetMatricesMatchReference) {
  for (GateKind kind : {GateKind::h, GateKind::x, GateKind::y, GateKind::z, GateKind::s, GateKind::sdg, GateKind::t,
                        GateKind::tdg, GateKind::rk, GateKind::rkdg}) {
    Gate g;
    g.kind = kind;
    g.k = 3;
    const Eigen::Matrix2cd m = target_matrix(g);
    const oracle::Mat2 ref = oracle::matrix_of(g);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        EXPECT_NEAR(std::abs(m(r, c) - ref[r][c]), 0.0, 1e-12);
      }
    }
  }
}

TEST(Circuit, GateTensorEntries) {
  Manager m;
  const SymbolId s = m.declare_symbol("s");
  Gate g;
  g.kind = GateKind::crk;
  g.k = 2;
  g.controls = {1};
  g.target = 0;
  const SymTdd crk = gate_tensor(g, m);
  Gate sx;
  sx.kind = GateKind::symx;
  sx.target = 1;
  sx.symbolic = SymbolicControl{s.ordinal, Polarity::positive};
  const SymTdd xs = gate_tensor(sx, m);
  for (int bits = 0; bits < 16; ++bits) {
    std::vector<std::uint8_t> idx(4);
    const int in0 = bits >> 3 & 1;
    const int out0 = bits >> 2 & 1;
    const int in1 = bits >> 1 & 1;
    const int out1 = bits & 1;
    idx[m.rank(0, Port::in)] = in0;
    idx[m.rank(0, Port::out)] = out0;
    idx[m.rank(1, Port::in)] = in1;
    idx[m.rank(1, Port::out)] = out1;
    Complex expected = (in0 == out0 && in1 == out1) ? 1.0 : 0.0;
    if (expected != Complex{} && in0 == 1 && in1 == 1) {
      expected = Complex(0, 1);
    }
    EXPECT_NEAR(std::abs(m.evaluate(crk, idx, std::vector<std::uint8_t>{0}) - expected), 0.0, 1e-12);
    for (std::uint8_t sv : {0, 1}) {
      const Complex want = (in1 ^ sv) == out1 ? 1.0 : 0.0;
      EXPECT_EQ(m.evaluate(xs, idx, std::vector<std::uint8_t>{sv}), want);
    }
  }
}
