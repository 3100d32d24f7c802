#include <array>

#include "symtdd/simulate.hpp"

namespace symtdd {

namespace {

using WeightMatrix = std::array<std::array<WeightTensor, 2>, 2>;  // [out][in]

SymTdd single_qubit_operator(Manager& m, int qubit, const WeightMatrix& u) {
  const IndexRank in = m.rank(qubit, Port::in);
  const IndexRank out = m.rank(qubit, Port::out);
  auto leaf = [&](const WeightTensor& w) { return m.edge(w, kTerminal); };
  const Edge column0 = m.make_node(out, leaf(u[0][0]), leaf(u[1][0]));
  const Edge column1 = m.make_node(out, leaf(u[0][1]), leaf(u[1][1]));
  return m.wrap(m.make_node(in, column0, column1));
}

SymTdd outer_product(Manager& m, const SymTdd& a, const SymTdd& b) { return m.contract(a, b, {}); }

}  // namespace

SymTdd gate_tensor(const Gate& gate, Manager& manager) {
  WeightStore& w = manager.weights();
  WeightMatrix u;
  if (gate.kind == GateKind::symx) {
    const SymbolId s{gate.symbolic->symbol};
    const Polarity on = gate.symbolic->polarity;
    const Polarity off = on == Polarity::positive ? Polarity::complement : Polarity::positive;
    const WeightTensor active = w.literal(s, on);
    const WeightTensor idle = w.literal(s, off);
    u = {{{idle, active}, {active, idle}}};
  } else {
    const Eigen::Matrix2cd m = target_matrix(gate);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        u[r][c] = w.constant(m(r, c));
      }
    }
  }
  if (gate.controls.empty()) {
    return single_qubit_operator(manager, gate.target, u);
  }

  const WeightMatrix identity{{{w.one(), w.zero()}, {w.zero(), w.one()}}};
  const WeightMatrix projector_one{{{w.zero(), w.zero()}, {w.zero(), w.one()}}};
  WeightMatrix delta;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      delta[r][c] = w.subtract(u[r][c], identity[r][c]);
    }
  }
  SymTdd all_identity = single_qubit_operator(manager, gate.target, identity);
  SymTdd active = single_qubit_operator(manager, gate.target, delta);
  for (int c : gate.controls) {
    all_identity = outer_product(manager, all_identity, single_qubit_operator(manager, c, identity));
    active = outer_product(manager, active, single_qubit_operator(manager, c, projector_one));
  }
  return manager.add(all_identity, active);
}

}  // namespace symtdd
