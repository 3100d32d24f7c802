#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support/oracle.hpp"
#include "symtdd/dense.hpp"
#include "symtdd/simulate.hpp"
#include "symtdd/verify.hpp"

using namespace symtdd;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      detail = what;
    }
    pass = pass && ok;
  }
};

bool report(int id, const char* name, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  std::printf("[%s] %d %s%s%s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.empty() ? "" : ": ",
              o.detail.c_str());
  std::fflush(stdout);
  return o.pass;
}

std::string fmt(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

// Amplitudes of every basis state as weight tensors over all symbols, built
// from the reference simulator.
std::vector<WeightTensor> reference_amplitudes(const Circuit& c, Manager& m) {
  const std::size_t k = c.symbols.size();
  const std::size_t dim = std::size_t{1} << c.n_qubits;
  std::vector<std::vector<Complex>> table(dim, std::vector<Complex>(std::size_t{1} << k));
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << k); ++x) {
    const auto psi = oracle::run(c, oracle::bits_of(x, k));
    for (std::size_t b = 0; b < dim; ++b) {
      table[b][x] = psi[b];
    }
  }
  std::vector<WeightTensor> amps;
  for (const auto& values : table) {
    amps.push_back(m.weights().from_values(values));
  }
  return amps;
}

double max_state_error(Manager& m, const SymTdd& f, const SymTdd& g, int n, std::size_t k) {
  double worst = 0.0;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << k); ++x) {
    const auto sym = oracle::bits_of(x, k);
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
      worst = std::max(worst, std::abs(m.evaluate_state(f, b, n, sym) - m.evaluate_state(g, b, n, sym)));
    }
  }
  return worst;
}

Edge raw_tree(Manager& m, const std::vector<WeightTensor>& amps, int n, int q, std::size_t prefix) {
  if (q == n) {
    return Edge{amps[prefix], kTerminal};
  }
  return m.make_raw_node(m.rank(q), raw_tree(m, amps, n, q + 1, 2 * prefix),
                         raw_tree(m, amps, n, q + 1, 2 * prefix + 1));
}

Outcome oracle_equivalence() {
  Outcome o;
  std::mt19937_64 rng(2024);
  const auto t0 = Clock::now();
  double worst = 0.0;
  std::size_t compared = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Circuit c = oracle::random_circuit(rng, 5, 5, 20);
    Manager m;
    const SymTdd out = simulate(c, m).state;
    const std::size_t k = c.symbols.size();
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << k); ++x) {
      const auto sym = oracle::bits_of(x, k);
      const DenseState dense = dense_simulate(c, sym);
      const auto ref = oracle::run(c, sym);
      for (std::uint64_t b = 0; b < ref.size(); ++b) {
        const Complex got = m.evaluate_state(out, b, c.n_qubits, sym);
        worst = std::max(worst, std::abs(got - dense.amplitudes[static_cast<Eigen::Index>(b)]));
        worst = std::max(worst, std::abs(got - ref[b]));
        ++compared;
      }
    }
  }
  const double elapsed = seconds_since(t0);
  o.require(worst <= 1e-9, "max error " + fmt(worst));
  o.require(elapsed < 60.0, "took " + fmt(elapsed) + " s");
  if (o.pass) {
    o.detail = std::to_string(compared) + " amplitudes, max error " + fmt(worst) + ", " + fmt(elapsed) + " s";
  }
  return o;
}

Outcome loc_norm_example() {
  Outcome o;
  WeightStore ws;
  ws.declare_symbol("s0");
  ws.declare_symbol("s1");
  const std::vector<Complex> f{{0, 2}, 0, {1, 1}, 0};
  const std::vector<Complex> g{0, 1, {1, -1}, 0};
  const auto r = ws.loc_norm(ws.from_values(f), ws.from_values(g));
  const std::vector<Complex> h{{0, 2}, 1, {1, 1}, 0};
  const std::vector<Complex> fs{1, 0, 1, 0};
  const std::vector<Complex> gs{0, 1, Complex(1, -1) / Complex(1, 1), 0};
  double worst = 0.0;
  const auto hv = ws.to_values(r.extracted, 2);
  const auto fv = ws.to_values(r.low, 2);
  const auto gv = ws.to_values(r.high, 2);
  for (std::size_t a = 0; a < 4; ++a) {
    worst = std::max({worst, std::abs(hv[a] - h[a]), std::abs(fv[a] - fs[a]), std::abs(gv[a] - gs[a])});
  }
  o.require(worst <= 1e-12, "max error " + fmt(worst));
  return o;
}

Outcome qft_functionality() {
  Outcome o;
  for (int n = 1; n <= 24; ++n) {
    const VerificationReport r = verify_qft(n);
    o.require(r.pass, "verify_qft(" + std::to_string(n) + ") failed");
    o.require(r.nodes.quantum_layer() == static_cast<std::size_t>(n + 1),
              "n=" + std::to_string(n) + " quantum layer " + std::to_string(r.nodes.quantum_layer()));
  }
  double t40 = 0.0;
  std::size_t nodes30 = 0;
  for (int n = 10; n <= 40; ++n) {
    const VerificationReport r = verify_qft(n);
    const double envelope = 10.0 * std::pow(n, 2.4);
    o.require(r.pass, "verify_qft(" + std::to_string(n) + ") failed");
    o.require(static_cast<double>(r.nodes.total) <= envelope,
              "n=" + std::to_string(n) + " total " + std::to_string(r.nodes.total) + " > " + fmt(envelope));
    if (n == 30) {
      nodes30 = r.nodes.total;
    }
    if (n == 40) {
      t40 = r.wall_time_ms / 1000.0;
    }
  }
  o.require(nodes30 <= 20000, "n=30 total " + std::to_string(nodes30));
  o.require(t40 < 120.0, "n=40 took " + fmt(t40) + " s");
  if (o.pass) {
    o.detail = "n=30 total " + std::to_string(nodes30) + ", n=40 " + fmt(t40) + " s";
  }
  return o;
}

Outcome bernstein_vazirani() {
  Outcome o;
  for (int n = 1; n <= 50; ++n) {
    const VerificationReport r = verify_bv(n);
    o.require(r.pass, "verify_bv(" + std::to_string(n) + ") failed");
    o.require(r.payload.value("all_towers", false), "n=" + std::to_string(n) + " has a non-tower intermediate");
  }
  return o;
}

Outcome grover() {
  Outcome o;
  {
    Manager m;
    const GroverResult g = grover_success_probability(m, 2, 1);
    auto& w = m.weights();
    o.require(g.probability.is_constant() && std::abs(g.probability.top_weight - 1.0) <= 1e-9,
              "(2,1) probability " + w.to_string(g.probability));
    std::vector<std::pair<WeightTensor, WeightTensor>> amps;
    for (std::uint32_t s = 0; s < 2; ++s) {
      amps.emplace_back(w.literal(SymbolId{s}, Polarity::complement), w.literal(SymbolId{s}, Polarity::positive));
    }
    amps.emplace_back(w.zero(), w.one());
    const SymTdd expected = m.scale(m.product_state(amps, true), w.constant(-1.0));
    o.require(m.equal(g.output, expected), "(2,1) output differs from -|s0 s1 1>");
  }
  std::string detail;
  for (const auto& [n, iters, target] : {std::tuple{7, 8, 0.9956}, std::tuple{8, 12, 0.9999}}) {
    Manager m;
    const GroverResult g = grover_success_probability(m, n, iters);
    const std::string tag = "(" + std::to_string(n) + "," + std::to_string(iters) + ")";
    o.require(g.probability.is_constant(), tag + " probability not constant");
    const double p = g.probability.top_weight.real();
    o.require(std::abs(p - target) <= 1e-3, tag + " probability " + fmt(p));
    detail += (detail.empty() ? "" : ", ") + tag + " " + fmt(p) + " in " + fmt(g.report.wall_time_ms / 1000.0) + " s";
  }
  if (o.pass) {
    o.detail = detail;
  }
  return o;
}

Outcome bitflip() {
  Outcome o;
  Manager m;
  const Circuit c = bitflip_circuit();
  const auto rel = bitflip_relations(m, c);
  auto& w = m.weights();
  const auto s = [&](std::uint32_t i) { return w.literal(SymbolId{i}, Polarity::positive); };
  const auto sc = [&](std::uint32_t i) { return w.literal(SymbolId{i}, Polarity::complement); };
  const auto prod = [&](WeightTensor a, WeightTensor b, WeightTensor d) { return w.mul(w.mul(a, b), d); };
  const WeightTensor f00 = w.add(w.add(prod(sc(0), sc(1), s(2)), prod(sc(0), s(1), sc(2))), w.mul(sc(1), sc(2)));
  const auto eq = [&](std::uint32_t a, std::uint32_t b) { return w.add(w.mul(s(a), s(b)), w.mul(sc(a), sc(b))); };
  const std::vector<WeightTensor> low{f00, f00, f00, eq(0, 1), eq(1, 2), eq(0, 2)};
  o.require(rel.size() == 6, std::to_string(rel.size()) + " tower nodes");
  for (int q = 0; q < 6 && o.pass; ++q) {
    const auto it = rel.find(q);
    o.require(it != rel.end(), "no node for q" + std::to_string(q));
    if (!o.pass) {
      break;
    }
    const auto& [f0, f1] = it->second;
    const WeightTensor complement = w.subtract(w.one(), low[q]);
    o.require(f0 == low[q] && f1 == complement, "q" + std::to_string(q) + " low " + w.to_string(f0));
    for (std::uint64_t x = 0; x < 8; ++x) {
      const auto bits = oracle::bits_of(x, 3);
      const int ones = bits[0] + bits[1] + bits[2];
      double want = 0.0;
      if (q < 3) {
        want = ones < 2 ? 1.0 : 0.0;
      } else {
        const int a = q == 3 ? 0 : q == 4 ? 1 : 0;
        const int b = q == 3 ? 1 : 2;
        want = bits[a] == bits[b] ? 1.0 : 0.0;
      }
      o.require(std::abs(w.evaluate(f0, bits) - want) <= 1e-12 && std::abs(w.evaluate(f1, bits) - (1.0 - want)) <= 1e-12,
                "q" + std::to_string(q) + " wrong at s=" + std::to_string(x));
    }
  }
  return o;
}

Outcome canonicity() {
  Outcome o;
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const Circuit c = oracle::random_circuit(rng, 4, 3, 15);
    Manager m;
    const SymTdd simulated = simulate(c, m).state;
    const auto amps = reference_amplitudes(c, m);
    const SymTdd direct = m.from_amplitudes(amps);
    const SymTdd rebuilt = m.normalize_full(m.wrap(raw_tree(m, amps, c.n_qubits, 0, 0), true));
    const std::string tag = "trial " + std::to_string(trial) + ": ";
    o.require(m.equal(simulated, direct), tag + "simulated and direct differ");
    o.require(m.normalize_full(simulated).root == direct.root, tag + "normal forms differ");
    o.require(rebuilt.root == direct.root, tag + "RR1/RR2 rebuild differs");
    const SymTdd once = m.normalize_full(simulated);
    o.require(m.normalize_full(once).root == once.root, tag + "normalize_full not idempotent");

    SimulationOptions plain;
    plain.rr3 = false;
    Manager m2;
    const SymTdd unreduced = simulate(c, m2, plain).state;
    const SymTdd reduced = m2.rr3_pass(unreduced);
    const double err = max_state_error(m2, unreduced, reduced, c.n_qubits, c.symbols.size());
    o.require(err <= 1e-9, tag + "RR3 changed values by " + fmt(err));
    if (!o.pass) {
      break;
    }
  }
  return o;
}

Outcome normalization_characterization() {
  Outcome o;
  std::mt19937_64 rng(99);
  Manager m;
  for (int i = 0; i < 3; ++i) {
    m.declare_symbol("s" + std::to_string(i));
  }
  auto& w = m.weights();
  const auto random_state = [&](int n) {
    std::uniform_int_distribution<int> pick(-2, 2);
    std::vector<WeightTensor> amps;
    for (int b = 0; b < (1 << n); ++b) {
      std::vector<Complex> values(8);
      for (auto& v : values) {
        v = Complex(pick(rng), pick(rng));
      }
      amps.push_back(w.from_values(values));
    }
    return m.from_amplitudes(amps);
  };
  std::vector<IndexRank> ranks{m.rank(0), m.rank(1), m.rank(2)};
  Gate cx;
  cx.kind = GateKind::cx;
  cx.controls = {0};
  cx.target = 2;
  const SymTdd cx_tensor = gate_tensor(cx, m);
  const std::vector<int> cx_qubits{0, 2};
  for (int trial = 0; trial < 30; ++trial) {
    const SymTdd a = random_state(3);
    const SymTdd b = random_state(3);
    const WeightTensor lit = w.literal(SymbolId{static_cast<std::uint32_t>(trial % 3)}, Polarity::positive);
    const std::vector<std::pair<const char*, SymTdd>> outputs{
        {"from_amplitudes", a},
        {"add", m.add(a, b)},
        {"scale", m.scale(a, lit)},
        {"conj", m.conj(a)},
        {"contract", m.contract(a, b, std::span(ranks).first(1 + trial % 3))},
        {"apply_gate", m.apply_gate(a, cx_tensor, cx_qubits)},
        {"normalize_full", m.normalize_full(m.symbolic_basis_state(3, true))},
        {"symbolic_basis_state", m.symbolic_basis_state(3)},
        {"gate_tensor", cx_tensor},
    };
    for (const auto& [name, f] : outputs) {
      o.require(!f.relaxed && m.is_fully_normalized(f), std::string(name) + " output not fully normalised");
    }
  }
  const Edge leaf{w.one(), kTerminal};
  const Edge bad = m.make_raw_node(m.rank(0), Edge{w.constant(2.0), kTerminal}, leaf);
  o.require(!m.is_fully_normalized(m.wrap(bad)), "unnormalised low weight accepted");
  const Edge child = m.make_raw_node(m.rank(1), leaf, Edge{w.literal(SymbolId{0}, Polarity::positive), kTerminal});
  const Edge outside =
      m.make_raw_node(m.rank(0), Edge{w.literal(SymbolId{0}, Polarity::complement), child.node}, Edge{});
  o.require(!m.is_fully_normalized(m.wrap(outside)), "weight outside incoming support accepted");
  return o;
}

}  // namespace

int main() {
  bool ok = true;
  ok &= report(1, "oracle equivalence (200 random circuits)", oracle_equivalence);
  ok &= report(2, "loc_norm example", loc_norm_example);
  ok &= report(3, "QFT functionality and scaling", qft_functionality);
  ok &= report(4, "Bernstein-Vazirani n=1..50", bernstein_vazirani);
  ok &= report(5, "Grover success probability", grover);
  ok &= report(6, "bit-flip code weights", bitflip);
  ok &= report(7, "canonicity", canonicity);
  ok &= report(8, "full normalisation characterization", normalization_characterization);
  return ok ? 0 : 1;
}
