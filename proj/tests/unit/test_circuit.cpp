#include <doctest.h>

#include <random>

#include "../oracle.hpp"
#include "srbb/circuit.hpp"
#include "srbb/errors.hpp"

using namespace srbb;

namespace {

Circuit sample_template() {
  Circuit c(3, 3);
  c.h(0).ry(1, SlotRef{0}).cnot(0, 2).rz(2, SlotRef{1}).sdg(1).s(2).x(0).phase_shift(1, SlotRef{2});
  c.cnot(2, 1).ry(0, 0.25);
  return c;
}

}  // namespace

TEST_CASE("bind replaces every slot") {
  const Circuit t = sample_template();
  CHECK_FALSE(t.is_bound());
  const std::vector<double> p{0.1, 0.2, 0.3};
  const Circuit b = bind(t, p);
  CHECK(b.is_bound());
  CHECK(b.slot_count() == 0);
  CHECK(std::get<double>(b.gates()[1].angle) == 0.1);
  CHECK(std::get<double>(b.gates()[7].angle) == 0.3);
  const std::vector<double> short_p{0.1};
  CHECK_THROWS_AS(bind(t, short_p), ValidationError);
}

TEST_CASE("unitary_of agrees with the gate-by-gate oracle") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> p{u(rng), u(rng), u(rng)};
    const Circuit b = bind(sample_template(), p);
    CHECK((unitary_of(b).matrix() - oracle::circuit_unitary(b)).norm() < 1e-13);
  }
}

TEST_CASE("run agrees with unitary_of on random inputs") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  const std::vector<double> p{0.4, -1.1, 2.0};
  const Circuit b = bind(sample_template(), p);
  const UnitaryMatrix u = unitary_of(b);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Complex> a(8);
    for (auto& z : a) z = {g(rng), g(rng)};
    const StateVector s(a);
    CHECK((run(b, s).to_eigen() - u.matrix() * s.to_eigen()).norm() < 1e-13);
  }
}

TEST_CASE("stats uses ASAP layering") {
  Circuit c(3);
  c.h(0).h(1).cnot(0, 1).h(2).cnot(1, 2).rz(0, 0.1).ry(2, 0.2);
  const CircuitStats s = stats(c);
  CHECK(s.depth == 4);  // h | cnot01 | cnot12 | ry2, with h2 and rz0 filling gaps
  CHECK(s.n_cnot == 2);
  CHECK(s.n_rot == 2);
  CHECK(s.n_other == 3);
}

TEST_CASE("stats skips phase-tail gates") {
  Circuit c(1);
  c.ry(0, 0.3);
  c.append({GateKind::RZ, {0, -1}, 0.2, true});
  c.append({GateKind::X, {0, -1}, {}, true});
  CHECK(stats(c) == CircuitStats{1, 0, 1, 0});
}

TEST_CASE("append_circuit remaps qubits and slots") {
  Circuit sub(2, 1);
  sub.cnot(0, 1).rz(1, SlotRef{0});
  Circuit host(3, 2);
  const std::vector<int> map{2, 0};
  host.append_circuit(sub, map, 1);
  REQUIRE(host.size() == 2);
  CHECK(host.gates()[0].qubits == std::array<int, 2>{2, 0});
  CHECK(std::get<SlotRef>(host.gates()[1].angle).index == 1);
  CHECK(host.gates()[1].qubits[0] == 0);
  const std::vector<int> bad_map{0};
  CHECK_THROWS_AS(host.append_circuit(sub, bad_map), ValidationError);
}

TEST_CASE("append validation") {
  Circuit c(2, 1);
  CHECK_THROWS_AS(c.h(2), ValidationError);
  CHECK_THROWS_AS(c.cnot(1, 1), ValidationError);
  CHECK_THROWS_AS(c.ry(0, SlotRef{1}), ValidationError);
  CHECK_THROWS_AS(c.rz(0, std::nan("")), ValidationError);
  CHECK_THROWS_AS(c.ry(0, Angle{}), ValidationError);
  CHECK_THROWS_AS(c.append({GateKind::H, {0, -1}, 0.5}), ValidationError);
}

TEST_CASE("qasm golden output") {
  Circuit c(2);
  c.h(0).cnot(0, 1).ry(1, kPi).rz(0, -kPi).sdg(1).s(0).phase_shift(1, 0.5);
  c.append({GateKind::X, {0, -1}, {}, true});
  const std::string want =
      "OPENQASM 3.0;\n"
      "include \"stdgates.inc\";\n"
      "qubit[2] q;\n"
      "h q[0];\n"
      "cx q[0], q[1];\n"
      "ry(pi) q[1];\n"
      "rz(-pi) q[0];\n"
      "sdg q[1];\n"
      "s q[0];\n"
      "p(0.5) q[1];\n"
      "// global-phase tail\n"
      "x q[0];\n";
  CHECK(to_qasm(c) == want);
}

TEST_CASE("qasm round trip is exact") {
  const std::vector<double> p{0.123456789012345678, -2.5e-7, 3.0};
  const Circuit b = bind(sample_template(), p);
  Circuit with_tail = b;
  with_tail.append({GateKind::RZ, {0, -1}, 0.7, true});
  with_tail.append({GateKind::X, {0, -1}, {}, true});
  CHECK(parse_qasm(to_qasm(with_tail)) == with_tail);
  CHECK_THROWS_AS(parse_qasm("OPENQASM 3.0;\nh q[0];\n"), ValidationError);
  CHECK_THROWS_AS(parse_qasm("qubit[1] q;\nfoo q[0];\n"), ValidationError);
  CHECK_THROWS_AS(to_qasm(sample_template()), ValidationError);
}
