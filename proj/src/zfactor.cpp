#include "srbb/zfactor.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "srbb/errors.hpp"

namespace srbb {

namespace {

constexpr double kSuTolerance = 1e-8;

void check_n(int n) {
  if (n < 2) throw ValidationError("Z-factor needs at least 2 qubits, got " + std::to_string(n));
  if (n > 16) throw ValidationError("Z-factor supports at most 16 qubits");
}

ParityMask qubit_bit(int q) { return ParityMask{1} << q; }

}  // namespace

ZFactorTemplate build_z_factor(int n) {
  check_n(n);
  ZFactorTemplate t;
  t.n = n;
  t.circuit = Circuit(n);
  if (n == 2) {
    // Base case: two single-wire terms, then the {0,1} parity.
    const int a = t.circuit.add_slots(3);
    t.circuit.rz(0, SlotRef{a}).rz(1, SlotRef{a + 1}).cnot(0, 1).rz(1, SlotRef{a + 2}).cnot(0, 1);
    t.slot_parity = {qubit_bit(0), qubit_bit(1), qubit_bit(0) | qubit_bit(1)};
    return t;
  }

  const ZFactorTemplate prev = build_z_factor(n - 1);
  std::vector<int> qmap(static_cast<std::size_t>(n - 1));
  std::iota(qmap.begin(), qmap.end(), 0);
  t.circuit.add_slots(prev.circuit.slot_count());
  t.circuit.append_circuit(prev.circuit, qmap, 0);
  t.slot_parity = prev.slot_parity;

  // New terms: {n-1} plus every subset of the n-1 controls, visited along a
  // reflected Gray code; Gray bit b drives control qubit n-2-b.
  const int target = n - 1;
  const ParityMask target_bit = qubit_bit(target);
  const std::uint32_t cycle = std::uint32_t{1} << (n - 1);
  auto control_for_bit = [&](int b) { return n - 2 - b; };
  auto subset_of = [&](std::uint32_t gray) {
    ParityMask m = 0;
    for (int b = 0; b < n - 1; ++b)
      if (gray & (1u << b)) m |= qubit_bit(control_for_bit(b));
    return m;
  };

  std::uint32_t gray = 0;
  t.circuit.rz(target, SlotRef{t.circuit.add_slots(1)});
  t.slot_parity.push_back(target_bit);
  for (std::uint32_t i = 1; i < cycle; ++i) {
    const std::uint32_t next = i ^ (i >> 1);
    const int flipped = std::countr_zero(next ^ gray);
    gray = next;
    t.circuit.cnot(control_for_bit(flipped), target);
    t.circuit.rz(target, SlotRef{t.circuit.add_slots(1)});
    t.slot_parity.push_back(target_bit | subset_of(gray));
  }
  // Close the cycle so the target wire carries its own bit again.
  t.circuit.cnot(control_for_bit(std::countr_zero(gray)), target);
  return t;
}

PhaseMap phase_map(int n) {
  const ZFactorTemplate t = build_z_factor(n);
  const auto dim = static_cast<Eigen::Index>(dim_of(n));
  PhaseMap pm;
  pm.n = n;
  pm.A = Eigen::MatrixXd::Zero(dim, t.circuit.slot_count());

  std::vector<ParityMask> wire(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) wire[static_cast<std::size_t>(q)] = qubit_bit(q);

  for (const auto& g : t.circuit.gates()) {
    if (g.kind == GateKind::CNOT) {
      wire[static_cast<std::size_t>(g.qubits[1])] ^= wire[static_cast<std::size_t>(g.qubits[0])];
      continue;
    }
    if (g.kind != GateKind::RZ) throw ValidationError("Z-factor contains a non-RZ/CNOT gate");
    const int slot = std::get<SlotRef>(g.angle).index;
    const ParityMask mask = wire[static_cast<std::size_t>(g.qubits[0])];
    for (Eigen::Index x = 0; x < dim; ++x) {
      int parity = 0;
      for (int q = 0; q < n; ++q) {
        if (mask & qubit_bit(q)) parity ^= static_cast<int>((x >> bit_of(q, n)) & 1);
      }
      pm.A(x, slot) += parity ? 0.5 : -0.5;
    }
  }
  return pm;
}

int slot_for_element(int j, int n) {
  const int top = 1 << n;
  if (j < 2 || j > top) throw ValidationError("element index j must lie in 2..2^n");
  return j - 2;
}

int element_for_slot(int slot, int n) {
  if (slot < 0 || slot > (1 << n) - 2) throw ValidationError("slot out of range");
  return slot + 2;
}

ZSolution solve_z_params(std::span<const double> target_phases) {
  const int n = qubits_for_dim(target_phases.size());
  check_n(n);
  const Eigen::Map<const Eigen::VectorXd> phi(target_phases.data(),
                                              static_cast<Eigen::Index>(target_phases.size()));
  if (!phi.allFinite()) throw ValidationError("non-finite target phase");
  const double sum = phi.sum();
  const double turns = std::round(sum / (2 * kPi));
  const double residual = std::abs(sum - 2 * kPi * turns);
  if (residual > kSuTolerance * std::max(1.0, std::abs(sum))) {
    throw ValidationError("target phases are not special unitary: sum mod 2pi residual = " +
                          std::to_string(residual));
  }
  const double mean = sum / static_cast<double>(phi.size());
  const Eigen::VectorXd centered = phi.array() - mean;

  const PhaseMap pm = phase_map(n);
  const Eigen::VectorXd theta = pm.A.colPivHouseholderQr().solve(centered);

  ZSolution out;
  out.theta.assign(theta.data(), theta.data() + theta.size());
  out.global_phase = mean;
  return out;
}

std::vector<double> diagonal_phases(const UnitaryMatrix& u) {
  std::vector<double> out(u.dim());
  for (std::size_t i = 0; i < u.dim(); ++i) out[i] = std::arg(u(i, i));
  return out;
}

}  // namespace srbb
