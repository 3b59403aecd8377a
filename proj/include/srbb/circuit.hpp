#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "srbb/qcore.hpp"

namespace srbb {

enum class GateKind { RY, RZ, H, S, SDG, X, PHASESHIFT, CNOT };

[[nodiscard]] constexpr bool is_rotation(GateKind k) {
  return k == GateKind::RY || k == GateKind::RZ || k == GateKind::PHASESHIFT;
}
[[nodiscard]] constexpr int arity(GateKind k) { return k == GateKind::CNOT ? 2 : 1; }
std::string_view gate_name(GateKind k);

/// Reference to a parameter slot of a circuit template.
struct SlotRef {
  int index = 0;
  friend bool operator==(const SlotRef&, const SlotRef&) = default;
};

/// monostate for fixed gates, a literal angle in radians, or a slot.
using Angle = std::variant<std::monostate, double, SlotRef>;

struct GateInstance {
  GateKind kind = GateKind::H;
  /// qubits[1] is the CNOT target; -1 for single-qubit gates.
  std::array<int, 2> qubits{-1, -1};
  Angle angle{};
  /// Marks the optional global-phase correction; excluded from stats().
  bool phase_tail = false;

  [[nodiscard]] bool is_bound() const { return !std::holds_alternative<SlotRef>(angle); }
  friend bool operator==(const GateInstance&, const GateInstance&) = default;
};

/// Ordered gate list over `n_qubits` wires with `slot_count` parameter slots.
/// Every mutation validates qubit indices and slot references.
class Circuit {
 public:
  explicit Circuit(int n_qubits, int slot_count = 0);

  [[nodiscard]] int n_qubits() const { return n_qubits_; }
  [[nodiscard]] int slot_count() const { return slot_count_; }
  [[nodiscard]] std::span<const GateInstance> gates() const { return gates_; }
  [[nodiscard]] std::size_t size() const { return gates_.size(); }
  [[nodiscard]] bool empty() const { return gates_.empty(); }
  [[nodiscard]] bool is_bound() const;

  Circuit& append(GateInstance g);
  Circuit& h(int q) { return append({GateKind::H, {q, -1}, {}}); }
  Circuit& s(int q) { return append({GateKind::S, {q, -1}, {}}); }
  Circuit& sdg(int q) { return append({GateKind::SDG, {q, -1}, {}}); }
  Circuit& x(int q) { return append({GateKind::X, {q, -1}, {}}); }
  Circuit& cnot(int control, int target) { return append({GateKind::CNOT, {control, target}, {}}); }
  Circuit& ry(int q, Angle a) { return append({GateKind::RY, {q, -1}, a}); }
  Circuit& rz(int q, Angle a) { return append({GateKind::RZ, {q, -1}, a}); }
  Circuit& phase_shift(int q, Angle a) { return append({GateKind::PHASESHIFT, {q, -1}, a}); }

  /// Grows the slot table; returns the index of the first new slot.
  int add_slots(int count);

  /// Appends `sub` with its qubit i mapped to qubit_map[i] and its slot s
  /// mapped to slot_offset + s.
  Circuit& append_circuit(const Circuit& sub, std::span<const int> qubit_map, int slot_offset = 0);

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  int n_qubits_;
  int slot_count_;
  std::vector<GateInstance> gates_;
};

struct CircuitStats {
  int depth = 0;
  int n_cnot = 0;
  /// RY + RZ; PHASESHIFT is counted in n_other.
  int n_rot = 0;
  int n_other = 0;
  friend bool operator==(const CircuitStats&, const CircuitStats&) = default;
};

/// 2x2 or 4x4 matrix of a bound gate.
UnitaryMatrix gate_matrix(const GateInstance& g);

/// Replaces every slot reference by params[slot]; the result has no slots.
/// A function object, so argument-dependent lookup never picks std::bind
/// for calls with standard-library arguments.
struct BindFn {
  Circuit operator()(const Circuit& circuit, std::span<const double> params) const;
};
inline constexpr BindFn bind{};

StateVector run(const Circuit& circuit, const StateVector& input);

/// Product of the embedded gate matrices in application order.
UnitaryMatrix unitary_of(const Circuit& circuit);

/// ASAP layering, one layer per gate on each wire it touches. Gates flagged
/// as phase tail are skipped entirely.
CircuitStats stats(const Circuit& circuit);

/// OpenQASM 3 text, one gate per line. Angles print as `pi`/`-pi` when exact,
/// otherwise with 17 significant digits.
std::string to_qasm(const Circuit& circuit);

/// Reads back the subset emitted by to_qasm().
Circuit parse_qasm(std::string_view text);

}  // namespace srbb
