#include "srbb/ladder.hpp"

#include <numeric>
#include <string>

#include "srbb/errors.hpp"
#include "srbb/zfactor.hpp"

namespace srbb {

namespace {

void check_n(int n) {
  if (n < 2) throw ValidationError("ladder needs at least 2 qubits, got " + std::to_string(n));
  if (n > 16) throw ValidationError("ladder supports at most 16 qubits");
}

std::vector<int> first_qubits(int k) {
  std::vector<int> q(static_cast<std::size_t>(k));
  std::iota(q.begin(), q.end(), 0);
  return q;
}

}  // namespace

int modulus_slot_count(int n) { return (1 << (n + 1)) - n - 2; }
int phase_slot_count(int n) { return (1 << n) - 1; }
int level_slot_offset(int k) { return 1 + (1 << k) - 4 - (k - 2); }

Circuit build_modulus_template(int n) {
  check_n(n);
  Circuit c(n);
  c.ry(0, SlotRef{c.add_slots(1)});
  for (int k = 2; k <= n; ++k) {
    const ZFactorTemplate z = build_z_factor(k);
    const int target = k - 1;
    c.sdg(target).h(target);
    const int offset = c.add_slots(z.circuit.slot_count());
    c.append_circuit(z.circuit, first_qubits(k), offset);
    c.h(target).s(target);
  }
  return c;
}

Circuit build_phase_template(int n) {
  check_n(n);
  return build_z_factor(n).circuit;
}

QSPTemplate build_qsp_template(int n) {
  return QSPTemplate{n, build_modulus_template(n), build_phase_template(n)};
}

CountPrediction predicted_counts(int n) {
  check_n(n);
  const int p = 1 << n;
  return CountPrediction{
      .depth = 6 * p - (n * n + 7 * n) / 2 - 3,
      .n_rot = 3 * p - n - 3,
      .n_cnot = 3 * p - 2 * n - 4,
  };
}

Circuit global_phase_tail(int n, double phase) {
  Circuit c(n);
  const double a = 2 * phase;
  c.append({GateKind::RZ, {0, -1}, a, true});
  c.append({GateKind::X, {0, -1}, {}, true});
  c.append({GateKind::PHASESHIFT, {0, -1}, a, true});
  c.append({GateKind::X, {0, -1}, {}, true});
  return c;
}

Circuit assemble_full(int n, std::span<const double> theta_modulus,
                      std::span<const double> theta_phase, std::optional<double> global_phase) {
  check_n(n);
  if (static_cast<int>(theta_modulus.size()) != modulus_slot_count(n) ||
      static_cast<int>(theta_phase.size()) != phase_slot_count(n)) {
    throw ValidationError("assemble_full: expected " + std::to_string(modulus_slot_count(n)) +
                          " modulus and " + std::to_string(phase_slot_count(n)) +
                          " phase parameters");
  }
  const auto all = first_qubits(n);
  Circuit out(n);
  out.append_circuit(bind(build_modulus_template(n), theta_modulus), all);
  out.append_circuit(bind(build_phase_template(n), theta_phase), all);
  if (global_phase) out.append_circuit(global_phase_tail(n, *global_phase), all);
  return out;
}

}  // namespace srbb
