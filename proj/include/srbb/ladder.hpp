#pragma once

// Full state-preparation circuit.
//
// Modulus part: RY on qubit 0, then for every level k = 2..n an RY-block
// uniformly controlled gate on qubit k-1 written as
//   S^dag, H on q[k-1];  Z-factor on q[0..k-1];  H, S on q[k-1]
// (SH . RZ . HS^dag = RY turns the multiplexed RZ into a multiplexed RY).
// Phase part: one n-qubit Z-factor. Optional tail: RZ(2p) X P(2p) X on
// qubit 0, which multiplies the state by exp(i p).
//
// Slot layout (frozen): [RY head] ++ [Z-factor slots, k = 2..n] ++ [phase].

#include <optional>
#include <span>
#include <vector>

#include "srbb/circuit.hpp"

namespace srbb {

struct CountPrediction {
  int depth = 0;
  int n_rot = 0;
  int n_cnot = 0;
  friend bool operator==(const CountPrediction&, const CountPrediction&) = default;
};

[[nodiscard]] int modulus_slot_count(int n);  // 2^{n+1} - n - 2
[[nodiscard]] int phase_slot_count(int n);    // 2^n - 1
/// First modulus slot of the level-k Z-factor (k >= 2).
[[nodiscard]] int level_slot_offset(int k);

Circuit build_modulus_template(int n);
Circuit build_phase_template(int n);

struct QSPTemplate {
  int n = 0;
  Circuit modulus_circuit{1};
  Circuit phase_circuit{1};
};
QSPTemplate build_qsp_template(int n);

/// Closed forms for depth, rotation count and CNOT count of the full circuit.
CountPrediction predicted_counts(int n);

/// The four-gate tail RZ(2p) X P(2p) X on qubit 0 of an n-qubit register.
Circuit global_phase_tail(int n, double phase);

/// Binds the modulus and phase parts and concatenates them; appends the
/// global-phase tail (flagged, so stats() ignores it) when requested.
Circuit assemble_full(int n, std::span<const double> theta_modulus,
                      std::span<const double> theta_phase,
                      std::optional<double> global_phase = std::nullopt);

}  // namespace srbb
