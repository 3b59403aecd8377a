#pragma once

#include <span>
#include <vector>

#include "srbb/circuit.hpp"
#include "srbb/qcore.hpp"

namespace srbb {

/// Tree of partial l2-norms. levels[n] holds |c_i|, every node above is the
/// norm of its two children, levels[0][0] is the root.
struct AmplitudeBST {
  int n = 0;
  std::vector<std::vector<double>> levels;

  [[nodiscard]] double root() const { return levels.front().front(); }
};

/// angles[k-1] holds the 2^{k-1} angles of ladder level k (k = 1..n); the
/// level-k gate applies RY(2 * angle) to qubit k-1 for each control pattern.
struct NaturalAngles {
  int n = 0;
  std::vector<std::vector<double>> angles;

  [[nodiscard]] std::size_t count() const;
};

struct PhaseSolution {
  std::vector<double> theta_phase;
  double global_phase = 0.0;
};

struct ExactPreparation {
  Circuit circuit{1};
  double global_phase = 0.0;
  std::vector<double> theta_modulus;
  std::vector<double> theta_phase;
};

/// Moduli must be nonnegative, of power-of-two length (>= 2) and have unit
/// norm within 1e-9; they are renormalized.
AmplitudeBST bst_build(std::span<const double> moduli);

/// arccos(left / node) at every internal node; 0 under a zero node.
NaturalAngles natural_angles(const AmplitudeBST& bst);

/// diag(RY(2 a_1), ..., RY(2 a_m)) on k qubits (controls 0..k-2, target k-1).
UnitaryMatrix ucg_reference(int k, std::span<const double> angles);

/// Product of the full UCG ladder on n qubits, the unitary the modulus stage
/// has to learn.
UnitaryMatrix modulus_unitary(const NaturalAngles& angles);

/// Phases (-g_j/2, +g_j/2) at indices (2j, 2j+1): a uniformly controlled
/// RZ(g_j) as a diagonal on k = log2(2 * gammas.size()) qubits.
std::vector<double> multiplexed_rz_phases(std::span<const double> gammas);

/// Slot vector of the modulus template that prepares these moduli on |0..0>.
std::vector<double> modulus_params_exact(std::span<const double> moduli);

/// Mean-centred solve; the mean becomes the global phase.
PhaseSolution phase_params_exact(std::span<const double> target_phases);

/// Amplitude phases with zero-modulus entries (|c| <= 1e-14) set to 0.
std::vector<double> amplitude_phases(std::span<const Complex> amps);
std::vector<double> amplitude_moduli(std::span<const Complex> amps);

/// Circuit that maps |0..0> to `target` exactly. The global-phase tail is
/// included when `with_tail` is set; otherwise the output equals the target
/// times exp(-i * global_phase).
ExactPreparation exact_prepare(const StateVector& target, bool with_tail = true);

}  // namespace srbb
