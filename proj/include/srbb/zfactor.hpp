#pragma once

// Diagonal special-unitary factor built from RZ and CNOT only.
//
// Every RZ in the circuit sits on a wire that carries the XOR of a subset of
// the input bits; the subset is its parity mask. The n-qubit template covers
// each nonempty subset of {0..n-1} exactly once, so its 2^n - 1 angles span
// the whole diagonal SU(2^n). The template for n qubits is the template for
// n - 1 (on qubits 0..n-2) followed by a reflected Gray-code cycle over the
// subsets that contain qubit n - 1. Consecutive Gray codes differ in one
// control, so each new term costs one CNOT.

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "srbb/circuit.hpp"

namespace srbb {

/// Bit q of a parity mask refers to qubit q (not to the basis-index bit).
using ParityMask = std::uint32_t;

struct ZFactorTemplate {
  int n = 0;
  Circuit circuit{1};
  /// slot_parity[s] is the parity mask the RZ bound to slot s acts on.
  std::vector<ParityMask> slot_parity;
};

/// Raises for n < 2.
ZFactorTemplate build_z_factor(int n);

/// Linear map from Z-factor angles to the diagonal phases they produce:
/// unitary_of(bind(template, theta)) == diag(exp(i * (A theta)_x)).
struct PhaseMap {
  int n = 0;
  Eigen::MatrixXd A;  // 2^n x (2^n - 1)
};

/// Derived from the gate sequence by tracking wire parities through CNOTs.
PhaseMap phase_map(int n);

/// Slot bound to the SRBB element with index j^2 - 1, for j in 2..2^n.
/// Slots follow the template's emission order.
int slot_for_element(int j, int n);
int element_for_slot(int slot, int n);

struct ZSolution {
  std::vector<double> theta;
  /// Mean of the requested phases. The template bound at `theta`, times
  /// exp(i * global_phase), equals diag(exp(i * phases)).
  double global_phase = 0.0;
};

/// Least-squares inversion of the phase map on the zero-sum subspace.
/// The phases must sum to a multiple of 2*pi (within 1e-8); otherwise a
/// ValidationError is raised that reports the residual.
ZSolution solve_z_params(std::span<const double> target_phases);

/// Phases of a diagonal matrix entry by entry (principal arguments).
std::vector<double> diagonal_phases(const UnitaryMatrix& u);

}  // namespace srbb
