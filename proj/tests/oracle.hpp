#pragma once

// Reference constructions written directly from the gate definitions, with
// no use of the library's kernels. Tests compare library output against
// these.

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "srbb/circuit.hpp"

namespace oracle {

using cd = std::complex<double>;
using M2 = Eigen::Matrix2cd;
using MX = Eigen::MatrixXcd;

inline M2 m2(cd a, cd b, cd c, cd d) {
  M2 m;
  m << a, b, c, d;
  return m;
}

inline M2 ry(double t) { return m2(std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2)); }
inline M2 rz(double t) { return m2(std::polar(1.0, -t / 2), 0.0, 0.0, std::polar(1.0, t / 2)); }
inline M2 phase(double p) { return m2(1.0, 0.0, 0.0, std::polar(1.0, p)); }
inline M2 hadamard() {
  const double r = 1.0 / std::sqrt(2.0);
  return m2(r, r, r, -r);
}
inline M2 s_gate() { return m2(1.0, 0.0, 0.0, cd(0, 1)); }
inline M2 sdg_gate() { return m2(1.0, 0.0, 0.0, cd(0, -1)); }
inline M2 pauli_x() { return m2(0.0, 1.0, 1.0, 0.0); }

// Qubit 0 is the most significant bit of the basis index.
inline int bit(std::size_t idx, int q, int n) { return static_cast<int>((idx >> (n - 1 - q)) & 1u); }

inline MX embed(int n, int q, const M2& g) {
  const std::size_t d = std::size_t{1} << n;
  MX u = MX::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  const std::size_t mask = std::size_t{1} << (n - 1 - q);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c)
      if ((r & ~mask) == (c & ~mask)) u(r, c) = g(bit(r, q, n), bit(c, q, n));
  return u;
}

inline MX cnot(int n, int control, int target) {
  const std::size_t d = std::size_t{1} << n;
  MX u = MX::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t c = 0; c < d; ++c) {
    std::size_t r = c;
    if (bit(c, control, n)) r ^= std::size_t{1} << (n - 1 - target);
    u(r, c) = 1.0;
  }
  return u;
}

inline double angle_of(const srbb::GateInstance& g) { return std::get<double>(g.angle); }

/// Left-multiplies one full-register matrix per gate.
inline MX circuit_unitary(const srbb::Circuit& c) {
  const int n = c.n_qubits();
  MX u = MX::Identity(Eigen::Index{1} << n, Eigen::Index{1} << n);
  for (const auto& g : c.gates()) {
    const int q = g.qubits[0];
    MX step;
    switch (g.kind) {
      case srbb::GateKind::RY: step = embed(n, q, ry(angle_of(g))); break;
      case srbb::GateKind::RZ: step = embed(n, q, rz(angle_of(g))); break;
      case srbb::GateKind::PHASESHIFT: step = embed(n, q, phase(angle_of(g))); break;
      case srbb::GateKind::H: step = embed(n, q, hadamard()); break;
      case srbb::GateKind::S: step = embed(n, q, s_gate()); break;
      case srbb::GateKind::SDG: step = embed(n, q, sdg_gate()); break;
      case srbb::GateKind::X: step = embed(n, q, pauli_x()); break;
      case srbb::GateKind::CNOT: step = cnot(n, g.qubits[0], g.qubits[1]); break;
    }
    u = step * u;
  }
  return u;
}

/// Diagonal produced by a product of exp(-i t/2 Z_S) over parity sets S
/// (bit q of a mask is qubit q).
inline Eigen::VectorXd parity_phases(int n, const std::vector<std::uint32_t>& masks,
                                     const std::vector<double>& theta) {
  const std::size_t d = std::size_t{1} << n;
  Eigen::VectorXd ph = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  for (std::size_t x = 0; x < d; ++x) {
    for (std::size_t s = 0; s < masks.size(); ++s) {
      int par = 0;
      for (int q = 0; q < n; ++q)
        if ((masks[s] >> q) & 1u) par ^= bit(x, q, n);
      ph(static_cast<Eigen::Index>(x)) += (par ? 0.5 : -0.5) * theta[s];
    }
  }
  return ph;
}

/// Stable pure-state trace distance via the Gram determinant:
/// 1 - |<a|b>|^2 = (1/2) sum_{i,j} |a_i b_j - a_j b_i|^2 for unit vectors.
inline double trace_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < a.size(); ++j) acc += std::norm(a(i) * b(j) - a(j) * b(i));
  return std::sqrt(0.5 * acc / (a.squaredNorm() * b.squaredNorm()));
}

}  // namespace oracle
