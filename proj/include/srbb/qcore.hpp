#pragma once

// Dense statevector kernel.
//
// Qubit ordering: qubit 0 is the most significant bit of a basis index, so on
// n qubits qubit q owns bit (n - 1 - q). kron(a, b) places `a` on the more
// significant qubits.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace srbb {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;

[[nodiscard]] constexpr std::size_t dim_of(int n_qubits) {
  return std::size_t{1} << n_qubits;
}

/// Bit position of `qubit` inside a basis index on `n_qubits` qubits.
[[nodiscard]] constexpr int bit_of(int qubit, int n_qubits) {
  return n_qubits - 1 - qubit;
}

/// Number of qubits for a power-of-two dimension; throws otherwise.
int qubits_for_dim(std::size_t dim);

/// Square matrix whose dimension is a power of two. Unitarity is not enforced
/// on construction; call is_unitary() where it matters.
class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(ComplexMatrix m);

  static UnitaryMatrix identity(int n_qubits);
  static UnitaryMatrix diagonal(std::span<const Complex> entries);
  static UnitaryMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

  [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  [[nodiscard]] int n_qubits() const { return n_qubits_; }
  [[nodiscard]] const ComplexMatrix& matrix() const { return m_; }
  [[nodiscard]] Complex operator()(std::size_t r, std::size_t c) const {
    return m_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }

  [[nodiscard]] bool is_unitary(double tol = 1e-10) const;
  [[nodiscard]] Complex determinant() const { return m_.determinant(); }
  [[nodiscard]] UnitaryMatrix adjoint() const { return UnitaryMatrix(m_.adjoint()); }

  friend UnitaryMatrix operator*(const UnitaryMatrix& a, const UnitaryMatrix& b);

 private:
  ComplexMatrix m_;
  int n_qubits_;
};

/// Normalized pure state on n qubits.
class StateVector {
 public:
  /// |0...0> on n qubits.
  explicit StateVector(int n_qubits);

  /// Takes arbitrary nonzero finite amplitudes of power-of-two length and
  /// renormalizes them.
  explicit StateVector(std::vector<Complex> amps);

  static StateVector basis(int n_qubits, std::size_t index);

  [[nodiscard]] int n_qubits() const { return n_qubits_; }
  [[nodiscard]] std::size_t dim() const { return amps_.size(); }
  [[nodiscard]] std::span<const Complex> amplitudes() const { return amps_; }
  [[nodiscard]] Complex operator[](std::size_t i) const { return amps_[i]; }
  [[nodiscard]] double norm() const;

  [[nodiscard]] ComplexVector to_eigen() const;
  static StateVector from_eigen(const ComplexVector& v);

 private:
  struct Raw {};
  StateVector(Raw, std::vector<Complex> amps);

  friend StateVector apply_gate(const StateVector&, const UnitaryMatrix&, std::span<const int>);
  friend StateVector apply_unitary(const UnitaryMatrix&, const StateVector&);

  std::vector<Complex> amps_;
  int n_qubits_;
};

class ProbabilityDistribution {
 public:
  /// Entries must be finite, nonnegative and sum to 1 within `tol`.
  explicit ProbabilityDistribution(std::vector<double> probs, double tol = 1e-9);

  [[nodiscard]] std::span<const double> probs() const { return probs_; }
  [[nodiscard]] std::size_t size() const { return probs_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return probs_[i]; }

 private:
  std::vector<double> probs_;
};

/// Applies a 2x2 or 4x4 gate to `targets`. For two targets the gate's row
/// index is 2 * bit(targets[0]) + bit(targets[1]).
StateVector apply_gate(const StateVector& state, const UnitaryMatrix& gate,
                       std::span<const int> targets);

/// Full-register matrix-vector product.
StateVector apply_unitary(const UnitaryMatrix& u, const StateVector& state);

/// <a|b>, conjugating `a`.
Complex inner_product(const StateVector& a, const StateVector& b);

ProbabilityDistribution probabilities(const StateVector& state);

UnitaryMatrix kron(const UnitaryMatrix& a, const UnitaryMatrix& b);

/// In-place gate kernels over a raw amplitude buffer of length 2^n_qubits.
/// `m` is row-major. Used by the circuit executor for both states and matrix
/// columns.
namespace kernel {
void apply_1q(std::span<Complex> amps, int n_qubits, int target, const Complex (&m)[4]);
void apply_2q(std::span<Complex> amps, int n_qubits, int q0, int q1, const Complex (&m)[16]);
void apply_cnot(std::span<Complex> amps, int n_qubits, int control, int target);
void apply_diag_1q(std::span<Complex> amps, int n_qubits, int target, Complex d0, Complex d1);
}  // namespace kernel

namespace gates {
UnitaryMatrix I2();
UnitaryMatrix X();
UnitaryMatrix Y();
UnitaryMatrix Z();
UnitaryMatrix H();
UnitaryMatrix S();
UnitaryMatrix Sdg();
UnitaryMatrix RY(double theta);
UnitaryMatrix RZ(double theta);
UnitaryMatrix PhaseShift(double phi);
/// Control is the first (more significant) target.
UnitaryMatrix CNOT();
}  // namespace gates

}  // namespace srbb
