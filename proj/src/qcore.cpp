#include "srbb/qcore.hpp"

#include <cmath>
#include <string>

#include "srbb/errors.hpp"

namespace srbb {

namespace {

bool is_pow2(std::size_t d) { return d != 0 && (d & (d - 1)) == 0; }

bool all_finite(std::span<const Complex> v) {
  for (const auto& z : v) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

double l2_norm(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

void check_qubit(int q, int n) {
  if (q < 0 || q >= n) {
    throw ValidationError("qubit index " + std::to_string(q) + " out of range for " +
                          std::to_string(n) + " qubits");
  }
}

}  // namespace

int qubits_for_dim(std::size_t dim) {
  if (!is_pow2(dim)) {
    throw ValidationError("dimension " + std::to_string(dim) + " is not a power of two");
  }
  int n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  return n;
}

// ---- UnitaryMatrix ---------------------------------------------------------

UnitaryMatrix::UnitaryMatrix(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw ValidationError("matrix is not square");
  n_qubits_ = qubits_for_dim(static_cast<std::size_t>(m_.rows()));
  if (!m_.allFinite()) throw ValidationError("matrix has non-finite entries");
}

UnitaryMatrix UnitaryMatrix::identity(int n_qubits) {
  const auto d = static_cast<Eigen::Index>(dim_of(n_qubits));
  return UnitaryMatrix(ComplexMatrix::Identity(d, d));
}

UnitaryMatrix UnitaryMatrix::diagonal(std::span<const Complex> entries) {
  const auto d = static_cast<Eigen::Index>(entries.size());
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) m(i, i) = entries[static_cast<std::size_t>(i)];
  return UnitaryMatrix(std::move(m));
}

UnitaryMatrix UnitaryMatrix::from_rows(
    std::initializer_list<std::initializer_list<Complex>> rows) {
  const auto d = static_cast<Eigen::Index>(rows.size());
  ComplexMatrix m(d, d);
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    if (static_cast<Eigen::Index>(row.size()) != d) throw ValidationError("ragged matrix rows");
    Eigen::Index c = 0;
    for (const auto& z : row) m(r, c++) = z;
    ++r;
  }
  return UnitaryMatrix(std::move(m));
}

bool UnitaryMatrix::is_unitary(double tol) const {
  const auto d = m_.rows();
  return ((m_ * m_.adjoint()) - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff() < tol;
}

UnitaryMatrix operator*(const UnitaryMatrix& a, const UnitaryMatrix& b) {
  if (a.dim() != b.dim()) throw ValidationError("matrix product dimension mismatch");
  return UnitaryMatrix(a.m_ * b.m_);
}

// ---- StateVector -----------------------------------------------------------

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits <= 0 || n_qubits > 24) {
    throw ValidationError("qubit count must be in 1..24, got " + std::to_string(n_qubits));
  }
  amps_.assign(dim_of(n_qubits), Complex{0.0, 0.0});
  amps_[0] = 1.0;
}

StateVector::StateVector(std::vector<Complex> amps) : amps_(std::move(amps)) {
  if (amps_.size() < 2) throw ValidationError("state needs at least one qubit");
  n_qubits_ = qubits_for_dim(amps_.size());
  if (!all_finite(amps_)) throw ValidationError("state has non-finite amplitudes");
  const double nrm = l2_norm(amps_);
  if (nrm == 0.0) throw ValidationError("state vector is zero");
  for (auto& z : amps_) z /= nrm;
}

StateVector::StateVector(Raw, std::vector<Complex> amps)
    : amps_(std::move(amps)), n_qubits_(qubits_for_dim(amps_.size())) {}

StateVector StateVector::basis(int n_qubits, std::size_t index) {
  StateVector s(n_qubits);
  if (index >= s.dim()) throw ValidationError("basis index out of range");
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

double StateVector::norm() const { return l2_norm(amps_); }

ComplexVector StateVector::to_eigen() const {
  return Eigen::Map<const ComplexVector>(amps_.data(), static_cast<Eigen::Index>(amps_.size()));
}

StateVector StateVector::from_eigen(const ComplexVector& v) {
  return StateVector(std::vector<Complex>(v.data(), v.data() + v.size()));
}

// ---- ProbabilityDistribution ----------------------------------------------

ProbabilityDistribution::ProbabilityDistribution(std::vector<double> probs, double tol)
    : probs_(std::move(probs)) {
  if (probs_.empty()) throw ValidationError("empty distribution");
  double sum = 0.0;
  for (double p : probs_) {
    if (!std::isfinite(p) || p < 0.0) throw ValidationError("probabilities must be finite and >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > tol) {
    throw ValidationError("probabilities sum to " + std::to_string(sum) + ", not 1");
  }
}

// ---- kernels ---------------------------------------------------------------

namespace kernel {

void apply_1q(std::span<Complex> amps, int n_qubits, int target, const Complex (&m)[4]) {
  const std::size_t stride = std::size_t{1} << bit_of(target, n_qubits);
  const std::size_t dim = amps.size();
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const Complex a0 = amps[i];
      const Complex a1 = amps[i + stride];
      amps[i] = m[0] * a0 + m[1] * a1;
      amps[i + stride] = m[2] * a0 + m[3] * a1;
    }
  }
}

void apply_diag_1q(std::span<Complex> amps, int n_qubits, int target, Complex d0, Complex d1) {
  const std::size_t mask = std::size_t{1} << bit_of(target, n_qubits);
  for (std::size_t i = 0; i < amps.size(); ++i) amps[i] *= (i & mask) ? d1 : d0;
}

void apply_2q(std::span<Complex> amps, int n_qubits, int q0, int q1, const Complex (&m)[16]) {
  const std::size_t s0 = std::size_t{1} << bit_of(q0, n_qubits);
  const std::size_t s1 = std::size_t{1} << bit_of(q1, n_qubits);
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i & (s0 | s1)) continue;
    const std::size_t idx[4] = {i, i | s1, i | s0, i | s0 | s1};
    Complex in[4];
    for (int k = 0; k < 4; ++k) in[k] = amps[idx[k]];
    for (int r = 0; r < 4; ++r) {
      Complex acc{0.0, 0.0};
      for (int c = 0; c < 4; ++c) acc += m[4 * r + c] * in[c];
      amps[idx[r]] = acc;
    }
  }
}

void apply_cnot(std::span<Complex> amps, int n_qubits, int control, int target) {
  const std::size_t cm = std::size_t{1} << bit_of(control, n_qubits);
  const std::size_t tm = std::size_t{1} << bit_of(target, n_qubits);
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if ((i & cm) && !(i & tm)) std::swap(amps[i], amps[i | tm]);
  }
}

}  // namespace kernel

// ---- free operations -------------------------------------------------------

StateVector apply_gate(const StateVector& state, const UnitaryMatrix& gate,
                       std::span<const int> targets) {
  const int n = state.n_qubits();
  for (int q : targets) check_qubit(q, n);
  if (gate.dim() != dim_of(static_cast<int>(targets.size())) || targets.empty() ||
      targets.size() > 2) {
    throw ValidationError("gate of dimension " + std::to_string(gate.dim()) +
                          " does not match " + std::to_string(targets.size()) + " target(s)");
  }
  if (!gate.is_unitary()) throw ValidationError("gate matrix is not unitary");
  std::vector<Complex> amps = state.amps_;
  if (targets.size() == 1) {
    const Complex m[4] = {gate(0, 0), gate(0, 1), gate(1, 0), gate(1, 1)};
    kernel::apply_1q(amps, n, targets[0], m);
  } else {
    if (targets[0] == targets[1]) throw ValidationError("gate targets must be distinct");
    Complex m[16];
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) m[4 * r + c] = gate(r, c);
    kernel::apply_2q(amps, n, targets[0], targets[1], m);
  }
  return StateVector(StateVector::Raw{}, std::move(amps));
}

StateVector apply_unitary(const UnitaryMatrix& u, const StateVector& state) {
  if (u.dim() != state.dim()) throw ValidationError("unitary/state dimension mismatch");
  const ComplexVector out = u.matrix() * state.to_eigen();
  return StateVector(StateVector::Raw{}, std::vector<Complex>(out.data(), out.data() + out.size()));
}

Complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw ValidationError("inner product of states with different sizes");
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

ProbabilityDistribution probabilities(const StateVector& state) {
  std::vector<double> p(state.dim());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(state[i]);
  return ProbabilityDistribution(std::move(p), 1e-10);
}

UnitaryMatrix kron(const UnitaryMatrix& a, const UnitaryMatrix& b) {
  const auto da = a.matrix().rows();
  const auto db = b.matrix().rows();
  ComplexMatrix out(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < da; ++j) out.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
  return UnitaryMatrix(std::move(out));
}

namespace gates {

namespace {
const Complex kI{0.0, 1.0};
}

UnitaryMatrix I2() { return UnitaryMatrix::identity(1); }
UnitaryMatrix X() { return UnitaryMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}); }
UnitaryMatrix Y() { return UnitaryMatrix::from_rows({{0.0, -kI}, {kI, 0.0}}); }
UnitaryMatrix Z() { return UnitaryMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}}); }
UnitaryMatrix H() {
  const double r = 1.0 / std::sqrt(2.0);
  return UnitaryMatrix::from_rows({{r, r}, {r, -r}});
}
UnitaryMatrix S() { return UnitaryMatrix::from_rows({{1.0, 0.0}, {0.0, kI}}); }
UnitaryMatrix Sdg() { return UnitaryMatrix::from_rows({{1.0, 0.0}, {0.0, -kI}}); }
UnitaryMatrix RY(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return UnitaryMatrix::from_rows({{c, -s}, {s, c}});
}
UnitaryMatrix RZ(double theta) {
  return UnitaryMatrix::from_rows(
      {{std::exp(-kI * (theta / 2)), 0.0}, {0.0, std::exp(kI * (theta / 2))}});
}
UnitaryMatrix PhaseShift(double phi) {
  return UnitaryMatrix::from_rows({{1.0, 0.0}, {0.0, std::exp(kI * phi)}});
}
UnitaryMatrix CNOT() {
  return UnitaryMatrix::from_rows(
      {{1.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 1.0}, {0.0, 0.0, 1.0, 0.0}});
}

}  // namespace gates

}  // namespace srbb
