#include "srbb/exact.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "srbb/errors.hpp"
#include "srbb/ladder.hpp"
#include "srbb/zfactor.hpp"

namespace srbb {

namespace {

constexpr double kZeroModulus = 1e-14;

}  // namespace

std::size_t NaturalAngles::count() const {
  std::size_t c = 0;
  for (const auto& lvl : angles) c += lvl.size();
  return c;
}

AmplitudeBST bst_build(std::span<const double> moduli) {
  const int n = qubits_for_dim(moduli.size());
  if (n < 1) throw ValidationError("need at least two amplitudes");
  double sq = 0.0;
  for (double m : moduli) {
    if (!std::isfinite(m) || m < 0.0) throw ValidationError("moduli must be finite and >= 0");
    sq += m * m;
  }
  if (sq == 0.0) throw ValidationError("zero amplitude vector");
  const double norm = std::sqrt(sq);
  if (std::abs(norm - 1.0) > 1e-9) {
    throw ValidationError("moduli are not normalized (norm " + std::to_string(norm) + ")");
  }

  AmplitudeBST t;
  t.n = n;
  t.levels.resize(static_cast<std::size_t>(n) + 1);
  auto& leaves = t.levels.back();
  leaves.reserve(moduli.size());
  for (double m : moduli) leaves.push_back(m / norm);
  for (int lvl = n - 1; lvl >= 0; --lvl) {
    const auto& below = t.levels[static_cast<std::size_t>(lvl) + 1];
    auto& here = t.levels[static_cast<std::size_t>(lvl)];
    here.resize(below.size() / 2);
    for (std::size_t i = 0; i < here.size(); ++i) here[i] = std::hypot(below[2 * i], below[2 * i + 1]);
  }
  return t;
}

NaturalAngles natural_angles(const AmplitudeBST& bst) {
  NaturalAngles out;
  out.n = bst.n;
  out.angles.resize(static_cast<std::size_t>(bst.n));
  for (int k = 1; k <= bst.n; ++k) {
    const auto& parents = bst.levels[static_cast<std::size_t>(k) - 1];
    const auto& children = bst.levels[static_cast<std::size_t>(k)];
    auto& dst = out.angles[static_cast<std::size_t>(k) - 1];
    dst.resize(parents.size());
    for (std::size_t i = 0; i < parents.size(); ++i) {
      const double v = parents[i];
      dst[i] = v > 0.0 ? std::acos(std::clamp(children[2 * i] / v, 0.0, 1.0)) : 0.0;
    }
  }
  return out;
}

UnitaryMatrix ucg_reference(int k, std::span<const double> angles) {
  if (k < 1) throw ValidationError("UCG level must be >= 1");
  if (angles.size() != (std::size_t{1} << (k - 1))) {
    throw ValidationError("UCG level " + std::to_string(k) + " needs " +
                          std::to_string(1 << (k - 1)) + " angles");
  }
  const auto d = static_cast<Eigen::Index>(dim_of(k));
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (std::size_t j = 0; j < angles.size(); ++j) {
    const auto b = static_cast<Eigen::Index>(2 * j);
    m.block(b, b, 2, 2) = gates::RY(2 * angles[j]).matrix();
  }
  return UnitaryMatrix(std::move(m));
}

UnitaryMatrix modulus_unitary(const NaturalAngles& angles) {
  const int n = angles.n;
  UnitaryMatrix u = UnitaryMatrix::identity(n);
  for (int k = 1; k <= n; ++k) {
    UnitaryMatrix level = ucg_reference(k, angles.angles[static_cast<std::size_t>(k) - 1]);
    if (k < n) level = kron(level, UnitaryMatrix::identity(n - k));
    u = level * u;
  }
  return u;
}

std::vector<double> multiplexed_rz_phases(std::span<const double> gammas) {
  std::vector<double> phases(2 * gammas.size());
  for (std::size_t j = 0; j < gammas.size(); ++j) {
    phases[2 * j] = -gammas[j] / 2;
    phases[2 * j + 1] = gammas[j] / 2;
  }
  return phases;
}

std::vector<double> modulus_params_exact(std::span<const double> moduli) {
  const NaturalAngles na = natural_angles(bst_build(moduli));
  const int n = na.n;
  if (n < 2) throw ValidationError("state preparation needs at least 2 qubits");
  std::vector<double> slots;
  slots.reserve(static_cast<std::size_t>(modulus_slot_count(n)));
  slots.push_back(2 * na.angles[0][0]);
  for (int k = 2; k <= n; ++k) {
    const auto& lvl = na.angles[static_cast<std::size_t>(k) - 1];
    std::vector<double> gammas(lvl.size());
    std::transform(lvl.begin(), lvl.end(), gammas.begin(), [](double a) { return 2 * a; });
    const ZSolution z = solve_z_params(multiplexed_rz_phases(gammas));
    slots.insert(slots.end(), z.theta.begin(), z.theta.end());
  }
  return slots;
}

PhaseSolution phase_params_exact(std::span<const double> target_phases) {
  double mean = 0.0;
  for (double p : target_phases) mean += p;
  mean /= static_cast<double>(target_phases.size());
  std::vector<double> centered(target_phases.begin(), target_phases.end());
  for (double& p : centered) p -= mean;
  return PhaseSolution{solve_z_params(centered).theta, mean};
}

std::vector<double> amplitude_phases(std::span<const Complex> amps) {
  std::vector<double> out(amps.size());
  for (std::size_t i = 0; i < amps.size(); ++i) {
    out[i] = std::abs(amps[i]) > kZeroModulus ? std::arg(amps[i]) : 0.0;
  }
  return out;
}

std::vector<double> amplitude_moduli(std::span<const Complex> amps) {
  std::vector<double> out(amps.size());
  for (std::size_t i = 0; i < amps.size(); ++i) out[i] = std::abs(amps[i]);
  return out;
}

ExactPreparation exact_prepare(const StateVector& target, bool with_tail) {
  const int n = target.n_qubits();
  if (n < 2) throw ValidationError("state preparation needs at least 2 qubits");
  ExactPreparation out;
  out.theta_modulus = modulus_params_exact(amplitude_moduli(target.amplitudes()));
  PhaseSolution ph = phase_params_exact(amplitude_phases(target.amplitudes()));
  out.theta_phase = std::move(ph.theta_phase);
  out.global_phase = ph.global_phase;
  out.circuit = assemble_full(n, out.theta_modulus, out.theta_phase,
                              with_tail ? std::optional<double>(out.global_phase) : std::nullopt);
  return out;
}

}  // namespace srbb
