#include <doctest.h>

#include <random>

#include "../oracle.hpp"
#include "srbb/errors.hpp"
#include "srbb/exact.hpp"
#include "srbb/ladder.hpp"
#include "srbb/zfactor.hpp"

using namespace srbb;

namespace {

std::vector<double> random_angles(int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-kPi, kPi);
  std::vector<double> t(static_cast<std::size_t>(k));
  for (auto& v : t) v = u(rng);
  return t;
}

Circuit random_full(int n, std::mt19937_64& rng) {
  return assemble_full(n, random_angles(modulus_slot_count(n), rng), random_angles(phase_slot_count(n), rng));
}

}  // namespace

TEST_CASE("closed-form counts") {
  CHECK(predicted_counts(2) == CountPrediction{12, 7, 4});
  CHECK(predicted_counts(3) == CountPrediction{30, 18, 14});
  CHECK(predicted_counts(4) == CountPrediction{71, 41, 36});
}

TEST_CASE("slot layout") {
  CHECK(modulus_slot_count(2) == 4);
  CHECK(modulus_slot_count(3) == 11);
  CHECK(phase_slot_count(3) == 7);
  CHECK(level_slot_offset(2) == 1);
  CHECK(level_slot_offset(3) == 4);
  for (int n = 2; n <= 8; ++n) {
    CHECK(build_modulus_template(n).slot_count() == modulus_slot_count(n));
    CHECK(level_slot_offset(n) + (1 << n) - 1 == modulus_slot_count(n));
  }
}

TEST_CASE("measured counts match the closed forms for n = 2..8") {
  std::mt19937_64 rng(1);
  for (int n = 2; n <= 8; ++n) {
    const CircuitStats s = stats(random_full(n, rng));
    const CountPrediction p = predicted_counts(n);
    CAPTURE(n);
    CHECK(s.n_cnot == p.n_cnot);
    CHECK(s.n_rot == p.n_rot);
    if (n <= 3) {
      CHECK(s.depth == p.depth);
    } else {
      CHECK(s.depth <= p.depth);
    }
  }
}

TEST_CASE("the phase tail is left out of the counts") {
  std::mt19937_64 rng(2);
  const auto m = random_angles(modulus_slot_count(3), rng);
  const auto ph = random_angles(phase_slot_count(3), rng);
  CHECK(stats(assemble_full(3, m, ph, 0.4)) == stats(assemble_full(3, m, ph)));
}

TEST_CASE("global-phase tail equals exp(i phi) I") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double phi = u(rng);
    const auto m = oracle::circuit_unitary(global_phase_tail(2, phi));
    const Eigen::MatrixXcd want = std::polar(1.0, phi) * Eigen::MatrixXcd::Identity(4, 4);
    CHECK((m - want).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("S, H dressing turns RZ into RY") {
  const double t = 1.234;
  const oracle::M2 dressed = oracle::s_gate() * oracle::hadamard() * oracle::rz(t) * oracle::hadamard() * oracle::sdg_gate();
  CHECK((dressed - oracle::ry(t)).norm() < 1e-14);
}

TEST_CASE("level-2 block realizes the two-qubit RY multiplexor") {
  // Level 2 alone: build the modulus template at n = 2 with RY head 0.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-kPi / 2, kPi / 2);
  for (int trial = 0; trial < 10; ++trial) {
    const std::vector<double> a{u(rng), u(rng)};
    const std::vector<double> gammas{2 * a[0], 2 * a[1]};
    const ZSolution z = solve_z_params(multiplexed_rz_phases(gammas));
    std::vector<double> slots{0.0};
    slots.insert(slots.end(), z.theta.begin(), z.theta.end());
    const auto got = oracle::circuit_unitary(bind(build_modulus_template(2), slots));
    // Oracle: block-diagonal RY(2 a_0), RY(2 a_1).
    Eigen::MatrixXcd want = Eigen::MatrixXcd::Zero(4, 4);
    want.block(0, 0, 2, 2) = oracle::ry(2 * a[0]);
    want.block(2, 2, 2, 2) = oracle::ry(2 * a[1]);
    CHECK((got - want).norm() < 1e-12);
    CHECK((ucg_reference(2, a).matrix() - want).norm() < 1e-14);
  }
}

TEST_CASE("modulus part at natural parameters is a real orthogonal matrix") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 2; n <= 5; ++n) {
    std::vector<double> mod(std::size_t{1} << n);
    double s = 0.0;
    for (auto& v : mod) s += (v = u(rng)) * v;
    for (auto& v : mod) v /= std::sqrt(s);
    const auto theta = modulus_params_exact(mod);
    const auto m = oracle::circuit_unitary(bind(build_modulus_template(n), theta));
    CHECK(m.imag().cwiseAbs().maxCoeff() < 1e-12);
    CHECK((m - modulus_unitary(natural_angles(bst_build(mod))).matrix()).norm() < 1e-11);
  }
}

TEST_CASE("assemble_full validates lengths") {
  const std::vector<double> a(3, 0.0), b(3, 0.0);
  CHECK_THROWS_AS(assemble_full(2, a, b), ValidationError);
  CHECK_THROWS_AS(build_modulus_template(1), ValidationError);
}
