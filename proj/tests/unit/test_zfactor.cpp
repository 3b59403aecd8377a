#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "../oracle.hpp"
#include "srbb/errors.hpp"
#include "srbb/zfactor.hpp"

using namespace srbb;

namespace {

std::vector<double> random_angles(std::size_t k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-kPi, kPi);
  std::vector<double> t(k);
  for (auto& v : t) v = u(rng);
  return t;
}

int count_kind(const Circuit& c, GateKind k) {
  return static_cast<int>(std::count_if(c.gates().begin(), c.gates().end(),
                                        [k](const GateInstance& g) { return g.kind == k; }));
}

}  // namespace

TEST_CASE("n = 2 base sequence") {
  const ZFactorTemplate z = build_z_factor(2);
  Circuit want(2, 3);
  want.rz(0, SlotRef{0}).rz(1, SlotRef{1}).cnot(0, 1).rz(1, SlotRef{2}).cnot(0, 1);
  CHECK(z.circuit == want);
  CHECK(z.slot_parity == std::vector<ParityMask>{0b01, 0b10, 0b11});
}

TEST_CASE("n = 2 diagonal matches the parity-sum oracle") {
  std::mt19937_64 rng(4);
  const ZFactorTemplate z = build_z_factor(2);
  for (int trial = 0; trial < 10; ++trial) {
    const auto t = random_angles(3, rng);
    const auto u = oracle::circuit_unitary(bind(z.circuit, t));
    const Eigen::VectorXd ph = oracle::parity_phases(2, {0b01, 0b10, 0b11}, t);
    for (Eigen::Index x = 0; x < 4; ++x) CHECK(std::abs(u(x, x) - std::polar(1.0, ph(x))) < 1e-14);
    CHECK((u - Eigen::MatrixXcd(u.diagonal().asDiagonal())).norm() < 1e-14);
  }
}

TEST_CASE("gate counts for n = 2..8") {
  for (int n = 2; n <= 8; ++n) {
    const ZFactorTemplate z = build_z_factor(n);
    CHECK(count_kind(z.circuit, GateKind::CNOT) == (1 << n) - 2);
    CHECK(count_kind(z.circuit, GateKind::RZ) == (1 << n) - 1);
    CHECK(static_cast<int>(z.circuit.size()) == 2 * (1 << n) - 3);
    CHECK(z.circuit.slot_count() == (1 << n) - 1);
  }
}

TEST_CASE("every nonempty parity subset appears once") {
  for (int n = 2; n <= 8; ++n) {
    const ZFactorTemplate z = build_z_factor(n);
    const std::set<ParityMask> seen(z.slot_parity.begin(), z.slot_parity.end());
    CHECK(seen.size() == z.slot_parity.size());
    CHECK(static_cast<int>(seen.size()) == (1 << n) - 1);
    CHECK(seen.count(0) == 0);
    CHECK(*seen.rbegin() == (ParityMask{1} << n) - 1);
  }
}

TEST_CASE("bound templates are diagonal SU with the predicted phases") {
  std::mt19937_64 rng(8);
  for (int n = 2; n <= 5; ++n) {
    const ZFactorTemplate z = build_z_factor(n);
    for (int trial = 0; trial < 5; ++trial) {
      const auto t = random_angles(z.slot_parity.size(), rng);
      const auto u = oracle::circuit_unitary(bind(z.circuit, t));
      const Eigen::VectorXcd d = u.diagonal();
      CHECK((u - Eigen::MatrixXcd(d.asDiagonal())).norm() < 1e-12);
      CHECK(std::abs(u.determinant() - 1.0) < 1e-10);
      const Eigen::VectorXd ph = oracle::parity_phases(n, z.slot_parity, t);
      for (Eigen::Index x = 0; x < d.size(); ++x) CHECK(std::abs(d(x) - std::polar(1.0, ph(x))) < 1e-12);
    }
  }
}

TEST_CASE("recursion embeds the previous template") {
  for (int n = 3; n <= 8; ++n) {
    const ZFactorTemplate prev = build_z_factor(n - 1);
    const ZFactorTemplate cur = build_z_factor(n);
    REQUIRE(cur.circuit.size() > prev.circuit.size());
    for (std::size_t i = 0; i < prev.circuit.size(); ++i) CHECK(cur.circuit.gates()[i] == prev.circuit.gates()[i]);
    CHECK(std::equal(prev.slot_parity.begin(), prev.slot_parity.end(), cur.slot_parity.begin()));
    // Every later RZ involves the new qubit.
    for (std::size_t s = prev.slot_parity.size(); s < cur.slot_parity.size(); ++s)
      CHECK(((cur.slot_parity[s] >> (n - 1)) & 1u) == 1u);
  }
}

TEST_CASE("phase map has full rank and matches the circuit") {
  std::mt19937_64 rng(12);
  for (int n = 2; n <= 5; ++n) {
    const PhaseMap pm = phase_map(n);
    CHECK(pm.A.rows() == (1 << n));
    CHECK(pm.A.cols() == (1 << n) - 1);
    CHECK(Eigen::FullPivLU<Eigen::MatrixXd>(pm.A).rank() == (1 << n) - 1);
    const ZFactorTemplate z = build_z_factor(n);
    const auto t = random_angles(z.slot_parity.size(), rng);
    const Eigen::VectorXd want = oracle::parity_phases(n, z.slot_parity, t);
    const Eigen::VectorXd got = pm.A * Eigen::Map<const Eigen::VectorXd>(t.data(), static_cast<Eigen::Index>(t.size()));
    CHECK((got - want).norm() < 1e-12);
  }
}

TEST_CASE("solve_z_params round trip") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int n = 2; n <= 5; ++n) {
    const std::size_t d = std::size_t{1} << n;
    const ZFactorTemplate z = build_z_factor(n);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> phi(d);
      for (auto& p : phi) p = u(rng);
      // Force the sum to 2*pi*m for a nonzero m.
      double s = 0.0;
      for (double p : phi) s += p;
      phi.back() += 2 * kPi * 3 - s;
      const ZSolution sol = solve_z_params(phi);
      const Eigen::MatrixXcd m = oracle::circuit_unitary(bind(z.circuit, sol.theta)) * std::polar(1.0, sol.global_phase);
      for (std::size_t x = 0; x < d; ++x) {
        const auto i = static_cast<Eigen::Index>(x);
        CHECK(std::abs(m(i, i) - std::polar(1.0, phi[x])) < 1e-10);
      }
    }
  }
}

TEST_CASE("solve_z_params rejects non-SU phase vectors") {
  const std::vector<double> phi{0.1, 0.2, 0.3, 0.4};
  CHECK_THROWS_WITH_AS(solve_z_params(phi), doctest::Contains("residual"), ValidationError);
  const std::vector<double> three{0.0, 0.0, 0.0};
  CHECK_THROWS_AS(solve_z_params(three), ValidationError);
}

TEST_CASE("element indexing follows emission order") {
  CHECK(slot_for_element(2, 2) == 0);
  CHECK(slot_for_element(4, 2) == 2);
  CHECK(element_for_slot(6, 3) == 8);
  for (int j = 2; j <= 8; ++j) CHECK(element_for_slot(slot_for_element(j, 3), 3) == j);
  CHECK_THROWS_AS(slot_for_element(1, 2), ValidationError);
  CHECK_THROWS_AS(slot_for_element(5, 2), ValidationError);
  CHECK_THROWS_AS(build_z_factor(1), ValidationError);
}
