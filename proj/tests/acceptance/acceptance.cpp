// Acceptance checks 1-8. Prints one PASS/FAIL line per criterion with the
// measured figures; exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../oracle.hpp"
#include "srbb/circuit.hpp"
#include "srbb/exact.hpp"
#include "srbb/ladder.hpp"
#include "srbb/statelib.hpp"
#include "srbb/variational.hpp"
#include "srbb/zfactor.hpp"

using namespace srbb;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::vector<double> uniform_vec(std::size_t k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-kPi, kPi);
  std::vector<double> v(k);
  for (auto& x : v) x = u(rng);
  return v;
}

// 1. Gate counts and depth against the closed forms.
Outcome counts() {
  Outcome o;
  std::ostringstream d;
  std::mt19937_64 rng(1);
  for (int n = 2; n <= 8; ++n) {
    const Circuit c = assemble_full(n, uniform_vec(static_cast<std::size_t>(modulus_slot_count(n)), rng),
                                    uniform_vec(static_cast<std::size_t>(phase_slot_count(n)), rng), 0.3);
    const CircuitStats s = stats(c);
    const CountPrediction p = predicted_counts(n);
    const bool ok = s.n_cnot == p.n_cnot && s.n_rot == p.n_rot && (n <= 3 ? s.depth == p.depth : s.depth <= p.depth);
    o.pass = o.pass && ok;
    d << " n=" << n << ":" << s.depth << "/" << p.depth;
  }
  o.detail = "depth measured/predicted" + d.str();
  return o;
}

// 2. Z-factor algebra over random bindings.
Outcome zfactor_algebra() {
  Outcome o;
  std::mt19937_64 rng(2);
  double off = 0, det = 0, solve = 0;
  for (int n = 2; n <= 5; ++n) {
    const ZFactorTemplate z = build_z_factor(n);
    const PhaseMap pm = phase_map(n);
    if (Eigen::FullPivLU<Eigen::MatrixXd>(pm.A).rank() != (1 << n) - 1) o.pass = false;
    for (int trial = 0; trial < 100; ++trial) {
      const auto t = uniform_vec(z.slot_parity.size(), rng);
      const Eigen::MatrixXcd u = oracle::circuit_unitary(bind(z.circuit, t));
      const Eigen::MatrixXcd diag = u.diagonal().asDiagonal();
      off = std::max(off, (u - diag).squaredNorm());
      det = std::max(det, std::abs(u.determinant() - 1.0));
      std::vector<double> phi(u.rows());
      for (Eigen::Index x = 0; x < u.rows(); ++x) phi[static_cast<std::size_t>(x)] = std::arg(u(x, x));
      // Principal arguments sum to a multiple of 2 pi up to rounding.
      const ZSolution sol = solve_z_params(phi);
      const Eigen::MatrixXcd back = oracle::circuit_unitary(bind(z.circuit, sol.theta)) * std::polar(1.0, sol.global_phase);
      solve = std::max(solve, (back - u).cwiseAbs().maxCoeff());
    }
  }
  o.pass = o.pass && off < 1e-12 && det < 1e-10 && solve < 1e-10;
  o.detail = "max off-diagonal mass " + sci(off) + ", max |det-1| " + sci(det) + ", max solve error " + sci(solve) +
             ", rank full for n=2..5";
  return o;
}

// 3. Four-amplitude worked example.
Outcome worked_example() {
  Outcome o;
  const std::vector<double> m{std::sqrt(0.1), std::sqrt(0.2), std::sqrt(0.4), std::sqrt(0.3)};
  const NaturalAngles a = natural_angles(bst_build(m));
  const double e0 = std::abs(a.angles[0][0] - std::acos(std::sqrt(0.3)));
  const double e1 = std::abs(a.angles[1][0] - std::acos(std::sqrt(0.1 / 0.3)));
  const double e2 = std::abs(a.angles[1][1] - std::acos(std::sqrt(0.4 / 0.7)));
  const StateVector target(std::vector<Complex>(m.begin(), m.end()));
  const Eigen::VectorXcd out = oracle::circuit_unitary(exact_prepare(target).circuit).col(0);
  const double want[] = {0.1, 0.2, 0.4, 0.3};
  double perr = 0.0;
  for (int i = 0; i < 4; ++i) perr = std::max(perr, std::abs(std::norm(out(i)) - want[i]));
  const double aerr = std::max({e0, e1, e2});
  o.pass = perr < 1e-9 && aerr < 1e-12;
  o.detail = "probability error " + sci(perr) + ", angle error " + sci(aerr);
  return o;
}

// 4. Exact pipeline on Haar targets.
Outcome exact_pipeline() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0, worst_amp = 0.0;
  for (int n = 2; n <= 5; ++n) {
    const auto corpus = haar_corpus(n, 100, 4000 + static_cast<std::uint64_t>(n));
    for (const auto& t : corpus) {
      const ExactPreparation prep = exact_prepare(t);
      const Eigen::VectorXcd out = oracle::circuit_unitary(prep.circuit).col(0);
      worst = std::max(worst, oracle::trace_distance(t.to_eigen(), out));
      worst_amp = std::max(worst_amp, (out - t.to_eigen()).norm());
    }
  }
  const double secs = elapsed(t0);
  o.pass = worst < 1e-9 && secs < 120;
  o.detail = "max trace distance " + sci(worst) + " (amplitude error with tail " + sci(worst_amp) + "), " +
             sci(secs) + " s";
  return o;
}

TwoStageResult train(int n, std::uint64_t trial, LossKind loss, const OptimizerConfig& opt) {
  TwoStageConfig cfg;
  cfg.seed = 500 + trial;
  cfg.modulus = {loss, opt};
  cfg.phase = cfg.modulus;
  return two_stage_train(haar_random_state(n, 9000 + 10 * static_cast<std::uint64_t>(n) + trial), cfg);
}

// 5. Nelder-Mead with Frobenius loss.
Outcome nelder_mead_column() {
  Outcome o;
  std::vector<std::string> parts;
  const struct {
    int n;
    int trials;
    double bound;
  } plan[] = {{2, 3, 1e-10}, {3, 3, 1e-10}, {4, 2, 1e-8}};
  for (const auto& p : plan) {
    double worst = 0.0, worst_time = 0.0;
    for (int t = 0; t < p.trials; ++t) {
      const auto t0 = std::chrono::steady_clock::now();
      const TwoStageResult r = train(p.n, static_cast<std::uint64_t>(t), LossKind::Frobenius, NelderMeadConfig::for_qubits(p.n));
      worst_time = std::max(worst_time, elapsed(t0));
      worst = std::max(worst, r.completed ? r.final_error : 1.0);
    }
    const bool ok = worst <= p.bound && (p.n != 2 || worst_time < 60.0);
    o.pass = o.pass && ok;
    parts.push_back("n=" + std::to_string(p.n) + ": max error " + sci(worst) + " in " + sci(worst_time) + " s");
  }
  for (std::size_t i = 0; i < parts.size(); ++i) o.detail += (i ? "; " : "") + parts[i];
  return o;
}

// 6. Adam, fidelity vs trace-distance loss at n = 2.
Outcome adam_columns() {
  Outcome o;
  int ordered = 0;
  double worst_fid = 0.0, lo_tr = 1.0, hi_tr = 0.0;
  bool band = true;
  for (std::uint64_t t = 0; t < 5; ++t) {
    const TwoStageResult f = train(2, t, LossKind::Fidelity, AdamConfig{});
    const TwoStageResult tr = train(2, t, LossKind::TraceDistance, AdamConfig{});
    worst_fid = std::max(worst_fid, f.final_error);
    lo_tr = std::min(lo_tr, tr.final_error);
    hi_tr = std::max(hi_tr, tr.final_error);
    band = band && tr.final_error >= 1e-4 && tr.final_error <= 1e-2;
    if (tr.final_error > f.final_error) ++ordered;
  }
  o.pass = worst_fid <= 1e-6 && band && ordered >= 4;
  o.detail = "fidelity max error " + sci(worst_fid) + "; trace errors in [" + sci(lo_tr) + ", " + sci(hi_tr) +
             "]; trace > fidelity in " + std::to_string(ordered) + "/5";
  return o;
}

// 7. Property suites.
Outcome properties() {
  Outcome o;
  std::ostringstream d;

  double id_err = 0.0;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const StateVector a = haar_random_state(3, 2 * i + 1), b = haar_random_state(3, 2 * i + 2);
    id_err = std::max(id_err, std::abs(trace_distance(a, b) - std::sqrt(1.0 - fidelity(a, b))));
  }
  d << "T=sqrt(1-F) dev " << sci(id_err);

  std::mt19937_64 rng(7);
  double grad_err = 0.0;
  const auto data = haar_corpus(2, 16, 3);
  std::vector<std::size_t> batch(16);
  std::iota(batch.begin(), batch.end(), 0);
  const Circuit tmpl = build_modulus_template(2);
  const UnitaryMatrix target = unitary_of(bind(tmpl, uniform_vec(4, rng)));
  for (LossKind loss : {LossKind::Frobenius, LossKind::Fidelity, LossKind::TraceDistance}) {
    const StageObjective obj(tmpl, target, loss, data);
    for (int trial = 0; trial < 5; ++trial) {
      auto p = uniform_vec(4, rng);
      const auto g = obj.gradient(p, batch);
      for (std::size_t j = 0; j < p.size(); ++j) {
        const double keep = p[j];
        p[j] = keep + 1e-5;
        const double up = obj.value(p, batch);
        p[j] = keep - 1e-5;
        const double dn = obj.value(p, batch);
        p[j] = keep;
        grad_err = std::max(grad_err, std::abs(g[j] - (up - dn) / 2e-5));
      }
    }
  }
  d << ", gradient dev " << sci(grad_err);

  int hel_bad = 0;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto dist = [&] {
    std::vector<double> p(8);
    double s = 0.0;
    for (auto& v : p) s += (v = u(rng));
    for (auto& v : p) v /= s;
    return ProbabilityDistribution(p);
  };
  for (int i = 0; i < 1000; ++i) {
    const auto p = dist(), q = dist(), r = dist();
    if (std::abs(hellinger(p, q) - hellinger(q, p)) > 1e-12) ++hel_bad;
    if (hellinger(p, r) > hellinger(p, q) + hellinger(q, r) + 1e-12) ++hel_bad;
    if (hellinger(p, p) != 0.0) ++hel_bad;
  }
  d << ", hellinger violations " << hel_bad;

  double tail = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double phi = uniform_vec(1, rng)[0] * 3;
    const Eigen::MatrixXcd m = oracle::circuit_unitary(global_phase_tail(1, phi));
    tail = std::max(tail, (m - std::polar(1.0, phi) * Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff());
  }
  d << ", tail dev " << sci(tail);

  bool embed = true;
  for (int n = 3; n <= 8; ++n) {
    const ZFactorTemplate prev = build_z_factor(n - 1), cur = build_z_factor(n);
    for (std::size_t i = 0; i < prev.circuit.size(); ++i) embed = embed && cur.circuit.gates()[i] == prev.circuit.gates()[i];
    const std::set<ParityMask> masks(cur.slot_parity.begin(), cur.slot_parity.end());
    embed = embed && static_cast<int>(masks.size()) == (1 << n) - 1;
  }
  d << ", recursion embedding " << (embed ? "holds" : "broken");

  o.pass = id_err < 1e-10 && grad_err < 1e-6 && hel_bad == 0 && tail < 1e-12 && embed;
  o.detail = d.str();
  return o;
}

// 8. Hardware-table states, prepared in noiseless simulation.
Outcome hardware_states() {
  Outcome o;
  double worst = 0.0;
  int count = 0;
  auto check = [&](const StateVector& t) {
    const StateVector out = run(exact_prepare(t).circuit, StateVector(t.n_qubits()));
    worst = std::max(worst, hellinger(probabilities(t), probabilities(out)));
    ++count;
  };
  for (const auto& nt : named_targets()) check(realize(nt.spec));
  for (int n = 2; n <= 5; ++n)
    for (const auto& t : haar_corpus(n, 50, 8000 + static_cast<std::uint64_t>(n))) check(t);
  o.pass = worst < 1e-6;
  o.detail = std::to_string(count) + " states (13 named + 4x50 random), max Hellinger " + sci(worst) +
             "; hardware magnitudes and n=7..8 training are out of scope";
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"formula conformance", counts},
      {"Z-factor algebra", zfactor_algebra},
      {"four-amplitude example", worked_example},
      {"exact pipeline", exact_pipeline},
      {"Nelder-Mead training", nelder_mead_column},
      {"Adam training", adam_columns},
      {"property suites", properties},
      {"hardware states in simulation", hardware_states},
  };
  int failed = 0;
  int k = 0;
  for (const auto& [name, fn] : criteria) {
    ++k;
    const auto t0 = std::chrono::steady_clock::now();
    const Outcome r = fn();
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", r.pass ? "PASS" : "FAIL", k, name, r.detail.c_str(), elapsed(t0));
    std::fflush(stdout);
    if (!r.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
