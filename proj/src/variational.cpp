#include "srbb/variational.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "srbb/errors.hpp"
#include "srbb/exact.hpp"
#include "srbb/ladder.hpp"
#include "srbb/statelib.hpp"
#include "srbb/zfactor.hpp"

namespace srbb {

namespace {

/// Neumaier-compensated running sum; batch means must not depend on how the
/// terms were produced.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      c_ += (sum_ - t) + x;
    } else {
      c_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + c_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

void require_finite(double v, std::string_view where) {
  if (!std::isfinite(v)) {
    throw NumericalError("non-finite loss (" + std::to_string(v) + ") in " + std::string(where));
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::string to_string(LossKind k) {
  switch (k) {
    case LossKind::Frobenius: return "frobenius";
    case LossKind::TraceDistance: return "trace";
    case LossKind::Fidelity: return "fidelity";
  }
  return "?";
}

LossKind loss_from_string(const std::string& s) {
  if (s == "frobenius") return LossKind::Frobenius;
  if (s == "trace" || s == "trace-distance") return LossKind::TraceDistance;
  if (s == "fidelity") return LossKind::Fidelity;
  throw ValidationError("unknown loss '" + s + "'");
}

// ---- metrics ---------------------------------------------------------------

double frobenius_loss(const UnitaryMatrix& ideal, const UnitaryMatrix& vqc) {
  if (ideal.dim() != vqc.dim()) throw ValidationError("frobenius_loss: dimension mismatch");
  return (ideal.matrix() - vqc.matrix()).norm();
}

double fidelity(const StateVector& a, const StateVector& b) {
  return std::min(1.0, std::norm(inner_product(a, b)));
}

double trace_distance(const StateVector& a, const StateVector& b) {
  // ||b - a<a|b>|| equals sqrt(1 - F) for unit vectors but keeps full
  // relative precision when the states nearly coincide.
  if (a.dim() != b.dim()) throw ValidationError("trace_distance: size mismatch");
  const Complex o = inner_product(a, b);
  double sq = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) sq += std::norm(b[i] - a[i] * o);
  return std::min(1.0, std::sqrt(sq));
}

// ---- Nelder-Mead -----------------------------------------------------------

NelderMeadConfig NelderMeadConfig::for_qubits(int n) {
  NelderMeadConfig c;
  c.target_error = n <= 3 ? 1e-15 : 1e-10;
  return c;
}

std::string optimizer_name(const OptimizerConfig& cfg) {
  return std::holds_alternative<AdamConfig>(cfg) ? "adam" : "nelder-mead";
}

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> x0, const NelderMeadConfig& cfg) {
  constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;
  if (x0.empty()) throw ValidationError("nelder_mead: empty parameter vector");
  if (cfg.target_error <= 0.0) throw ValidationError("nelder_mead: target_error must be > 0");
  const std::size_t dim = x0.size();

  NelderMeadResult res;
  auto eval = [&](const std::vector<double>& x) {
    ++res.evals;
    const double v = f(x);
    require_finite(v, "nelder-mead objective");
    return v;
  };

  std::vector<std::vector<double>> pts(dim + 1, x0);
  std::vector<double> vals(dim + 1);
  auto inflate = [&](const std::vector<double>& centre, double step) {
    for (std::size_t i = 0; i <= dim; ++i) {
      pts[i] = centre;
      if (i > 0) pts[i][i - 1] += step;
      vals[i] = eval(pts[i]);
    }
  };
  inflate(x0, cfg.initial_step);

  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim), xr(dim), xe(dim), xc(dim);
  double last_best = std::numeric_limits<double>::infinity();
  long since_improvement = 0;
  const long stall_limit = 200 + 20 * static_cast<long>(dim);

  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[dim - 1];
    res.best_history.push_back(vals[best]);

    if (vals[best] < last_best) {
      last_best = vals[best];
      since_improvement = 0;
    } else {
      ++since_improvement;
    }
    if (vals[best] <= cfg.target_error) {
      res.reached_target = true;
      break;
    }
    if (res.evals >= cfg.max_evals) break;

    double diameter = 0.0;
    for (std::size_t i = 0; i <= dim; ++i)
      for (std::size_t k = 0; k < dim; ++k) diameter = std::max(diameter, std::abs(pts[i][k] - pts[best][k]));
    if (diameter < 1e-14 || since_improvement > stall_limit) {
      if (res.restarts >= cfg.max_restarts) break;
      ++res.restarts;
      since_improvement = 0;
      const std::vector<double> centre = pts[best];
      const double keep = vals[best];
      inflate(centre, cfg.initial_step);
      // The centre vertex is re-evaluated; it must not get worse.
      vals[0] = std::min(vals[0], keep);
      continue;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < dim; ++k) centroid[k] += pts[i][k];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    for (std::size_t k = 0; k < dim; ++k) xr[k] = centroid[k] + kReflect * (centroid[k] - pts[worst][k]);
    const double fr = eval(xr);
    if (fr < vals[best]) {
      for (std::size_t k = 0; k < dim; ++k) xe[k] = centroid[k] + kExpand * (xr[k] - centroid[k]);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    // Outside contraction if the reflection beat the worst vertex, inside otherwise.
    const bool outside = fr < vals[worst];
    const std::vector<double>& anchor = outside ? xr : pts[worst];
    for (std::size_t k = 0; k < dim; ++k) xc[k] = centroid[k] + kContract * (anchor[k] - centroid[k]);
    const double fc = eval(xc);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = xc;
      vals[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == best) continue;
      for (std::size_t k = 0; k < dim; ++k) pts[i][k] = pts[best][k] + kShrink * (pts[i][k] - pts[best][k]);
      vals[i] = eval(pts[i]);
    }
  }

  const auto best = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
  res.x = pts[best];
  res.fx = vals[best];
  return res;
}

// ---- Adam ------------------------------------------------------------------

Adam::Adam(std::size_t dim, const AdamConfig& cfg) : cfg_(cfg), m_(dim, 0.0), v_(dim, 0.0) {
  if (cfg.learning_rate <= 0 || cfg.beta1 < 0 || cfg.beta1 >= 1 || cfg.beta2 < 0 || cfg.beta2 >= 1 ||
      cfg.epsilon <= 0 || cfg.epochs <= 0 || cfg.batch_size <= 0) {
    throw ValidationError("invalid Adam configuration");
  }
}

void Adam::step(std::span<double> params, std::span<const double> grad) {
  if (params.size() != m_.size() || grad.size() != m_.size()) {
    throw ValidationError("Adam::step: size mismatch");
  }
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = cfg_.beta1 * m_[i] + (1 - cfg_.beta1) * grad[i];
    v_[i] = cfg_.beta2 * v_[i] + (1 - cfg_.beta2) * grad[i] * grad[i];
    params[i] -= cfg_.learning_rate * (m_[i] / bc1) / (std::sqrt(v_[i] / bc2) + cfg_.epsilon);
  }
}

// ---- StageObjective --------------------------------------------------------

StageObjective::StageObjective(const Circuit& tmpl, const UnitaryMatrix& target, LossKind loss,
                               std::span<const StateVector> dataset)
    : tmpl_(tmpl), target_(target), loss_(loss) {
  if (target.dim() != dim_of(tmpl.n_qubits())) throw ValidationError("target/template size mismatch");
  if (loss != LossKind::Frobenius && dataset.empty()) {
    throw ValidationError("state losses need a non-empty dataset");
  }
  inputs_.reserve(dataset.size());
  for (const auto& s : dataset) {
    if (s.n_qubits() != tmpl.n_qubits()) throw ValidationError("dataset state has wrong size");
    inputs_.push_back(s.to_eigen());
  }
}

ComplexMatrix StageObjective::overlap(std::span<const double> params) const {
  ++evals_;
  return target_.matrix().adjoint() * unitary_of(bind(tmpl_, params)).matrix();
}

std::vector<double> StageObjective::infidelities(const ComplexMatrix& m,
                                                 std::span<const std::size_t> batch) const {
  // 1 - |<psi|m psi>|^2 as the squared residual of m psi against psi, which
  // keeps full relative precision as the fidelity approaches one.
  std::vector<double> out(batch.size());
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const ComplexVector& psi = inputs_[batch[b]];
    const ComplexVector phi = m * psi;
    const Complex c = psi.dot(phi) / psi.dot(psi);
    out[b] = std::min(1.0, (phi - psi * c).squaredNorm() / psi.squaredNorm());
  }
  return out;
}

double StageObjective::squared_frobenius(std::span<const double> params) const {
  ++evals_;
  return (target_.matrix() - unitary_of(bind(tmpl_, params)).matrix()).squaredNorm();
}

double StageObjective::value(std::span<const double> params, std::span<const std::size_t> batch) const {
  double v = 0.0;
  if (loss_ == LossKind::Frobenius) {
    v = std::sqrt(squared_frobenius(params));
  } else {
    if (batch.empty()) throw ValidationError("empty batch");
    CompensatedSum acc;
    for (double q : infidelities(overlap(params), batch)) {
      acc.add(loss_ == LossKind::Fidelity ? q : std::sqrt(q));
    }
    v = acc.value() / static_cast<double>(batch.size());
  }
  require_finite(v, to_string(loss_) + " loss");
  return v;
}

double StageObjective::value_all(std::span<const double> params) const {
  std::vector<std::size_t> all(inputs_.size());
  std::iota(all.begin(), all.end(), 0);
  return value(params, all);
}

std::vector<double> StageObjective::gradient(std::span<const double> params,
                                             std::span<const std::size_t> batch) const {
  std::vector<int> uses(static_cast<std::size_t>(tmpl_.slot_count()), 0);
  for (const auto& g : tmpl_.gates()) {
    if (const auto* s = std::get_if<SlotRef>(&g.angle)) {
      if (g.kind != GateKind::RY && g.kind != GateKind::RZ) {
        throw ValidationError("parameter shift needs slots on RY/RZ gates");
      }
      ++uses[static_cast<std::size_t>(s->index)];
    }
  }
  if (std::any_of(uses.begin(), uses.end(), [](int u) { return u != 1; })) {
    throw ValidationError("parameter shift needs every slot to feed exactly one gate");
  }

  std::vector<double> grad(params.size(), 0.0);
  std::vector<double> shifted(params.begin(), params.end());

  if (loss_ == LossKind::Frobenius) {
    // ||A||^2 has frequency 1/2 in each angle: d/dt = (g(t+pi) - g(t-pi)) / 4.
    const double l = std::sqrt(squared_frobenius(params));
    require_finite(l, "frobenius loss");
    if (l == 0.0) return grad;
    for (std::size_t j = 0; j < params.size(); ++j) {
      shifted[j] = params[j] + kPi;
      const double gp = squared_frobenius(shifted);
      shifted[j] = params[j] - kPi;
      const double gm = squared_frobenius(shifted);
      shifted[j] = params[j];
      grad[j] = (gp - gm) / 4.0 / (2.0 * l);
    }
    return grad;
  }

  if (batch.empty()) throw ValidationError("empty batch");
  const std::vector<double> q0 = infidelities(overlap(params), batch);
  // weight[b] = dLoss_b / dq_b with q = 1 - F
  std::vector<double> weight(batch.size());
  for (std::size_t b = 0; b < batch.size(); ++b) {
    if (loss_ == LossKind::Fidelity) {
      weight[b] = 1.0;
    } else {
      const double t = std::sqrt(q0[b]);
      weight[b] = t > 1e-15 ? 1.0 / (2.0 * t) : 0.0;
    }
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (std::size_t j = 0; j < params.size(); ++j) {
    // F has frequency 1: dq/dt = (q(t + pi/2) - q(t - pi/2)) / 2.
    shifted[j] = params[j] + kPi / 2;
    const auto fp = infidelities(overlap(shifted), batch);
    shifted[j] = params[j] - kPi / 2;
    const auto fm = infidelities(overlap(shifted), batch);
    shifted[j] = params[j];
    CompensatedSum acc;
    for (std::size_t b = 0; b < batch.size(); ++b) acc.add(weight[b] * (fp[b] - fm[b]) / 2.0);
    grad[j] = acc.value() * inv;
    require_finite(grad[j], "parameter-shift gradient");
  }
  return grad;
}

// ---- training --------------------------------------------------------------

StageResult train_stage(const Circuit& tmpl, const UnitaryMatrix& target, LossKind loss,
                        const OptimizerConfig& optimizer, std::span<const StateVector> dataset,
                        std::vector<double> init, std::uint64_t shuffle_seed) {
  if (static_cast<int>(init.size()) != tmpl.slot_count()) {
    throw ValidationError("train_stage: init has wrong length");
  }
  const auto t0 = std::chrono::steady_clock::now();
  const StageObjective obj(tmpl, target, loss, dataset);
  StageResult res;
  res.report.loss = to_string(loss);
  res.report.optimizer = optimizer_name(optimizer);

  if (const auto* adam_cfg = std::get_if<AdamConfig>(&optimizer)) {
    Adam adam(init.size(), *adam_cfg);
    std::vector<double> params = std::move(init);
    const std::size_t n_data = std::max<std::size_t>(obj.dataset_size(), 1);
    const auto batch = static_cast<std::size_t>(adam_cfg->batch_size);
    std::vector<std::size_t> order(obj.dataset_size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(shuffle_seed);
    bool done = false;
    for (int epoch = 0; epoch < adam_cfg->epochs && !done; ++epoch) {
      std::shuffle(order.begin(), order.end(), rng);
      for (std::size_t start = 0; start < n_data; start += batch) {
        std::span<const std::size_t> idx;
        if (!order.empty()) {
          idx = std::span<const std::size_t>(order).subspan(start, std::min(batch, n_data - start));
        }
        const double l = obj.value(params, idx);
        res.report.loss_curve.push_back(l);
        if (l == 0.0) {
          done = true;
          break;
        }
        adam.step(params, obj.gradient(params, idx));
      }
    }
    res.params = std::move(params);
  } else {
    const auto& nm_cfg = std::get<NelderMeadConfig>(optimizer);
    auto f = [&](std::span<const double> x) { return obj.value_all(x); };
    // The template reaches every root-of-unity multiple of the target, and
    // those are local minima; a run that stalls on one is started afresh.
    std::mt19937_64 rng(shuffle_seed);
    std::uniform_real_distribution<double> spread(-nm_cfg.start_range, nm_cfg.start_range);
    NelderMeadConfig run_cfg = nm_cfg;
    std::vector<double> x0 = std::move(init);
    NelderMeadResult best;
    best.fx = std::numeric_limits<double>::infinity();
    for (int start = 0; start < std::max(1, nm_cfg.max_starts); ++start) {
      if (start > 0) {
        for (double& v : x0) v = spread(rng);
      }
      NelderMeadResult nm = nelder_mead(f, x0, run_cfg);
      run_cfg.max_evals -= nm.evals;
      const bool better = nm.fx < best.fx;
      for (double v : nm.best_history) res.report.loss_curve.push_back(std::min(v, better ? v : best.fx));
      if (better) best = std::move(nm);
      if (best.reached_target || run_cfg.max_evals <= 0) break;
    }
    res.params = std::move(best.x);
  }

  res.report.final_loss = obj.value_all(res.params);
  res.report.evals = obj.evals();
  const UnitaryMatrix u = unitary_of(bind(tmpl, res.params));
  const StateVector zero(tmpl.n_qubits());
  res.report.final_error = trace_distance(apply_unitary(target, zero), apply_unitary(u, zero));
  if (loss != LossKind::Frobenius) {
    CompensatedSum acc;
    for (const auto& psi : dataset) acc.add(trace_distance(apply_unitary(target, psi), apply_unitary(u, psi)));
    res.report.dataset_error = acc.value() / static_cast<double>(dataset.size());
  }
  res.report.wall_time = seconds_since(t0);
  return res;
}

std::vector<UnitaryMatrix> su_candidates(const UnitaryMatrix& u) {
  const ComplexMatrix& m = u.matrix();
  if (!m.isDiagonal(1e-12)) throw ValidationError("su_candidates expects a diagonal matrix");
  if (!u.is_unitary()) throw ValidationError("su_candidates expects a unitary matrix");
  const double d = static_cast<double>(u.dim());
  const double alpha = std::arg(u.determinant());
  std::vector<UnitaryMatrix> out;
  out.reserve(u.dim());
  for (std::size_t k = 0; k < u.dim(); ++k) {
    const double ang = -(alpha + 2 * kPi * static_cast<double>(k)) / d;
    out.emplace_back(ComplexMatrix(m * std::polar(1.0, ang)));
  }
  return out;
}

std::size_t select_su_representative(const std::vector<UnitaryMatrix>& candidates) {
  if (candidates.empty()) throw ValidationError("no SU candidates");
  std::size_t best = 0;
  double best_score = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    double score = 0.0;
    for (double p : diagonal_phases(candidates[k])) score = std::max(score, std::abs(p));
    if (score < best_score - 1e-12) {
      best_score = score;
      best = k;
    }
  }
  return best;
}

TwoStageResult two_stage_train(const StateVector& target, const TwoStageConfig& cfg) {
  const int n = target.n_qubits();
  if (n < 2) throw ValidationError("two_stage_train needs at least 2 qubits");
  TwoStageResult out;

  const auto moduli = amplitude_moduli(target.amplitudes());
  const auto phases = amplitude_phases(target.amplitudes());
  const UnitaryMatrix u_modulus = modulus_unitary(natural_angles(bst_build(moduli)));

  std::vector<Complex> diag(phases.size());
  for (std::size_t i = 0; i < phases.size(); ++i) diag[i] = std::polar(1.0, phases[i]);
  const auto candidates = su_candidates(UnitaryMatrix::diagonal(diag));
  const UnitaryMatrix su_phase = candidates[select_su_representative(candidates)];

  const auto dataset = haar_corpus(n, cfg.dataset_size, derive_seed(cfg.seed, 1));

  auto initial = [&](int count, std::uint64_t stream, const std::vector<double>* centre) {
    std::mt19937_64 rng(derive_seed(cfg.seed, stream));
    std::uniform_real_distribution<double> u(-cfg.init_scale, cfg.init_scale);
    std::vector<double> x(static_cast<std::size_t>(count));
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = u(rng) + (centre ? (*centre)[i] : 0.0);
    return x;
  };
  std::vector<double> exact_mod, exact_phase;
  if (cfg.warm_start) {
    exact_mod = modulus_params_exact(moduli);
    exact_phase = solve_z_params(diagonal_phases(su_phase)).theta;
  }

  const Circuit mod_tmpl = build_modulus_template(n);
  const Circuit phase_tmpl = build_phase_template(n);
  try {
    auto s1 = train_stage(mod_tmpl, u_modulus, cfg.modulus.loss, cfg.modulus.optimizer, dataset,
                          initial(mod_tmpl.slot_count(), 2, cfg.warm_start ? &exact_mod : nullptr),
                          derive_seed(cfg.seed, 4));
    out.theta_modulus = std::move(s1.params);
    out.modulus_report = std::move(s1.report);
  } catch (const NumericalError& e) {
    out.failure = std::string("modulus stage: ") + e.what();
    out.modulus_report.optimizer = optimizer_name(cfg.modulus.optimizer);
    out.modulus_report.loss = to_string(cfg.modulus.loss);
    return out;
  }
  try {
    auto s2 = train_stage(phase_tmpl, su_phase, cfg.phase.loss, cfg.phase.optimizer, dataset,
                          initial(phase_tmpl.slot_count(), 3, cfg.warm_start ? &exact_phase : nullptr),
                          derive_seed(cfg.seed, 5));
    out.theta_phase = std::move(s2.params);
    out.phase_report = std::move(s2.report);
  } catch (const NumericalError& e) {
    out.failure = std::string("phase stage: ") + e.what();
    return out;
  }

  const Circuit bare = assemble_full(n, out.theta_modulus, out.theta_phase);
  const StateVector produced = run(bare, StateVector(n));
  out.global_phase = std::arg(inner_product(produced, target));
  out.circuit = cfg.global_phase_tail
                    ? assemble_full(n, out.theta_modulus, out.theta_phase, out.global_phase)
                    : bare;
  out.final_error = trace_distance(target, run(out.circuit, StateVector(n)));

  const UnitaryMatrix ideal = su_phase * u_modulus;
  const UnitaryMatrix trained = unitary_of(bare);
  CompensatedSum acc;
  for (const auto& psi : dataset) acc.add(trace_distance(apply_unitary(ideal, psi), apply_unitary(trained, psi)));
  out.dataset_error = dataset.empty() ? 0.0 : acc.value() / static_cast<double>(dataset.size());
  out.completed = true;
  return out;
}

}  // namespace srbb
