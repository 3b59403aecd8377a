#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "srbb/circuit.hpp"
#include "srbb/qcore.hpp"

namespace srbb {

enum class LossKind { Frobenius, TraceDistance, Fidelity };

std::string to_string(LossKind k);
LossKind loss_from_string(const std::string& s);

// ---- metrics ---------------------------------------------------------------

/// ||a - b||_F.
double frobenius_loss(const UnitaryMatrix& ideal, const UnitaryMatrix& vqc);

/// |<a|b>|^2.
double fidelity(const StateVector& a, const StateVector& b);

/// sqrt(1 - F): half the trace norm of the density-matrix difference, so
/// identical states are at 0 and orthogonal states at 1.
double trace_distance(const StateVector& a, const StateVector& b);

// ---- optimizers ------------------------------------------------------------

struct AdamConfig {
  double learning_rate = 0.01;
  int epochs = 50;
  int batch_size = 64;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct NelderMeadConfig {
  double target_error = 1e-15;
  long max_evals = 200000;
  double initial_step = 0.05;
  /// Simplex re-inflations around the best vertex after a collapse.
  int max_restarts = 50;
  /// Fresh starts (inside train_stage) when a run ends above target_error;
  /// start k > 0 draws every coordinate uniformly in [-start_range, start_range].
  int max_starts = 8;
  double start_range = 3.14159265358979323846;

  /// 1e-15 up to 3 qubits, 1e-10 from 4 qubits on.
  static NelderMeadConfig for_qubits(int n);
};

using OptimizerConfig = std::variant<AdamConfig, NelderMeadConfig>;

std::string optimizer_name(const OptimizerConfig& cfg);

struct NelderMeadResult {
  std::vector<double> x;
  double fx = 0.0;
  long evals = 0;
  int restarts = 0;
  bool reached_target = false;
  /// Best vertex value after every iteration.
  std::vector<double> best_history;
};

/// Derivative-free simplex search with reflection/expansion/contraction/shrink
/// coefficients (1, 2, 0.5, 0.5). Stops at target_error or max_evals.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> x0, const NelderMeadConfig& cfg);

/// One Adam moment state; step() updates `params` in place.
class Adam {
 public:
  Adam(std::size_t dim, const AdamConfig& cfg);
  void step(std::span<double> params, std::span<const double> grad);
  [[nodiscard]] long steps() const { return t_; }

 private:
  AdamConfig cfg_;
  std::vector<double> m_, v_;
  long t_ = 0;
};

// ---- training --------------------------------------------------------------

/// Loss of a parametrized template against a target unitary. State losses
/// compare target * psi with template * psi over a batch of inputs.
class StageObjective {
 public:
  StageObjective(const Circuit& tmpl, const UnitaryMatrix& target, LossKind loss,
                 std::span<const StateVector> dataset);

  [[nodiscard]] int dim() const { return tmpl_.slot_count(); }
  [[nodiscard]] LossKind loss() const { return loss_; }
  [[nodiscard]] std::size_t dataset_size() const { return inputs_.size(); }

  /// Mean loss over `batch` (indices into the dataset); Frobenius ignores it.
  [[nodiscard]] double value(std::span<const double> params, std::span<const std::size_t> batch) const;
  [[nodiscard]] double value_all(std::span<const double> params) const;

  /// Exact gradient by the parameter-shift rule; each slot must feed exactly
  /// one RY or RZ.
  [[nodiscard]] std::vector<double> gradient(std::span<const double> params,
                                             std::span<const std::size_t> batch) const;

  [[nodiscard]] long evals() const { return evals_; }

 private:
  [[nodiscard]] ComplexMatrix overlap(std::span<const double> params) const;
  [[nodiscard]] std::vector<double> infidelities(const ComplexMatrix& m,
                                                 std::span<const std::size_t> batch) const;
  [[nodiscard]] double squared_frobenius(std::span<const double> params) const;

  Circuit tmpl_;
  UnitaryMatrix target_;
  LossKind loss_;
  std::vector<ComplexVector> inputs_;
  mutable long evals_ = 0;
};

struct TrainReport {
  std::vector<double> loss_curve;
  double final_loss = 0.0;
  /// Trace distance between target|0..0> and template|0..0>.
  double final_error = 0.0;
  /// Mean trace distance over the random-input dataset (state losses only).
  std::optional<double> dataset_error;
  double wall_time = 0.0;
  long evals = 0;
  std::string optimizer;
  std::string loss;
};

struct StageResult {
  std::vector<double> params;
  TrainReport report;
};

/// Minimizes the stage loss from `init`. `shuffle_seed` orders minibatches.
/// Non-finite loss raises NumericalError.
StageResult train_stage(const Circuit& tmpl, const UnitaryMatrix& target, LossKind loss,
                        const OptimizerConfig& optimizer, std::span<const StateVector> dataset,
                        std::vector<double> init, std::uint64_t shuffle_seed = 0);

/// u / r for each of the 2^n roots r of det(u); candidate k carries the
/// factor exp(-i (arg det u + 2 pi k) / 2^n).
std::vector<UnitaryMatrix> su_candidates(const UnitaryMatrix& u);

/// Index of the candidate whose largest |principal phase| is smallest.
std::size_t select_su_representative(const std::vector<UnitaryMatrix>& candidates);

struct StagePlan {
  LossKind loss = LossKind::Frobenius;
  OptimizerConfig optimizer = NelderMeadConfig{};
};

struct TwoStageConfig {
  StagePlan modulus;
  StagePlan phase;
  std::uint64_t seed = 0;
  std::size_t dataset_size = 1000;
  /// Uniform init half-width around zero (or around the exact solution
  /// with warm_start).
  double init_scale = 0.1;
  bool warm_start = false;
  bool global_phase_tail = true;
};

struct TwoStageResult {
  Circuit circuit{1};
  double global_phase = 0.0;
  std::vector<double> theta_modulus;
  std::vector<double> theta_phase;
  TrainReport modulus_report;
  std::optional<TrainReport> phase_report;
  /// Trace distance between the target and the circuit output on |0..0>.
  double final_error = 1.0;
  /// Mean trace distance of ideal vs trained unitary on the random inputs.
  double dataset_error = 1.0;
  bool completed = false;
  std::string failure;
};

/// Stage 1 learns the UCG ladder unitary for the moduli, stage 2 (with the
/// modulus slots frozen) learns one SU representative of diag(exp(i arg c)).
TwoStageResult two_stage_train(const StateVector& target, const TwoStageConfig& cfg);

}  // namespace srbb
