#pragma once

// Command implementations behind the srbb-qsp executable. Each command
// writes its artifacts into a fresh run directory under Settings::out and
// returns the RunRecord it saved there.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace srbb::cli {

enum ExitCode : int { kOk = 0, kValidation = 2, kConvergence = 3, kIo = 4 };

struct Settings {
  std::optional<int> n;
  std::uint64_t seed = 0;
  std::string optimizer = "nelder-mead";
  std::string loss = "frobenius";
  /// State spec file (train, exact-prepare) or target spec (simulate).
  std::string spec;
  std::string out = "runs";
  int trials = 5;
  bool allow_any_pairing = false;
  bool warm_start = false;
  /// Error above which train/exact-prepare exit with kConvergence.
  std::optional<double> threshold;
  std::optional<long> max_evals;
  std::optional<int> epochs;
  std::size_t dataset_size = 1000;
  std::vector<int> bench_n{2, 3, 4};
  std::vector<std::pair<std::string, std::string>> bench_grid{
      {"nelder-mead", "frobenius"}, {"adam", "fidelity"}, {"adam", "trace"}};
  int analyze_min = 2;
  int analyze_max = 8;
};

nlohmann::json settings_to_json(const Settings& s);
/// Overlays the keys present in `j` on `base`. Unknown keys are rejected.
Settings settings_from_json(const nlohmann::json& j, Settings base = {});
Settings load_config(const std::filesystem::path& path, Settings base = {});

struct RunRecord {
  std::string command;
  nlohmann::json config;
  std::uint64_t seed = 0;
  /// final_error, hellinger, counts {depth, n_rot, n_cnot}, ...
  nlohmann::json metrics;
  double wall_time = 0.0;
  std::map<std::string, std::string> artifacts;
  int exit_code = kOk;
};

nlohmann::json record_to_json(const RunRecord& r);
RunRecord record_from_json(const nlohmann::json& j);
void save_record(const RunRecord& r, const std::filesystem::path& path);
RunRecord load_record(const std::filesystem::path& path);

struct BenchRow {
  int n = 0;
  std::string optimizer;
  std::string loss;
  int trials = 0;
  double mean_time = 0.0;
  double mean_error = 0.0;
  double max_error = 0.0;
  double mean_dataset_error = 0.0;
  int failures = 0;
};

struct BenchTable {
  std::vector<BenchRow> rows;
};

std::string bench_to_csv(const BenchTable& t);
nlohmann::json bench_to_json(const BenchTable& t);

/// Paired optimizer/loss combinations accepted without --allow-any-pairing.
bool is_standard_pairing(const std::string& optimizer, const std::string& loss);
double default_threshold(const std::string& optimizer, const std::string& loss, int n);

/// Worker count: SRBB_QSP_THREADS if set and positive, else the hardware
/// concurrency, never more than `jobs`.
unsigned thread_budget(std::size_t jobs);

/// Creates <out>/<command>-<UTC timestamp>[-k]/.
std::filesystem::path make_run_dir(const std::string& out, const std::string& command);

RunRecord cmd_analyze(const Settings& s, std::ostream& os);
RunRecord cmd_exact_prepare(const Settings& s, std::ostream& os);
RunRecord cmd_train(const Settings& s, std::ostream& os);
/// Runs a QASM file from |0..0>; compares with Settings::spec when given.
RunRecord cmd_simulate(const Settings& s, const std::string& qasm_path, std::ostream& os);
RunRecord cmd_bench(const Settings& s, std::ostream& os);
/// Writes the exact circuit for Settings::spec (or a Haar target drawn from
/// --n/--seed), or re-binds the parameters of a saved run record.
RunRecord cmd_export_qasm(const Settings& s, const std::string& record_path, std::ostream& os);

}  // namespace srbb::cli
