#include "srbb/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "srbb/circuit.hpp"
#include "srbb/errors.hpp"
#include "srbb/exact.hpp"
#include "srbb/ladder.hpp"
#include "srbb/statelib.hpp"
#include "srbb/variational.hpp"

namespace srbb::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write '" + p.string() + "'");
  out << text;
  if (!out) throw IoError("write to '" + p.string() + "' failed");
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(what + " is not valid JSON: " + e.what());
  }
}

json counts_json(const Circuit& c) {
  const CircuitStats s = stats(c);
  return {{"depth", s.depth}, {"n_rot", s.n_rot}, {"n_cnot", s.n_cnot}, {"n_other", s.n_other}};
}

json amplitudes_json(const StateVector& s) {
  json a = json::array();
  for (const auto& z : s.amplitudes()) a.push_back({z.real(), z.imag()});
  return a;
}

json params_json(std::span<const double> tm, std::span<const double> tp, double gphase) {
  return {{"theta_modulus", std::vector<double>(tm.begin(), tm.end())},
          {"theta_phase", std::vector<double>(tp.begin(), tp.end())},
          {"global_phase", gphase}};
}

/// Target from --spec, else a Haar state on --n qubits drawn from --seed.
std::pair<StateVector, json> resolve_target(const Settings& s) {
  if (!s.spec.empty()) {
    const StateSpec spec = load_state_spec(s.spec);
    if (s.n && *s.n != spec.n) {
      throw ValidationError("--n " + std::to_string(*s.n) + " disagrees with spec n = " + std::to_string(spec.n));
    }
    return {realize(spec), state_spec_to_json(spec)};
  }
  if (!s.n) throw ValidationError("either --spec or --n is required");
  StateSpec spec;
  spec.kind = StateKind::HaarRandom;
  spec.n = *s.n;
  spec.seed = derive_seed(s.seed, 0);
  return {realize(spec), state_spec_to_json(spec)};
}

OptimizerConfig optimizer_config(const Settings& s, int n) {
  if (s.optimizer == "adam") {
    AdamConfig a;
    if (s.epochs) a.epochs = *s.epochs;
    if (static_cast<std::size_t>(a.batch_size) > s.dataset_size) {
      throw ValidationError("batch size 64 exceeds the dataset size");
    }
    return a;
  }
  if (s.optimizer == "nelder-mead") {
    NelderMeadConfig c = NelderMeadConfig::for_qubits(n);
    if (s.max_evals) c.max_evals = *s.max_evals;
    return c;
  }
  throw ValidationError("unknown optimizer '" + s.optimizer + "' (adam, nelder-mead)");
}

TwoStageConfig two_stage_config(const Settings& s, int n, std::uint64_t seed) {
  if (!is_standard_pairing(s.optimizer, s.loss) && !s.allow_any_pairing) {
    throw ValidationError("optimizer '" + s.optimizer + "' with loss '" + s.loss +
                          "' is not a standard pairing (adam x {fidelity, trace}, nelder-mead x "
                          "frobenius); pass --allow-any-pairing to run it anyway");
  }
  TwoStageConfig cfg;
  const LossKind loss = loss_from_string(s.loss);
  cfg.modulus = {loss, optimizer_config(s, n)};
  cfg.phase = cfg.modulus;
  cfg.seed = seed;
  cfg.dataset_size = s.dataset_size;
  cfg.warm_start = s.warm_start;
  return cfg;
}

json report_json(const TrainReport& r) {
  // Stage wall times stay out so that metrics are reproducible bit for bit.
  json j = {{"optimizer", r.optimizer},     {"loss", r.loss},   {"final_loss", r.final_loss},
            {"final_error", r.final_error}, {"evals", r.evals}, {"steps", r.loss_curve.size()}};
  if (r.dataset_error) j["dataset_error"] = *r.dataset_error;
  return j;
}

RunRecord start_record(const std::string& command, const Settings& s) {
  RunRecord r;
  r.command = command;
  r.config = settings_to_json(s);
  r.seed = s.seed;
  return r;
}

void finish(RunRecord& r, const fs::path& dir, std::chrono::steady_clock::time_point t0) {
  r.wall_time = seconds_since(t0);
  r.artifacts["record"] = (dir / "record.json").string();
  save_record(r, dir / "record.json");
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss << std::setprecision(3) << std::scientific << v;
  return ss.str();
}

}  // namespace

// ---- settings --------------------------------------------------------------

json settings_to_json(const Settings& s) {
  json j;
  j["n"] = s.n ? json(*s.n) : json(nullptr);
  j["seed"] = s.seed;
  j["optimizer"] = s.optimizer;
  j["loss"] = s.loss;
  j["spec"] = s.spec;
  j["out"] = s.out;
  j["trials"] = s.trials;
  j["allow_any_pairing"] = s.allow_any_pairing;
  j["warm_start"] = s.warm_start;
  j["threshold"] = s.threshold ? json(*s.threshold) : json(nullptr);
  j["max_evals"] = s.max_evals ? json(*s.max_evals) : json(nullptr);
  j["epochs"] = s.epochs ? json(*s.epochs) : json(nullptr);
  j["dataset_size"] = s.dataset_size;
  json grid = json::array();
  for (const auto& [o, l] : s.bench_grid) grid.push_back({o, l});
  j["bench"] = {{"n", s.bench_n}, {"grid", grid}};
  j["analyze"] = {{"min", s.analyze_min}, {"max", s.analyze_max}};
  return j;
}

Settings settings_from_json(const json& j, Settings s) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "n") {
        s.n = v.is_null() ? std::nullopt : std::optional<int>(v.get<int>());
      } else if (key == "seed") {
        s.seed = v.get<std::uint64_t>();
      } else if (key == "optimizer") {
        s.optimizer = v.get<std::string>();
      } else if (key == "loss") {
        s.loss = v.get<std::string>();
      } else if (key == "spec") {
        s.spec = v.get<std::string>();
      } else if (key == "out") {
        s.out = v.get<std::string>();
      } else if (key == "trials") {
        s.trials = v.get<int>();
      } else if (key == "allow_any_pairing") {
        s.allow_any_pairing = v.get<bool>();
      } else if (key == "warm_start") {
        s.warm_start = v.get<bool>();
      } else if (key == "threshold") {
        s.threshold = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
      } else if (key == "max_evals") {
        s.max_evals = v.is_null() ? std::nullopt : std::optional<long>(v.get<long>());
      } else if (key == "epochs") {
        s.epochs = v.is_null() ? std::nullopt : std::optional<int>(v.get<int>());
      } else if (key == "dataset_size") {
        s.dataset_size = v.get<std::size_t>();
      } else if (key == "bench") {
        if (v.contains("n")) s.bench_n = v.at("n").get<std::vector<int>>();
        if (v.contains("grid")) {
          s.bench_grid.clear();
          for (const auto& g : v.at("grid")) s.bench_grid.emplace_back(g.at(0).get<std::string>(), g.at(1).get<std::string>());
        }
      } else if (key == "analyze") {
        s.analyze_min = v.value("min", s.analyze_min);
        s.analyze_max = v.value("max", s.analyze_max);
      } else {
        throw ValidationError("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad config value: ") + e.what());
  }
  return s;
}

Settings load_config(const fs::path& path, Settings base) {
  return settings_from_json(parse_json(read_file(path), "config '" + path.string() + "'"), std::move(base));
}

// ---- records ---------------------------------------------------------------

json record_to_json(const RunRecord& r) {
  return {{"command", r.command}, {"config", r.config},       {"seed", r.seed},
          {"metrics", r.metrics}, {"wall_time", r.wall_time}, {"artifacts", r.artifacts},
          {"exit_code", r.exit_code}};
}

RunRecord record_from_json(const json& j) {
  try {
    RunRecord r;
    r.command = j.at("command").get<std::string>();
    r.config = j.at("config");
    r.seed = j.at("seed").get<std::uint64_t>();
    r.metrics = j.at("metrics");
    r.wall_time = j.at("wall_time").get<double>();
    r.artifacts = j.at("artifacts").get<std::map<std::string, std::string>>();
    r.exit_code = j.value("exit_code", 0);
    return r;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed run record: ") + e.what());
  }
}

void save_record(const RunRecord& r, const fs::path& path) { write_file(path, record_to_json(r).dump(2) + "\n"); }

RunRecord load_record(const fs::path& path) {
  return record_from_json(parse_json(read_file(path), "record '" + path.string() + "'"));
}

// ---- bench tables ----------------------------------------------------------

std::string bench_to_csv(const BenchTable& t) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "n,optimizer,loss,trials,mean_time_s,mean_error,max_error,mean_dataset_error,failures\n";
  for (const auto& r : t.rows) {
    os << r.n << ',' << r.optimizer << ',' << r.loss << ',' << r.trials << ',' << r.mean_time << ','
       << r.mean_error << ',' << r.max_error << ',' << r.mean_dataset_error << ',' << r.failures << '\n';
  }
  return os.str();
}

json bench_to_json(const BenchTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"n", r.n},
                    {"optimizer", r.optimizer},
                    {"loss", r.loss},
                    {"trials", r.trials},
                    {"mean_time", r.mean_time},
                    {"mean_error", r.mean_error},
                    {"max_error", r.max_error},
                    {"mean_dataset_error", r.mean_dataset_error},
                    {"failures", r.failures}});
  }
  return {{"rows", rows}};
}

// ---- helpers ---------------------------------------------------------------

bool is_standard_pairing(const std::string& optimizer, const std::string& loss) {
  if (optimizer == "adam") return loss == "fidelity" || loss == "trace";
  if (optimizer == "nelder-mead") return loss == "frobenius";
  return false;
}

double default_threshold(const std::string& optimizer, const std::string& loss, int n) {
  if (optimizer == "nelder-mead" && loss == "frobenius") return n <= 4 ? 1e-10 : 1e-6;
  if (optimizer == "adam" && loss == "trace") return 1e-2;
  return 1e-6;
}

unsigned thread_budget(std::size_t jobs) {
  unsigned t = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SRBB_QSP_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) t = static_cast<unsigned>(v);
  }
  return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(t, jobs)));
}

fs::path make_run_dir(const std::string& out, const std::string& command) {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%d-%H%M%S", &tm);
  const fs::path base = fs::path(out) / (command + "-" + stamp);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create output directory '" + out + "': " + ec.message());
  fs::path dir = base;
  for (int k = 1; !fs::create_directory(dir, ec); ++k) {
    if (ec) throw IoError("cannot create run directory '" + dir.string() + "': " + ec.message());
    dir = base.string() + "-" + std::to_string(k);
  }
  return dir;
}

// ---- commands --------------------------------------------------------------

RunRecord cmd_analyze(const Settings& s, std::ostream& os) {
  const auto t0 = std::chrono::steady_clock::now();
  int lo = s.analyze_min, hi = s.analyze_max;
  if (s.n) lo = hi = *s.n;
  if (lo < 2 || hi > 12 || lo > hi) throw ValidationError("analyze needs 2 <= n <= 12");
  const fs::path dir = make_run_dir(s.out, "analyze");
  RunRecord rec = start_record("analyze", s);

  std::ostringstream csv;
  csv << "n,pred_depth,depth,pred_n_rot,n_rot,pred_n_cnot,n_cnot,status\n";
  os << " n | depth (pred/meas) | n_rot (pred/meas) | n_cnot (pred/meas) | status\n";
  json rows = json::array();
  bool all_pass = true;
  for (int n = lo; n <= hi; ++n) {
    std::vector<double> zm(static_cast<std::size_t>(modulus_slot_count(n)), 0.1);
    std::vector<double> zp(static_cast<std::size_t>(phase_slot_count(n)), 0.1);
    const CircuitStats st = stats(assemble_full(n, zm, zp));
    const CountPrediction p = predicted_counts(n);
    const bool depth_ok = n <= 3 ? st.depth == p.depth : st.depth <= p.depth;
    const bool pass = depth_ok && st.n_rot == p.n_rot && st.n_cnot == p.n_cnot;
    all_pass = all_pass && pass;
    os << std::setw(2) << n << " | " << std::setw(7) << p.depth << " / " << std::setw(6) << st.depth << " | "
       << std::setw(7) << p.n_rot << " / " << std::setw(6) << st.n_rot << " | " << std::setw(8) << p.n_cnot
       << " / " << std::setw(7) << st.n_cnot << " | " << (pass ? "PASS" : "FAIL") << '\n';
    csv << n << ',' << p.depth << ',' << st.depth << ',' << p.n_rot << ',' << st.n_rot << ',' << p.n_cnot << ','
        << st.n_cnot << ',' << (pass ? "PASS" : "FAIL") << '\n';
    rows.push_back({{"n", n},
                    {"predicted", {{"depth", p.depth}, {"n_rot", p.n_rot}, {"n_cnot", p.n_cnot}}},
                    {"measured", {{"depth", st.depth}, {"n_rot", st.n_rot}, {"n_cnot", st.n_cnot}}},
                    {"pass", pass}});
  }
  write_file(dir / "analyze.csv", csv.str());
  rec.artifacts["table"] = (dir / "analyze.csv").string();
  rec.metrics = {{"rows", rows}, {"all_pass", all_pass}};
  rec.exit_code = all_pass ? kOk : kConvergence;
  finish(rec, dir, t0);
  return rec;
}

RunRecord cmd_exact_prepare(const Settings& s, std::ostream& os) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto [target, spec_json] = resolve_target(s);
  const fs::path dir = make_run_dir(s.out, "exact-prepare");
  RunRecord rec = start_record("exact-prepare", s);
  rec.config["target"] = spec_json;

  const ExactPreparation prep = exact_prepare(target);
  const StateVector produced = run(prep.circuit, StateVector(target.n_qubits()));
  const double err = trace_distance(target, produced);
  const double hel = hellinger(probabilities(target), probabilities(produced));
  const double threshold = s.threshold.value_or(1e-9);

  write_file(dir / "circuit.qasm", to_qasm(prep.circuit));
  write_file(dir / "params.json", params_json(prep.theta_modulus, prep.theta_phase, prep.global_phase).dump(2) + "\n");
  rec.artifacts["qasm"] = (dir / "circuit.qasm").string();
  rec.artifacts["params"] = (dir / "params.json").string();
  rec.metrics = {{"final_error", err},
                 {"hellinger", hel},
                 {"counts", counts_json(prep.circuit)},
                 {"global_phase", prep.global_phase},
                 {"threshold", threshold},
                 {"output_state", amplitudes_json(produced)}};
  rec.exit_code = err <= threshold ? kOk : kConvergence;
  finish(rec, dir, t0);
  os << "exact-prepare n=" << target.n_qubits() << "  trace distance " << fmt(err) << "  hellinger " << fmt(hel)
     << "\n  run directory: " << dir.string() << '\n';
  return rec;
}

RunRecord cmd_train(const Settings& s, std::ostream& os) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto [target, spec_json] = resolve_target(s);
  const int n = target.n_qubits();
  const TwoStageConfig cfg = two_stage_config(s, n, s.seed);
  const fs::path dir = make_run_dir(s.out, "train");
  RunRecord rec = start_record("train", s);
  rec.config["target"] = spec_json;

  const TwoStageResult r = two_stage_train(target, cfg);
  const double threshold = s.threshold.value_or(default_threshold(s.optimizer, s.loss, n));
  rec.metrics = {{"completed", r.completed}, {"threshold", threshold}, {"modulus_stage", report_json(r.modulus_report)}};
  if (r.phase_report) rec.metrics["phase_stage"] = report_json(*r.phase_report);
  if (!r.completed) {
    rec.metrics["failure"] = r.failure;
    rec.exit_code = kConvergence;
    finish(rec, dir, t0);
    os << "train failed: " << r.failure << '\n';
    return rec;
  }
  const StateVector produced = run(r.circuit, StateVector(n));
  rec.metrics["final_error"] = r.final_error;
  rec.metrics["dataset_error"] = r.dataset_error;
  rec.metrics["hellinger"] = hellinger(probabilities(target), probabilities(produced));
  rec.metrics["counts"] = counts_json(r.circuit);
  rec.metrics["global_phase"] = r.global_phase;
  rec.metrics["output_state"] = amplitudes_json(produced);
  write_file(dir / "circuit.qasm", to_qasm(r.circuit));
  write_file(dir / "params.json", params_json(r.theta_modulus, r.theta_phase, r.global_phase).dump(2) + "\n");
  rec.artifacts["qasm"] = (dir / "circuit.qasm").string();
  rec.artifacts["params"] = (dir / "params.json").string();
  rec.exit_code = r.final_error <= threshold ? kOk : kConvergence;
  finish(rec, dir, t0);
  os << "train n=" << n << " " << s.optimizer << "+" << s.loss << "  trace distance " << fmt(r.final_error)
     << " (dataset " << fmt(r.dataset_error) << ", threshold " << fmt(threshold) << ")\n  run directory: "
     << dir.string() << '\n';
  return rec;
}

RunRecord cmd_simulate(const Settings& s, const std::string& qasm_path, std::ostream& os) {
  const auto t0 = std::chrono::steady_clock::now();
  const Circuit c = parse_qasm(read_file(qasm_path));
  const StateVector out = run(c, StateVector(c.n_qubits()));
  const fs::path dir = make_run_dir(s.out, "simulate");
  RunRecord rec = start_record("simulate", s);
  rec.config["qasm"] = qasm_path;
  const auto p = probabilities(out);
  rec.metrics = {{"n", c.n_qubits()},
                 {"counts", counts_json(c)},
                 {"output_state", amplitudes_json(out)},
                 {"probabilities", std::vector<double>(p.probs().begin(), p.probs().end())}};
  if (!s.spec.empty()) {
    const StateSpec spec = load_state_spec(s.spec);
    const StateVector target = realize(spec);
    if (target.n_qubits() != c.n_qubits()) throw ValidationError("target and circuit widths differ");
    rec.config["target"] = state_spec_to_json(spec);
    rec.metrics["final_error"] = trace_distance(target, out);
    rec.metrics["hellinger"] = hellinger(probabilities(target), p);
  }
  finish(rec, dir, t0);
  os << "simulate " << qasm_path << " (" << c.n_qubits() << " qubits)\n";
  for (std::size_t i = 0; i < p.size(); ++i) os << "  p[" << i << "] = " << std::setprecision(12) << p[i] << '\n';
  if (rec.metrics.contains("final_error")) {
    os << "  trace distance to target " << fmt(rec.metrics["final_error"].get<double>()) << ", hellinger "
       << fmt(rec.metrics["hellinger"].get<double>()) << '\n';
  }
  return rec;
}

RunRecord cmd_bench(const Settings& s, std::ostream& os) {
  const auto t0 = std::chrono::steady_clock::now();
  if (s.trials < 1) throw ValidationError("--trials must be at least 1");
  if (s.bench_n.empty() || s.bench_grid.empty()) throw ValidationError("bench needs n values and an optimizer/loss grid");
  struct Job {
    int n;
    std::size_t grid;
    int trial;
  };
  std::vector<Job> jobs;
  for (int n : s.bench_n) {
    if (n < 2 || n > 8) throw ValidationError("bench n must lie in 2..8");
    for (std::size_t g = 0; g < s.bench_grid.size(); ++g)
      for (int t = 0; t < s.trials; ++t) jobs.push_back({n, g, t});
  }
  // Validate every grid entry before any work starts.
  for (const auto& [o, l] : s.bench_grid) {
    Settings probe = s;
    probe.optimizer = o;
    probe.loss = l;
    (void)two_stage_config(probe, 2, 0);
  }

  struct Outcome {
    double time = 0.0, error = 1.0, dataset_error = 1.0;
    bool ok = false;
  };
  std::vector<Outcome> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        const Job& j = jobs[i];
        Settings st = s;
        st.optimizer = s.bench_grid[j.grid].first;
        st.loss = s.bench_grid[j.grid].second;
        // Trial t of size n uses the same target for every optimizer/loss.
        const std::uint64_t trial_seed = derive_seed(s.seed, 1000 + 100 * static_cast<std::uint64_t>(j.n) +
                                                                  static_cast<std::uint64_t>(j.trial));
        const StateVector target = haar_random_state(j.n, derive_seed(trial_seed, 0));
        const auto ts = std::chrono::steady_clock::now();
        const TwoStageResult r = two_stage_train(target, two_stage_config(st, j.n, trial_seed));
        results[i] = {seconds_since(ts), r.final_error, r.dataset_error, r.completed};
      } catch (...) {
        const std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  const unsigned nthreads = thread_budget(jobs.size());
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);

  BenchTable table;
  std::size_t i = 0;
  for (int n : s.bench_n) {
    for (const auto& [o, l] : s.bench_grid) {
      BenchRow row{n, o, l, s.trials};
      for (int t = 0; t < s.trials; ++t, ++i) {
        const Outcome& r = results[i];
        row.mean_time += r.time / s.trials;
        row.mean_error += r.error / s.trials;
        row.mean_dataset_error += r.dataset_error / s.trials;
        row.max_error = std::max(row.max_error, r.error);
        if (!r.ok || r.error > default_threshold(o, l, n)) ++row.failures;
      }
      table.rows.push_back(row);
    }
  }

  const fs::path dir = make_run_dir(s.out, "bench");
  RunRecord rec = start_record("bench", s);
  write_file(dir / "bench.csv", bench_to_csv(table));
  write_file(dir / "bench.json", bench_to_json(table).dump(2) + "\n");
  rec.artifacts["csv"] = (dir / "bench.csv").string();
  rec.artifacts["json"] = (dir / "bench.json").string();
  json errors = json::array();
  for (const auto& r : results) errors.push_back(r.error);
  rec.metrics = {{"trial_errors", errors}, {"threads", nthreads}};
  finish(rec, dir, t0);

  os << " n | optimizer   | loss      | trials | mean time (s) | mean error | max error | failures\n";
  for (const auto& r : table.rows) {
    os << std::setw(2) << r.n << " | " << std::left << std::setw(11) << r.optimizer << " | " << std::setw(9) << r.loss
       << std::right << " | " << std::setw(6) << r.trials << " | " << std::setw(13) << std::fixed
       << std::setprecision(3) << r.mean_time << std::defaultfloat << " | " << std::setw(10) << fmt(r.mean_error)
       << " | " << std::setw(9) << fmt(r.max_error) << " | " << r.failures << '\n';
  }
  os << "  run directory: " << dir.string() << '\n';
  return rec;
}

RunRecord cmd_export_qasm(const Settings& s, const std::string& record_path, std::ostream& os) {
  const auto t0 = std::chrono::steady_clock::now();
  Circuit circuit(1);
  json source;
  if (!record_path.empty()) {
    const RunRecord prior = load_record(record_path);
    const auto it = prior.artifacts.find("params");
    if (it == prior.artifacts.end()) throw ValidationError("record has no parameter artifact");
    const json p = parse_json(read_file(it->second), "parameter file");
    try {
      const auto tm = p.at("theta_modulus").get<std::vector<double>>();
      const auto tp = p.at("theta_phase").get<std::vector<double>>();
      const int n = qubits_for_dim(tp.size() + 1);
      circuit = assemble_full(n, tm, tp, p.at("global_phase").get<double>());
    } catch (const json::exception& e) {
      throw ValidationError(std::string("malformed parameter file: ") + e.what());
    }
    source = {{"record", record_path}};
  } else {
    const auto [target, spec_json] = resolve_target(s);
    circuit = exact_prepare(target).circuit;
    source = {{"target", spec_json}};
  }
  const fs::path dir = make_run_dir(s.out, "export-qasm");
  RunRecord rec = start_record("export-qasm", s);
  rec.config["source"] = source;
  const std::string text = to_qasm(circuit);
  write_file(dir / "circuit.qasm", text);
  rec.artifacts["qasm"] = (dir / "circuit.qasm").string();
  rec.metrics = {{"counts", counts_json(circuit)}, {"n", circuit.n_qubits()}};
  finish(rec, dir, t0);
  os << text;
  return rec;
}

}  // namespace srbb::cli
