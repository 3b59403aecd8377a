// srbb-qsp: command-line front end. Flags override values from --config.

#include <iostream>

#include <CLI11.hpp>

#include "srbb/cli.hpp"
#include "srbb/errors.hpp"

namespace cli = srbb::cli;

int main(int argc, char** argv) {
  CLI::App app{"SRBB diagonal Z-factor state preparation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  int n = 0;
  std::uint64_t seed = 0;
  std::string optimizer, loss, spec, out;
  int trials = 0;
  double threshold = 0.0;
  long max_evals = 0;
  int epochs = 0;
  bool any_pairing = false, warm = false;

  app.add_option("--config", config_path, "JSON config file; flags override its values")->check(CLI::ExistingFile);
  auto* o_n = app.add_option("--n", n, "number of qubits");
  auto* o_seed = app.add_option("--seed", seed, "run seed");
  auto* o_opt = app.add_option("--optimizer", optimizer, "adam | nelder-mead")
                    ->check(CLI::IsMember({"adam", "nelder-mead"}));
  auto* o_loss = app.add_option("--loss", loss, "frobenius | trace | fidelity")
                     ->check(CLI::IsMember({"frobenius", "trace", "fidelity"}));
  auto* o_spec = app.add_option("--spec", spec, "state spec JSON file");
  auto* o_out = app.add_option("--out", out, "output directory for run folders");
  auto* o_trials = app.add_option("--trials", trials, "bench trials per n and optimizer/loss");
  auto* o_thr = app.add_option("--threshold", threshold, "error threshold for exit code 3");
  auto* o_evals = app.add_option("--max-evals", max_evals, "Nelder-Mead evaluation budget per stage");
  auto* o_epochs = app.add_option("--epochs", epochs, "Adam epochs");
  auto* o_any = app.add_flag("--allow-any-pairing", any_pairing, "accept any optimizer/loss combination");
  auto* o_warm = app.add_flag("--warm-start", warm, "initialize training around the exact solution");

  auto* analyze = app.add_subcommand("analyze", "predicted vs measured depth and gate counts");
  auto* exact = app.add_subcommand("exact-prepare", "closed-form circuit for a target state");
  auto* train = app.add_subcommand("train", "two-stage variational training");
  auto* simulate = app.add_subcommand("simulate", "run a QASM circuit from |0...0>");
  std::string qasm_path;
  simulate->add_option("qasm", qasm_path, "circuit file")->required()->check(CLI::ExistingFile);
  auto* bench = app.add_subcommand("bench", "training benchmark table");
  auto* export_qasm = app.add_subcommand("export-qasm", "write the QASM for a target or a saved run");
  std::string record_path;
  export_qasm->add_option("--record", record_path, "record.json of an earlier run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kOk : cli::kValidation;
  }

  try {
    cli::Settings s;
    if (!config_path.empty()) s = cli::load_config(config_path, s);
    if (o_n->count()) s.n = n;
    if (o_seed->count()) s.seed = seed;
    if (o_opt->count()) s.optimizer = optimizer;
    if (o_loss->count()) s.loss = loss;
    if (o_spec->count()) s.spec = spec;
    if (o_out->count()) s.out = out;
    if (o_trials->count()) s.trials = trials;
    if (o_thr->count()) s.threshold = threshold;
    if (o_evals->count()) s.max_evals = max_evals;
    if (o_epochs->count()) s.epochs = epochs;
    if (o_any->count()) s.allow_any_pairing = any_pairing;
    if (o_warm->count()) s.warm_start = warm;
    // A lone --optimizer adam without --loss picks its paired default.
    if (o_opt->count() && !o_loss->count() && config_path.empty()) s.loss = s.optimizer == "adam" ? "fidelity" : "frobenius";

    cli::RunRecord rec;
    if (*analyze) rec = cli::cmd_analyze(s, std::cout);
    else if (*exact) rec = cli::cmd_exact_prepare(s, std::cout);
    else if (*train) rec = cli::cmd_train(s, std::cout);
    else if (*simulate) rec = cli::cmd_simulate(s, qasm_path, std::cout);
    else if (*bench) rec = cli::cmd_bench(s, std::cout);
    else rec = cli::cmd_export_qasm(s, record_path, std::cout);
    return rec.exit_code;
  } catch (const srbb::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kValidation;
  } catch (const srbb::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return cli::kIo;
  } catch (const srbb::ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << '\n';
    return cli::kConvergence;
  } catch (const srbb::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return cli::kConvergence;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return cli::kIo;
  }
}
