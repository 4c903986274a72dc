#include "jumpest/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "jumpest/estimator.hpp"
#include "jumpest/harness.hpp"
#include "jumpest/io.hpp"
#include "jumpest/model_json.hpp"
#include "jumpest/simulate.hpp"

namespace jumpest {
namespace {

// Thrown for bad values that parse fine (exit code 1).
struct ValidationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("JUMPEST_SEED");
  if (!raw || !*raw) return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (*end != '\0') throw ValidationFailure(std::string("JUMPEST_SEED is not an integer: ") + raw);
  return v;
}

ModelSpec model_or_default(const std::string& path) {
  return path.empty() ? compound_poisson_test_model() : load_model(path);
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationFailure(path + ": " + e.what());
  }
}

}  // namespace

int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{
      "Simulates discretely observed jump-diffusions, estimates jumps by thresholding\n"
      "increments, and runs Monte Carlo checks of the estimator's limit theory.\n"
      "Exit codes: 0 success, 1 validation failure, 2 usage error.",
      "jumpest"};
  app.require_subcommand(1);

  // validate-model
  std::string vm_model;
  auto* validate_cmd = app.add_subcommand(
      "validate-model",
      "Check a model file against the coefficient bounds and jump identifiability.\n"
      "Prints one PASS/FAIL line per condition; exit 0 if all pass, 1 otherwise.");
  validate_cmd->add_option("--model", vm_model, "Model JSON file")->required();

  // simulate
  std::string sim_model, sim_out;
  std::size_t sim_n = 1000, sim_substeps = 20;
  std::uint64_t sim_replicate = 0;
  std::optional<std::uint64_t> sim_seed;
  auto* simulate_cmd = app.add_subcommand(
      "simulate",
      "Simulate one trajectory on the grid i/n, i=0..n. Writes <out> as CSV (i,t,X)\n"
      "and a side-car .json with jump times, marks, pre/post-jump states and\n"
      "Brownian fragments. Draws are keyed by (seed, replicate).");
  simulate_cmd->add_option("--model", sim_model, "Model JSON file (default: compound-Poisson test model)");
  simulate_cmd->add_option("--n", sim_n, "Number of sampling intervals on [0,1]")->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--seed", sim_seed, "Master seed (fallback: JUMPEST_SEED, then 1)");
  simulate_cmd->add_option("--replicate", sim_replicate, "Replicate index");
  simulate_cmd->add_option("--substeps", sim_substeps, "Euler steps per observation interval")
      ->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--out", sim_out, "Output CSV path")->required();

  // estimate
  std::string est_in;
  std::optional<std::size_t> est_n;
  double est_varpi = kDefaultVarpi, est_alpha = kDefaultAlpha;
  auto* estimate_cmd = app.add_subcommand(
      "estimate",
      "Threshold jump estimation on an observation CSV (column X, or the last column).\n"
      "Threshold u_n = alpha n^-varpi with varpi in (0, 1/2). Prints the detected\n"
      "cells, the jump count and the estimated jumps as JSON.");
  estimate_cmd->add_option("--in", est_in, "Observation CSV")->required();
  estimate_cmd->add_option("--n", est_n, "Expected number of intervals (rows - 1)");
  estimate_cmd->add_option("--varpi", est_varpi, "Threshold exponent, in (0, 1/2)");
  estimate_cmd->add_option("--alpha", est_alpha, "Threshold constant, > 0");

  // experiment
  std::string exp_kind, exp_config, exp_model, exp_out;
  std::vector<std::size_t> exp_n;
  std::optional<std::size_t> exp_replicates, exp_substeps;
  std::optional<double> exp_varpi, exp_alpha;
  std::optional<std::uint64_t> exp_seed;
  std::size_t exp_threads = 0;
  auto* experiment_cmd = app.add_subcommand(
      "experiment",
      "Run a Monte Carlo experiment and write <out>/replicates.csv and\n"
      "<out>/summary.json. Kinds: consistency, clt, efficiency, lamn-stats,\n"
      "lamn-exact, frac-uniform, info-identity. Flags override --config values;\n"
      "results do not depend on --threads.");
  experiment_cmd->add_option("--kind,--experiment-kind", exp_kind, "Experiment kind");
  experiment_cmd->add_option("--config", exp_config, "Experiment config JSON");
  experiment_cmd->add_option("--model", exp_model, "Model JSON file (overrides the config's model)");
  experiment_cmd->add_option("--n", exp_n, "Sample sizes, ascending (comma separated)")->delimiter(',');
  experiment_cmd->add_option("--replicates", exp_replicates, "Replicates per sample size");
  experiment_cmd->add_option("--seed", exp_seed, "Master seed (fallback: config, JUMPEST_SEED, then 1)");
  experiment_cmd->add_option("--varpi", exp_varpi, "Threshold exponent, in (0, 1/2)");
  experiment_cmd->add_option("--alpha", exp_alpha, "Threshold constant");
  experiment_cmd->add_option("--substeps", exp_substeps, "Euler steps per observation interval");
  experiment_cmd->add_option("--threads", exp_threads, "Worker threads (0 = all cores)");
  experiment_cmd->add_option("--out", exp_out, "Output directory")->required();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*validate_cmd) {
      const ValidationReport report = validate_model(load_model(vm_model));
      out << report.to_string();
      return report.ok() ? kExitOk : kExitValidation;
    }

    if (*simulate_cmd) {
      const ModelSpec model = model_or_default(sim_model);
      const ValidationReport report = validate_model(model);
      if (!report.ok()) {
        err << "model validation failed:\n" << report.to_string();
        return kExitValidation;
      }
      const std::uint64_t seed = sim_seed.value_or(env_seed().value_or(1));
      const PathRecord p = simulate_replicate(model, seed, sim_replicate, sim_n, sim_substeps);
      write_path(p, model, sim_out);
      out << "wrote " << sim_out << " (n=" << sim_n << ", jumps=" << p.jump_count() << ")\n";
      return kExitOk;
    }

    if (*estimate_cmd) {
      const std::vector<double> obs = read_observations_csv(est_in);
      if (obs.size() < 2) throw ValidationFailure("need at least two observations");
      if (est_n && *est_n != obs.size() - 1)
        throw ValidationFailure("--n " + std::to_string(*est_n) + " does not match the " +
                                std::to_string(obs.size() - 1) + " intervals in " + est_in);
      out << detection_to_json(estimate_jumps(obs, est_varpi, est_alpha)).dump(2) << '\n';
      return kExitOk;
    }

    if (*experiment_cmd) {
      ExperimentConfig cfg;
      bool seed_from_config = false;
      if (!exp_config.empty()) {
        const auto j = read_json_file(exp_config);
        cfg = config_from_json(j);
        seed_from_config = j.contains("master_seed");
      }
      if (!exp_kind.empty()) cfg.experiment = parse_experiment_kind(exp_kind);
      else if (exp_config.empty()) throw CLI::RequiredError("--kind");
      if (!exp_model.empty()) cfg.model = load_model(exp_model);
      if (!exp_n.empty()) cfg.n_values = exp_n;
      if (exp_replicates) cfg.replicates = *exp_replicates;
      if (exp_varpi) cfg.varpi = *exp_varpi;
      if (exp_alpha) cfg.alpha = *exp_alpha;
      if (exp_substeps) cfg.substeps = *exp_substeps;
      if (exp_seed) cfg.master_seed = *exp_seed;
      else if (!seed_from_config) cfg.master_seed = env_seed().value_or(cfg.master_seed);
      cfg.threads = exp_threads;

      const ExperimentSummary summary = run_experiment(cfg, &err);
      emit(summary, exp_out);
      out << "wrote " << (std::filesystem::path(exp_out) / "replicates.csv").string() << " and "
          << (std::filesystem::path(exp_out) / "summary.json").string() << '\n';
      return kExitOk;
    }
  } catch (const CLI::Error& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitUsage;
}

}  // namespace jumpest
