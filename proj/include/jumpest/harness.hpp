#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "jumpest/model.hpp"

namespace jumpest {

inline constexpr const char* kArtifactVersion = "jumpest 1.0.0";

enum class ExperimentKind { Consistency, Clt, Efficiency, LamnStats, LamnExact, FracUniform, InfoIdentity };

std::string_view to_string(ExperimentKind kind);
// Accepts the names printed by to_string ("consistency", "clt", "efficiency",
// "lamn-stats", "lamn-exact", "frac-uniform", "info-identity").
ExperimentKind parse_experiment_kind(std::string_view name);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Consistency;
  ModelSpec model = compound_poisson_test_model();
  std::vector<std::size_t> n_values{1000};
  std::size_t replicates = 1000;
  double varpi = 0.3;
  double alpha = 1.0;
  std::size_t substeps = 20;
  std::uint64_t master_seed = 1;
  std::vector<double> h_grid{-2.0, -1.0, 0.0, 1.0, 2.0};  // lamn-exact only
  std::size_t strata = 10;                                 // efficiency / frac-uniform
  // Worker threads, 0 = hardware concurrency. Never affects results and is
  // not echoed into summary.json.
  std::size_t threads = 0;

  // Throws std::invalid_argument on inconsistent settings or a model that
  // fails validation.
  void validate() const;
};

nlohmann::json config_to_json(const ExperimentConfig& cfg);
// Fields absent from the document keep their defaults.
ExperimentConfig config_from_json(const nlohmann::json& j);

// Per-replicate rows; missing values are NaN.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column(std::string_view name) const;  // throws std::out_of_range
};

struct ExperimentSummary {
  ExperimentConfig config;
  ResultTable per_replicate;
  std::map<std::string, double> aggregates;
};

// Aggregate key for a statistic at one sample size, e.g. "detection_rate@n=10000".
std::string at_n(std::string_view stat, std::size_t n);

ExperimentSummary run_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr);

ExperimentSummary run_consistency_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr);
ExperimentSummary run_clt_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr);
ExperimentSummary run_efficiency_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr);
ExperimentSummary run_lamn_stats_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr);
ExperimentSummary run_lamn_exact_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr);
ExperimentSummary run_frac_uniform_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr);
ExperimentSummary run_info_identity_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr);

// Every aggregate is a function of the config and the rows alone; the
// experiment runners call this after the ordered merge.
std::map<std::string, double> compute_aggregates(const ExperimentConfig& cfg, const ResultTable& table);

}  // namespace jumpest
