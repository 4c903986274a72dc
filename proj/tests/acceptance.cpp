// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run every criterion
//   acceptance 4 6        run only criteria 4 and 6
//
// Exit status is 0 only if every selected criterion passes, including its
// runtime budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "jumpest/estimator.hpp"
#include "jumpest/harness.hpp"
#include "jumpest/io.hpp"
#include "jumpest/rng.hpp"

using namespace jumpest;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;  // 0 = no budget
  std::function<Outcome()> run;
};

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

double agg(const ExperimentSummary& s, const std::string& key) { return s.aggregates.at(key); }

ModelSpec bounded_sine_model() {
  ModelSpec m = compound_poisson_test_model();
  m.diffusion = SineDiffusion{0.8, 0.3};
  return m;
}

ModelSpec modulated_model() {
  ModelSpec m = compound_poisson_test_model();
  m.diffusion = SineDiffusion{1.0, 0.3};
  m.jump = ModulatedJump{0.2};
  return m;
}

// 1. The LAMN expansion is exact for the constant-coefficient additive model
// with zero drift.
Outcome lamn_exact() {
  ExperimentConfig cfg;
  cfg.model = compound_poisson_test_model();
  cfg.n_values = {1000};
  cfg.replicates = 1000;
  cfg.h_grid = {-2.0, -1.0, 1.0, 2.0};
  cfg.master_seed = 1;
  const auto s = run_lamn_exact_experiment(cfg);
  const double worst = agg(s, "max_abs_residual");
  const double excluded = agg(s, at_n("excluded_multijump_count", 1000));
  return {worst <= 1e-10, "max|residual| = " + fmt("%.3g", worst) + " <= 1e-10 over " +
                              fmt("%.0f", 1000 - excluded) + " paths x 4 h values"};
}

// 2. 1/I = 1/I^aug- + 1/I^aug+ on random contexts.
Outcome info_identity() {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::InfoIdentity;
  cfg.replicates = 100000;
  cfg.master_seed = 2;
  const auto s = run_info_identity_experiment(cfg);
  const double worst = agg(s, "max_rel_error");
  return {worst <= 1e-12 && agg(s, "contexts") == 100000.0,
          "max relative error = " + fmt("%.3g", worst) + " <= 1e-12 over 1e5 contexts"};
}

// 3. Alignment rate at n = 1e4 and monotone growth in n.
Outcome consistency() {
  ExperimentConfig cfg;
  cfg.model = compound_poisson_test_model();
  cfg.n_values = {100, 1000, 10000};
  cfg.replicates = 2000;
  cfg.varpi = 0.3;
  cfg.alpha = 1.0;
  cfg.master_seed = 3;
  const auto s = run_consistency_experiment(cfg);
  const double r2 = agg(s, at_n("detection_rate", 100));
  const double r3 = agg(s, at_n("detection_rate", 1000));
  const double r4 = agg(s, at_n("detection_rate", 10000));
  return {r4 >= 0.99 && r2 < r3 && r3 < r4,
          "alignment rate " + fmt("%.4f", r2) + " < " + fmt("%.4f", r3) + " < " + fmt("%.4f", r4) +
              " (n = 1e2, 1e3, 1e4), last >= 0.99"};
}

// 4. Standardized errors are standard normal, on at least 4 of 5 seeds.
Outcome clt() {
  int passes = 0;
  std::string per_seed;
  for (std::uint64_t seed : {41, 42, 43, 44, 45}) {
    ExperimentConfig cfg;
    cfg.model = compound_poisson_test_model();
    cfg.n_values = {4000};
    cfg.replicates = 5000;
    cfg.master_seed = seed;
    const auto s = run_clt_experiment(cfg);
    const double d = agg(s, at_n("ks_distance", 4000));
    const double crit = agg(s, at_n("ks_critical_1pct", 4000));
    passes += d < crit;
    per_seed += (per_seed.empty() ? "" : ", ") + fmt("%.4f", d) + "/" + fmt("%.4f", crit);
  }
  return {passes >= 4, std::to_string(passes) + "/5 seeds below the 1% KS critical value (D/crit: " +
                           per_seed + ")"};
}

// 5. RMSE halves when n quadruples.
Outcome root_n_rate() {
  ExperimentConfig cfg;
  cfg.model = compound_poisson_test_model();
  cfg.n_values = {1000, 4000};
  cfg.replicates = 5000;
  cfg.master_seed = 5;
  const auto s = run_clt_experiment(cfg);
  const double ratio = agg(s, "rmse_ratio@n=1000:4000");
  return {std::abs(ratio - 2.0) <= 0.15 * 2.0,
          "RMSE(n=1e3)/RMSE(n=4e3) = " + fmt("%.4f", ratio) + ", required 2 +/- 15%"};
}

// 6. Per-decile variance of the scaled error matches the efficient variance.
Outcome efficiency() {
  std::string detail;
  bool ok = true;
  const std::pair<const char*, ModelSpec> models[] = {{"constant", compound_poisson_test_model()},
                                                      {"bounded-sine", bounded_sine_model()}};
  for (const auto& [name, model] : models) {
    ExperimentConfig cfg;
    cfg.model = model;
    cfg.n_values = {10000};
    cfg.replicates = 10000;
    cfg.master_seed = 6;
    const auto s = run_efficiency_experiment(cfg);
    const double dev = agg(s, at_n("max_abs_ratio_deviation", 10000));
    const double control = agg(s, at_n("control_inflated_max_abs_deviation", 10000));
    double min_count = 1e300;
    for (std::size_t d = 0; d < cfg.strata; ++d)
      min_count = std::min(min_count, agg(s, at_n("stratum_count_d" + std::to_string(d), 10000)));
    const bool model_ok = dev <= 0.10 && control > 0.10;
    ok = ok && model_ok;
    detail += std::string(detail.empty() ? "" : "; ") + name + ": max|ratio-1| = " + fmt("%.4f", dev) +
              " <= 0.10, x1.5 control max|ratio-1| = " + fmt("%.4f", control) + " > 0.10 (min stratum " +
              fmt("%.0f", min_count) + ")";
  }
  return {ok, detail};
}

// 7. Fractional parts are uniform and sqrt(n) w_before has variance ~ frac.
Outcome frac_uniform() {
  ExperimentConfig cfg;
  cfg.model = compound_poisson_test_model();
  cfg.model.jump_times = FixedCount{3};
  cfg.n_values = {10000};
  cfg.replicates = 10000;
  cfg.master_seed = 7;
  const auto s = run_frac_uniform_experiment(cfg);
  const double d = agg(s, at_n("ks_distance_frac", 10000));
  const double crit = agg(s, at_n("ks_critical_1pct", 10000));
  const double dev = agg(s, at_n("max_stratum_ratio_deviation", 10000));
  return {d < crit && dev <= 0.10, "KS D = " + fmt("%.4f", d) + " < " + fmt("%.4f", crit) +
                                       ", max stratum |var/midpoint - 1| = " + fmt("%.4f", dev) +
                                       " <= 0.10"};
}

// 8. N_n is standard normal and I_n approaches the limiting information.
Outcome lamn_stats() {
  ExperimentConfig cfg;
  cfg.model = modulated_model();
  cfg.n_values = {1000, 4000, 10000, 16000};
  cfg.replicates = 4000;
  cfg.master_seed = 8;
  const auto s = run_lamn_stats_experiment(cfg);
  const double d = agg(s, at_n("ks_distance_n_n", 10000));
  const double crit = agg(s, at_n("ks_critical_1pct", 10000));
  const double e1 = agg(s, at_n("median_rel_error_i", 1000));
  const double e2 = agg(s, at_n("median_rel_error_i", 4000));
  const double e3 = agg(s, at_n("median_rel_error_i", 16000));
  return {d < crit && e1 > e2 && e2 > e3,
          "KS D(N_n, n=1e4) = " + fmt("%.4f", d) + " < " + fmt("%.4f", crit) + ", median|I_n-I|/I " +
              fmt("%.3g", e1) + " > " + fmt("%.3g", e2) + " > " + fmt("%.3g", e3) + " (n = 1e3, 4e3, 1.6e4)"};
}

// 9. detect_jumps equals exhaustive search over all subsets of cells.
Outcome oracle_equivalence() {
  RandomStream rng(9, 0);
  std::size_t mismatches = 0;
  for (int instance = 0; instance < 1000; ++instance) {
    // Values on a 1/8 grid so that increments can tie with the threshold exactly.
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 12.0);
    std::vector<double> obs(n + 1);
    for (auto& x : obs) x = std::floor(rng.uniform() * 33.0 - 16.0) / 8.0;
    const double u = (1.0 + std::floor(rng.uniform() * 16.0)) / 8.0;

    // The detected set is the unique subset S with |dX_i| >= u exactly for i in S.
    std::vector<std::size_t> best;
    std::size_t satisfying = 0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      bool ok = true;
      for (std::size_t i = 0; i < n && ok; ++i) {
        const bool in = (mask >> i) & 1U;
        const bool big = std::abs(obs[i + 1] - obs[i]) >= u;
        ok = in == big;
      }
      if (!ok) continue;
      ++satisfying;
      best.clear();
      for (std::size_t i = 0; i < n; ++i)
        if ((mask >> i) & 1U) best.push_back(i);
    }
    const DetectionResult det = detect_jumps(obs, u);
    bool same = satisfying == 1 && det.detected_indices == best && det.k_hat == best.size() &&
                det.j_hat.size() == best.size();
    for (std::size_t k = 0; same && k < best.size(); ++k)
      same = det.j_hat[k] == obs[best[k] + 1] - obs[best[k]];
    mismatches += !same;
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches over 1000 random instances"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 10. Byte-identical outputs under 1, 4 and 8 worker threads.
Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "jumpest_acceptance_determinism";
  fs::remove_all(root);
  std::size_t compared = 0, differing = 0;
  const ExperimentKind kinds[] = {ExperimentKind::Consistency, ExperimentKind::Clt,
                                  ExperimentKind::Efficiency,  ExperimentKind::LamnStats,
                                  ExperimentKind::LamnExact,   ExperimentKind::FracUniform,
                                  ExperimentKind::InfoIdentity};
  for (ExperimentKind kind : kinds) {
    ExperimentConfig cfg;
    cfg.experiment = kind;
    cfg.n_values = {500, 2000};
    cfg.replicates = 300;
    cfg.substeps = 4;
    cfg.master_seed = 10;
    if (kind == ExperimentKind::LamnStats) cfg.model = modulated_model();
    if (kind == ExperimentKind::Efficiency) cfg.model = bounded_sine_model();
    std::string csv, json;
    for (std::size_t threads : {1, 4, 8}) {
      cfg.threads = threads;
      const fs::path dir = root / (std::string(to_string(kind)) + "_" + std::to_string(threads));
      emit(run_experiment(cfg), dir);
      const std::string c = slurp(dir / "replicates.csv");
      const std::string j = slurp(dir / "summary.json");
      if (threads == 1) {
        csv = c;
        json = j;
        continue;
      }
      compared += 2;
      differing += (c != csv) + (j != json);
    }
  }
  fs::remove_all(root);
  return {differing == 0 && compared == 28,
          std::to_string(compared - differing) + "/" + std::to_string(compared) +
              " output files byte-identical to the single-thread run (7 experiments)"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "exact LAMN identity", 10, lamn_exact},
      {2, "information splitting", 5, info_identity},
      {3, "consistency of the jump count and locations", 120, consistency},
      {4, "CLT for standardized jump errors", 300, clt},
      {5, "sqrt(n) rate", 180, root_n_rate},
      {6, "efficiency per frac decile", 600, efficiency},
      {7, "fractional parts and Brownian pieces", 120, frac_uniform},
      {8, "LAMN statistics", 300, lamn_stats},
      {9, "detection vs exhaustive search", 1, oracle_equivalence},
      {10, "determinism across worker counts", 0, determinism},
  };

  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = c.budget_seconds == 0 || secs < c.budget_seconds;
    const bool passed = o.passed && in_budget;
    failures += !passed;
    std::string timing = fmt("%.2f s", secs);
    if (c.budget_seconds > 0) timing += ", budget " + fmt("%.0f s", c.budget_seconds);
    if (!in_budget) timing += ", OVER BUDGET";
    std::cout << (passed ? "PASS" : "FAIL") << "  criterion " << c.id << " (" << c.title << "): " << o.detail
              << " [" << timing << "]" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
