#include "jumpest/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "jumpest/estimator.hpp"
#include "jumpest/lamn.hpp"
#include "jumpest/limit_law.hpp"
#include "jumpest/model_json.hpp"
#include "jumpest/simulate.hpp"
#include "jumpest/stats.hpp"

namespace jumpest {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Row = std::vector<double>;
using Rows = std::vector<Row>;

constexpr std::pair<ExperimentKind, std::string_view> kKindNames[] = {
    {ExperimentKind::Consistency, "consistency"}, {ExperimentKind::Clt, "clt"},
    {ExperimentKind::Efficiency, "efficiency"},   {ExperimentKind::LamnStats, "lamn-stats"},
    {ExperimentKind::LamnExact, "lamn-exact"},    {ExperimentKind::FracUniform, "frac-uniform"},
    {ExperimentKind::InfoIdentity, "info-identity"}};

// Runs fn(0..count-1) on up to `threads` workers; results land at their
// index, so the output order never depends on scheduling.
template <class Fn>
auto parallel_map(std::size_t count, std::size_t threads, Fn fn) {
  using Result = decltype(fn(std::size_t{}));
  std::vector<Result> out(count);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(count, 1));

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return out;
}

double as_flag(bool b) { return b ? 1.0 : 0.0; }
double as_real(std::size_t v) { return static_cast<double>(v); }

// Runs `per_replicate` for every (n, replicate) pair in config order and
// concatenates the rows.
template <class Fn>
ExperimentSummary run_rows(ExperimentConfig cfg, ExperimentKind kind, std::vector<std::string> columns,
                           std::ostream* log, Fn per_replicate) {
  cfg.experiment = kind;
  cfg.validate();
  ExperimentSummary summary;
  summary.config = cfg;
  summary.per_replicate.columns = std::move(columns);
  for (std::size_t n : cfg.n_values) {
    auto batches = parallel_map(cfg.replicates, cfg.threads,
                                [&](std::size_t r) { return per_replicate(n, r); });
    std::size_t count = 0;
    for (auto& batch : batches) {
      count += batch.size();
      for (auto& row : batch) summary.per_replicate.rows.push_back(std::move(row));
    }
    if (log)
      *log << to_string(cfg.experiment) << ": n=" << n << " replicates=" << cfg.replicates
           << " rows=" << count << '\n';
  }
  summary.aggregates = compute_aggregates(cfg, summary.per_replicate);
  return summary;
}

PathRecord replicate_path(const ExperimentConfig& cfg, std::size_t n, std::size_t r) {
  return simulate_replicate(cfg.model, cfg.master_seed, r, n, cfg.substeps, n);
}

// ---- row builders ----------------------------------------------------------

const std::vector<std::string> kConsistencyColumns{"n", "replicate", "K", "K_hat", "aligned",
                                                   "shared_cell"};

const std::vector<std::string> kErrorColumns{
    "n",    "replicate", "k",      "K",          "K_hat",     "aligned",      "shared_cell", "included",
    "frac", "a_pre",     "a_post", "oracle_var", "raw_error", "scaled_error", "standardized_error"};

Rows error_rows(const ExperimentConfig& cfg, std::size_t n, std::size_t r) {
  const PathRecord p = replicate_path(cfg, n, r);
  const DetectionResult det = estimate_jumps(p.obs, cfg.varpi, cfg.alpha);
  const ErrorRecord err = estimation_error(det, p);
  const std::size_t K = p.jump_count();
  const bool shared = has_shared_cell(p);
  const std::size_t len = std::max(K, det.k_hat);
  Rows rows;
  if (len == 0) {
    rows.push_back({as_real(n), as_real(r), -1.0, 0.0, 0.0, 1.0, 0.0, 0.0, kNaN, kNaN, kNaN, kNaN,
                    kNaN, kNaN, kNaN});
    return rows;
  }
  for (std::size_t k = 0; k < len; ++k) {
    Row row{as_real(n), as_real(r), as_real(k), as_real(K), as_real(det.k_hat),
            as_flag(err.aligned), as_flag(shared)};
    const bool included = err.aligned && !shared && k < K;
    row.push_back(as_flag(included));
    if (k < K) {
      const JumpContext ctx = context_from_path(cfg.model, p, k);
      const double var = mixture_variance(ctx);
      row.insert(row.end(), {ctx.u, ctx.a_pre, ctx.a_post, var, err.raw_errors[k],
                             err.scaled_errors[k], err.scaled_errors[k] / std::sqrt(var)});
    } else {
      row.insert(row.end(), {kNaN, kNaN, kNaN, kNaN, err.raw_errors[k], err.scaled_errors[k], kNaN});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

const std::vector<std::string> kLamnStatsColumns{"n",   "replicate", "k",   "K",       "shared_cell", "frac",
                                                 "d_n", "i_n",       "n_n", "limit_i", "rel_error_i"};

Rows lamn_stats_rows(const ExperimentConfig& cfg, std::size_t n, std::size_t r) {
  const PathRecord p = replicate_path(cfg, n, r);
  const std::size_t K = p.jump_count();
  Rows rows;
  if (K == 0) {
    rows.push_back({as_real(n), as_real(r), -1.0, 0.0, 0.0, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN});
    return rows;
  }
  if (has_shared_cell(p)) {
    for (std::size_t k = 0; k < K; ++k)
      rows.push_back({as_real(n), as_real(r), as_real(k), as_real(K), 1.0, p.frac[k], kNaN, kNaN,
                      kNaN, kNaN, kNaN});
    return rows;
  }
  const LamnStats stats = lamn_statistics(p, cfg.model, p.marks, n);
  for (std::size_t k = 0; k < K; ++k) {
    const auto& s = stats.per_jump[k];
    const double limit = stats.limit_i[k];
    rows.push_back({as_real(n), as_real(r), as_real(k), as_real(K), 0.0, p.frac[k], s.d_n, s.i_n,
                    s.n_n, limit, std::abs(s.i_n - limit) / limit});
  }
  return rows;
}

const std::vector<std::string> kLamnExactColumns{"n", "replicate", "K", "shared_cell", "h", "z_n", "residual"};

Rows lamn_exact_rows(const ExperimentConfig& cfg, std::size_t n, std::size_t r) {
  const PathRecord p = replicate_path(cfg, n, r);
  const std::size_t K = p.jump_count();
  const bool shared = has_shared_cell(p);
  Rows rows;
  LamnStats stats;
  if (!shared) stats = lamn_statistics(p, cfg.model, p.marks, n);
  for (double h : cfg.h_grid) {
    if (shared) {
      rows.push_back({as_real(n), as_real(r), as_real(K), 1.0, h, kNaN, kNaN});
      continue;
    }
    const std::vector<double> hv(K, h);
    const double z = gaussian_model_loglik_ratio(p, cfg.model, p.marks, hv, n);
    rows.push_back({as_real(n), as_real(r), as_real(K), 0.0, h, z,
                    lamn_expansion_residual(z, stats, hv)});
  }
  return rows;
}

const std::vector<std::string> kFracColumns{"n", "replicate", "k", "frac", "sqrt_n_w_before",
                                            "sqrt_n_w_after"};

Rows frac_rows(const ExperimentConfig& cfg, std::size_t n, std::size_t r) {
  const PathRecord p = replicate_path(cfg, n, r);
  const double root_n = std::sqrt(static_cast<double>(n));
  Rows rows;
  for (std::size_t k = 0; k < p.jump_count(); ++k)
    rows.push_back({as_real(n), as_real(r), as_real(k), p.frac[k], root_n * p.w_before[k],
                    root_n * p.w_after[k]});
  return rows;
}

const std::vector<std::string> kInfoColumns{"replicate", "u",       "a_pre",       "a_post",     "c_dot",
                                            "c_prime",   "i_param", "i_aug_minus", "i_aug_plus", "rel_error"};

Rows info_rows(const ExperimentConfig& cfg, std::size_t r) {
  RandomStream rng(cfg.master_seed, r, 0);
  const double lo = cfg.model.a_lower;
  const double hi = cfg.model.a_upper;
  const double slope_room = std::max(0.0, 1.0 - lo);
  JumpContext ctx;
  ctx.u = rng.uniform();
  ctx.a_pre = lo + (hi - lo) * rng.uniform();
  ctx.a_post = lo + (hi - lo) * rng.uniform();
  const double magnitude = 0.1 + 1.9 * rng.uniform();
  ctx.c_dot = rng.uniform() < 0.5 ? -magnitude : magnitude;
  ctx.c_prime = slope_room * (2.0 * rng.uniform() - 1.0);

  const double param = parametric_information(ctx);
  const auto [minus, plus] = augmented_informations(ctx);
  const double inv = 1.0 / param;
  const double rel = std::abs(inv - (1.0 / minus + 1.0 / plus)) / inv;
  return {{as_real(r), ctx.u, ctx.a_pre, ctx.a_post, ctx.c_dot, ctx.c_prime, param, minus, plus, rel}};
}

// ---- aggregation -----------------------------------------------------------

struct Columns {
  const ResultTable& t;
  double get(const Row& row, std::string_view name) const { return row[t.column(name)]; }
};

std::vector<const Row*> rows_at_n(const ResultTable& t, std::size_t n) {
  const std::size_t c = t.column("n");
  std::vector<const Row*> out;
  for (const auto& row : t.rows)
    if (row[c] == as_real(n)) out.push_back(&row);
  return out;
}

std::string indexed(std::string_view stat, std::size_t d) {
  return std::string(stat) + "_d" + std::to_string(d);
}

std::size_t stratum_of(double frac, std::size_t strata) {
  const auto d = static_cast<std::size_t>(std::floor(frac * static_cast<double>(strata)));
  return std::min(d, strata - 1);
}

void aggregate_consistency(const ExperimentConfig& cfg, const ResultTable& t,
                           std::map<std::string, double>& agg) {
  const Columns c{t};
  for (std::size_t n : cfg.n_values) {
    const auto rows = rows_at_n(t, n);
    double aligned = 0.0, shared = 0.0, k_hat = 0.0, exact_count = 0.0;
    for (const Row* row : rows) {
      aligned += c.get(*row, "aligned");
      shared += c.get(*row, "shared_cell");
      k_hat += c.get(*row, "K_hat");
      exact_count += as_flag(c.get(*row, "K_hat") == c.get(*row, "K"));
    }
    const double m = static_cast<double>(rows.size());
    agg[at_n("detection_rate", n)] = aligned / m;
    agg[at_n("count_match_rate", n)] = exact_count / m;
    agg[at_n("mean_K_hat", n)] = k_hat / m;
    agg[at_n("excluded_multijump_count", n)] = shared;
    agg[at_n("replicates", n)] = m;
  }
}

void aggregate_errors(const ExperimentConfig& cfg, const ResultTable& t,
                      std::map<std::string, double>& agg, bool stratify) {
  const Columns c{t};
  double previous_rmse = kNaN;
  std::size_t previous_n = 0;
  for (std::size_t n : cfg.n_values) {
    std::vector<double> standardized, scaled, raw_sq;
    double excluded = 0.0, shared = 0.0;
    std::vector<std::vector<double>> strat_scaled(cfg.strata), strat_oracle(cfg.strata),
        strat_post(cfg.strata);
    for (const Row* row : rows_at_n(t, n)) {
      if (c.get(*row, "k") == 0.0) {
        excluded += 1.0 - c.get(*row, "aligned");
        shared += c.get(*row, "shared_cell");
      }
      if (c.get(*row, "included") != 1.0) continue;
      standardized.push_back(c.get(*row, "standardized_error"));
      scaled.push_back(c.get(*row, "scaled_error"));
      const double raw = c.get(*row, "raw_error");
      raw_sq.push_back(raw * raw);
      if (stratify) {
        const std::size_t d = stratum_of(c.get(*row, "frac"), cfg.strata);
        const double a_post = c.get(*row, "a_post");
        strat_scaled[d].push_back(c.get(*row, "scaled_error"));
        strat_oracle[d].push_back(c.get(*row, "oracle_var"));
        strat_post[d].push_back(a_post * a_post);
      }
    }
    agg[at_n("included_jumps", n)] = static_cast<double>(standardized.size());
    agg[at_n("excluded_replicates", n)] = excluded;
    agg[at_n("excluded_multijump_count", n)] = shared;
    if (!standardized.empty()) {
      const KsResult ks = ks_statistic(standardized, standard_normal_cdf);
      agg[at_n("ks_distance", n)] = ks.distance;
      agg[at_n("ks_critical_1pct", n)] = ks.critical_1pct;
    } else {
      agg[at_n("ks_distance", n)] = kNaN;
      agg[at_n("ks_critical_1pct", n)] = kNaN;
    }
    agg[at_n("empirical_variance", n)] = sample_variance(standardized);
    agg[at_n("scaled_error_variance", n)] = sample_variance(scaled);
    const double rmse = std::sqrt(mean(raw_sq));
    agg[at_n("rmse", n)] = rmse;
    if (previous_n != 0)
      agg["rmse_ratio@n=" + std::to_string(previous_n) + ":" + std::to_string(n)] = previous_rmse / rmse;
    previous_rmse = rmse;
    previous_n = n;

    if (!stratify) continue;
    double max_dev = 0.0, max_dev_inflated = 0.0, max_dev_post = 0.0;
    for (std::size_t d = 0; d < cfg.strata; ++d) {
      const double var = sample_variance(strat_scaled[d]);
      const double oracle = mean(strat_oracle[d]);
      const double ratio = var / oracle;
      const double inflated = var / (1.5 * oracle);
      const double post_only = var / mean(strat_post[d]);
      agg[at_n(indexed("stratum_count", d), n)] = static_cast<double>(strat_scaled[d].size());
      agg[at_n(indexed("variance_ratio", d), n)] = ratio;
      agg[at_n(indexed("control_inflated_ratio", d), n)] = inflated;
      agg[at_n(indexed("control_post_only_ratio", d), n)] = post_only;
      // Strata with fewer than two samples give NaN ratios; those count as failures.
      auto dev = [](double r) { return std::isfinite(r) ? std::abs(r - 1.0) : std::numeric_limits<double>::infinity(); };
      max_dev = std::max(max_dev, dev(ratio));
      max_dev_inflated = std::max(max_dev_inflated, dev(inflated));
      max_dev_post = std::max(max_dev_post, dev(post_only));
    }
    agg[at_n("max_abs_ratio_deviation", n)] = max_dev;
    agg[at_n("control_inflated_max_abs_deviation", n)] = max_dev_inflated;
    agg[at_n("control_post_only_max_abs_deviation", n)] = max_dev_post;
  }
}

void aggregate_lamn_stats(const ExperimentConfig& cfg, const ResultTable& t,
                          std::map<std::string, double>& agg) {
  const Columns c{t};
  for (std::size_t n : cfg.n_values) {
    std::vector<double> nn, rel, i_n;
    double shared = 0.0;
    for (const Row* row : rows_at_n(t, n)) {
      if (c.get(*row, "k") < 0.0) continue;
      if (c.get(*row, "shared_cell") == 1.0) {
        if (c.get(*row, "k") == 0.0) shared += 1.0;
        continue;
      }
      nn.push_back(c.get(*row, "n_n"));
      rel.push_back(c.get(*row, "rel_error_i"));
      i_n.push_back(c.get(*row, "i_n"));
    }
    agg[at_n("pooled_jumps", n)] = static_cast<double>(nn.size());
    agg[at_n("excluded_multijump_count", n)] = shared;
    if (!nn.empty()) {
      const KsResult ks = ks_statistic(nn, standard_normal_cdf);
      agg[at_n("ks_distance_n_n", n)] = ks.distance;
      agg[at_n("ks_critical_1pct", n)] = ks.critical_1pct;
    } else {
      agg[at_n("ks_distance_n_n", n)] = kNaN;
      agg[at_n("ks_critical_1pct", n)] = kNaN;
    }
    agg[at_n("median_rel_error_i", n)] = median(rel);
    agg[at_n("mean_i_n", n)] = mean(i_n);
    agg[at_n("n_n_variance", n)] = sample_variance(nn);
  }
}

void aggregate_lamn_exact(const ExperimentConfig& cfg, const ResultTable& t,
                          std::map<std::string, double>& agg) {
  const Columns c{t};
  double overall_max = 0.0;
  for (std::size_t n : cfg.n_values) {
    double max_abs = 0.0, sum_abs = 0.0, count = 0.0, shared_rows = 0.0, h0_gap = 0.0;
    for (const Row* row : rows_at_n(t, n)) {
      if (c.get(*row, "shared_cell") == 1.0) {
        shared_rows += 1.0;
        continue;
      }
      const double res = c.get(*row, "residual");
      if (c.get(*row, "h") == 0.0) {
        h0_gap = std::max(h0_gap, std::abs(res - c.get(*row, "z_n")));
        continue;
      }
      max_abs = std::max(max_abs, std::abs(res));
      sum_abs += std::abs(res);
      count += 1.0;
    }
    agg[at_n("max_abs_residual", n)] = max_abs;
    agg[at_n("mean_abs_residual", n)] = count > 0.0 ? sum_abs / count : kNaN;
    agg[at_n("h0_residual_minus_z", n)] = h0_gap;
    agg[at_n("excluded_multijump_count", n)] = shared_rows / static_cast<double>(cfg.h_grid.size());
    overall_max = std::max(overall_max, max_abs);
  }
  agg["max_abs_residual"] = overall_max;
}

void aggregate_frac(const ExperimentConfig& cfg, const ResultTable& t,
                    std::map<std::string, double>& agg) {
  const Columns c{t};
  for (std::size_t n : cfg.n_values) {
    std::vector<double> frac, total;
    std::vector<std::vector<double>> strat(cfg.strata);
    for (const Row* row : rows_at_n(t, n)) {
      const double f = c.get(*row, "frac");
      const double before = c.get(*row, "sqrt_n_w_before");
      frac.push_back(f);
      total.push_back(before + c.get(*row, "sqrt_n_w_after"));
      strat[stratum_of(f, cfg.strata)].push_back(before);
    }
    agg[at_n("pooled_jumps", n)] = static_cast<double>(frac.size());
    if (!frac.empty()) {
      const KsResult ks = ks_statistic(frac, uniform01_cdf);
      agg[at_n("ks_distance_frac", n)] = ks.distance;
      agg[at_n("ks_critical_1pct", n)] = ks.critical_1pct;
    } else {
      agg[at_n("ks_distance_frac", n)] = kNaN;
      agg[at_n("ks_critical_1pct", n)] = kNaN;
    }
    agg[at_n("total_variance", n)] = sample_variance(total);
    double max_dev = 0.0;
    const double width = 1.0 / static_cast<double>(cfg.strata);
    for (std::size_t d = 0; d < cfg.strata; ++d) {
      const double var = sample_variance(strat[d]);
      const double midpoint = (static_cast<double>(d) + 0.5) * width;
      const double ratio = var / midpoint;
      agg[at_n(indexed("stratum_variance", d), n)] = var;
      agg[at_n(indexed("stratum_variance_ratio", d), n)] = ratio;
      max_dev = std::max(max_dev, std::isfinite(ratio) ? std::abs(ratio - 1.0)
                                                       : std::numeric_limits<double>::infinity());
    }
    agg[at_n("max_stratum_ratio_deviation", n)] = max_dev;
  }
}

void aggregate_info(const ResultTable& t, std::map<std::string, double>& agg) {
  const Columns c{t};
  double max_rel = 0.0, sum_rel = 0.0;
  for (const auto& row : t.rows) {
    const double rel = c.get(row, "rel_error");
    max_rel = std::max(max_rel, rel);
    sum_rel += rel;
  }
  agg["contexts"] = static_cast<double>(t.rows.size());
  agg["max_rel_error"] = max_rel;
  agg["mean_rel_error"] = t.rows.empty() ? kNaN : sum_rel / static_cast<double>(t.rows.size());
}

bool closed_form_model(const ModelSpec& m) {
  return m.constant_coefficients() && std::holds_alternative<AdditiveJump>(m.jump);
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kKindNames)
    if (k == kind) return name;
  return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  for (const auto& [k, known] : kKindNames)
    if (known == name) return k;
  throw std::invalid_argument("unknown experiment kind '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (n_values.empty()) throw std::invalid_argument("experiment: n_values must be nonempty");
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] == 0) throw std::invalid_argument("experiment: n values must be positive");
    if (i > 0 && n_values[i] <= n_values[i - 1])
      throw std::invalid_argument("experiment: n_values must be strictly ascending");
  }
  if (replicates == 0) throw std::invalid_argument("experiment: replicates must be >= 1");
  if (substeps == 0) throw std::invalid_argument("experiment: substeps must be >= 1");
  if (strata == 0) throw std::invalid_argument("experiment: strata must be >= 1");
  threshold(n_values.front(), varpi, alpha);  // checks varpi in (0, 1/2) and alpha > 0
  require_valid(model);
  if (experiment == ExperimentKind::LamnExact && !closed_form_model(model))
    throw std::invalid_argument(
        "experiment lamn-exact: model must have constant drift, constant diffusion and additive jumps");
  if (experiment == ExperimentKind::LamnExact && h_grid.empty())
    throw std::invalid_argument("experiment lamn-exact: h grid must be nonempty");
}

json config_to_json(const ExperimentConfig& cfg) {
  return json{{"experiment", std::string(to_string(cfg.experiment))},
              {"model", model_to_json(cfg.model)},
              {"n_values", cfg.n_values},
              {"replicates", cfg.replicates},
              {"varpi", cfg.varpi},
              {"alpha", cfg.alpha},
              {"substeps", cfg.substeps},
              {"master_seed", cfg.master_seed},
              {"h_grid", cfg.h_grid},
              {"strata", cfg.strata}};
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  ExperimentConfig cfg;
  try {
    if (j.contains("experiment")) cfg.experiment = parse_experiment_kind(j.at("experiment").get<std::string>());
    if (j.contains("model")) cfg.model = model_from_json(j.at("model"));
    if (j.contains("n_values")) cfg.n_values = j.at("n_values").get<std::vector<std::size_t>>();
    cfg.replicates = j.value("replicates", cfg.replicates);
    cfg.varpi = j.value("varpi", cfg.varpi);
    cfg.alpha = j.value("alpha", cfg.alpha);
    cfg.substeps = j.value("substeps", cfg.substeps);
    cfg.master_seed = j.value("master_seed", cfg.master_seed);
    if (j.contains("h_grid")) cfg.h_grid = j.at("h_grid").get<std::vector<double>>();
    cfg.strata = j.value("strata", cfg.strata);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return cfg;
}

std::size_t ResultTable::column(std::string_view name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("no column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

std::string at_n(std::string_view stat, std::size_t n) {
  return std::string(stat) + "@n=" + std::to_string(n);
}

std::map<std::string, double> compute_aggregates(const ExperimentConfig& cfg, const ResultTable& t) {
  std::map<std::string, double> agg;
  switch (cfg.experiment) {
    case ExperimentKind::Consistency: aggregate_consistency(cfg, t, agg); break;
    case ExperimentKind::Clt: aggregate_errors(cfg, t, agg, false); break;
    case ExperimentKind::Efficiency: aggregate_errors(cfg, t, agg, true); break;
    case ExperimentKind::LamnStats: aggregate_lamn_stats(cfg, t, agg); break;
    case ExperimentKind::LamnExact: aggregate_lamn_exact(cfg, t, agg); break;
    case ExperimentKind::FracUniform: aggregate_frac(cfg, t, agg); break;
    case ExperimentKind::InfoIdentity: aggregate_info(t, agg); break;
  }
  return agg;
}

ExperimentSummary run_consistency_experiment(const ExperimentConfig& cfg, std::ostream* log) {
  return run_rows(cfg, ExperimentKind::Consistency, kConsistencyColumns, log, [&cfg](std::size_t n, std::size_t r) {
    const PathRecord p = replicate_path(cfg, n, r);
    const DetectionResult det = estimate_jumps(p.obs, cfg.varpi, cfg.alpha);
    const ErrorRecord err = estimation_error(det, p);
    return Rows{{as_real(n), as_real(r), as_real(p.jump_count()), as_real(det.k_hat),
                 as_flag(err.aligned), as_flag(has_shared_cell(p))}};
  });
}

ExperimentSummary run_clt_experiment(const ExperimentConfig& cfg, std::ostream* log) {
  return run_rows(cfg, ExperimentKind::Clt, kErrorColumns, log,
                  [&cfg](std::size_t n, std::size_t r) { return error_rows(cfg, n, r); });
}

ExperimentSummary run_efficiency_experiment(const ExperimentConfig& cfg, std::ostream* log) {
  return run_rows(cfg, ExperimentKind::Efficiency, kErrorColumns, log,
                  [&cfg](std::size_t n, std::size_t r) { return error_rows(cfg, n, r); });
}

ExperimentSummary run_lamn_stats_experiment(const ExperimentConfig& cfg, std::ostream* log) {
  return run_rows(cfg, ExperimentKind::LamnStats, kLamnStatsColumns, log,
                  [&cfg](std::size_t n, std::size_t r) { return lamn_stats_rows(cfg, n, r); });
}

ExperimentSummary run_lamn_exact_experiment(const ExperimentConfig& cfg, std::ostream* log) {
  return run_rows(cfg, ExperimentKind::LamnExact, kLamnExactColumns, log,
                  [&cfg](std::size_t n, std::size_t r) { return lamn_exact_rows(cfg, n, r); });
}

ExperimentSummary run_frac_uniform_experiment(const ExperimentConfig& cfg, std::ostream* log) {
  return run_rows(cfg, ExperimentKind::FracUniform, kFracColumns, log,
                  [&cfg](std::size_t n, std::size_t r) { return frac_rows(cfg, n, r); });
}

ExperimentSummary run_info_identity_experiment(const ExperimentConfig& config, std::ostream* log) {
  ExperimentConfig cfg = config;
  cfg.experiment = ExperimentKind::InfoIdentity;
  cfg.validate();
  ExperimentSummary summary;
  summary.config = cfg;
  summary.per_replicate.columns = kInfoColumns;
  auto batches = parallel_map(cfg.replicates, cfg.threads, [&cfg](std::size_t r) { return info_rows(cfg, r); });
  for (auto& batch : batches)
    for (auto& row : batch) summary.per_replicate.rows.push_back(std::move(row));
  if (log) *log << "info-identity: contexts=" << cfg.replicates << '\n';
  summary.aggregates = compute_aggregates(cfg, summary.per_replicate);
  return summary;
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg, std::ostream* log) {
  switch (cfg.experiment) {
    case ExperimentKind::Consistency: return run_consistency_experiment(cfg, log);
    case ExperimentKind::Clt: return run_clt_experiment(cfg, log);
    case ExperimentKind::Efficiency: return run_efficiency_experiment(cfg, log);
    case ExperimentKind::LamnStats: return run_lamn_stats_experiment(cfg, log);
    case ExperimentKind::LamnExact: return run_lamn_exact_experiment(cfg, log);
    case ExperimentKind::FracUniform: return run_frac_uniform_experiment(cfg, log);
    case ExperimentKind::InfoIdentity: return run_info_identity_experiment(cfg, log);
  }
  throw std::invalid_argument("run_experiment: unknown experiment kind");
}

}  // namespace jumpest
