#include "jumpest/lamn.hpp"

#include <cmath>
#include <numbers>

#include "jumpest/limit_law.hpp"

namespace jumpest {
namespace {

void check_one_jump_per_cell(const PathRecord& path, const char* who) {
  if (has_shared_cell(path))
    throw SharedCellError(std::string(who) + ": two jumps share an observation cell");
}

double log_normal_density(double x, double mean, double var) {
  const double d = x - mean;
  return -0.5 * std::log(2.0 * std::numbers::pi * var) - d * d / (2.0 * var);
}

}  // namespace

LamnStats lamn_statistics(const PathRecord& path, const ModelSpec& model,
                          std::span<const double> lambda, std::size_t n) {
  if (lambda.size() != path.jump_count())
    throw std::invalid_argument("lamn_statistics: lambda length differs from the jump count");
  if (n != path.n || path.obs.size() != n + 1)
    throw std::invalid_argument("lamn_statistics: n does not match the path");
  check_one_jump_per_cell(path, "lamn_statistics");

  const double dn = static_cast<double>(n);
  LamnStats out;
  out.per_jump.reserve(lambda.size());
  out.limit_i.reserve(lambda.size());
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    const std::size_t i = path.grid_index[k];
    const double t_left = static_cast<double>(i) / dn;
    const double t_right = static_cast<double>(i + 1) / dn;
    const double x = path.obs[i];
    const double theta = lambda[k];
    const double jump = eval_jump(model, x, theta);
    const double slope = 1.0 + eval_jump_dx(model, x, theta);
    const double a_left = eval_diffusion(model, t_left, x);
    const double a_jumped = eval_diffusion(model, t_left, x + jump);
    const double T = path.jump_times[k];

    LamnJumpStats s;
    s.d_n = a_left * a_left * slope * slope * (T - t_left) + a_jumped * a_jumped * (t_right - T);
    const double c_dot = eval_jump_dtheta(model, x, theta);
    s.i_n = c_dot * c_dot / (dn * s.d_n);
    s.n_n = std::sqrt(dn) * (path.obs[i + 1] - x - jump) / std::sqrt(dn * s.d_n);
    out.per_jump.push_back(s);

    const double x_pre = path.x_pre[k];
    const JumpContext ctx{path.frac[k], eval_diffusion(model, T, x_pre),
                          eval_diffusion(model, T, x_pre + eval_jump(model, x_pre, theta)),
                          eval_jump_dtheta(model, x_pre, theta), eval_jump_dx(model, x_pre, theta)};
    out.limit_i.push_back(parametric_information(ctx));
  }
  return out;
}

double gaussian_model_loglik_ratio(const PathRecord& path, std::span<const double> lambda,
                                   std::span<const double> h, std::size_t n, double sigma,
                                   double b0) {
  if (lambda.size() != path.jump_count() || h.size() != lambda.size())
    throw std::invalid_argument("gaussian_model_loglik_ratio: lambda/h length mismatch");
  if (n != path.n || path.obs.size() != n + 1)
    throw std::invalid_argument("gaussian_model_loglik_ratio: n does not match the path");
  check_one_jump_per_cell(path, "gaussian_model_loglik_ratio");

  const double dn = static_cast<double>(n);
  const double var = sigma * sigma / dn;
  const double root_n = std::sqrt(dn);
  double z = 0.0;
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    const std::size_t i = path.grid_index[k];
    const double inc = path.obs[i + 1] - path.obs[i];
    const double base = b0 / dn + lambda[k];
    z += log_normal_density(inc, base + h[k] / root_n, var) - log_normal_density(inc, base, var);
  }
  return z;
}

double gaussian_model_loglik_ratio(const PathRecord& path, const ModelSpec& model,
                                   std::span<const double> lambda, std::span<const double> h,
                                   std::size_t n) {
  const auto* drift = std::get_if<ConstantDrift>(&model.drift);
  const auto* diffusion = std::get_if<ConstantDiffusion>(&model.diffusion);
  if (!drift || !diffusion || !std::holds_alternative<AdditiveJump>(model.jump))
    throw std::invalid_argument(
        "gaussian_model_loglik_ratio: closed form needs constant drift, constant diffusion "
        "and additive jumps");
  return gaussian_model_loglik_ratio(path, lambda, h, n, diffusion->sigma, drift->b0);
}

double lamn_expansion_residual(double z_n, const LamnStats& stats, std::span<const double> h) {
  if (h.size() != stats.per_jump.size())
    throw std::invalid_argument("lamn_expansion_residual: h length mismatch");
  double linear = 0.0;
  double quadratic = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    const auto& s = stats.per_jump[k];
    linear += h[k] * std::sqrt(s.i_n) * s.n_n;
    quadratic += h[k] * h[k] * s.i_n;
  }
  return z_n - linear + 0.5 * quadratic;
}

}  // namespace jumpest
