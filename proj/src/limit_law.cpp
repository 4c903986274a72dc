#include "jumpest/limit_law.hpp"

#include <cmath>
#include <stdexcept>

namespace jumpest {

JumpContext context_from_path(const ModelSpec& model, const PathRecord& path, std::size_t k) {
  if (k >= path.jump_count()) throw std::out_of_range("context_from_path: no such jump");
  const double t = path.jump_times[k];
  const double x = path.x_pre[k];
  const double theta = path.marks[k];
  return JumpContext{path.frac[k], eval_diffusion(model, t, x),
                     eval_diffusion(model, t, path.x_post[k]), eval_jump_dtheta(model, x, theta),
                     eval_jump_dx(model, x, theta)};
}

double sample_limit_error(RandomStream& rng, const JumpContext& ctx) {
  const double before = std::sqrt(ctx.u) * ctx.a_pre * rng.normal();
  const double after = std::sqrt(1.0 - ctx.u) * ctx.a_post * rng.normal();
  return before + after;
}

double sample_limit_error_marginal(RandomStream& rng, const JumpContext& ctx) {
  JumpContext drawn = ctx;
  drawn.u = rng.uniform();
  return sample_limit_error(rng, drawn);
}

double optimal_information(const JumpContext& ctx) {
  const double v = mixture_variance(ctx);
  if (v == 0.0) throw std::domain_error("optimal_information: zero conditional variance");
  return 1.0 / v;
}

double parametric_information(const JumpContext& ctx) {
  const double slope = 1.0 + ctx.c_prime;
  const double denom =
      ctx.a_pre * ctx.a_pre * slope * slope * ctx.u + ctx.a_post * ctx.a_post * (1.0 - ctx.u);
  if (denom == 0.0) throw std::domain_error("parametric_information: zero denominator");
  return ctx.c_dot * ctx.c_dot / denom;
}

std::pair<double, double> augmented_informations(const JumpContext& ctx) {
  if (!(ctx.u > 0.0 && ctx.u < 1.0))
    throw std::domain_error("augmented_informations: u must lie in (0,1)");
  const double slope = 1.0 + ctx.c_prime;
  const double minus_denom = ctx.a_post * ctx.a_post * (1.0 - ctx.u);
  const double plus_denom = ctx.a_pre * ctx.a_pre * slope * slope * ctx.u;
  if (minus_denom == 0.0 || plus_denom == 0.0)
    throw std::domain_error("augmented_informations: zero denominator");
  const double num = ctx.c_dot * ctx.c_dot;
  return {num / minus_denom, num / plus_denom};
}

double functional_limit_variance(std::span<const JumpContext> contexts,
                                 std::span<const double> gradient) {
  if (contexts.size() != gradient.size())
    throw std::invalid_argument("functional_limit_variance: length mismatch");
  double total = 0.0;
  for (std::size_t k = 0; k < contexts.size(); ++k)
    total += gradient[k] * gradient[k] * mixture_variance(contexts[k]);
  return total;
}

}  // namespace jumpest
