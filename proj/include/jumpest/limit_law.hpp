#pragma once

#include <span>
#include <utility>
#include <vector>

#include "jumpest/model.hpp"
#include "jumpest/rng.hpp"
#include "jumpest/simulate.hpp"

namespace jumpest {

// Per-jump quantities entering the mixed-Gaussian limit of the jump error.
struct JumpContext {
  double u = 0.5;        // mixing variable, or realized n T_k - i_k
  double a_pre = 1.0;    // a(T_k, X_{T_k-})
  double a_post = 1.0;   // a(T_k, X_{T_k})
  double c_dot = 1.0;    // dc/dtheta at (X_{T_k-}, lambda_k)
  double c_prime = 0.0;  // dc/dx at (X_{T_k-}, lambda_k)
};

// Builds the context of jump k from the latent path quantities, with u set
// to the realized fractional part.
JumpContext context_from_path(const ModelSpec& model, const PathRecord& path, std::size_t k);

// u a_pre^2 + (1-u) a_post^2: conditional variance of the efficient error.
inline double mixture_variance(const JumpContext& ctx) {
  return ctx.u * ctx.a_pre * ctx.a_pre + (1.0 - ctx.u) * ctx.a_post * ctx.a_post;
}

// sqrt(u) a_pre N- + sqrt(1-u) a_post N+, conditional on ctx.u.
double sample_limit_error(RandomStream& rng, const JumpContext& ctx);

// Same, with u drawn uniformly on (0,1) first.
double sample_limit_error_marginal(RandomStream& rng, const JumpContext& ctx);

// [u a_pre^2 + (1-u) a_post^2]^{-1}. Throws std::domain_error on a zero denominator.
double optimal_information(const JumpContext& ctx);

// c_dot^2 / [a_pre^2 (1+c')^2 u + a_post^2 (1-u)]. Throws std::domain_error
// on a zero denominator.
double parametric_information(const JumpContext& ctx);

// Informations when X_{T_k-} (first) or X_{T_k} (second) is observed too:
//   minus = c_dot^2 / [a_post^2 (1-u)],  plus = c_dot^2 / [a_pre^2 (1+c')^2 u].
// Their inverses add up to the inverse of parametric_information.
// Throws std::domain_error unless 0 < u < 1 and both denominators are nonzero.
std::pair<double, double> augmented_informations(const JumpContext& ctx);

// Variance of sum_k g_k (sqrt(u_k) a_pre,k N-_k + sqrt(1-u_k) a_post,k N+_k)
// for a smooth functional F with gradient g at J.
double functional_limit_variance(std::span<const JumpContext> contexts,
                                 std::span<const double> gradient);

}  // namespace jumpest
