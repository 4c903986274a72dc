#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "jumpest/model.hpp"
#include "jumpest/simulate.hpp"

namespace jumpest {

// Raised when an observation cell holds more than one jump; the explicit
// LAMN statistics and likelihood ratio are only defined off that event.
class SharedCellError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct LamnJumpStats {
  double d_n = 0.0;  // conditional variance of the jump-cell increment
  double i_n = 0.0;  // c_dot(X_{i_k/n}, lambda_k)^2 / (n d_n)
  double n_n = 0.0;  // standardized jump-cell residual
};

struct LamnStats {
  std::vector<LamnJumpStats> per_jump;
  std::vector<double> limit_i;  // limiting information at u = realized fractional part
};

// For each jump k with cell i = i_k and x = X_{i/n}:
//   d_n = a^2(i/n, x) (1 + c'(x, l_k))^2 (T_k - i/n) + a^2(i/n, x + c(x, l_k)) ((i+1)/n - T_k)
//   i_n = c_dot(x, l_k)^2 / (n d_n)
//   n_n = sqrt(n) (X_{(i+1)/n} - x - c(x, l_k)) / sqrt(n d_n)
// Throws SharedCellError if two jumps share a cell, std::invalid_argument on
// size mismatches.
LamnStats lamn_statistics(const PathRecord& path, const ModelSpec& model,
                          std::span<const double> lambda, std::size_t n);

// log p_{lambda + h/sqrt(n)} / p_lambda of the observations for constant
// drift b0, constant volatility sigma and additive jumps, given the jump
// times. Only jump cells depend on lambda; each is N(b0/n + lambda_k, sigma^2/n).
double gaussian_model_loglik_ratio(const PathRecord& path, std::span<const double> lambda,
                                   std::span<const double> h, std::size_t n, double sigma,
                                   double b0);

// As above, reading sigma and b0 from the model. Throws std::invalid_argument
// unless the model has constant drift, constant diffusion and additive jumps.
double gaussian_model_loglik_ratio(const PathRecord& path, const ModelSpec& model,
                                   std::span<const double> lambda, std::span<const double> h,
                                   std::size_t n);

// z_n - sum_k h_k sqrt(i_n,k) n_n,k + 1/2 sum_k h_k^2 i_n,k
double lamn_expansion_residual(double z_n, const LamnStats& stats, std::span<const double> h);

}  // namespace jumpest
