#pragma once

#include <span>
#include <vector>

#include "jumpest/simulate.hpp"

namespace jumpest {

inline constexpr double kDefaultVarpi = 0.3;
inline constexpr double kDefaultAlpha = 1.0;

// Threshold jump estimator output.
struct DetectionResult {
  std::size_t n = 0;
  double varpi = 0.0;  // 0 when the threshold was supplied directly
  double alpha = 0.0;
  double threshold = 0.0;
  std::vector<std::size_t> detected_indices;  // cells i with |X_{(i+1)/n} - X_{i/n}| >= threshold
  std::size_t k_hat = 0;
  std::vector<double> j_hat;  // increment over each detected cell, length k_hat

  // Estimated k-th jump, zero past the estimated count.
  double jump(std::size_t k) const { return k < j_hat.size() ? j_hat[k] : 0.0; }
};

// u_n = alpha n^{-varpi}. Throws std::invalid_argument unless n >= 1,
// 0 < varpi < 1/2 and alpha > 0.
double threshold(std::size_t n, double varpi, double alpha);

// Scans the increments in order and keeps every cell whose absolute
// increment reaches u_n. Requires obs.size() >= 1 and u_n > 0.
DetectionResult detect_jumps(std::span<const double> obs, double u_n);

// detect_jumps with u_n = threshold(n, varpi, alpha), n = obs.size() - 1.
DetectionResult estimate_jumps(std::span<const double> obs, double varpi, double alpha);

struct ErrorRecord {
  bool aligned = false;                // K_hat == K and every detected cell is the true cell
  std::vector<double> scaled_errors;   // sqrt(n) (J_hat_k - J_k), both zero-padded
  std::vector<double> raw_errors;      // J_hat_k - J_k
};

ErrorRecord estimation_error(const DetectionResult& det, const PathRecord& truth);

}  // namespace jumpest
