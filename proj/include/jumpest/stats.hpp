#pragma once

#include <functional>
#include <span>
#include <vector>

namespace jumpest {

struct KsResult {
  double distance = 0.0;         // sup |F_m - F|
  double critical_1pct = 0.0;    // 1.628 / sqrt(m), asymptotic Kolmogorov quantile
  bool passes() const { return distance < critical_1pct; }
};

// One-sample Kolmogorov-Smirnov distance against a continuous cdf.
// Throws std::invalid_argument on an empty sample.
KsResult ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf);

double standard_normal_cdf(double x);
double uniform01_cdf(double x);

double mean(std::span<const double> xs);
// Unbiased sample variance; NaN for fewer than two values.
double sample_variance(std::span<const double> xs);
// NaN for an empty sample.
double median(std::vector<double> xs);

}  // namespace jumpest
