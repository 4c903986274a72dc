#include "jumpest/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace jumpest {

double threshold(std::size_t n, double varpi, double alpha) {
  if (n < 1) throw std::invalid_argument("threshold: n must be >= 1");
  if (!(varpi > 0.0 && varpi < 0.5)) {
    std::ostringstream os;
    os << "threshold: varpi must lie in (0, 1/2), got " << varpi;
    throw std::invalid_argument(os.str());
  }
  if (!(alpha > 0.0)) throw std::invalid_argument("threshold: alpha must be positive");
  return alpha * std::pow(static_cast<double>(n), -varpi);
}

DetectionResult detect_jumps(std::span<const double> obs, double u_n) {
  if (obs.empty()) throw std::invalid_argument("detect_jumps: need at least one observation");
  if (!(u_n > 0.0)) throw std::invalid_argument("detect_jumps: threshold must be positive");
  DetectionResult r;
  r.n = obs.size() - 1;
  r.threshold = u_n;
  for (std::size_t i = 0; i + 1 < obs.size(); ++i) {
    const double inc = obs[i + 1] - obs[i];
    if (std::abs(inc) >= u_n) {
      r.detected_indices.push_back(i);
      r.j_hat.push_back(inc);
    }
  }
  r.k_hat = r.detected_indices.size();
  return r;
}

DetectionResult estimate_jumps(std::span<const double> obs, double varpi, double alpha) {
  if (obs.size() < 2) throw std::invalid_argument("estimate_jumps: need at least two observations");
  auto r = detect_jumps(obs, threshold(obs.size() - 1, varpi, alpha));
  r.varpi = varpi;
  r.alpha = alpha;
  return r;
}

ErrorRecord estimation_error(const DetectionResult& det, const PathRecord& truth) {
  ErrorRecord e;
  const std::size_t K = truth.jump_count();
  e.aligned = det.k_hat == K &&
              std::equal(det.detected_indices.begin(), det.detected_indices.end(),
                         truth.grid_index.begin());
  const std::size_t len = std::max(det.k_hat, K);
  const double root_n = std::sqrt(static_cast<double>(truth.n));
  e.raw_errors.resize(len);
  e.scaled_errors.resize(len);
  for (std::size_t k = 0; k < len; ++k) {
    const double truth_k = k < K ? truth.jumps[k] : 0.0;
    e.raw_errors[k] = det.jump(k) - truth_k;
    e.scaled_errors[k] = root_n * e.raw_errors[k];
  }
  return e;
}

}  // namespace jumpest
