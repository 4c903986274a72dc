#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "jumpest/lamn.hpp"
#include "jumpest/simulate.hpp"

using namespace jumpest;

namespace {

// Hand-built path with one jump at time T inside cell i, constant-coefficient
// increments elsewhere set to zero.
PathRecord single_jump_path(std::size_t n, double T, double cell_increment, double lambda) {
  PathRecord p;
  p.n = n;
  p.obs.assign(n + 1, 0.0);
  p.jump_times = {T};
  p.marks = {lambda};
  std::tie(p.grid_index, p.frac) = fractional_parts(p.jump_times, n);
  const std::size_t i = p.grid_index[0];
  for (std::size_t j = i + 1; j <= n; ++j) p.obs[j] = cell_increment;
  p.x_pre = {0.0};
  p.jumps = {lambda};
  p.x_post = {lambda};
  return p;
}

// Second implementation of the per-jump statistics for the Modulated +
// BoundedSine family, written from the formulas without the library's
// coefficient evaluators.
struct Reference {
  double d_n, i_n, n_n;
};

Reference reference_stats(double sigma0, double sigma1, double eps, const PathRecord& p,
                          std::size_t k, double lambda) {
  const double n = static_cast<double>(p.n);
  const std::size_t i = p.grid_index[k];
  const double x = p.obs[i];
  const double a = sigma0 + sigma1 * std::sin(x);
  const double c = lambda * (1.0 + eps * std::cos(x));
  const double cdot = 1.0 + eps * std::cos(x);
  const double cprime = -lambda * eps * std::sin(x);
  const double a_jumped = sigma0 + sigma1 * std::sin(x + c);
  const double before = p.jump_times[k] - static_cast<double>(i) / n;
  const double after = static_cast<double>(i + 1) / n - p.jump_times[k];
  const double d = a * a * (1.0 + cprime) * (1.0 + cprime) * before + a_jumped * a_jumped * after;
  return {d, cdot * cdot / (n * d), std::sqrt(n) * (p.obs[i + 1] - x - c) / std::sqrt(n * d)};
}

// Product of Gaussian densities ratio on the jump cells, without logs.
double direct_log_ratio(const PathRecord& p, const std::vector<double>& lambda,
                        const std::vector<double>& h, double sigma, double b0) {
  const double n = static_cast<double>(p.n);
  const double sd = sigma / std::sqrt(n);
  auto density = [sd](double x, double mu) {
    const double z = (x - mu) / sd;
    return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
  };
  double ratio = 1.0;
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    const std::size_t i = p.grid_index[k];
    const double inc = p.obs[i + 1] - p.obs[i];
    const double mu = b0 / n + lambda[k];
    ratio *= density(inc, mu + h[k] / std::sqrt(n)) / density(inc, mu);
  }
  return std::log(ratio);
}

ModelSpec constant_model(double b0, double sigma, std::size_t K) {
  ModelSpec m;
  m.drift = ConstantDrift{b0};
  m.diffusion = ConstantDiffusion{sigma};
  m.jump_times = FixedCount{K};
  return m;
}

}  // namespace

TEST_CASE("constant diffusion with additive jumps: I_n = 1/sigma^2") {
  const ModelSpec m = constant_model(0.0, 1.3, 3);
  for (std::uint64_t r = 0; r < 100; ++r) {
    const PathRecord p = simulate_replicate(m, 1, r, 1000, 1);
    if (has_shared_cell(p)) continue;
    const LamnStats s = lamn_statistics(p, m, p.marks, 1000);
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(s.per_jump[k].i_n == doctest::Approx(1.0 / (1.3 * 1.3)).epsilon(1e-9));
      CHECK(s.limit_i[k] == doctest::Approx(1.0 / (1.3 * 1.3)).epsilon(1e-14));
      const std::size_t i = p.grid_index[k];
      const double expected_nn = std::sqrt(1000.0) * (p.obs[i + 1] - p.obs[i] - p.marks[k]) / 1.3;
      CHECK(s.per_jump[k].n_n == doctest::Approx(expected_nn).epsilon(1e-9));
    }
  }
}

TEST_CASE("modulated model matches an independent implementation") {
  ModelSpec m;
  m.diffusion = SineDiffusion{1.0, 0.5};
  m.drift = SineDrift{0.2, 0.1};
  m.jump = ModulatedJump{0.2};
  m.jump_times = FixedCount{4};
  std::size_t compared = 0;
  for (std::uint64_t r = 0; r < 30; ++r) {
    const PathRecord p = simulate_replicate(m, 2, r, 500, 10);
    if (has_shared_cell(p)) continue;
    // Evaluate at perturbed lambdas too, not only the true marks.
    std::vector<double> lambda = p.marks;
    for (auto& l : lambda) l += 0.05;
    const LamnStats s = lamn_statistics(p, m, lambda, 500);
    for (std::size_t k = 0; k < 4; ++k) {
      const Reference ref = reference_stats(1.0, 0.5, 0.2, p, k, lambda[k]);
      CHECK(s.per_jump[k].d_n == doctest::Approx(ref.d_n).epsilon(1e-12));
      CHECK(s.per_jump[k].i_n == doctest::Approx(ref.i_n).epsilon(1e-12));
      CHECK(s.per_jump[k].n_n == doctest::Approx(ref.n_n).epsilon(1e-12));
      CHECK(s.per_jump[k].d_n > 0.0);
      CHECK(s.per_jump[k].i_n > 0.0);
      ++compared;
    }
  }
  CHECK(compared > 80);
}

TEST_CASE("shared cells are rejected") {
  const ModelSpec m = constant_model(0.0, 1.0, 2);
  const std::vector<double> t{0.501, 0.502}, marks{1.0, 1.0};
  RandomStream rng(1, 0);
  const PathRecord p = simulate_path(m, t, marks, rng, 10, 1);
  CHECK_THROWS_AS(lamn_statistics(p, m, p.marks, 10), SharedCellError);
  CHECK_THROWS_AS(gaussian_model_loglik_ratio(p, m, p.marks, std::vector<double>{1.0, 1.0}, 10),
                  SharedCellError);
}

TEST_CASE("size mismatches are rejected") {
  const ModelSpec m = constant_model(0.0, 1.0, 1);
  const PathRecord p = simulate_replicate(m, 1, 0, 100, 1);
  CHECK_THROWS_AS(lamn_statistics(p, m, std::vector<double>{}, 100), std::invalid_argument);
  CHECK_THROWS_AS(lamn_statistics(p, m, p.marks, 99), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_model_loglik_ratio(p, m, p.marks, std::vector<double>{}, 100),
                  std::invalid_argument);
  const LamnStats s = lamn_statistics(p, m, p.marks, 100);
  CHECK_THROWS_AS(lamn_expansion_residual(0.0, s, std::vector<double>{1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("closed form needs a constant additive model") {
  ModelSpec m = constant_model(0.0, 1.0, 1);
  m.jump = ModulatedJump{0.2};
  const PathRecord p = simulate_replicate(m, 1, 0, 100, 1);
  CHECK_THROWS_AS(gaussian_model_loglik_ratio(p, m, p.marks, std::vector<double>{1.0}, 100),
                  std::invalid_argument);
}

TEST_CASE("log-likelihood ratio special cases") {
  SUBCASE("h = 0") {
    const ModelSpec m = constant_model(0.3, 1.0, 3);
    const PathRecord p = simulate_replicate(m, 3, 0, 200, 1);
    if (!has_shared_cell(p))
      CHECK(gaussian_model_loglik_ratio(p, m, p.marks, std::vector<double>(3, 0.0), 200) == 0.0);
  }
  SUBCASE("no jumps") {
    const ModelSpec m = constant_model(0.0, 1.0, 0);
    const PathRecord p = simulate_replicate(m, 3, 0, 200, 1);
    CHECK(gaussian_model_loglik_ratio(p, m, {}, {}, 200) == 0.0);
  }
  SUBCASE("zero-noise cell increment equal to lambda gives -1/2") {
    for (std::size_t n : {10u, 1000u, 100000u}) {
      const PathRecord p = single_jump_path(n, 0.4321, 0.8, 0.8);
      const std::vector<double> lambda{0.8}, h{1.0};
      const double z = gaussian_model_loglik_ratio(p, lambda, h, n, 1.0, 0.0);
      CHECK(z == doctest::Approx(-0.5).epsilon(1e-9));
      CHECK(z == doctest::Approx(direct_log_ratio(p, lambda, h, 1.0, 0.0)).epsilon(1e-9));
    }
  }
}

TEST_CASE("closed form agrees with direct density evaluation") {
  const ModelSpec m = constant_model(0.4, 0.9, 3);
  for (std::uint64_t r = 0; r < 50; ++r) {
    const PathRecord p = simulate_replicate(m, 4, r, 400, 1);
    if (has_shared_cell(p)) continue;
    const std::vector<double> h{1.0, -2.0, 0.5};
    const double z = gaussian_model_loglik_ratio(p, m, p.marks, h, 400);
    CHECK(z == doctest::Approx(direct_log_ratio(p, p.marks, h, 0.9, 0.4)).epsilon(1e-9));
  }
}

TEST_CASE("expansion residual") {
  const ModelSpec m0 = constant_model(0.0, 1.0, 2);
  const PathRecord p = simulate_replicate(m0, 5, 0, 1000, 1);
  REQUIRE_FALSE(has_shared_cell(p));
  const LamnStats s = lamn_statistics(p, m0, p.marks, 1000);

  SUBCASE("h = 0 leaves z_n") {
    CHECK(lamn_expansion_residual(0.37, s, std::vector<double>{0.0, 0.0}) == 0.37);
  }
  SUBCASE("zero drift: the expansion is exact") {
    for (double h : {-2.0, -1.0, 1.0, 2.0}) {
      const std::vector<double> hv{h, -0.5 * h};
      const double z = gaussian_model_loglik_ratio(p, m0, p.marks, hv, 1000);
      CHECK(std::abs(lamn_expansion_residual(z, s, hv)) < 1e-10);
    }
  }
  SUBCASE("nonzero drift leaves -h b0 / (sigma^2 sqrt n) per jump") {
    // The cell mean is b0/n + lambda while N_n centers at lambda, so
    // z_n - h sqrt(I_n) N_n + h^2 I_n / 2 = -h b0 / (sigma^2 sqrt(n)).
    for (double sigma : {1.0, 1.5}) {
      for (std::size_t n : {1000u, 4000u, 16000u}) {
        const ModelSpec m = constant_model(0.5, sigma, 1);
        const PathRecord q = simulate_replicate(m, 6, 0, n, 1);
        const LamnStats sq = lamn_statistics(q, m, q.marks, n);
        const std::vector<double> h{1.0};
        const double z = gaussian_model_loglik_ratio(q, m, q.marks, h, n);
        const double expected = -0.5 / (sigma * sigma * std::sqrt(static_cast<double>(n)));
        CHECK(lamn_expansion_residual(z, sq, h) == doctest::Approx(expected).epsilon(1e-6));
      }
    }
  }
}
