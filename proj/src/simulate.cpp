#include "jumpest/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>

namespace jumpest {

bool has_shared_cell(const PathRecord& path) {
  return std::adjacent_find(path.grid_index.begin(), path.grid_index.end()) !=
         path.grid_index.end();
}

std::vector<double> sample_jump_times(RandomStream& rng, const JumpTimeLaw& law) {
  const std::size_t count =
      std::visit(overloaded{[](const FixedCount& f) { return f.K; },
                            [&rng](const PoissonArrivals& p) {
                              return static_cast<std::size_t>(rng.poisson(p.rho));
                            }},
                 law);
  // Given the count, Poisson arrival times on [0,1] are uniform order statistics.
  std::vector<double> times(count);
  for (auto& t : times) t = rng.uniform();
  std::sort(times.begin(), times.end());
  return times;
}

std::vector<double> sample_marks(RandomStream& rng, const MarkLaw& law, std::size_t count) {
  std::vector<double> out(count);
  std::visit(overloaded{[&](const UniformMarks& u) {
                          for (auto& v : out) v = u.lo + (u.hi - u.lo) * rng.uniform();
                        },
                        [&](const GaussianShiftedMarks& g) {
                          for (auto& v : out) {
                            const double raw = g.mu + g.sd * rng.normal();
                            const double mag = std::max(std::abs(raw), g.floor);
                            v = raw < 0.0 ? -mag : mag;
                          }
                        }},
             law);
  return out;
}

std::pair<std::vector<std::size_t>, std::vector<double>> fractional_parts(
    std::span<const double> times, std::size_t n) {
  std::vector<std::size_t> index(times.size());
  std::vector<double> frac(times.size());
  const double dn = static_cast<double>(n);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double scaled = dn * times[k];
    double cell = std::floor(scaled);
    if (cell >= dn) cell = dn - 1.0;  // guards T rounding up to 1
    index[k] = static_cast<std::size_t>(cell);
    frac[k] = scaled - cell;
  }
  return {std::move(index), std::move(frac)};
}

PathRecord simulate_path(const ModelSpec& model, std::span<const double> times,
                         std::span<const double> marks, RandomStream& rng, std::size_t n,
                         std::size_t substeps) {
  if (n == 0) throw std::invalid_argument("simulate_path: n must be positive");
  if (substeps == 0) throw std::invalid_argument("simulate_path: substeps must be >= 1");
  if (times.size() != marks.size())
    throw std::invalid_argument("simulate_path: jump times and marks differ in length");
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!(times[k] > 0.0 && times[k] < 1.0))
      throw std::invalid_argument("simulate_path: jump time outside (0,1)");
    if (k > 0 && !(times[k - 1] < times[k]))
      throw std::invalid_argument("simulate_path: jump times must be strictly increasing");
  }

  const std::size_t K = times.size();
  PathRecord p;
  p.n = n;
  p.jump_times.assign(times.begin(), times.end());
  p.marks.assign(marks.begin(), marks.end());
  std::tie(p.grid_index, p.frac) = fractional_parts(times, n);
  p.x_pre.resize(K);
  p.x_post.resize(K);
  p.jumps.resize(K);
  p.w_before.resize(K);
  p.w_after.resize(K);
  p.w_cell.resize(K);
  p.obs.reserve(n + 1);

  const bool exact = model.constant_coefficients();
  const double dn = static_cast<double>(n);
  const double step_density = static_cast<double>(substeps);

  double x = model.x0;
  p.obs.push_back(x);

  std::size_t k = 0;
  std::vector<std::size_t> open;  // jumps in the current cell still accumulating w_after
  for (std::size_t i = 0; i < n; ++i) {
    const double cell_start = static_cast<double>(i) / dn;
    double w_sum = 0.0;
    open.clear();

    // Integrate the continuous part from cell fraction `from` to `to`.
    auto advance = [&](double from, double to) {
      if (!(to > from)) return;
      const std::size_t steps =
          exact ? 1
                : std::max<std::size_t>(
                      1, static_cast<std::size_t>(std::ceil(step_density * (to - from) - 1e-9)));
      const double piece = (to - from) / dn;
      const double dt = piece / static_cast<double>(steps);
      const double sqrt_dt = std::sqrt(dt);
      for (std::size_t s = 0; s < steps; ++s) {
        const double t = cell_start + (from + (to - from) * static_cast<double>(s) /
                                                  static_cast<double>(steps)) / dn;
        const double dw = sqrt_dt * rng.normal();
        x += eval_drift(model, t, x) * dt + eval_diffusion(model, t, x) * dw;
        w_sum += dw;
        for (std::size_t j : open) p.w_after[j] += dw;
      }
    };

    double pos = 0.0;
    for (; k < K && p.grid_index[k] == i; ++k) {
      advance(pos, p.frac[k]);
      p.w_before[k] = w_sum;
      p.x_pre[k] = x;
      p.jumps[k] = eval_jump(model, x, p.marks[k]);
      x += p.jumps[k];
      p.x_post[k] = x;
      open.push_back(k);
      pos = p.frac[k];
    }
    advance(pos, 1.0);
    for (std::size_t j : open) p.w_cell[j] = w_sum;

    if (!std::isfinite(x))
      throw std::runtime_error("simulate_path: non-finite state at grid index " +
                               std::to_string(i + 1));
    p.obs.push_back(x);
  }
  return p;
}

PathRecord simulate_replicate(const ModelSpec& model, std::uint64_t master_seed,
                              std::uint64_t replicate_index, std::size_t n, std::size_t substeps,
                              std::uint64_t substream) {
  RandomStream rng(master_seed, replicate_index, substream);
  const auto times = sample_jump_times(rng, model.jump_times);
  const auto marks = sample_marks(rng, model.marks, times.size());
  PathRecord p = simulate_path(model, times, marks, rng, n, substeps);
  p.master_seed = master_seed;
  p.replicate_index = replicate_index;
  return p;
}

}  // namespace jumpest
