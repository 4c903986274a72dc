#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "jumpest/model.hpp"
#include "jumpest/rng.hpp"

namespace jumpest {

// One simulated trajectory on the grid {i/n}, together with the latent
// quantities at every jump.
struct PathRecord {
  std::size_t n = 0;
  std::vector<double> obs;  // X_{i/n}, i = 0..n

  std::vector<double> jump_times;        // T_k, increasing, in (0,1)
  std::vector<double> marks;             // Lambda_k
  std::vector<std::size_t> grid_index;   // i_k = floor(n T_k)
  std::vector<double> frac;              // n T_k - i_k in [0,1)
  std::vector<double> x_pre;             // X_{T_k-}
  std::vector<double> x_post;            // X_{T_k}
  std::vector<double> jumps;             // c(X_{T_k-}, Lambda_k)
  std::vector<double> w_before;          // W_{T_k} - W_{i_k/n}
  std::vector<double> w_after;           // W_{(i_k+1)/n} - W_{T_k}
  std::vector<double> w_cell;            // W_{(i_k+1)/n} - W_{i_k/n}, running sum over the cell

  std::uint64_t master_seed = 0;
  std::uint64_t replicate_index = 0;

  std::size_t jump_count() const { return jump_times.size(); }
};

// True when some observation cell [i/n, (i+1)/n) holds two or more jumps.
bool has_shared_cell(const PathRecord& path);

std::vector<double> sample_jump_times(RandomStream& rng, const JumpTimeLaw& law);
std::vector<double> sample_marks(RandomStream& rng, const MarkLaw& law, std::size_t count);

// (i_k, n T_k - i_k) for each jump time. A time on a grid point i/n belongs
// to cell i.
std::pair<std::vector<std::size_t>, std::vector<double>> fractional_parts(
    std::span<const double> times, std::size_t n);

// Euler-Maruyama on the grid refined by the jump times. Each piece between
// refinement points of length L is cut into max(1, ceil(substeps n L))
// steps, so an observation interval never holds more than `substeps` steps
// per piece. Models with constant drift and diffusion use a single exact
// Gaussian step per piece. Jumps are applied atomically at T_k.
//
// Throws std::invalid_argument if times are not sorted in (0,1), sizes
// differ, n == 0 or substeps == 0.
PathRecord simulate_path(const ModelSpec& model, std::span<const double> times,
                         std::span<const double> marks, RandomStream& rng, std::size_t n,
                         std::size_t substeps);

// Draws T and Lambda from the model's laws, then the path, all from the
// stream keyed by (master_seed, replicate_index, substream).
PathRecord simulate_replicate(const ModelSpec& model, std::uint64_t master_seed,
                              std::uint64_t replicate_index, std::size_t n, std::size_t substeps,
                              std::uint64_t substream = 0);

}  // namespace jumpest
