#pragma once

#include <cstdint>
#include <random>

namespace jumpest {

// SplitMix64 finalizer; used only to derive engine seeds from stream keys.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// A random stream keyed by (master_seed, stream_index, substream).
//
// The engine state depends only on the key, so a replicate's draws are the
// same whether replicates run serially or on any number of threads.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t stream_index,
               std::uint64_t substream = 0) {
    const std::uint64_t a = mix64(master_seed);
    const std::uint64_t b = mix64(a ^ mix64(stream_index + 0x632be59bd9b4e019ULL));
    const std::uint64_t c = mix64(b ^ mix64(substream + 0x8cb92ba72f3d8dd7ULL));
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
    engine_.seed(seq);
  }

  // Uniform on the open interval (0,1), 53-bit resolution.
  double uniform() {
    for (;;) {
      const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
      if (u > 0.0) return u;
    }
  }

  double normal() { return normal_(engine_); }

  std::uint64_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    std::poisson_distribution<std::uint64_t> dist(mean);
    return dist(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace jumpest
