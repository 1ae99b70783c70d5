#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

namespace ecca {

// splitmix64 finalizer. Used for seed expansion and substream derivation.
std::uint64_t mix64(std::uint64_t z);

// Deterministic per-task seed stream: task k of a run seeded with `base`
// draws from substream_seed(base, k). Same recipe everywhere (replicates,
// permutations, splits) so runs reproduce bit-for-bit across platforms
// and thread counts.
std::uint64_t substream_seed(std::uint64_t base, std::uint64_t index);

/// xoshiro256++ with splitmix64 seeding. All distributions below are
/// implemented explicitly on top of next() so that sequences are identical
/// on every platform (std::normal_distribution and friends are not
/// specified bit-exactly by the standard).
class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next();

    // Uniform on [0, 1), 53-bit resolution.
    double uniform();
    // Uniform on [a, b).
    double uniform(double a, double b);
    // Standard normal via Box-Muller; pairs are cached internally.
    double normal();
    double normal(double mean, double stddev);
    // Uniform integer in [0, n), unbiased by rejection. n must be > 0.
    std::uint64_t below(std::uint64_t n);
    // Fisher-Yates permutation of {0, ..., n-1}.
    std::vector<std::size_t> permutation(std::size_t n);

  private:
    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace ecca
