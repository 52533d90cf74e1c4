// rng.hpp - seeded, substream-capable random number generation
//
// Every Monte Carlo frame owns one RngStream derived from
// (master_seed, stream_index). Identical pairs reproduce identical sample
// sequences no matter how frames are scheduled across threads, which keeps
// whole simulation runs byte-reproducible.

#pragma once

#include "afdm/types.hpp"

#include <cstdint>
#include <random>

namespace afdm {

class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream_index() const { return stream_index_; }

    std::uint64_t next_u64();

    /// Uniform double in [0, 1).
    double uniform();

    /// Standard normal via Box-Muller (own implementation: the C++ library
    /// distributions are not bit-stable across standard libraries).
    double gaussian();

    /// Uniform integer in [0, bound), rejection-sampled to stay unbiased.
    std::uint64_t below(std::uint64_t bound);

private:
    std::uint64_t master_seed_ = 0;
    std::uint64_t stream_index_ = 0;
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// n i.i.d. circularly symmetric complex Gaussian samples with total
/// variance `variance` (variance/2 per real dimension).
ComplexVec sample_cscg(RngStream& rng, std::size_t n, double variance);

/// n fair bits packed as 0/1 ints, consuming one 64-bit word per 64 bits.
std::vector<int> random_bits(RngStream& rng, std::size_t n);

}  // namespace afdm
