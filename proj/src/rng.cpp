#include "afdm/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace afdm {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Substream seed: splitmix-style hash of (master_seed, stream_index).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t s = master;
    std::uint64_t a = splitmix64(s);
    s = a ^ (index + 0x632BE59BD9B4E019ULL);
    std::uint64_t b = splitmix64(s);
    s = b;
    return splitmix64(s);
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : master_seed_(master_seed), stream_index_(stream_index),
      gen_(derive_seed(master_seed, stream_index)) {}

std::uint64_t RngStream::next_u64() { return gen_(); }

double RngStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // u1 in (0, 1] so the log never sees zero
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double ang = kTwoPi * u2;
    spare_ = r * std::sin(ang);
    has_spare_ = true;
    return r * std::cos(ang);
}

std::uint64_t RngStream::below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("RngStream::below: zero bound");
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % bound;
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % bound;
}

ComplexVec sample_cscg(RngStream& rng, std::size_t n, double variance) {
    if (variance < 0.0 || !std::isfinite(variance))
        throw std::invalid_argument("sample_cscg: variance must be finite and >= 0");
    ComplexVec out(n);
    const double scale = std::sqrt(variance / 2.0);
    for (Complex& v : out) {
        const double re = rng.gaussian();
        const double im = rng.gaussian();
        v = {scale * re, scale * im};
    }
    return out;
}

std::vector<int> random_bits(RngStream& rng, std::size_t n) {
    std::vector<int> bits(n);
    std::uint64_t word = 0;
    int left = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (left == 0) {
            word = rng.next_u64();
            left = 64;
        }
        bits[i] = static_cast<int>(word & 1u);
        word >>= 1;
        --left;
    }
    return bits;
}

}  // namespace afdm
