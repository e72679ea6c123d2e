#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

namespace adaptrand {

/// SplitMix64 finalizer; a bijective 64-bit mixing function.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/*
 * Counter-based random stream. Output k of stream (seed, id) is
 * mix64(key + (k + 1) * golden) with key derived from (seed, id) alone, so any
 * (seed, id) pair reproduces the same sequence independent of which worker
 * draws it or in which order streams are visited. All derived variates use
 * explicit algorithms (no std:: distributions), which keeps the sequences
 * identical across standard libraries.
 */
class RngStream {
   public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t next_u64();

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();

    /// Uniform integer on [0, n); n must be positive.
    std::uint32_t uniform_int(std::uint32_t n);

    /// Standard normal variate (Marsaglia polar method).
    double normal();

    /// Bernoulli(p) draw.
    bool bernoulli(double p) { return uniform() < p; }

    /// Fisher-Yates shuffle.
    template <class T>
    void shuffle(std::span<T> values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            const std::size_t j = uniform_int(static_cast<std::uint32_t>(i));
            std::swap(values[i - 1], values[j]);
        }
    }

   private:
    std::uint64_t master_seed_;
    std::uint64_t stream_id_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace adaptrand
