#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace risem {

/// Counter-based pseudo-random stream (Philox4x32-10).
///
/// The key is the 64-bit seed and the upper half of the counter is the
/// 64-bit stream id, so (seed, stream_id) fully determines the sequence and
/// distinct stream ids never share counter space. Substreams for parallel
/// workers are obtained with split(), which is a pure function of the parent
/// identity and the index: results do not depend on how work is scheduled.
///
/// Satisfies std::uniform_random_bit_generator.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept { return next_u64(); }

    std::uint64_t next_u64() noexcept;

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;

    /// Uniform on (0, 1]; safe as a log() argument.
    double uniform_positive() noexcept;

    /// Independent child stream keyed by (seed, stream_id, index).
    [[nodiscard]] RngStream split(std::uint64_t index) const noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    /// Number of 128-bit blocks consumed so far.
    std::uint64_t blocks_consumed() const noexcept { return block_; }

private:
    void refill() noexcept;

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    unsigned buffered_ = 0;
};

/// One Philox4x32-10 block.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

/// SplitMix64 finalizer; used to derive substream ids.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace risem
