#include "risem/rng.hpp"

namespace risem {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53U;
constexpr std::uint32_t kMul1 = 0xCD9E8D57U;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9U;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85U;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) noexcept {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
    : seed_(seed), stream_id_(stream_id) {}

void RngStream::refill() noexcept {
    const std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
        static_cast<std::uint32_t>(stream_id_), static_cast<std::uint32_t>(stream_id_ >> 32)};
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                              static_cast<std::uint32_t>(seed_ >> 32)};
    buffer_ = philox4x32_10(ctr, key);
    ++block_;
    buffered_ = 4;
}

std::uint64_t RngStream::next_u64() noexcept {
    if (buffered_ < 2) refill();
    const std::uint64_t lo = buffer_[4 - buffered_];
    const std::uint64_t hi = buffer_[5 - buffered_];
    buffered_ -= 2;
    return (hi << 32) | lo;
}

double RngStream::uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_positive() noexcept {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

RngStream RngStream::split(std::uint64_t index) const noexcept {
    return RngStream(seed_, mix64(stream_id_ ^ mix64(index + 0x632BE59BD9B4E019ULL)));
}

}  // namespace risem
