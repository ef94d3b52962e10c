#pragma once

#include <array>
#include <cstdint>

// Philox 4x32-10 counter-based generator (Salmon et al., SC 2011). A draw is a
// pure function of (key, counter), so independently indexed draws are
// reproducible regardless of generation order or thread count.

namespace chlab {

struct Philox4x32 {
    static constexpr std::uint32_t kMultA = 0xD2511F53u;
    static constexpr std::uint32_t kMultB = 0xCD9E8D57u;
    static constexpr std::uint32_t kBumpA = 0x9E3779B9u;
    static constexpr std::uint32_t kBumpB = 0xBB67AE85u;

    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                              std::array<std::uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t prod0 = std::uint64_t(kMultA) * counter[0];
            const std::uint64_t prod1 = std::uint64_t(kMultB) * counter[2];
            const std::uint32_t lo0 = std::uint32_t(prod0), hi0 = std::uint32_t(prod0 >> 32);
            const std::uint32_t lo1 = std::uint32_t(prod1), hi1 = std::uint32_t(prod1 >> 32);
            counter = {hi1 ^ counter[1] ^ key[0], lo1, hi0 ^ counter[3] ^ key[1], lo0};
            key[0] += kBumpA;
            key[1] += kBumpB;
        }
        return counter;
    }
};

// Uniform draws addressed by (seed, stream, index, slot). `stream` separates
// independent substreams (setting pairs, fit starts); `index` is the trial or
// coordinate; `slot` the draw within a trial.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint32_t stream) : seed_(seed), stream_(stream) {}

    std::uint64_t bits64(std::uint64_t index, std::uint32_t slot) const {
        const std::array<std::uint32_t, 4> ctr = {
            std::uint32_t(index), std::uint32_t(index >> 32), slot, stream_};
        const std::array<std::uint32_t, 2> key = {std::uint32_t(seed_),
                                                  std::uint32_t(seed_ >> 32)};
        const auto x = Philox4x32::block(ctr, key);
        return (std::uint64_t(x[0]) << 32) | x[1];
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform(std::uint64_t index, std::uint32_t slot) const {
        return double(bits64(index, slot) >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t seed_;
    std::uint32_t stream_;
};

}  // namespace chlab
