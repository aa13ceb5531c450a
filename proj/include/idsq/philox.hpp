#pragma once

#include <array>
#include <cstdint>

namespace idsq {

/// Philox4x32-10 counter-based generator (Salmon et al., "Parallel random
/// numbers: as easy as 1, 2, 3"). Output is a pure function of (key, counter),
/// so any sample can be regenerated independently of thread layout.
class Philox4x32 {
public:
    using Block = std::array<std::uint32_t, 4>;

    explicit constexpr Philox4x32(std::uint64_t seed)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

    constexpr Block operator()(std::uint64_t counter_lo, std::uint64_t counter_hi = 0) const {
        Block ctr{static_cast<std::uint32_t>(counter_lo), static_cast<std::uint32_t>(counter_lo >> 32),
                  static_cast<std::uint32_t>(counter_hi), static_cast<std::uint32_t>(counter_hi >> 32)};
        std::array<std::uint32_t, 2> key = key_;
        for (int round = 0; round < 10; ++round) {
            ctr = single_round(ctr, key);
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }

    /// Uniform double in (0, 1] from 64 random bits (53 retained).
    static constexpr double to_unit_open_closed(std::uint32_t hi, std::uint32_t lo) {
        std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32 | lo) >> 11;
        return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static constexpr Block single_round(const Block& c, const std::array<std::uint32_t, 2>& k) {
        std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
        std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
        return {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
                static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
    }

    std::array<std::uint32_t, 2> key_;
};

}  // namespace idsq
