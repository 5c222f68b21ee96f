#pragma once

// Counter-based RNG (Philox4x32-10, Salmon et al., SC 2011) with splittable
// streams. A (seed, stream) pair addresses an independent sequence; campaigns
// assign one stream per simulated path so that serial and parallel runs of
// the same campaign produce identical draws.

#include <array>
#include <cmath>
#include <cstdint>

namespace levyexit {

class Philox {
public:
    Philox(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          ctr_{0, 0, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

    // One 128-bit block for an explicit key/counter. Matches the reference
    // Philox4x32-10 sequence (multipliers D2511F53/CD9E8D57, Weyl constants
    // 9E3779B9/BB67AE85, key bumped between rounds).
    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 2> key,
                                              std::array<std::uint32_t, 4> ctr) {
        for (int round = 0; round < 10; ++round) {
            if (round != 0) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }

    std::uint64_t next_u64() {
        if (pos_ >= 4) {
            buf_ = block(key_, ctr_);
            pos_ = 0;
            if (++ctr_[0] == 0) ++ctr_[1];  // draw counter; stream words untouched
        }
        const std::uint64_t lo = buf_[pos_];
        const std::uint64_t hi = buf_[pos_ + 1];
        pos_ += 2;
        return lo | (hi << 32);
    }

    // Uniform on [0,1), 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on the open interval (0,1); safe under log().
    double uniform_open() {
        return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
    }

    double exponential(double rate) { return -std::log(uniform_open()) / rate; }

    // Standard normal via Box-Muller; the spare value is buffered, so draw
    // order (not call sites) determines the sequence.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform_open()));
        const double t = 6.283185307179586476925286766559 * uniform_open();
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

private:
    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> ctr_;
    std::array<std::uint32_t, 4> buf_{};
    int pos_ = 4;
    double spare_ = 0;
    bool have_spare_ = false;
};

// Address of one independent draw sequence.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    Philox open() const { return Philox(seed, stream); }
};

}  // namespace levyexit
