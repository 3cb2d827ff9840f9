#pragma once

#include <array>
#include <cstdint>
#include <limits>

#include <boost/multiprecision/cpp_int.hpp>

namespace contig {

/**
 * Philox4x32-10 counter-based generator. The 64-bit key selects a family
 * and the 64-bit stream id the upper half of the counter, so (seed,
 * stream) pairs give independent sequences without any seeding cost.
 */
class Philox {
public:
    using result_type = std::uint64_t;
    using Block = std::array<std::uint32_t, 4>;

    Philox(std::uint64_t key, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)},
          stream_(stream)
    {
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()()
    {
        if (have_ == 0) {
            const Block ctr{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                            static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
            buf_ = encrypt(ctr, key_);
            ++block_;
            have_ = 2;
        }
        --have_;
        const std::size_t i = have_ == 1 ? 0 : 2;
        return std::uint64_t{buf_[i]} | (std::uint64_t{buf_[i + 1]} << 32);
    }

    /// Ten Philox rounds on one counter block.
    static Block encrypt(Block ctr, std::array<std::uint32_t, 2> key)
    {
        constexpr std::uint32_t m0 = 0xD2511F53, m1 = 0xCD9E8D57;
        constexpr std::uint32_t w0 = 0x9E3779B9, w1 = 0xBB67AE85;
        for (int r = 0; r < 10; ++r) {
            const std::uint64_t p0 = std::uint64_t{m0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{m1} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
            key[0] += w0;
            key[1] += w1;
        }
        return ctr;
    }

private:
    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    Block buf_{};
    int have_ = 0;
};

using Rng = Philox;

inline Rng stream_rng(std::uint64_t seed, std::uint64_t stream) { return Rng(seed, stream); }

/// Uniform integer in [0, n), n > 0, by multiply-and-reject.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n)
{
    __extension__ using u128 = unsigned __int128;
    u128 m = static_cast<u128>(rng()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
        const std::uint64_t t = (0 - n) % n;
        while (low < t) {
            m = static_cast<u128>(rng()) * n;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform big integer in [0, bound) by rejection on the bit length; bound > 0.
inline boost::multiprecision::cpp_int uniform_below(Rng& rng, const boost::multiprecision::cpp_int& bound)
{
    using boost::multiprecision::cpp_int;
    const unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(bound)) + 1;
    for (;;) {
        cpp_int r = 0;
        unsigned have = 0;
        while (have < bits) {
            r <<= 64;
            r |= cpp_int(rng());
            have += 64;
        }
        r >>= (have - bits);
        if (r < bound)
            return r;
    }
}

}  // namespace contig
