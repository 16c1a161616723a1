#ifndef BITRAND_RANDINT_HPP
#define BITRAND_RANDINT_HPP

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <utility>

#include "bitrand/bitstream.hpp"
#include "bitrand/rational.hpp"

namespace bitrand {

/// Discard accounting for rejection draws.
struct DrawStats {
    std::uint64_t draws_attempted = 0;
    std::uint64_t draws_rejected = 0;
    std::uint64_t bits_consumed = 0;
};

/// Bits needed to represent every value in {0..m-1}: the bit length of
/// m-1. Note this is NOT ceil(log2(m-1)), which under-counts when m is
/// one above a power of two (m=5 needs 3 bits to reach 4, not 2) and is
/// undefined for m <= 2.
inline int bits_needed(std::uint64_t m) {
    if (m < 1) throw std::invalid_argument("bits_needed: m must be >= 1");
    return std::bit_width(m - 1);
}

/// Uniform integer on {0..m-1} by rejection: draw bits_needed(m) bits,
/// discard values >= m, repeat. Exactly uniform given fair input bits.
template <BitSource Source>
std::uint64_t randbelow(Source& source, std::uint64_t m, DrawStats& stats) {
    if (m < 1) throw std::invalid_argument("randbelow: m must be >= 1");
    const int b = bits_needed(m);
    for (;;) {
        std::uint64_t candidate = source.next_bits(b);
        ++stats.draws_attempted;
        stats.bits_consumed += static_cast<std::uint64_t>(b);
        if (candidate <= m - 1) return candidate;
        ++stats.draws_rejected;
    }
}

template <BitSource Source>
std::uint64_t randbelow(Source& source, std::uint64_t m) {
    DrawStats stats;
    return randbelow(source, m, stats);
}

/// Uniform integer on the inclusive range [lo, hi].
template <BitSource Source>
std::int64_t randint(Source& source, std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw std::invalid_argument("randint: lo > hi");
    std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + randbelow(source, span));
}

/// Exact per-round discard probability (2^b - m) / 2^b. Zero at powers
/// of two, approaching 1/2 just above them.
inline Rational rejection_rate(std::uint64_t m) {
    if (m < 1) throw std::invalid_argument("rejection_rate: m must be >= 1");
    const int b = bits_needed(m);
    const uint128 pow = uint128(1) << b;
    return Rational(static_cast<int128>(pow - m), static_cast<int128>(pow));
}

}  // namespace bitrand

#endif
