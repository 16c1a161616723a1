#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <map>
#include <vector>

#include "bitrand/bitstream.hpp"
#include "bitrand/experiments.hpp"
#include "bitrand/randint.hpp"

using namespace bitrand;

namespace {

// Bit string of length len encoding `value`, MSB first.
std::vector<std::uint8_t> encode_bits(std::uint64_t value, int len) {
    std::vector<std::uint8_t> bits(len);
    for (int i = 0; i < len; ++i) bits[i] = (value >> (len - 1 - i)) & 1u;
    return bits;
}

}  // namespace

TEST_CASE("bits_needed is the bit length of m-1") {
    CHECK(bits_needed(1) == 0);
    CHECK(bits_needed(2) == 1);
    CHECK(bits_needed(3) == 2);
    CHECK(bits_needed(4) == 2);
    CHECK(bits_needed(5) == 3);  // ceil(log2(4)) = 2 would under-count
    CHECK(bits_needed(8) == 3);
    CHECK(bits_needed(9) == 4);
    CHECK(bits_needed((std::uint64_t(1) << 20) + 1) == 21);
    CHECK_THROWS_AS(bits_needed(0), std::invalid_argument);
}

TEST_CASE("bits_needed postcondition: 2^b >= m and minimal") {
    for (std::uint64_t m = 1; m <= 1000; ++m) {
        int b = bits_needed(m);
        CHECK((std::uint64_t(1) << b) >= m);
        if (b > 0) CHECK((std::uint64_t(1) << (b - 1)) < m);
    }
}

TEST_CASE("randbelow m=1 consumes nothing") {
    FixedBitSource src({});
    DrawStats stats;
    CHECK(randbelow(src, 1, stats) == 0);
    CHECK(stats.bits_consumed == 0);
    CHECK(src.bits_consumed() == 0);
}

TEST_CASE("randbelow power of two never rejects") {
    FixedBitSource src({1, 1});
    DrawStats stats;
    CHECK(randbelow(src, 4, stats) == 3);
    CHECK(stats.draws_rejected == 0);
    CHECK(stats.draws_attempted == 1);
}

TEST_CASE("randbelow m=3 rejection trace") {
    // first draw 11 = 3 > 2 rejected; second draw 01 = 1 accepted
    FixedBitSource src({1, 1, 0, 1});
    DrawStats stats;
    CHECK(randbelow(src, 3, stats) == 1);
    CHECK(stats.draws_rejected == 1);
    CHECK(stats.draws_attempted == 2);
    CHECK(stats.bits_consumed == 4);
}

TEST_CASE("randbelow propagates exhaustion") {
    FixedBitSource src({1, 1});  // single rejected draw for m=3, then dry
    CHECK_THROWS_AS(randbelow(src, 3), BitsExhausted);
    FixedBitSource empty({});
    CHECK_THROWS_AS(randbelow(empty, 2), BitsExhausted);
}

TEST_CASE("randbelow rejects m=0") {
    FixedBitSource src({1});
    CHECK_THROWS_AS(randbelow(src, 0), std::invalid_argument);
}

TEST_CASE("randint examples") {
    {
        FixedBitSource src({});
        CHECK(randint(src, 1, 1) == 1);
        CHECK(src.bits_consumed() == 0);
    }
    {
        FixedBitSource src({0, 1});
        CHECK(randint(src, 1, 3) == 2);
    }
    {
        FixedBitSource src({1, 1});
        CHECK(randint(src, -2, 1) == 1);
    }
    {
        FixedBitSource src({});
        CHECK_THROWS_AS(randint(src, 2, 1), std::invalid_argument);
    }
}

TEST_CASE("rejection_rate exact values") {
    for (int k : {0, 1, 4, 10, 20}) CHECK(rejection_rate(std::uint64_t(1) << k) == Rational(0, 1));
    CHECK(rejection_rate(5) == Rational(3, 8));
    auto r = rejection_rate((std::uint64_t(1) << 20) + 1);
    // (2^21 - 2^20 - 1)/2^21
    CHECK(r == Rational((bitrand::int128(1) << 20) - 1, bitrand::int128(1) << 21));
    CHECK(r.to_double() == Catch::Approx(0.4999995231628418));
    CHECK(r < Rational(1, 2));
}

TEST_CASE("exhaustive enumeration: every outcome equally likely, m <= 9, r <= 3") {
    for (std::uint64_t m = 1; m <= 9; ++m) {
        const int b = bits_needed(m);
        for (int r = 1; r <= 3; ++r) {
            const int len = r * b;
            const std::uint64_t strings = std::uint64_t(1) << len;
            std::map<std::uint64_t, std::uint64_t> outcome_counts;
            std::uint64_t unresolved = 0;
            for (std::uint64_t s = 0; s < strings; ++s) {
                FixedBitSource src(encode_bits(s, len));
                DrawStats stats;
                try {
                    ++outcome_counts[randbelow(src, m, stats)];
                    CHECK(stats.bits_consumed == stats.draws_attempted * std::uint64_t(b));
                } catch (const BitsExhausted&) {
                    ++unresolved;
                    CHECK(stats.draws_rejected == std::uint64_t(r));
                }
            }
            INFO("m=" << m << " r=" << r);
            // unresolved strings: every round rejected
            const std::uint64_t reject_per_round = (std::uint64_t(1) << b) - m;
            std::uint64_t expect_unresolved = 1;
            for (int i = 0; i < r; ++i) expect_unresolved *= reject_per_round;
            REQUIRE(unresolved == expect_unresolved);
            REQUIRE(outcome_counts.size() == m);
            const std::uint64_t per_outcome = (strings - unresolved) / m;
            for (std::uint64_t k = 0; k < m; ++k) REQUIRE(outcome_counts[k] == per_outcome);
        }
    }
}

TEST_CASE("rejection-rate concentration over the mt source") {
    for (std::uint64_t m : {std::uint64_t(3), std::uint64_t(5), std::uint64_t(6),
                            (std::uint64_t(1) << 16) + 1}) {
        MtBitSource src(2024);
        auto meas = measure_rejection(src, m, 1000000);
        INFO("m=" << m << " observed=" << meas.observed_rate
                  << " expected=" << meas.expected_rate.to_double() << " z=" << meas.z_score);
        CHECK(std::fabs(meas.z_score) < 4.0);
    }
}
