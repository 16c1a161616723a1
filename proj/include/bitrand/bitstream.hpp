#ifndef BITRAND_BITSTREAM_HPP
#define BITRAND_BITSTREAM_HPP

#include <array>
#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace bitrand {

/// A bit source hands out k bits at a time, MSB-first, and accounts for
/// every bit it has released. Sequential stateful object: move freely
/// between threads, never share for concurrent mutation.
template <typename S>
concept BitSource = requires(S s, int k) {
    { s.next_bits(k) } -> std::convertible_to<std::uint64_t>;
    { s.bits_consumed() } -> std::convertible_to<std::uint64_t>;
};

/// Bit-exact MT19937 (Matsumoto & Nishimura), 2002 initialization.
class Mt19937 {
public:
    static constexpr int kStateSize = 624;
    static constexpr int kShift = 397;

    explicit Mt19937(std::uint32_t seed) { reseed(seed); }

    void reseed(std::uint32_t seed) {
        state_[0] = seed;
        for (int i = 1; i < kStateSize; ++i) {
            state_[i] = 1812433253u * (state_[i - 1] ^ (state_[i - 1] >> 30)) +
                        static_cast<std::uint32_t>(i);
        }
        index_ = kStateSize;  // force a twist before the first output
    }

    std::uint32_t next_u32() {
        if (index_ == kStateSize) twist();
        std::uint32_t y = state_[index_++];
        y ^= y >> 11;
        y ^= (y << 7) & 0x9d2c5680u;
        y ^= (y << 15) & 0xefc60000u;
        y ^= y >> 18;
        return y;
    }

    int index() const { return index_; }

private:
    void twist() {
        for (int i = 0; i < kStateSize; ++i) {
            std::uint32_t y = (state_[i] & 0x80000000u) |
                              (state_[(i + 1) % kStateSize] & 0x7fffffffu);
            state_[i] = state_[(i + kShift) % kStateSize] ^ (y >> 1) ^
                        ((y & 1u) ? 0x9908b0dfu : 0u);
        }
        index_ = 0;
    }

    std::array<std::uint32_t, kStateSize> state_{};
    int index_ = kStateSize;
};

/// How leftover bits of a 32-bit word are treated between next_bits calls.
/// Buffered carries them over (bit-economical); DiscardRemainder drops them,
/// giving strict one-draw-per-word alignment for comparison runs.
enum class BitMode { Buffered, DiscardRemainder };

/// MT19937-backed bit source. Bits are peeled from each output word
/// starting at its most significant bit; words are concatenated in
/// generation order when a request spans words.
class MtBitSource {
public:
    explicit MtBitSource(std::uint32_t seed, BitMode mode = BitMode::Buffered)
        : engine_(seed), mode_(mode) {}

    std::uint64_t next_bits(int k) {
        if (k < 0 || k > 64) throw std::invalid_argument("next_bits: k out of [0,64]");
        std::uint64_t result = 0;
        int want = k;
        while (want > 0) {
            if (buffered_ == 0) {
                word_ = engine_.next_u32();
                buffered_ = 32;
            }
            int take = want < buffered_ ? want : buffered_;
            result = (result << take) | ((word_ >> (buffered_ - take)) &
                                         ((take == 32) ? 0xffffffffu : ((1u << take) - 1u)));
            buffered_ -= take;
            want -= take;
        }
        if (mode_ == BitMode::DiscardRemainder) buffered_ = 0;
        bits_consumed_ += static_cast<std::uint64_t>(k);
        return result;
    }

    std::uint64_t bits_consumed() const { return bits_consumed_; }
    BitMode mode() const { return mode_; }

private:
    Mt19937 engine_;
    BitMode mode_;
    std::uint32_t word_ = 0;
    int buffered_ = 0;
    std::uint64_t bits_consumed_ = 0;
};

/// Thrown when a FixedBitSource runs out of scripted bits. Tests must
/// never be silently padded.
struct BitsExhausted : std::runtime_error {
    BitsExhausted() : std::runtime_error("FixedBitSource: bit script exhausted") {}
};

/// Replays an explicit bit script, MSB of the request first.
class FixedBitSource {
public:
    explicit FixedBitSource(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {}

    std::uint64_t next_bits(int k) {
        if (k < 0 || k > 64) throw std::invalid_argument("next_bits: k out of [0,64]");
        if (cursor_ + static_cast<std::size_t>(k) > bits_.size()) throw BitsExhausted{};
        std::uint64_t result = 0;
        for (int i = 0; i < k; ++i) result = (result << 1) | (bits_[cursor_++] & 1u);
        bits_consumed_ += static_cast<std::uint64_t>(k);
        return result;
    }

    std::uint64_t bits_consumed() const { return bits_consumed_; }
    std::size_t remaining() const { return bits_.size() - cursor_; }

private:
    std::vector<std::uint8_t> bits_;
    std::size_t cursor_ = 0;
    std::uint64_t bits_consumed_ = 0;
};

}  // namespace bitrand

#endif
