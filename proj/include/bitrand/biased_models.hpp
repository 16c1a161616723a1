#ifndef BITRAND_BIASED_MODELS_HPP
#define BITRAND_BIASED_MODELS_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "bitrand/bitstream.hpp"
#include "bitrand/rational.hpp"

namespace bitrand {

/// Exact-integer mode defines ground truth for bias analysis;
/// float-faithful mode reproduces the binary64 arithmetic the modeled
/// generators actually perform. Divergence between the two is itself a
/// reported statistic.
enum class EvalMode { ExactInteger, FloatFaithful };

/// The w-bit floor-multiply scheme: X = j/2^w, Y = 1 + floor(m*X).
struct FloorMultiplyModel {
    int w = 32;
    EvalMode mode = EvalMode::FloatFaithful;

    void validate() const {
        if (w < 1 || w > 64) throw std::invalid_argument("FloorMultiplyModel: w out of [1,64]");
    }
};

/// The two-float composition X = (floor(U*R1) + R2) / U with U = 2^u and
/// R1, R2 each a w-bit binary fraction. Full scale is (w=32, u=25).
/// second_width narrows R2's lattice; 0 degenerates R2 to exactly zero.
struct RuModel {
    int w = 32;
    int u = 25;
    EvalMode mode = EvalMode::FloatFaithful;
    int second_width = -1;  // -1 means "same as w"

    int w2() const { return second_width < 0 ? w : second_width; }
    void validate() const {
        if (w < 1 || w > 32) throw std::invalid_argument("RuModel: w out of [1,32]");
        if (u < 1 || u > w) throw std::invalid_argument("RuModel: u out of [1,w]");
        if (w2() < 0 || w2() > w) throw std::invalid_argument("RuModel: second_width out of [0,w]");
    }
};

/// Counts events where float-faithful rounding pushed Y past m and the
/// output was clamped back into [1, m]. Clamping preserves the contract,
/// the counter preserves the evidence.
struct ClampStats {
    std::uint64_t clamped = 0;
};

/// Pure map j -> Y for a fixed lattice point, both evaluation modes.
inline std::uint64_t floor_multiply_value(std::uint64_t j, std::uint64_t m,
                                          const FloorMultiplyModel& model,
                                          ClampStats* clamps = nullptr) {
    model.validate();
    if (m < 1) throw std::invalid_argument("floor_multiply: m must be >= 1");
    const uint128 lattice = uint128(1) << model.w;
    if (uint128(m) > lattice) throw std::invalid_argument("floor_multiply: m > 2^w");
    if (model.mode == EvalMode::ExactInteger) {
        return 1 + static_cast<std::uint64_t>((uint128(m) * j) >> model.w);
    }
    // Mirrors e.g. R's multiplication by 2.3283064365386963e-10 at w=32.
    double x = static_cast<double>(j) * std::ldexp(1.0, -model.w);
    double y = 1.0 + std::floor(static_cast<double>(m) * x);
    auto yi = static_cast<std::uint64_t>(y);
    if (yi > m) {
        if (clamps) ++clamps->clamped;
        yi = m;
    }
    if (yi < 1) yi = 1;
    return yi;
}

/// One floor-multiply draw; consumes exactly w bits.
template <BitSource Source>
std::uint64_t floor_multiply_draw(Source& source, std::uint64_t m,
                                  const FloorMultiplyModel& model,
                                  ClampStats* clamps = nullptr) {
    std::uint64_t j = source.next_bits(model.w);
    return floor_multiply_value(j, m, model, clamps);
}

/// Exact value of the ru composition as a rational:
/// (floor(2^u * j1 / 2^w) + j2 / 2^w2) / 2^u. Always in [0, 1).
inline Rational ru_compose_exact(std::uint64_t j1, std::uint64_t j2, const RuModel& model) {
    model.validate();
    const int w2 = model.w2();
    // floor(2^u * j1 / 2^w) = j1 >> (w - u)
    const std::uint64_t head = j1 >> (model.w - model.u);
    // X = (head * 2^w2 + j2) / 2^(w2 + u)
    const uint128 num = (uint128(head) << w2) | j2;
    const uint128 den = uint128(1) << (w2 + model.u);
    return Rational(static_cast<int128>(num), static_cast<int128>(den));
}

/// Float-faithful ru composition: each step in binary64, in order
/// (scale, floor, add, divide).
inline double ru_compose_float(std::uint64_t j1, std::uint64_t j2, const RuModel& model) {
    model.validate();
    const double r1 = static_cast<double>(j1) * std::ldexp(1.0, -model.w);
    const double r2 = model.w2() == 0
                          ? 0.0
                          : static_cast<double>(j2) * std::ldexp(1.0, -model.w2());
    const double scale = std::ldexp(1.0, model.u);
    return (std::floor(scale * r1) + r2) / scale;
}

/// Y = 1 + floor(m*X) with X from the ru composition at given lattice points.
inline std::uint64_t ru_value(std::uint64_t j1, std::uint64_t j2, std::uint64_t m,
                              const RuModel& model, ClampStats* clamps = nullptr) {
    if (m < 1) throw std::invalid_argument("ru: m must be >= 1");
    std::uint64_t y;
    if (model.mode == EvalMode::ExactInteger) {
        const Rational x = ru_compose_exact(j1, j2, model);
        // floor(m * num / den) in wide integers
        y = 1 + static_cast<std::uint64_t>((uint128(m) * uint128(x.num())) / uint128(x.den()));
    } else {
        const double x = ru_compose_float(j1, j2, model);
        y = 1 + static_cast<std::uint64_t>(std::floor(static_cast<double>(m) * x));
    }
    if (y > m) {
        if (clamps) ++clamps->clamped;
        y = m;
    }
    return y;
}

/// One ru draw; consumes exactly 2w bits (R1's lattice value first).
/// R2 takes the most significant w2 bits of its word when narrowed.
template <BitSource Source>
std::uint64_t ru_draw(Source& source, std::uint64_t m, const RuModel& model,
                      ClampStats* clamps = nullptr) {
    model.validate();
    std::uint64_t j1 = source.next_bits(model.w);
    std::uint64_t j2 = source.next_bits(model.w) >> (model.w - model.w2());
    return ru_value(j1, j2, m, model, clamps);
}

/// The dispatch R_unif_index() performs: the plain w=32 floor-multiply
/// for m <= 2^31, the ru composition (w=32, u=25) above that.
template <BitSource Source>
std::uint64_t r_unif_index_model(Source& source, std::uint64_t m,
                                 EvalMode mode = EvalMode::FloatFaithful,
                                 ClampStats* clamps = nullptr) {
    if (m < 1) throw std::invalid_argument("r_unif_index_model: m must be >= 1");
    if (m <= (std::uint64_t(1) << 31)) {
        return floor_multiply_draw(source, m, FloorMultiplyModel{32, mode}, clamps);
    }
    return ru_draw(source, m, RuModel{32, 25, mode}, clamps);
}

}  // namespace bitrand

#endif
