#ifndef BITRAND_EXPERIMENTS_HPP
#define BITRAND_EXPERIMENTS_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bitrand/biased_models.hpp"
#include "bitrand/bitstream.hpp"
#include "bitrand/chi_square.hpp"
#include "bitrand/exact_bias.hpp"
#include "bitrand/randint.hpp"

namespace bitrand {

enum class Scheme { UnbiasedRejection, FloorMultiply, Ru };

inline Scheme parse_scheme(const std::string& name) {
    if (name == "reject" || name == "unbiased-rejection") return Scheme::UnbiasedRejection;
    if (name == "floor" || name == "floor-multiply") return Scheme::FloorMultiply;
    if (name == "ru") return Scheme::Ru;
    throw std::invalid_argument("unknown scheme: " + name);
}

/// What the tallies are tested against: the uniform law (the null the
/// biased schemes should fail), or the scheme's own exact lattice law
/// (the calibration check, which every scheme should pass).
enum class Expectation { Uniform, ExactLaw };

struct ExperimentConfig {
    Scheme scheme = Scheme::UnbiasedRejection;
    std::uint64_t m = 2;
    std::uint64_t n = 1000;
    std::uint32_t seed = 0;
    std::size_t cells = 2;
    double alpha = 0.001;
    Expectation expectation = Expectation::Uniform;
    int w = 32;  // floor-multiply / ru lattice width
    int u = 25;  // ru scale exponent
};

/// Draws n values via the named scheme, tallies them into equal-width
/// value cells over [1, m], and chi-squares against the configured
/// expectation. Expected counts per cell come from exact lattice counts,
/// so unequal cell probabilities are handled correctly.
inline ChiSquareResult run_uniformity_experiment(const ExperimentConfig& cfg) {
    if (cfg.cells < 2 || cfg.cells > cfg.m)
        throw std::invalid_argument("run_uniformity_experiment: cells must be in [2, m]");
    if (cfg.n < 10 * cfg.cells)
        throw std::invalid_argument("run_uniformity_experiment: n must be >= 10 * cells");

    MtBitSource source(cfg.seed);
    std::vector<std::uint64_t> observed(cfg.cells, 0);
    auto cell_of = [&](std::uint64_t y) {
        return static_cast<std::size_t>((uint128(y - 1) * cfg.cells) / cfg.m);
    };
    for (std::uint64_t i = 0; i < cfg.n; ++i) {
        std::uint64_t y;
        switch (cfg.scheme) {
            case Scheme::UnbiasedRejection:
                y = 1 + randbelow(source, cfg.m);
                break;
            case Scheme::FloorMultiply:
                y = floor_multiply_draw(source, cfg.m, FloorMultiplyModel{cfg.w, EvalMode::ExactInteger});
                break;
            case Scheme::Ru:
                y = ru_draw(source, cfg.m, RuModel{cfg.w, cfg.u, EvalMode::ExactInteger});
                break;
        }
        ++observed[cell_of(y)];
    }

    // per-cell expected probabilities
    std::vector<double> expected(cfg.cells, 0.0);
    if (cfg.expectation == Expectation::Uniform || cfg.scheme == Scheme::UnbiasedRejection) {
        for (std::uint64_t k = 1; k <= cfg.m; ++k)
            expected[cell_of(k)] += static_cast<double>(cfg.n) / static_cast<double>(cfg.m);
    } else {
        std::vector<std::uint64_t> counts =
            cfg.scheme == Scheme::FloorMultiply
                ? bucket_counts(cfg.m, cfg.w)
                : ru_bucket_counts(cfg.m, RuModel{cfg.w, cfg.u, EvalMode::ExactInteger});
        uint128 lattice = 0;
        for (auto c : counts) lattice += c;
        for (std::uint64_t k = 1; k <= cfg.m; ++k)
            expected[cell_of(k)] += static_cast<double>(cfg.n) *
                                    static_cast<double>(counts[k - 1]) /
                                    static_cast<double>(lattice);
    }

    ChiSquareResult result;
    result.statistic = chisq_statistic(observed, expected);
    result.dof = static_cast<int>(cfg.cells) - 1;
    result.p_value = chisq_pvalue(result.statistic, result.dof);
    result.n = cfg.n;
    result.cells = cfg.cells;
    result.alpha = cfg.alpha;
    result.reject = result.p_value < cfg.alpha;
    return result;
}

struct RejectionMeasurement {
    std::uint64_t draws = 0;
    std::uint64_t attempts = 0;
    std::uint64_t rejected = 0;
    double observed_rate = 0.0;  // rejected / attempts
    Rational expected_rate;
    double z_score = 0.0;  // binomial z over the attempts
};

/// Runs n randbelow draws and compares the observed per-attempt discard
/// frequency against the exact rejection_rate(m).
template <BitSource Source>
RejectionMeasurement measure_rejection(Source& source, std::uint64_t m, std::uint64_t n) {
    RejectionMeasurement meas;
    meas.draws = n;
    meas.expected_rate = rejection_rate(m);
    DrawStats stats;
    for (std::uint64_t i = 0; i < n; ++i) randbelow(source, m, stats);
    meas.attempts = stats.draws_attempted;
    meas.rejected = stats.draws_rejected;
    meas.observed_rate = meas.attempts == 0
                             ? 0.0
                             : static_cast<double>(meas.rejected) / static_cast<double>(meas.attempts);
    const double p = meas.expected_rate.to_double();
    if (p > 0.0 && p < 1.0 && meas.attempts > 0) {
        const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(meas.attempts));
        meas.z_score = (meas.observed_rate - p) / se;
    }
    return meas;
}

}  // namespace bitrand

#endif
