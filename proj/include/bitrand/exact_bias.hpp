#ifndef BITRAND_EXACT_BIAS_HPP
#define BITRAND_EXACT_BIAS_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bitrand/biased_models.hpp"
#include "bitrand/randint.hpp"
#include "bitrand/rational.hpp"

namespace bitrand {

/// Exact description of how far a scheme's output law sits from uniform.
/// p_plus/p_minus is the worst-case selection-probability ratio; the
/// first-order bound 1 + m*2^(1-w) is reported alongside the exact ratio
/// because the two differ (the bound's deviation term is twice the exact
/// lattice ratio's) and must never be conflated.
struct BiasReport {
    std::uint64_t m = 0;
    int w = 0;
    std::vector<std::uint64_t> counts;  // empty for streaming summaries of huge m
    uint128 lattice_size = 0;
    Rational p_plus;
    Rational p_minus;
    Rational ratio;            // meaningful only when !ratio_infinite
    bool ratio_infinite = false;
    Rational tv_distance;
    double first_order_bound = 0.0;
    std::uint64_t argmax_k = 0;  // 1-based outcome witnesses
    std::uint64_t argmin_k = 0;
};

inline double first_order_bound(std::uint64_t m, int w) {
    if (m < 1 || w < 1) throw std::invalid_argument("first_order_bound: m, w must be >= 1");
    return 1.0 + static_cast<double>(m) * std::ldexp(1.0, 1 - w);
}

/// Per-outcome lattice counts of the w-bit floor-multiply scheme:
/// counts[k-1] = #{j in [0,2^w) : floor(m*j/2^w) = k-1}
///            = ceil(k*2^w/m) - ceil((k-1)*2^w/m).
/// O(m), addition-only inner loop (the running remainder of k*2^w+m-1
/// mod m is tracked incrementally, so no wide division per step).
inline std::vector<std::uint64_t> bucket_counts(std::uint64_t m, int w) {
    if (w < 1 || w > 62) throw std::invalid_argument("bucket_counts: w out of [1,62]");
    if (m < 1) throw std::invalid_argument("bucket_counts: m must be >= 1");
    const uint128 lattice = uint128(1) << w;
    if (uint128(m) > lattice) throw std::invalid_argument("bucket_counts: m > 2^w");

    std::vector<std::uint64_t> counts;
    counts.reserve(m);
    // g(k) = floor((k*2^w + m - 1)/m) = ceil(k*2^w/m); counts[k-1] = g(k)-g(k-1).
    const std::uint64_t q = static_cast<std::uint64_t>(lattice / m);
    const std::uint64_t step = static_cast<std::uint64_t>(lattice % m);
    std::uint64_t rem = m - 1;  // (0*2^w + m-1) mod m
    for (std::uint64_t k = 1; k <= m; ++k) {
        std::uint64_t c = q;
        rem += step;
        if (rem >= m) { rem -= m; ++c; }
        counts.push_back(c);
    }
    return counts;
}

/// Independent oracle: literal enumeration of every lattice point through
/// the exact-integer floor-multiply map.
inline std::vector<std::uint64_t> bucket_counts_bruteforce(std::uint64_t m, int w) {
    if (w < 1 || w > 24) throw std::invalid_argument("bucket_counts_bruteforce: w > 24 over budget");
    if (m < 1 || m > (std::uint64_t(1) << w))
        throw std::invalid_argument("bucket_counts_bruteforce: m out of [1, 2^w]");
    std::vector<std::uint64_t> counts(m, 0);
    const FloorMultiplyModel model{w, EvalMode::ExactInteger};
    for (std::uint64_t j = 0; j < (std::uint64_t(1) << w); ++j) {
        ++counts[floor_multiply_value(j, m, model) - 1];
    }
    return counts;
}

/// Full report from explicit counts. All rationals exact; tv distance is
/// summed over the common denominator m * lattice so no intermediate
/// rational additions are needed.
inline BiasReport bias_report(const std::vector<std::uint64_t>& counts, std::uint64_t m, int w,
                              uint128 lattice_size) {
    if (counts.size() != m) throw std::invalid_argument("bias_report: counts length != m");
    uint128 total = 0;
    for (auto c : counts) total += c;
    if (total != lattice_size) throw std::invalid_argument("bias_report: counts do not sum to lattice size");

    BiasReport r;
    r.m = m;
    r.w = w;
    r.counts = counts;
    r.lattice_size = lattice_size;
    std::uint64_t cmin = counts[0], cmax = counts[0];
    std::uint64_t kmin = 1, kmax = 1;
    uint128 tv_num = 0;  // sum of |m*c_k - lattice|
    for (std::uint64_t k = 0; k < m; ++k) {
        const std::uint64_t c = counts[k];
        if (c > cmax) { cmax = c; kmax = k + 1; }
        if (c < cmin) { cmin = c; kmin = k + 1; }
        const uint128 scaled = uint128(m) * c;
        tv_num += scaled > lattice_size ? scaled - lattice_size : lattice_size - scaled;
    }
    r.p_plus = Rational(static_cast<int128>(cmax), static_cast<int128>(lattice_size));
    r.p_minus = Rational(static_cast<int128>(cmin), static_cast<int128>(lattice_size));
    if (cmin == 0) {
        r.ratio_infinite = true;
    } else {
        r.ratio = Rational(static_cast<int128>(cmax), static_cast<int128>(cmin));
    }
    r.tv_distance = Rational(static_cast<int128>(tv_num),
                             static_cast<int128>(uint128(2) * m * lattice_size));
    r.first_order_bound = first_order_bound(m, w);
    r.argmax_k = kmax;
    r.argmin_k = kmin;
    return r;
}

inline BiasReport bias_report(const std::vector<std::uint64_t>& counts, std::uint64_t m, int w) {
    return bias_report(counts, m, w, uint128(1) << w);
}

/// Streaming variant for m too large to hold a counts vector (the paper's
/// full scale, m near 2^31 at w = 32): same incremental recurrence as
/// bucket_counts, O(1) memory, counts omitted from the report.
inline BiasReport floor_multiply_bias_streaming(std::uint64_t m, int w) {
    if (w < 1 || w > 62) throw std::invalid_argument("floor_multiply_bias_streaming: w out of [1,62]");
    const uint128 lattice = uint128(1) << w;
    if (m < 1 || uint128(m) > lattice)
        throw std::invalid_argument("floor_multiply_bias_streaming: m out of [1, 2^w]");

    const std::uint64_t q = static_cast<std::uint64_t>(lattice / m);
    const std::uint64_t step = static_cast<std::uint64_t>(lattice % m);
    std::uint64_t rem = m - 1;
    std::uint64_t cmin = ~std::uint64_t(0), cmax = 0, kmin = 0, kmax = 0;
    uint128 tv_num = 0;
    for (std::uint64_t k = 1; k <= m; ++k) {
        std::uint64_t c = q;
        rem += step;
        if (rem >= m) { rem -= m; ++c; }
        if (c > cmax) { cmax = c; kmax = k; }
        if (c < cmin) { cmin = c; kmin = k; }
        const uint128 scaled = uint128(m) * c;
        tv_num += scaled > lattice ? scaled - lattice : lattice - scaled;
    }
    BiasReport r;
    r.m = m;
    r.w = w;
    r.lattice_size = lattice;
    r.p_plus = Rational(static_cast<int128>(cmax), static_cast<int128>(lattice));
    r.p_minus = Rational(static_cast<int128>(cmin), static_cast<int128>(lattice));
    if (cmin == 0) r.ratio_infinite = true;
    else r.ratio = Rational(static_cast<int128>(cmax), static_cast<int128>(cmin));
    r.tv_distance = Rational(static_cast<int128>(tv_num),
                             static_cast<int128>(uint128(2) * m * lattice));
    r.first_order_bound = first_order_bound(m, w);
    r.argmax_k = kmax;
    r.argmin_k = kmin;
    return r;
}

/// Exhaustive exact enumeration of the ru lattice: all (j1, j2) pairs,
/// 2^(w + w2) of them. Budget-gated; full scale goes through
/// ru_bias_montecarlo instead.
struct RuBudgetExceeded : std::invalid_argument {
    RuBudgetExceeded()
        : std::invalid_argument(
              "ru_bucket_counts: lattice over exhaustive budget (w + second width must be <= 26); "
              "use ru_bias_montecarlo") {}
};

inline std::vector<std::uint64_t> ru_bucket_counts(std::uint64_t m, const RuModel& model) {
    model.validate();
    if (m < 1) throw std::invalid_argument("ru_bucket_counts: m must be >= 1");
    const int w = model.w, w2 = model.w2();
    if (w + w2 > 26) throw RuBudgetExceeded{};
    RuModel exact = model;
    exact.mode = EvalMode::ExactInteger;
    std::vector<std::uint64_t> counts(m, 0);
    for (std::uint64_t j1 = 0; j1 < (std::uint64_t(1) << w); ++j1) {
        for (std::uint64_t j2 = 0; j2 < (std::uint64_t(1) << w2); ++j2) {
            ++counts[ru_value(j1, j2, m, exact) - 1];
        }
    }
    return counts;
}

/// Monte Carlo tally of ru draws for lattices too large to enumerate.
/// Outcomes [1, m] are aggregated into at most `bucket_cap` equal-width
/// cells so memory stays bounded at huge m.
struct MonteCarloTally {
    std::uint64_t m = 0;
    std::uint64_t n = 0;
    std::size_t cells = 0;
    std::vector<std::uint64_t> observed;
    std::vector<double> expected_uniform;  // n * (cell width)/m
    std::vector<double> std_error;         // binomial, under the uniform law
    std::uint64_t clamped = 0;
};

template <BitSource Source>
MonteCarloTally ru_bias_montecarlo(std::uint64_t m, const RuModel& model, std::uint64_t n,
                                   Source& source, std::size_t bucket_cap = 1024) {
    model.validate();
    if (m < 1) throw std::invalid_argument("ru_bias_montecarlo: m must be >= 1");
    MonteCarloTally tally;
    tally.m = m;
    tally.n = n;
    tally.cells = static_cast<std::size_t>(m < bucket_cap ? m : bucket_cap);
    tally.observed.assign(tally.cells, 0);
    ClampStats clamps;
    for (std::uint64_t i = 0; i < n; ++i) {
        const std::uint64_t y = ru_draw(source, m, model, &clamps);
        const std::size_t cell =
            static_cast<std::size_t>((uint128(y - 1) * tally.cells) / m);
        ++tally.observed[cell];
    }
    tally.clamped = clamps.clamped;
    tally.expected_uniform.resize(tally.cells);
    tally.std_error.resize(tally.cells);
    for (std::size_t c = 0; c < tally.cells; ++c) {
        // cell c covers values (1-based) in [lo, hi)
        const std::uint64_t lo = static_cast<std::uint64_t>((uint128(c) * m) / tally.cells);
        const std::uint64_t hi = static_cast<std::uint64_t>((uint128(c + 1) * m) / tally.cells);
        const double p = static_cast<double>(hi - lo) / static_cast<double>(m);
        tally.expected_uniform[c] = static_cast<double>(n) * p;
        tally.std_error[c] = std::sqrt(static_cast<double>(n) * p * (1.0 - p));
    }
    return tally;
}

}  // namespace bitrand

#endif
