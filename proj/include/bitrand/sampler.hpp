#ifndef BITRAND_SAMPLER_HPP
#define BITRAND_SAMPLER_HPP

#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "bitrand/bitstream.hpp"
#include "bitrand/randint.hpp"

namespace bitrand {

/// Fisher-Yates over {1..n}, draws taken as randbelow(n), randbelow(n-1),
/// ..., randbelow(2): for i from n-1 down to 1, swap positions i and
/// randbelow(i+1).
template <BitSource Source>
std::vector<std::uint64_t> permutation(Source& source, std::uint64_t n) {
    std::vector<std::uint64_t> values(n);
    for (std::uint64_t i = 0; i < n; ++i) values[i] = i + 1;
    for (std::uint64_t i = n; i-- > 1;) {
        const std::uint64_t j = randbelow(source, i + 1);
        std::swap(values[i], values[j]);
    }
    return values;
}

/// k distinct values from {1..n} in draw order, uniform over ordered
/// k-subsets. Partial Fisher-Yates over a virtual array: only displaced
/// positions are stored, so memory is O(k) and n may be as large as 2^48.
template <BitSource Source>
std::vector<std::uint64_t> sample_without_replacement(Source& source, std::uint64_t n,
                                                      std::uint64_t k,
                                                      std::size_t* position_map_peak = nullptr) {
    if (k > n) throw std::invalid_argument("sample_without_replacement: k > n");
    std::unordered_map<std::uint64_t, std::uint64_t> displaced;
    displaced.reserve(2 * k);
    auto value_at = [&](std::uint64_t pos) {
        auto it = displaced.find(pos);
        return it == displaced.end() ? pos + 1 : it->second;
    };
    std::vector<std::uint64_t> out;
    out.reserve(k);
    for (std::uint64_t t = 0; t < k; ++t) {
        const std::uint64_t i = n - 1 - t;
        const std::uint64_t j = randbelow(source, i + 1);
        out.push_back(value_at(j));
        const std::uint64_t top = value_at(i);
        displaced[j] = top;
        displaced.erase(i);  // position i leaves the active prefix
        if (position_map_peak && displaced.size() > *position_map_peak)
            *position_map_peak = displaced.size();
    }
    return out;
}

/// k independent uniform draws from {1..n}.
template <BitSource Source>
std::vector<std::uint64_t> sample_with_replacement(Source& source, std::uint64_t n,
                                                   std::uint64_t k) {
    if (n < 1) throw std::invalid_argument("sample_with_replacement: n must be >= 1");
    std::vector<std::uint64_t> out;
    out.reserve(k);
    for (std::uint64_t t = 0; t < k; ++t) out.push_back(1 + randbelow(source, n));
    return out;
}

}  // namespace bitrand

#endif
