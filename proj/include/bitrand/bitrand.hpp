#ifndef BITRAND_BITRAND_HPP
#define BITRAND_BITRAND_HPP

#include "bitrand/biased_models.hpp"
#include "bitrand/bitstream.hpp"
#include "bitrand/chi_square.hpp"
#include "bitrand/exact_bias.hpp"
#include "bitrand/experiments.hpp"
#include "bitrand/randint.hpp"
#include "bitrand/rational.hpp"
#include "bitrand/sampler.hpp"

namespace bitrand {
inline constexpr const char* kVersion = "0.1.0";
}

#endif
