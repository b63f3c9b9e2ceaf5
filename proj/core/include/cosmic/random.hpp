#pragma once

#include <cstdint>
#include <random>

#include "cosmic/types.hpp"

namespace cosmic {

/// Independent generator for (seed, stream). Streams let per-antenna noise
/// stay identical regardless of evaluation order.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream);

/// Circular complex Gaussian samples with E|w|^2 = variance.
ComplexVector complex_gaussian(Eigen::Index count, double variance, std::mt19937_64& gen);

ComplexMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, double variance,
                               std::mt19937_64& gen);

/// splitmix64 finalizer; used to derive child seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept;

}  // namespace cosmic
