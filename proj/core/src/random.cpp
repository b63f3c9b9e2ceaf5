#include "cosmic/random.hpp"

#include <cmath>

namespace cosmic {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

ComplexVector complex_gaussian(Eigen::Index count, double variance, std::mt19937_64& gen) {
  std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
  ComplexVector out(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    const double re = normal(gen);
    const double im = normal(gen);
    out[i] = Complex(re, im);
  }
  return out;
}

ComplexMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, double variance,
                               std::mt19937_64& gen) {
  std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
  ComplexMatrix out(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double re = normal(gen);
      const double im = normal(gen);
      out(r, c) = Complex(re, im);
    }
  }
  return out;
}

}  // namespace cosmic
