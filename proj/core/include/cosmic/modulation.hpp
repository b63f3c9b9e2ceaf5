#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "cosmic/types.hpp"

namespace cosmic {

enum class Constellation { Qpsk, Qam16 };

int bits_per_symbol(Constellation c) noexcept;
std::string_view to_string(Constellation c) noexcept;
Constellation constellation_from_string(std::string_view name);

/// Constellation points indexed by their bit label (MSB first), normalized
/// to unit average energy.
///
/// QPSK: bit b0 selects the in-phase sign, b1 the quadrature sign, with
/// 0 -> +1 and 1 -> -1, so 00 -> (1+j)/sqrt(2).
///
/// 16-QAM: b0b1 Gray-label the in-phase level and b2b3 the quadrature
/// level with 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3, scaled by
/// 1/sqrt(10). Hence 0000 -> (-3-3j)/sqrt(10).
std::span<const Complex> constellation_points(Constellation c) noexcept;

/// Gray-maps a bit string to symbols. Throws ParameterError when the bit
/// count is not a multiple of bits_per_symbol or a bit is not 0/1.
ComplexVector map_bits_to_symbols(std::span<const std::uint8_t> bits, Constellation c);

/// Index of the nearest constellation point (minimum Euclidean distance).
int nearest_point(Complex z, Constellation c) noexcept;

/// Hard-decision demapping back to bits.
BitVector demap_symbols(const ComplexVector& symbols, Constellation c);

/// Snaps every symbol to its nearest constellation point.
ComplexVector decide_symbols(const ComplexVector& symbols, Constellation c);

/// Seeded uniform bit string.
BitVector random_bits(std::size_t count, std::uint64_t seed);

/// Symbols carried by one antenna together with the bits they encode.
struct SymbolFrame {
  ComplexVector symbols;
  Constellation constellation = Constellation::Qam16;
  BitVector bits;

  Eigen::Index size() const noexcept { return symbols.size(); }
};

SymbolFrame make_frame(BitVector bits, Constellation c);

/// Frame with `count` symbols drawn from a seeded bit stream.
SymbolFrame random_frame(int count, Constellation c, std::uint64_t seed);

}  // namespace cosmic
