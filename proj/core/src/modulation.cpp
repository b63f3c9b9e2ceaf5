#include "cosmic/modulation.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "cosmic/error.hpp"
#include "cosmic/random.hpp"

namespace cosmic {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
const double kInvSqrt10 = 1.0 / std::sqrt(10.0);

// Gray labels for one 16-QAM axis, indexed by the two label bits.
constexpr std::array<double, 4> kQamLevels = {-3.0, -1.0, 3.0, 1.0};  // 00, 01, 10, 11

const std::array<Complex, 4> kQpsk = {
    Complex(kInvSqrt2, kInvSqrt2), Complex(kInvSqrt2, -kInvSqrt2),
    Complex(-kInvSqrt2, kInvSqrt2), Complex(-kInvSqrt2, -kInvSqrt2)};

std::array<Complex, 16> make_qam16() {
  std::array<Complex, 16> pts{};
  for (int label = 0; label < 16; ++label) {
    const double i = kQamLevels[(label >> 2) & 3];
    const double q = kQamLevels[label & 3];
    pts[label] = Complex(i, q) * kInvSqrt10;
  }
  return pts;
}

const std::array<Complex, 16> kQam16 = make_qam16();

}  // namespace

int bits_per_symbol(Constellation c) noexcept { return c == Constellation::Qpsk ? 2 : 4; }

std::string_view to_string(Constellation c) noexcept {
  return c == Constellation::Qpsk ? "qpsk" : "qam16";
}

Constellation constellation_from_string(std::string_view name) {
  if (name == "qpsk") return Constellation::Qpsk;
  if (name == "qam16") return Constellation::Qam16;
  throw ParameterError("unknown constellation '" + std::string(name) + "'");
}

std::span<const Complex> constellation_points(Constellation c) noexcept {
  if (c == Constellation::Qpsk) return kQpsk;
  return kQam16;
}

ComplexVector map_bits_to_symbols(std::span<const std::uint8_t> bits, Constellation c) {
  const int bps = bits_per_symbol(c);
  if (bits.size() % static_cast<std::size_t>(bps) != 0) {
    throw ParameterError("bit count " + std::to_string(bits.size()) +
                         " is not a multiple of " + std::to_string(bps));
  }
  const auto points = constellation_points(c);
  ComplexVector out(static_cast<Eigen::Index>(bits.size() / bps));
  for (Eigen::Index s = 0; s < out.size(); ++s) {
    int label = 0;
    for (int b = 0; b < bps; ++b) {
      const std::uint8_t bit = bits[static_cast<std::size_t>(s * bps + b)];
      if (bit > 1) throw ParameterError("bit values must be 0 or 1");
      label = (label << 1) | bit;
    }
    out[s] = points[label];
  }
  return out;
}

int nearest_point(Complex z, Constellation c) noexcept {
  const auto points = constellation_points(c);
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double d = std::norm(z - points[i]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

BitVector demap_symbols(const ComplexVector& symbols, Constellation c) {
  const int bps = bits_per_symbol(c);
  BitVector bits;
  bits.reserve(static_cast<std::size_t>(symbols.size() * bps));
  for (Eigen::Index s = 0; s < symbols.size(); ++s) {
    const int label = nearest_point(symbols[s], c);
    for (int b = bps - 1; b >= 0; --b) bits.push_back(static_cast<std::uint8_t>((label >> b) & 1));
  }
  return bits;
}

ComplexVector decide_symbols(const ComplexVector& symbols, Constellation c) {
  const auto points = constellation_points(c);
  ComplexVector out(symbols.size());
  for (Eigen::Index s = 0; s < symbols.size(); ++s) out[s] = points[nearest_point(symbols[s], c)];
  return out;
}

BitVector random_bits(std::size_t count, std::uint64_t seed) {
  auto gen = make_stream(seed, 0x62697473ULL);  // "bits"
  BitVector bits(count);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < count; ++i) {
    if (i % 64 == 0) word = gen();
    bits[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1U);
  }
  return bits;
}

SymbolFrame make_frame(BitVector bits, Constellation c) {
  SymbolFrame frame;
  frame.constellation = c;
  frame.symbols = map_bits_to_symbols(bits, c);
  frame.bits = std::move(bits);
  return frame;
}

SymbolFrame random_frame(int count, Constellation c, std::uint64_t seed) {
  if (count < 0) throw ParameterError("symbol count must be >= 0");
  return make_frame(random_bits(static_cast<std::size_t>(count) * bits_per_symbol(c), seed), c);
}

}  // namespace cosmic
