#pragma once

// Comparison waveform families. Both emit the same WaveformSet type as the
// COSMIC encoder so channel, receivers and metrics stay family-agnostic.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "cosmic/modulation.hpp"
#include "cosmic/waveform.hpp"

namespace cosmic {

/// Contiguous: antenna n owns the n-th block of K/N adjacent frequencies.
/// Interleaved: comb allocation, antenna n owns bins whose frequency rank
/// is congruent to n mod N.
enum class SubcarrierAllocation { Contiguous, Interleaved };

std::string_view to_string(SubcarrierAllocation a) noexcept;
SubcarrierAllocation allocation_from_string(std::string_view name);

struct OfdmPlan {
  int length = 0;  // K subcarriers == K samples
  SubcarrierAllocation allocation = SubcarrierAllocation::Contiguous;
  /// DFT bin indices per antenna, disjoint. Bins are ranked by baseband
  /// frequency from -B/2 upwards before allocation.
  std::vector<std::vector<int>> subcarriers;

  int antennas() const noexcept { return static_cast<int>(subcarriers.size()); }
  int per_antenna() const noexcept {
    return subcarriers.empty() ? 0 : static_cast<int>(subcarriers.front().size());
  }
};

/// floor(K/N) subcarriers per antenna; the remainder is left unused.
OfdmPlan plan_ofdm(int length, int antennas, SubcarrierAllocation allocation);

/// Waveform n = unitary IDFT of frames[n] placed on its subcarriers,
/// normalized to unit energy. A frame may carry fewer symbols than its
/// subcarriers (remaining bins stay empty); more is a ParameterError.
WaveformSet generate_ofdm_set(const OfdmPlan& plan, std::span<const SymbolFrame> frames);

/// Full frames of random symbols.
WaveformSet generate_ofdm_set(const OfdmPlan& plan, Constellation c, std::uint64_t bit_seed);

/// IDFT-column sub-bases of the plan (for the communication receiver).
std::vector<SubBasis> ofdm_subbases(const OfdmPlan& plan);

/// N unit-energy full-band sequences orthogonal at lag 0 only: the
/// orthonormalized columns of a seeded complex Gaussian K x N matrix.
/// Carries no data. Throws ParameterError when N > K.
WaveformSet generate_zero_shift_set(int length, int antennas, std::uint64_t seed);

/// Periodic (circular) cross-correlation sum_k conj(s[k]) x[(k + lag) mod K].
Complex circular_cross_correlation(const ComplexVector& s, const ComplexVector& x, int lag);

}  // namespace cosmic
