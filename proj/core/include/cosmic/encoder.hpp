#pragma once

// Sequential construction of COSMIC waveforms.
//
// Antenna n draws its waveform from the K_s-dimensional span of its
// sub-basis C_n. Every earlier waveform s_i contributes a block
// S_i C_n (zone lags x K_s) to the constraint matrix B_n; symbols are
// precoded onto an orthonormal basis of Null(B_n) so that
// S_i s_n = 0 over the zone for all i < n.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cosmic/modulation.hpp"
#include "cosmic/types.hpp"
#include "cosmic/waveform.hpp"

namespace cosmic {

struct ConstraintMatrix {
  ComplexMatrix blocks;  // vertically stacked S_i C_n, i = 0..n-1
  int antenna_index = 0;
  int block_rows = 0;    // zone lag count per previous waveform

  int block_count() const noexcept {
    return block_rows == 0 ? 0 : static_cast<int>(blocks.rows()) / block_rows;
  }
};

/// Stacks S_i C_n for every previous waveform in antenna order. An empty
/// `previous` yields a 0 x K_s matrix.
ConstraintMatrix assemble_constraints(std::span<const ComplexVector> previous, const SubBasis& cn,
                                      LagWindow zone);

struct NullSpaceBasis {
  ComplexMatrix columns;  // K_s x D, orthonormal
  double singular_value_floor = 0.0;  // rel_tol * sigma_max
  int rank = 0;

  int dimension() const noexcept { return static_cast<int>(columns.cols()); }
};

/// Orthonormal basis of Null(B).
///
/// Numerical rank counts singular values above rel_tol * sigma_max. The
/// basis is canonical: the orthogonal projector onto the null space is
/// applied to a fixed seeded reference matrix and the result is
/// orthonormalized by QR with a real-positive R diagonal. Any party that
/// evaluates this on (nearly) the same B therefore gets (nearly) the same
/// columns, not just the same subspace. With B empty the identity is
/// returned.
///
/// Throws ParameterError for rel_tol outside (0, 1) and InfeasibleError
/// when the null space is trivial.
NullSpaceBasis null_space(const ConstraintMatrix& b, double rel_tol = 1e-10);

/// Same canonical construction with the rank fixed to K_s - dimension
/// instead of thresholded. A receiver working on noisy estimates of B knows
/// the advertised capacity; noise would otherwise make B numerically full
/// rank. singular_value_floor reports the largest discarded singular value.
/// Throws DecodeError when B has too few rows for that rank.
NullSpaceBasis null_space_of_dimension(const ConstraintMatrix& b, int dimension);

struct CosmicConfig {
  int length = 1024;        // K
  int antennas = 4;         // N
  int subbasis_size = 256;  // K_s
  int zone_length = 16;     // K_z
  ZoneMode mode = ZoneMode::OneSided;
  BasisFamily basis = BasisFamily::RandomUnitary;
  PartitionStrategy partition = PartitionStrategy::ContiguousBlocks;
  std::uint64_t seed = 1;
  double rel_tol = 1e-10;
  Constellation constellation = Constellation::Qam16;
};

struct FeasibilityReport {
  CosmicConfig config;
  int zone_lag_count = 0;
  /// Closed form K_s - (n-1)(K_z-1); the symmetric zone doubles the
  /// per-antenna loss to 2(K_z-1).
  std::vector<int> predicted;
  /// K_s - (n-1) * zone_lag_count; never exceeds the true dimension.
  std::vector<int> conservative;
  bool partition_fits = true;  // N * K_s <= K
  bool feasible = true;
  int first_infeasible_antenna = -1;  // one-based, -1 when feasible
  std::vector<std::string> notes;

  std::string to_json() const;
};

/// Report-only check of the dimension budget. Never throws for positive
/// integers; non-positive parameters are reported as infeasible.
FeasibilityReport feasibility_check(const CosmicConfig& config);

/// Called once per antenna (zero-based) with the computed capacity D_n;
/// must return a frame with exactly that many symbols.
using FrameSource = std::function<SymbolFrame(int antenna, int capacity)>;

struct CosmicResult {
  WaveformSet set;
  std::vector<SymbolFrame> frames;
};

/// Generates all N waveforms. Throws InfeasibleError (partition or empty
/// null space, naming the antenna) and ParameterError when a frame's size
/// differs from its capacity.
CosmicResult generate_cosmic_set(const CosmicConfig& config, const FrameSource& frames);

/// Frames supplied up front; frame n must already hold D_n symbols.
CosmicResult generate_cosmic_set(const CosmicConfig& config, std::span<const SymbolFrame> frames);

/// Random payload: antenna n's bits come from seed mix_seed(bit_seed, n).
CosmicResult generate_cosmic_set(const CosmicConfig& config, std::uint64_t bit_seed);

/// Seed of the reference matrix that fixes the null-space basis of
/// antenna n. Shared by transmitter and receiver.
std::uint64_t null_space_reference_seed(int antenna, int subbasis_size) noexcept;

}  // namespace cosmic
