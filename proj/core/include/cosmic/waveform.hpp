#pragma once

// Complex-sequence primitives shared by every waveform family: aperiodic
// cross-correlation (as a direct sum and as a lag-indexed matrix), master
// orthogonal bases, column partitioning and zone-orthogonality residuals.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cosmic/modulation.hpp"
#include "cosmic/types.hpp"

namespace cosmic {

/// Closed integer lag interval [first, last].
struct LagWindow {
  int first = 0;
  int last = 0;

  int size() const noexcept { return last - first + 1; }
  bool contains(int lag) const noexcept { return lag >= first && lag <= last; }

  /// All lags with at least one overlapping sample: [-(K-1), K-1].
  static LagWindow full(int length);
};

/// Which lags the zero-correlation zone covers.
///   OneSided:  [0, K_z - 1]
///   Symmetric: [-(K_z - 1), K_z - 1]
enum class ZoneMode { OneSided, Symmetric };

std::string_view to_string(ZoneMode m) noexcept;
ZoneMode zone_mode_from_string(std::string_view name);

LagWindow zone_window(int zone_length, ZoneMode mode);

/// Aperiodic cross-correlation sum_k conj(s[k]) * x[k + lag]; samples
/// outside [0, K) count as zero.
Complex cross_correlation(const ComplexVector& s, const ComplexVector& x, int lag);

/// Lag-indexed correlation operator of a reference sequence s. Row r
/// corresponds to lag window.first + r and, applied to x, yields
/// cross_correlation(s, x, lag).
class CrossCorrelationMatrix {
 public:
  CrossCorrelationMatrix(ComplexMatrix rows, LagWindow window, Eigen::Index source_length)
      : rows_(std::move(rows)), window_(window), source_length_(source_length) {}

  const ComplexMatrix& rows() const noexcept { return rows_; }
  LagWindow lag_window() const noexcept { return window_; }
  Eigen::Index source_length() const noexcept { return source_length_; }

  ComplexVector apply(const ComplexVector& x) const;

 private:
  ComplexMatrix rows_;
  LagWindow window_;
  Eigen::Index source_length_;
};

/// Throws ParameterError unless window is inside [-(K-1), K-1].
CrossCorrelationMatrix build_crosscorr_matrix(const ComplexVector& s, LagWindow window);

enum class BasisFamily { RandomUnitary, InverseDft, Hadamard };

std::string_view to_string(BasisFamily f) noexcept;
BasisFamily basis_family_from_string(std::string_view name);

/// True when a Sylvester Hadamard matrix of this order exists (powers of two).
bool is_hadamard_order(int length) noexcept;

struct MasterBasis {
  ComplexMatrix columns;  // K x K, unitary
  BasisFamily family = BasisFamily::RandomUnitary;
  std::uint64_t seed = 0;

  int length() const noexcept { return static_cast<int>(columns.rows()); }
};

/// Unitary K x K master matrix.
///   RandomUnitary: Householder QR of a seeded complex Gaussian matrix with
///                  the diagonal of R made real-positive (Haar distributed).
///   InverseDft:    entry (r, c) = exp(+j 2 pi r c / K) / sqrt(K).
///   Hadamard:      Sylvester construction / sqrt(K); K must be a power of 2.
MasterBasis build_master_basis(int length, BasisFamily family, std::uint64_t seed);

enum class PartitionStrategy { ContiguousBlocks, Strided };

std::string_view to_string(PartitionStrategy p) noexcept;
PartitionStrategy partition_from_string(std::string_view name);

struct SubBasis {
  ComplexMatrix columns;           // K x K_s
  std::vector<int> column_indices;  // indices into the master basis
  int antenna_index = 0;
};

/// Column index sets only; partition_subbases() uses these.
std::vector<std::vector<int>> partition_indices(int length, int antennas, int subbasis_size,
                                                PartitionStrategy strategy);

/// Pairwise-disjoint K_s-column subsets, one per antenna. Throws
/// InfeasibleError when antennas * subbasis_size > K.
std::vector<SubBasis> partition_subbases(const MasterBasis& master, int antennas,
                                         int subbasis_size, PartitionStrategy strategy);

/// Sub-basis from explicit column indices (receivers rebuild C_n this way).
SubBasis select_columns(const MasterBasis& master, std::span<const int> indices, int antenna);

enum class WaveformFamily { Cosmic, Ofdm, ZeroShift };

std::string_view to_string(WaveformFamily f) noexcept;
WaveformFamily waveform_family_from_string(std::string_view name);

/// Everything a receiver needs to know about a waveform set except the
/// samples and the bits. Serialized as the JSON sidecar of a waveform file.
struct WaveformMetadata {
  WaveformFamily family = WaveformFamily::Cosmic;
  int length = 0;        // K
  int antennas = 0;      // N
  int subbasis_size = 0;  // K_s (COSMIC), subcarriers per antenna (OFDM)
  int zone_length = 0;    // K_z
  ZoneMode mode = ZoneMode::OneSided;
  BasisFamily basis = BasisFamily::RandomUnitary;
  PartitionStrategy partition = PartitionStrategy::ContiguousBlocks;
  std::uint64_t seed = 0;
  double rel_tol = 1e-10;
  Constellation constellation = Constellation::Qam16;
  /// Master-basis columns used by each antenna (subcarrier bins for OFDM).
  std::vector<std::vector<int>> columns;
  /// Computed symbol capacity D_n per antenna.
  std::vector<int> capacity;
  /// Closed-form prediction K_s - (n-1)(K_z-1) (or its symmetric analogue).
  std::vector<int> predicted_capacity;
  /// Factor applied after precoding to bring each waveform to unit energy.
  std::vector<double> scale;
  std::string ofdm_allocation;  // "contiguous" / "interleaved" for OFDM sets
};

struct WaveformSet {
  std::vector<ComplexVector> waveforms;
  WaveformMetadata meta;

  int length() const noexcept {
    return waveforms.empty() ? 0 : static_cast<int>(waveforms.front().size());
  }
  int antenna_count() const noexcept { return static_cast<int>(waveforms.size()); }
  int total_symbols() const noexcept;
};

/// Entry (n, m) = max over window lags of |(S_n s_m)(lag)|, i.e. of
/// |cross_correlation(s_n, s_m, lag)|. The diagonal is the autocorrelation
/// peak over the window. Throws ParameterError on length mismatch.
RealMatrix zone_residual(std::span<const ComplexVector> waveforms, LagWindow window);

/// Uses the set's own zone length and mode.
RealMatrix zone_residual(const WaveformSet& set);

/// Largest residual over the pairs a sequential construction constrains:
/// entries (n, m) with n < m, plus n > m when the window is symmetric.
/// Each entry is divided by ||s_n|| * ||s_m||.
double constrained_pair_residual(const WaveformSet& set);

/// Largest normalized off-diagonal residual over every ordered pair.
double max_offdiagonal_residual(std::span<const ComplexVector> waveforms, LagWindow window);

/// max |A^H A - I|.
double unitarity_error(const ComplexMatrix& a);

}  // namespace cosmic
