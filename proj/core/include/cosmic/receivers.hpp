#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cosmic/channel.hpp"
#include "cosmic/modulation.hpp"
#include "cosmic/waveform.hpp"

namespace cosmic {

// ---- communication receiver ------------------------------------------------

/// Least-squares coefficients C_n^H y (C_n has orthonormal columns).
ComplexVector comm_project(const ComplexVector& y, const SubBasis& cn);

enum class GainEstimation {
  Genie,  // gains supplied by the caller
  Pilot,  // first kPilotSymbols symbols of every frame are known pilots
};

inline constexpr int kPilotSymbols = 4;

/// Pilot symbols a Pilot-mode transmitter places at the start of each frame.
ComplexVector pilot_symbols(Constellation c);

/// Returns `payload` with the pilot bits prepended.
BitVector with_pilot_prefix(const BitVector& payload, Constellation c);

struct DecodeOptions {
  GainEstimation gain_mode = GainEstimation::Genie;
  /// h_n per antenna; all ones when absent in Genie mode.
  std::optional<std::vector<Complex>> known_gains;
};

struct AntennaDecode {
  ComplexVector soft;      // equalized symbol estimates
  SymbolFrame decided;     // nearest constellation points and their bits
  Complex gain_estimate;   // h_n actually used
  int constraint_rank = 0;  // rank of the recomputed B_n, 0 for OFDM and antenna 1
};

/// Recovers every antenna's symbols from a single-antenna observation y.
///
/// COSMIC: sequentially x_p = C_n^H y, s_hat = C_n x_p, B_hat from earlier
/// s_hat, basis from null_space(), x = basis^H x_p / (h_n * scale_n).
/// OFDM: x = C_n^H y / (h_n * scale_n) on the antenna's subcarriers.
///
/// Throws InfeasibleError when the sub-bases of different antennas are not
/// mutually orthogonal (shared columns make the projection ambiguous), and
/// DecodeError when a recomputed null space disagrees with the advertised
/// capacity or the set carries no data.
std::vector<AntennaDecode> comm_decode(const ComplexVector& y, const WaveformMetadata& meta,
                                       const DecodeOptions& options = {});

struct AntennaScore {
  int symbols = 0;
  int symbol_errors = 0;
  int bits = 0;
  int bit_errors = 0;
  int slots = 0;  // nominal symbol slots used for eta
};

struct DecodeReport {
  std::vector<AntennaScore> antennas;
  int symbols = 0;
  int symbol_errors = 0;
  int bits = 0;
  int bit_errors = 0;

  double ser() const noexcept;
  double ber() const noexcept;
  /// Correct symbols over nominal slots, i.e. the symbol-weighted eta.
  double eta() const noexcept;
  std::string to_json() const;
};

/// Compares decoded frames against the transmitted ones. `slots` gives the
/// nominal per-antenna symbol budget (K_s for COSMIC, assigned subcarriers
/// for OFDM); when empty the transmitted symbol count is used.
DecodeReport score_decode(std::span<const AntennaDecode> decoded,
                          std::span<const SymbolFrame> transmitted,
                          std::span<const int> slots = {});

/// Nominal symbol slots per antenna for eta accounting.
std::vector<int> nominal_slots(const WaveformMetadata& meta);

// ---- imaging receiver ------------------------------------------------------

enum class Taper { None, Hann };

std::string_view to_string(Taper t) noexcept;
Taper taper_from_string(std::string_view name);

/// Range-compressed data of every virtual channel.
class RangeCompressedCube {
 public:
  RangeCompressedCube(int tx_count, int rx_count, int lag_count, int oversampling,
                      double lag_spacing);

  int tx_count() const noexcept { return tx_count_; }
  int rx_count() const noexcept { return rx_count_; }
  int lag_count() const noexcept { return lag_count_; }
  int oversampling() const noexcept { return oversampling_; }
  /// Seconds per critically sampled lag bin.
  double lag_spacing() const noexcept { return lag_spacing_; }

  /// Lags 0 .. lag_count-1 at the sampling interval.
  ComplexVector& profile(int tx, int rx) { return profiles_[index(tx, rx)]; }
  const ComplexVector& profile(int tx, int rx) const { return profiles_[index(tx, rx)]; }
  /// Band-limited interpolation at lag_spacing / oversampling.
  ComplexVector& fine_profile(int tx, int rx) { return fine_[index(tx, rx)]; }
  const ComplexVector& fine_profile(int tx, int rx) const { return fine_[index(tx, rx)]; }

  Complex at(int tx, int rx, int lag) const { return profile(tx, rx)[lag]; }

 private:
  std::size_t index(int tx, int rx) const noexcept {
    return static_cast<std::size_t>(tx) * rx_count_ + rx;
  }

  int tx_count_;
  int rx_count_;
  int lag_count_;
  int oversampling_;
  double lag_spacing_;
  std::vector<ComplexVector> profiles_;
  std::vector<ComplexVector> fine_;
};

struct RangeCompressionOptions {
  int lag_count = 20;   // zone length plus guard
  int oversampling = 4;
  Taper taper = Taper::None;  // Hann weighting of the compressed spectrum
  double lag_spacing = 5e-9;
};

/// Entry (n, m, l) = sum_k conj(s_n[k]) y_m[k + l], computed in the
/// frequency domain, plus an oversampled copy obtained by zero-padding the
/// product spectrum. Throws ParameterError if a raw sequence is shorter
/// than K.
RangeCompressedCube range_compress(std::span<const ComplexVector> raw, const WaveformSet& set,
                                   const RangeCompressionOptions& options);

struct ImageGrid {
  double x_min = -5.0;
  double y_min = 1.0;
  double dx = 0.2;
  double dy = 0.2;
  int nx = 0;
  int ny = 0;

  Point2 pixel(int row, int col) const { return {x_min + col * dx, y_min + row * dy}; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(nx) * ny; }

  /// Grid matching a raster scene cell-for-cell.
  static ImageGrid from_raster(const RasterScene& raster);
  /// Inclusive bounds sampled at `spacing`.
  static ImageGrid from_bounds(double x_min, double x_max, double y_min, double y_max,
                               double spacing);
};

struct RadarImage {
  ImageGrid grid;
  ComplexMatrix pixels;  // ny x nx, row i at y_min + i * dy
  /// (pixel, channel) pairs whose delay fell outside the cube.
  std::size_t clipped = 0;
};

/// I(p) = sum_{n,m} w_nm cube_nm(tau_nm(p)) exp(+j 2 pi f0 tau_nm(p)), with
/// linear interpolation on the oversampled profiles. Hann apodization
/// weights virtual elements by their position along the array.
RadarImage backproject(const RangeCompressedCube& cube, const RadarGeometry& geom,
                       const ImageGrid& grid, Taper apodization = Taper::None);

}  // namespace cosmic
