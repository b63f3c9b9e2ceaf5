#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cosmic/types.hpp"
#include "cosmic/waveform.hpp"

namespace cosmic {

/// Planar MIMO radar: antennas lie in the x-y plane, the scene at y > 0.
struct RadarGeometry {
  double carrier_frequency = 77e9;  // f0 [Hz]
  double bandwidth = 200e6;         // B [Hz]; sampling interval is 1/B
  std::vector<Point2> tx;
  std::vector<Point2> rx;

  double wavelength() const noexcept { return kSpeedOfLight / carrier_frequency; }
  double sampling_interval() const noexcept { return 1.0 / bandwidth; }
  /// c / (2B).
  double range_resolution() const noexcept { return kSpeedOfLight / (2.0 * bandwidth); }

  /// Phase centers (tx_n + rx_m) / 2, index n * M + m.
  std::vector<Point2> virtual_positions() const;

  /// Rx at lambda/2 pitch, Tx at M*lambda/2 pitch along x, centered on the
  /// origin, so the N*M virtual elements are contiguous at lambda/4 pitch.
  static RadarGeometry uniform_virtual_array(int tx_count, int rx_count,
                                             double carrier_frequency = 77e9,
                                             double bandwidth = 200e6);
};

struct PointScatterer {
  Point2 position;
  Complex reflectivity;
};

/// Reflectivity raster on a regular grid. Cell (row, col) sits at
/// origin + (col * spacing_x, row * spacing_y); values are row-major.
struct RasterScene {
  Point2 origin{0.0, 0.0};
  double spacing_x = 0.2;
  double spacing_y = 0.2;
  int rows = 0;
  int cols = 0;
  std::vector<double> values;
  /// Cells with value >= threshold form the signal region.
  double signal_threshold = 0.5;
  /// Cells closer than this to the signal region belong to neither region.
  double noise_guard = 0.0;

  double at(int row, int col) const { return values[static_cast<std::size_t>(row) * cols + col]; }
  Point2 cell_center(int row, int col) const {
    return origin + Point2(col * spacing_x, row * spacing_y);
  }
};

struct SceneModel {
  std::vector<PointScatterer> scatterers;
  std::optional<RasterScene> raster;
};

/// Every nonzero cell becomes a point scatterer of that amplitude; with
/// speckle, each gets an independent uniform phase from speckle_seed.
SceneModel scene_from_raster(const RasterScene& raster, bool speckle, std::uint64_t speckle_seed);

/// Two-way delay Tx -> p -> Rx in seconds.
double two_way_delay(const Point2& tx, const Point2& p, const Point2& rx) noexcept;

/// Scatterers whose two-way delay exceeds max_delay_bins samples for some
/// virtual channel, described for the warning channel.
std::vector<std::string> scene_range_warnings(const SceneModel& scene, const RadarGeometry& geom,
                                              double max_delay_bins);

struct CommChannel {
  std::vector<Complex> gains;  // h_n, one per Tx antenna, constant over a slot
  double distance = 10.0;      // d [m]
  double antenna_gain = 1.0;   // G
  double noise_psd = 0.0;      // N0 [W/Hz]
};

enum class PathLossModel { FriisStandard, Simplified };

std::string_view to_string(PathLossModel m) noexcept;
PathLossModel pathloss_model_from_string(std::string_view name);

/// Flat-fading amplitude (zero phase).
///   FriisStandard: sqrt(G lambda^2 / (4 pi d)^2)
///   Simplified:    sqrt(G lambda^2 / (4 pi d^2)), i.e. the loss
///                  -10 log10(G lambda^2 / (4 pi d^2)) dB.
/// Throws ParameterError for d <= 0, lambda <= 0 or G <= 0.
Complex pathloss_gain(double antenna_gain, double wavelength, double distance,
                      PathLossModel model = PathLossModel::FriisStandard);

/// Positive path loss in dB for the given model.
double pathloss_db(double antenna_gain, double wavelength, double distance,
                   PathLossModel model = PathLossModel::FriisStandard);

/// y = sum_n h_n s_n + w with w ~ CN(0, noise_variance) i.i.d.
ComplexVector comm_receive(const WaveformSet& set, std::span<const Complex> gains,
                           double noise_variance, std::uint64_t noise_seed);

/// Per-sample noise variance giving per-antenna SNR |h|^2 (1/K) / sigma^2
/// for unit-energy waveforms of length K.
double noise_variance_for_snr(double snr_db, int length, double gain_sq = 1.0) noexcept;

/// Delays s by a possibly fractional number of samples through a linear
/// frequency-domain phase ramp on a zero-padded buffer; returns out_length
/// samples. Integer delays reproduce an exact shift.
ComplexVector fractional_delay(const ComplexVector& s, double delay_samples, Eigen::Index out_length);

struct ImagingChannelOptions {
  /// Raw samples per receiver are K + lag_count.
  int lag_count = 20;
  double noise_variance = 0.0;
  std::uint64_t noise_seed = 0;
  /// alpha = calibration * reflectivity / (d_tx * d_rx).
  double amplitude_calibration = 1.0;
};

struct ImagingReceive {
  std::vector<ComplexVector> rx;  // M sequences
  double sampling_interval = 0.0;
  std::vector<std::string> warnings;
};

/// y_m = sum_n sum_t alpha_t s_n(t - tau) exp(-j 2 pi f0 tau) + w_m with
/// exact bistatic two-way delays. Noise uses stream m of noise_seed.
ImagingReceive imaging_receive(const WaveformSet& set, const RadarGeometry& geom,
                               const SceneModel& scene, const ImagingChannelOptions& options);

}  // namespace cosmic
