#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cosmic/baseline.hpp"
#include "cosmic/channel.hpp"
#include "cosmic/receivers.hpp"
#include "cosmic/waveform.hpp"

namespace cosmic {

/// dB values are clamped to [-kDbClamp, +kDbClamp] so reports stay finite.
inline constexpr double kDbClamp = 120.0;

/// 10 log10(ratio) clamped; zero maps to the floor, +inf to the ceiling.
double ratio_to_db(double ratio) noexcept;

/// Integrated sidelobe ratio of a magnitude profile: energy outside the
/// union of [peak - halfwidth, peak + halfwidth] over the declared peaks,
/// divided by the energy inside. Throws ParameterError for an empty peak
/// list, halfwidth < 1 or peaks outside the profile, and when the mainlobe
/// holds no energy.
double islr_db(std::span<const double> magnitude, int mainlobe_halfwidth,
               std::span<const int> peaks);

/// Indices of the `count` largest local maxima, at least `min_separation`
/// bins apart, in ascending index order.
std::vector<int> strongest_peaks(std::span<const double> magnitude, int count, int min_separation);

/// sqrt(mean over virtual channels of |profile|^2) at critical sampling.
Eigen::VectorXd average_range_profile(const RangeCompressedCube& cube);

enum class Region : std::uint8_t { Signal, Noise, Ignore };

struct RegionMask {
  int rows = 0;
  int cols = 0;
  std::vector<Region> labels;  // row-major, aligned with RadarImage rows

  Region at(int row, int col) const { return labels[static_cast<std::size_t>(row) * cols + col]; }
  std::size_t count(Region r) const;
};

/// Signal: cells >= raster.signal_threshold. Noise: the remaining cells
/// farther than raster.noise_guard metres from every signal cell.
RegionMask build_region_mask(const RasterScene& raster);

/// 10 log10(sum_S |I|^2 / sum_N |I|^2). Throws ParameterError on a shape
/// mismatch or when either region is empty.
double image_snr_db(const RadarImage& image, const RegionMask& mask);

/// beta * eta * sum_n log2(1 + |h_n|^2 P_n / (beta N0 B)).
/// Throws ParameterError unless beta in (0, 1], eta in [0, 1], N0 B > 0,
/// powers >= 0 and gains/powers have equal length.
double spectral_efficiency(std::span<const double> gain_sq, std::span<const double> power,
                           double noise_psd, double bandwidth, double beta, double eta);

/// Per-antenna receive SNR form: |h|^2 P / (N0 B) = snr for every antenna.
double spectral_efficiency_from_snr(int antennas, double snr_db, double beta, double eta);

/// One row of the symbol-capacity / ISLR table.
struct CapacityRow {
  int antennas = 0;
  int subbasis_size = 0;
  int cosmic_symbols = 0;          // sum of computed D_n
  int cosmic_predicted = 0;        // sum of the closed-form prediction
  std::vector<int> cosmic_capacity;
  int ofdm_symbols = 0;            // N * floor(K/N)
  double cosmic_islr_db = 0.0;
  double ofdm_islr_db = 0.0;
};

struct CapacitySweepConfig {
  int length = 1024;
  int zone_length = 16;
  ZoneMode mode = ZoneMode::Symmetric;
  BasisFamily basis = BasisFamily::RandomUnitary;
  SubcarrierAllocation allocation = SubcarrierAllocation::Contiguous;
  Constellation constellation = Constellation::Qam16;
  std::uint64_t seed = 1;
  std::vector<int> antennas{1, 2, 4, 6};
  /// Payload draws whose range profiles are power-averaged before ISLR.
  int trials = 64;
  /// Point target delay in bins inside a lag_count-bin profile. The default
  /// window spans exactly the symmetric zone around the target.
  int target_bin = 15;
  int lag_count = 31;
  int mainlobe_halfwidth = 1;
};

/// For each N: K_s = floor(K/N), COSMIC capacity from the computed ranks,
/// and the ISLR of a noiseless single point-target range profile for
/// COSMIC and contiguous-allocation OFDM, power-averaged over trials.
std::vector<CapacityRow> symbol_capacity_vs_n(const CapacitySweepConfig& config);

/// Flat key/value report; optional figures are omitted when absent.
struct MetricsReport {
  std::string family;
  std::string config_hash;
  std::optional<double> islr_db;
  std::optional<double> snr_image_db;
  std::optional<double> se_bits_per_s_per_hz;
  std::optional<double> ser;
  std::optional<double> ber;
  std::optional<double> eta;
  std::optional<double> residual_max;
  std::optional<int> total_symbols;
  /// Sweep axis values and other scenario-specific numbers.
  std::vector<std::pair<std::string, double>> extras;

  std::string to_json() const;
  /// Column names shared by every report in a sweep.
  static std::vector<std::string> csv_columns();
  /// Values in csv_columns() order followed by the extras; empty when absent.
  std::vector<std::string> csv_values() const;
};

}  // namespace cosmic
