#pragma once

// Experiment description. Parsing is strict: unknown keys, wrong types and
// out-of-range values are all collected and reported together through
// ValidationError. Every omitted seed is derived from the top-level seed.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cosmic/baseline.hpp"
#include "cosmic/channel.hpp"
#include "cosmic/encoder.hpp"
#include "cosmic/receivers.hpp"

namespace cosmic {

struct WaveformSection {
  WaveformFamily family = WaveformFamily::Cosmic;
  int length = 1024;
  int antennas = 4;
  std::optional<int> subbasis_size;  // empty: floor(K/N)
  int zone_length = 16;
  ZoneMode mode = ZoneMode::OneSided;
  BasisFamily basis = BasisFamily::RandomUnitary;
  PartitionStrategy partition = PartitionStrategy::ContiguousBlocks;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> bit_seed;
  double rel_tol = 1e-10;
  Constellation constellation = Constellation::Qam16;
  SubcarrierAllocation ofdm_allocation = SubcarrierAllocation::Contiguous;

  int resolved_subbasis_size() const { return subbasis_size.value_or(length / antennas); }
};

enum class ArrayLayout { Uniform, Colocated, Custom };

struct GeometrySection {
  double carrier_frequency = 77e9;
  double bandwidth = 200e6;
  int rx_count = 4;
  ArrayLayout layout = ArrayLayout::Uniform;
  std::vector<Point2> tx;  // Custom only
  std::vector<Point2> rx;
};

enum class SceneKind { None, Points, Raster, Targets };

struct SceneSection {
  SceneKind kind = SceneKind::None;
  std::vector<PointScatterer> points;
  // raster
  std::filesystem::path mask;
  std::filesystem::path sidecar;
  bool speckle = true;
  std::optional<std::uint64_t> speckle_seed;
  double amplitude = 1.0;
  /// Scale each scatterer by its squared distance to the array center so
  /// echoes arrive with the configured relative amplitudes (any scene kind).
  bool range_compensation = false;
  // targets: strong scatterers at given delay bins plus weak clutter
  std::vector<double> strong_bins;
  double strong_amplitude = 1.0;
  int weak_count = 0;
  double weak_amplitude_min = 0.02;
  double weak_amplitude_max = 0.03;
  double weak_bin_min = 1.0;
  double weak_bin_max = 15.0;
  double angle_span_deg = 60.0;
  std::optional<std::uint64_t> target_seed;
};

struct GridSpec {
  double x_min = 0, x_max = 0, y_min = 0, y_max = 0, spacing = 0.2;
};

struct ImagingSection {
  bool enabled = true;
  int lag_count = 20;
  int oversampling = 4;
  Taper range_taper = Taper::None;
  Taper apodization = Taper::None;
  std::optional<GridSpec> grid;  // default: the raster grid
  double noise_variance = 0.0;
  std::optional<std::uint64_t> noise_seed;
  double calibration = 1.0;
  int mainlobe_halfwidth = 1;
  /// Scatterers whose echo (reflectivity / range^2) reaches peak_fraction
  /// of the strongest echo are ISLR peaks.
  double peak_fraction = 0.5;
  /// Payload draws whose range profiles are power-averaged for ISLR.
  int trials = 1;
};

struct CommSection {
  bool enabled = false;
  double snr_db = 20.0;
  /// When set, SNR = |h|^2 tx_power / (noise_psd * B) instead of snr_db.
  std::optional<double> noise_psd;
  double tx_power = 1.0;
  double distance = 10.0;
  double antenna_gain = 1.0;
  PathLossModel pathloss = PathLossModel::FriisStandard;
  GainEstimation gain_estimation = GainEstimation::Genie;
  std::optional<std::uint64_t> noise_seed;
};

struct MetricsSection {
  bool islr = true;
  bool image_snr = true;
  bool se = true;
  bool residual = true;
};

struct SweepSection {
  std::string axis;  // antennas, snr_db, zone_length, distance, seed
  std::vector<double> values;
  std::vector<WaveformFamily> families;  // empty: the waveform family
  int workers = 0;                       // 0: hardware concurrency
};

enum class CubeFormat { Csv, Binary };

struct OutputSection {
  CubeFormat cube_format = CubeFormat::Csv;
  double db_floor = -60.0;
};

struct ScenarioConfig {
  std::string name = "scenario";
  std::uint64_t seed = 1;
  WaveformSection waveform;
  GeometrySection geometry;
  SceneSection scene;
  ImagingSection imaging;
  CommSection comm;
  MetricsSection metrics;
  std::optional<SweepSection> sweep;
  OutputSection output;

  /// Directory relative paths are resolved against.
  std::filesystem::path base_dir;
};

/// Resolved seeds; explicit config values win over derived ones.
struct SeedPlan {
  std::uint64_t waveform;
  std::uint64_t bits;
  std::uint64_t imaging_noise;
  std::uint64_t comm_noise;
  std::uint64_t speckle;
  std::uint64_t targets;
};

SeedPlan resolve_seeds(const ScenarioConfig& config);

/// Throws ValidationError listing every problem. With cross_checks off only
/// the schema is enforced (feasibility is left to the caller).
ScenarioConfig parse_scenario(const std::string& json_text,
                              const std::filesystem::path& base_dir = {}, bool cross_checks = true);
/// Also accepts a run manifest, whose embedded config is used.
ScenarioConfig load_scenario(const std::filesystem::path& path, bool cross_checks = true);

/// Cross-field checks (feasibility, geometry counts, files present);
/// returns the problems instead of throwing.
std::vector<std::string> validate_scenario(const ScenarioConfig& config);

/// Semantic JSON with every default filled in; mask files are represented
/// by paths here and by content hashes in the canonical form.
std::string scenario_to_json(const ScenarioConfig& config);

/// FNV-1a 64 of the key-sorted compact canonical form, as 16 hex digits.
/// Independent of whitespace, key order and the location of mask files.
std::string config_hash(const ScenarioConfig& config);

/// Sweepable axes.
bool is_sweep_axis(const std::string& axis);
/// Returns a copy with the axis set to value. Throws ParameterError for an
/// unknown axis.
ScenarioConfig apply_axis(const ScenarioConfig& config, const std::string& axis, double value);

CosmicConfig cosmic_config(const ScenarioConfig& config);

std::string fnv1a_hex(const std::string& bytes);

}  // namespace cosmic
