#pragma once

// generate -> channel -> receive -> metrics, in memory and on disk.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cosmic/metrics.hpp"
#include "cosmic/scenario.hpp"

namespace cosmic {

/// Toolkit version, recorded in every manifest.
std::string_view toolkit_version() noexcept;

/// How far a run goes; each stage includes the previous ones where needed.
enum class Stage { Generate, Simulate, Image, Decode, Metrics };

std::string_view to_string(Stage s) noexcept;

struct ScenarioResult {
  WaveformSet set;
  std::vector<SymbolFrame> frames;  // empty for zero-shift sets
  RadarGeometry geometry;
  std::optional<SceneModel> scene;
  std::optional<ImagingReceive> imaging_rx;
  std::optional<RangeCompressedCube> cube;
  std::optional<Eigen::VectorXd> range_profile;
  std::vector<int> islr_peaks;
  std::optional<RadarImage> image;
  std::optional<ComplexVector> comm_rx;
  std::optional<DecodeReport> decode;
  std::optional<double> comm_snr_db;
  MetricsReport metrics;
  std::vector<std::string> warnings;
};

/// Builds the array of a scenario (uniform, co-located or custom).
RadarGeometry scenario_geometry(const ScenarioConfig& config);

/// Scatterers of the scene section (raster files are read here).
SceneModel scenario_scene(const ScenarioConfig& config, const RadarGeometry& geom);

/// Waveforms and their frames for the configured family.
CosmicResult scenario_waveforms(const ScenarioConfig& config, std::uint64_t bit_seed);

/// Runs the stages in memory. Throws the library's exceptions.
ScenarioResult evaluate_scenario(const ScenarioConfig& config, Stage stage = Stage::Metrics);

/// evaluate_scenario plus every artifact of the stage under out_dir and a
/// manifest.json. Returns the artifact names written.
std::vector<std::string> run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir,
                                      Stage stage = Stage::Metrics);

struct SweepRow {
  double value = 0.0;
  WaveformFamily family = WaveformFamily::Cosmic;
  bool ok = true;
  std::string error;
  MetricsReport metrics;
};

struct SweepResult {
  std::string axis;
  std::vector<SweepRow> rows;  // value-major, families in configured order
};

/// One evaluation per (value, family) on a worker pool; a failing point is
/// recorded in its row and the sweep continues. Throws ParameterError for
/// a non-sweepable axis.
SweepResult run_sweep(const ScenarioConfig& config, const std::string& axis,
                      const std::vector<double>& values, int workers = 0);

std::string sweep_to_csv(const SweepResult& sweep);

/// Mean, standard deviation and count of every numeric metric per family.
std::string sweep_summary_json(const SweepResult& sweep);

/// Runs the config's sweep section (or the given axis/values) and writes
/// sweep.csv, sweep_summary.json and manifest.json.
SweepResult run_sweep_to_dir(const ScenarioConfig& config, const std::filesystem::path& out_dir,
                             const std::optional<std::string>& axis = {},
                             const std::optional<std::vector<double>>& values = {});

/// Run manifest: version, verb, config hash, resolved seeds, the full
/// config and the artifact list.
std::string manifest_json(const ScenarioConfig& config, std::string_view verb,
                          const std::vector<std::string>& artifacts,
                          const std::vector<std::string>& warnings);

}  // namespace cosmic
