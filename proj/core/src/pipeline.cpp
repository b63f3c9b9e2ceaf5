#include "cosmic/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <thread>

#include <json.hpp>

#include "cosmic/error.hpp"
#include "cosmic/io.hpp"
#include "cosmic/random.hpp"

#ifndef COSMIC_VERSION_STRING
#define COSMIC_VERSION_STRING "0.0.0"
#endif

namespace cosmic {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string_view toolkit_version() noexcept { return COSMIC_VERSION_STRING; }

std::string_view to_string(Stage s) noexcept {
  switch (s) {
    case Stage::Generate: return "generate";
    case Stage::Simulate: return "simulate";
    case Stage::Image: return "image";
    case Stage::Decode: return "decode";
    case Stage::Metrics: return "metrics";
  }
  return "metrics";
}

RadarGeometry scenario_geometry(const ScenarioConfig& config) {
  const auto& g = config.geometry;
  const int n = config.waveform.antennas;
  switch (g.layout) {
    case ArrayLayout::Uniform:
      return RadarGeometry::uniform_virtual_array(n, g.rx_count, g.carrier_frequency, g.bandwidth);
    case ArrayLayout::Colocated: {
      RadarGeometry geom;
      geom.carrier_frequency = g.carrier_frequency;
      geom.bandwidth = g.bandwidth;
      geom.tx.assign(n, Point2::Zero());
      geom.rx.assign(g.rx_count, Point2::Zero());
      return geom;
    }
    case ArrayLayout::Custom: {
      RadarGeometry geom;
      geom.carrier_frequency = g.carrier_frequency;
      geom.bandwidth = g.bandwidth;
      geom.tx = g.tx;
      geom.rx = g.rx;
      return geom;
    }
  }
  throw ParameterError("unknown array layout");
}

namespace {

Point2 array_center(const RadarGeometry& geom) {
  Point2 c = Point2::Zero();
  const auto v = geom.virtual_positions();
  for (const auto& p : v) c += p;
  return v.empty() ? c : Point2(c / static_cast<double>(v.size()));
}

}  // namespace

SceneModel scenario_scene(const ScenarioConfig& config, const RadarGeometry& geom) {
  const auto& s = config.scene;
  const auto seeds = resolve_seeds(config);
  SceneModel scene;
  switch (s.kind) {
    case SceneKind::None: break;
    case SceneKind::Points: scene.scatterers = s.points; break;
    case SceneKind::Raster: {
      const auto raster =
          io::read_raster_scene(config.base_dir / s.mask, config.base_dir / s.sidecar);
      scene = scene_from_raster(raster, s.speckle, seeds.speckle);
      for (auto& t : scene.scatterers) t.reflectivity *= s.amplitude;
      break;
    }
    case SceneKind::Targets: {
      auto gen = make_stream(seeds.targets, 0);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      const Point2 center = array_center(geom);
      const double half_span = s.angle_span_deg * kPi / 360.0;
      auto place = [&](double bin, double amplitude) {
        const double range = bin * geom.range_resolution();
        const double angle = (2.0 * unit(gen) - 1.0) * half_span;
        const double phase = 2.0 * kPi * unit(gen);
        scene.scatterers.push_back(
            {center + range * Point2(std::sin(angle), std::cos(angle)), std::polar(amplitude, phase)});
      };
      for (double bin : s.strong_bins) place(bin, s.strong_amplitude);
      for (int i = 0; i < s.weak_count; ++i) {
        const double bin = s.weak_bin_min + (s.weak_bin_max - s.weak_bin_min) * unit(gen);
        const double amp =
            s.weak_amplitude_min + (s.weak_amplitude_max - s.weak_amplitude_min) * unit(gen);
        place(bin, amp);
      }
      break;
    }
  }
  if (s.range_compensation) {
    const Point2 center = array_center(geom);
    for (auto& t : scene.scatterers) t.reflectivity *= (t.position - center).squaredNorm();
  }
  return scene;
}

CosmicResult scenario_waveforms(const ScenarioConfig& config, std::uint64_t bit_seed) {
  const auto& w = config.waveform;
  const bool pilots = config.comm.enabled && config.comm.gain_estimation == GainEstimation::Pilot;
  const auto make = [&](int n, int capacity) {
    const auto seed = mix_seed(bit_seed, static_cast<std::uint64_t>(n));
    if (!pilots) return random_frame(capacity, w.constellation, seed);
    if (capacity < kPilotSymbols) {
      throw ParameterError("antenna " + std::to_string(n + 1) + " carries " +
                           std::to_string(capacity) + " symbols, fewer than the " +
                           std::to_string(kPilotSymbols) + " pilots");
    }
    const auto payload = random_bits(
        static_cast<std::size_t>(capacity - kPilotSymbols) * bits_per_symbol(w.constellation), seed);
    return make_frame(with_pilot_prefix(payload, w.constellation), w.constellation);
  };

  CosmicResult out;
  switch (w.family) {
    case WaveformFamily::Cosmic: return generate_cosmic_set(cosmic_config(config), make);
    case WaveformFamily::Ofdm: {
      const auto plan = plan_ofdm(w.length, w.antennas, w.ofdm_allocation);
      for (int n = 0; n < plan.antennas(); ++n) out.frames.push_back(make(n, plan.per_antenna()));
      out.set = generate_ofdm_set(plan, out.frames);
      break;
    }
    case WaveformFamily::ZeroShift:
      out.set = generate_zero_shift_set(w.length, w.antennas, resolve_seeds(config).waveform);
      break;
  }
  out.set.meta.zone_length = w.zone_length;
  out.set.meta.mode = w.mode;
  return out;
}

namespace {

bool has_imaging(const ScenarioConfig& c, Stage stage) {
  return c.imaging.enabled && c.scene.kind != SceneKind::None &&
         (stage == Stage::Simulate || stage == Stage::Image || stage == Stage::Metrics);
}

bool has_comm(const ScenarioConfig& c, Stage stage) {
  return c.comm.enabled && c.waveform.family != WaveformFamily::ZeroShift &&
         (stage == Stage::Simulate || stage == Stage::Decode || stage == Stage::Metrics);
}

RangeCompressionOptions compression_options(const ScenarioConfig& c) {
  RangeCompressionOptions rc;
  rc.lag_count = c.imaging.lag_count;
  rc.oversampling = c.imaging.oversampling;
  rc.taper = c.imaging.range_taper;
  rc.lag_spacing = 1.0 / c.geometry.bandwidth;
  return rc;
}

ImagingChannelOptions channel_options(const ScenarioConfig& c, std::uint64_t noise_seed) {
  ImagingChannelOptions ch;
  ch.lag_count = c.imaging.lag_count;
  ch.noise_variance = c.imaging.noise_variance;
  ch.noise_seed = noise_seed;
  ch.amplitude_calibration = c.imaging.calibration;
  return ch;
}

// Delay bins of the dominant scatterers, averaged over virtual channels.
std::vector<int> declared_peaks(const SceneModel& scene, const RadarGeometry& geom,
                                double fraction, int lag_count) {
  // Ranked by echo strength, i.e. after the two-way spreading loss.
  const Point2 center = array_center(geom);
  std::vector<double> echo;
  for (const auto& t : scene.scatterers) {
    const double r2 = (t.position - center).squaredNorm();
    echo.push_back(r2 > 0.0 ? std::abs(t.reflectivity) / r2 : std::abs(t.reflectivity));
  }
  const double strongest = echo.empty() ? 0.0 : *std::max_element(echo.begin(), echo.end());
  std::vector<int> peaks;
  for (std::size_t i = 0; i < scene.scatterers.size(); ++i) {
    if (strongest == 0.0 || echo[i] < fraction * strongest) continue;
    double bins = 0.0;
    for (const auto& tx : geom.tx) {
      for (const auto& rx : geom.rx) bins += two_way_delay(tx, scene.scatterers[i].position, rx) * geom.bandwidth;
    }
    bins /= static_cast<double>(geom.tx.size() * geom.rx.size());
    const int b = static_cast<int>(std::lround(bins));
    if (b >= 0 && b < lag_count) peaks.push_back(b);
  }
  std::sort(peaks.begin(), peaks.end());
  peaks.erase(std::unique(peaks.begin(), peaks.end()), peaks.end());
  return peaks;
}

}  // namespace

ScenarioResult evaluate_scenario(const ScenarioConfig& config, Stage stage) {
  const auto seeds = resolve_seeds(config);
  ScenarioResult r;
  auto generated = scenario_waveforms(config, seeds.bits);
  r.set = std::move(generated.set);
  r.frames = std::move(generated.frames);
  const auto family = config.waveform.family;

  auto& m = r.metrics;
  m.family = std::string(to_string(family));
  m.config_hash = config_hash(config);
  if (family != WaveformFamily::ZeroShift) m.total_symbols = r.set.total_symbols();
  if (config.metrics.residual && r.set.antenna_count() > 1) {
    m.residual_max =
        family == WaveformFamily::Cosmic
            ? constrained_pair_residual(r.set)
            : max_offdiagonal_residual(r.set.waveforms,
                                       zone_window(config.waveform.zone_length, config.waveform.mode));
  }
  if (stage == Stage::Generate) return r;

  if (has_imaging(config, stage)) {
    r.geometry = scenario_geometry(config);
    r.scene = scenario_scene(config, r.geometry);
    r.imaging_rx = imaging_receive(r.set, r.geometry, *r.scene, channel_options(config, seeds.imaging_noise));
    r.warnings = r.imaging_rx->warnings;

    if (stage == Stage::Image || stage == Stage::Metrics) {
      const auto rc = compression_options(config);
      r.cube = range_compress(r.imaging_rx->rx, r.set, rc);

      const bool point_scene =
          config.scene.kind == SceneKind::Points || config.scene.kind == SceneKind::Targets;
      if (point_scene && config.metrics.islr) {
        Eigen::VectorXd power = average_range_profile(*r.cube).cwiseAbs2();
        for (int t = 1; t < config.imaging.trials; ++t) {
          ScenarioConfig draw = config;
          draw.waveform.seed = seeds.waveform;
          if (family == WaveformFamily::ZeroShift) {
            draw.waveform.seed = mix_seed(seeds.waveform, 7000 + static_cast<std::uint64_t>(t));
          }
          const auto set =
              scenario_waveforms(draw, mix_seed(seeds.bits, 7000 + static_cast<std::uint64_t>(t))).set;
          const auto rx = imaging_receive(
              set, r.geometry, *r.scene,
              channel_options(config, mix_seed(seeds.imaging_noise, static_cast<std::uint64_t>(t))));
          power += average_range_profile(range_compress(rx.rx, set, rc)).cwiseAbs2();
        }
        r.range_profile = (power / static_cast<double>(config.imaging.trials)).cwiseSqrt();
        r.islr_peaks = declared_peaks(*r.scene, r.geometry, config.imaging.peak_fraction,
                                      config.imaging.lag_count);
        if (r.islr_peaks.empty()) {
          r.warnings.push_back("no declared scatterer falls inside the lag window; ISLR skipped");
        } else {
          const auto& p = *r.range_profile;
          m.islr_db = islr_db({p.data(), static_cast<std::size_t>(p.size())},
                              config.imaging.mainlobe_halfwidth, r.islr_peaks);
        }
      }

      const bool raster = r.scene->raster.has_value();
      if (raster || config.imaging.grid) {
        const ImageGrid grid =
            config.imaging.grid
                ? ImageGrid::from_bounds(config.imaging.grid->x_min, config.imaging.grid->x_max,
                                         config.imaging.grid->y_min, config.imaging.grid->y_max,
                                         config.imaging.grid->spacing)
                : ImageGrid::from_raster(*r.scene->raster);
        r.image = backproject(*r.cube, r.geometry, grid, config.imaging.apodization);
        if (r.image->clipped > 0) {
          r.warnings.push_back(std::to_string(r.image->clipped) +
                               " pixel/channel delays fell outside the range-compressed window");
        }
        if (raster && config.metrics.image_snr) {
          if (config.imaging.grid) {
            r.warnings.push_back("image SNR needs the raster grid; skipped for a custom grid");
          } else {
            m.snr_image_db = image_snr_db(*r.image, build_region_mask(*r.scene->raster));
          }
        }
      }
    }
  }

  if (has_comm(config, stage)) {
    const auto& c = config.comm;
    const double wavelength = kSpeedOfLight / config.geometry.carrier_frequency;
    const Complex h = pathloss_gain(c.antenna_gain, wavelength, c.distance, c.pathloss);
    const double gain_sq = std::norm(h);
    const double snr_db =
        c.noise_psd ? 10.0 * std::log10(gain_sq * c.tx_power / (*c.noise_psd * config.geometry.bandwidth))
                    : c.snr_db;
    r.comm_snr_db = snr_db;
    const std::vector<Complex> gains(r.set.antenna_count(), h);
    r.comm_rx = comm_receive(r.set, gains,
                             noise_variance_for_snr(snr_db, r.set.length(), gain_sq), seeds.comm_noise);

    if (stage == Stage::Decode || stage == Stage::Metrics) {
      DecodeOptions opt;
      opt.gain_mode = c.gain_estimation;
      opt.known_gains = gains;
      const auto decoded = comm_decode(*r.comm_rx, r.set.meta, opt);
      const auto slots = nominal_slots(r.set.meta);
      r.decode = score_decode(decoded, r.frames, slots);
      m.ser = r.decode->ser();
      m.ber = r.decode->ber();
      m.eta = r.decode->eta();
      m.extras.emplace_back("comm_snr_db", snr_db);
      if (config.metrics.se) {
        const int n = r.set.antenna_count();
        const double beta = family == WaveformFamily::Ofdm ? 1.0 / n : 1.0;
        m.se_bits_per_s_per_hz = spectral_efficiency_from_snr(n, snr_db, beta, *m.eta);
        m.extras.emplace_back("se_bound", spectral_efficiency_from_snr(n, snr_db, 1.0, 1.0));
      }
    }
  }
  return r;
}

std::string manifest_json(const ScenarioConfig& config, std::string_view verb,
                          const std::vector<std::string>& artifacts,
                          const std::vector<std::string>& warnings) {
  const auto seeds = resolve_seeds(config);
  ordered_json j;
  j["manifest_version"] = 1;
  j["tool"] = "cosmic";
  j["version"] = std::string(toolkit_version());
  j["verb"] = std::string(verb);
  j["config_hash"] = config_hash(config);
  j["seeds"] = {{"master", config.seed},
                {"waveform", seeds.waveform},
                {"bits", seeds.bits},
                {"imaging_noise", seeds.imaging_noise},
                {"comm_noise", seeds.comm_noise},
                {"speckle", seeds.speckle},
                {"targets", seeds.targets}};
  j["config"] = ordered_json::parse(scenario_to_json(config));
  auto sorted = artifacts;
  std::sort(sorted.begin(), sorted.end());
  j["artifacts"] = sorted;
  j["warnings"] = warnings;
  return j.dump(2) + "\n";
}

namespace {

std::string profile_csv(const Eigen::VectorXd& p, const std::vector<int>& peaks) {
  std::string out = "lag,magnitude,declared_peak\n";
  for (Eigen::Index l = 0; l < p.size(); ++l) {
    const bool peak = std::find(peaks.begin(), peaks.end(), l) != peaks.end();
    out += std::to_string(l) + ',' + io::format_double(p[l]) + ',' + (peak ? "1" : "0") + '\n';
  }
  return out;
}

std::string metrics_csv(const MetricsReport& m) {
  auto cols = MetricsReport::csv_columns();
  for (const auto& e : m.extras) cols.push_back(e.first);
  std::string out;
  auto vals = m.csv_values();
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
  out += '\n';
  for (std::size_t i = 0; i < vals.size(); ++i) out += (i ? "," : "") + vals[i];
  out += '\n';
  return out;
}

}  // namespace

std::vector<std::string> run_scenario(const ScenarioConfig& config, const fs::path& out_dir,
                                      Stage stage) {
  const auto r = evaluate_scenario(config, stage);
  fs::create_directories(out_dir);
  std::vector<std::string> artifacts;
  auto write = [&](const std::string& name, const std::string& content) {
    io::atomic_write(out_dir / name, content);
    artifacts.push_back(name);
  };

  write("waveforms.csv", io::waveforms_to_csv(r.set));
  write("waveforms.json", io::metadata_to_json(r.set.meta));
  if (!r.frames.empty()) write("bits.csv", io::bits_to_csv(r.frames));

  if (r.imaging_rx) {
    if (config.output.cube_format == CubeFormat::Binary) {
      io::write_raw_binary(out_dir / "raw", r.imaging_rx->rx, r.imaging_rx->sampling_interval);
      artifacts.push_back("raw.bin");
      artifacts.push_back("raw.json");
    } else {
      write("raw.csv", io::raw_to_csv(r.imaging_rx->rx));
    }
  }
  if (r.comm_rx) {
    const std::vector<ComplexVector> one{*r.comm_rx};
    write("received.csv", io::raw_to_csv(one));
  }
  if (r.range_profile) write("range_profile.csv", profile_csv(*r.range_profile, r.islr_peaks));
  if (r.image) {
    write("image.pgm", io::encode_pgm(io::image_to_gray(*r.image, config.output.db_floor)));
    write("image.csv", io::image_to_csv(*r.image));
    write("image.json", io::image_sidecar_json(*r.image, config.output.db_floor));
  }
  if (r.decode) write("decode.json", r.decode->to_json() + "\n");
  if (stage == Stage::Metrics) {
    write("metrics.json", r.metrics.to_json() + "\n");
    write("metrics.csv", metrics_csv(r.metrics));
  }

  // Copy scene files so the manifest alone reproduces the run.
  ScenarioConfig recorded = config;
  if (config.scene.kind == SceneKind::Raster) {
    write("scene_mask.pgm", io::read_text(config.base_dir / config.scene.mask));
    write("scene_mask.json", io::read_text(config.base_dir / config.scene.sidecar));
    recorded.scene.mask = "scene_mask.pgm";
    recorded.scene.sidecar = "scene_mask.json";
    recorded.base_dir = out_dir;
  }
  io::atomic_write(out_dir / "manifest.json",
                   manifest_json(recorded, to_string(stage), artifacts, r.warnings));
  artifacts.push_back("manifest.json");
  return artifacts;
}

SweepResult run_sweep(const ScenarioConfig& config, const std::string& axis,
                      const std::vector<double>& values, int workers) {
  if (!is_sweep_axis(axis)) {
    throw ParameterError("'" + axis + "' is not sweepable (antennas, snr_db, zone_length, distance, seed)");
  }
  std::vector<WaveformFamily> families;
  if (config.sweep && !config.sweep->families.empty()) {
    families = config.sweep->families;
  } else {
    families.push_back(config.waveform.family);
  }
  SweepResult out;
  out.axis = axis;
  for (double v : values) {
    for (auto f : families) {
      SweepRow row;
      row.value = v;
      row.family = f;
      row.metrics.family = std::string(to_string(f));
      out.rows.push_back(std::move(row));
    }
  }

  auto evaluate_row = [&](SweepRow& row) {
    try {
      ScenarioConfig c = apply_axis(config, axis, row.value);
      c.waveform.family = row.family;
      c.sweep.reset();
      const auto problems = validate_scenario(c);
      if (!problems.empty()) throw ValidationError(problems);
      row.metrics = evaluate_scenario(c, Stage::Metrics).metrics;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
  };

  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min<int>(workers, static_cast<int>(out.rows.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < out.rows.size(); i = next++) evaluate_row(out.rows[i]);
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return out;
}

namespace {

std::vector<std::string> extra_keys(const SweepResult& sweep) {
  std::vector<std::string> keys;
  for (const auto& row : sweep.rows) {
    for (const auto& e : row.metrics.extras) {
      if (std::find(keys.begin(), keys.end(), e.first) == keys.end()) keys.push_back(e.first);
    }
  }
  return keys;
}

std::string csv_safe(std::string s) {
  for (auto& ch : s) {
    if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"') ch = ';';
  }
  return s;
}

}  // namespace

std::string sweep_to_csv(const SweepResult& sweep) {
  const auto keys = extra_keys(sweep);
  std::string out = sweep.axis;
  for (const auto& c : MetricsReport::csv_columns()) out += "," + c;
  for (const auto& k : keys) out += "," + k;
  out += ",status,error\n";
  const auto base_cols = MetricsReport::csv_columns().size();
  for (const auto& row : sweep.rows) {
    out += io::format_double(row.value);
    const auto vals = row.metrics.csv_values();
    for (std::size_t i = 0; i < base_cols; ++i) out += "," + vals[i];
    for (const auto& k : keys) {
      out += ',';
      for (const auto& e : row.metrics.extras) {
        if (e.first == k) {
          out += io::format_double(e.second);
          break;
        }
      }
    }
    out += row.ok ? ",ok," : ",error," + csv_safe(row.error);
    out += '\n';
  }
  return out;
}

std::string sweep_summary_json(const SweepResult& sweep) {
  std::map<std::string, std::map<std::string, std::vector<double>>> samples;
  std::vector<std::string> family_order;
  for (const auto& row : sweep.rows) {
    const auto fam = std::string(to_string(row.family));
    if (std::find(family_order.begin(), family_order.end(), fam) == family_order.end()) {
      family_order.push_back(fam);
    }
    if (!row.ok) continue;
    auto& s = samples[fam];
    const auto& m = row.metrics;
    auto add = [&](const char* k, const std::optional<double>& v) {
      if (v) s[k].push_back(*v);
    };
    add("islr_db", m.islr_db);
    add("snr_image_db", m.snr_image_db);
    add("se_bits_per_s_per_hz", m.se_bits_per_s_per_hz);
    add("ser", m.ser);
    add("ber", m.ber);
    add("eta", m.eta);
    add("residual_max", m.residual_max);
    if (m.total_symbols) s["total_symbols"].push_back(*m.total_symbols);
    for (const auto& e : m.extras) s[e.first].push_back(e.second);
  }
  ordered_json j;
  j["axis"] = sweep.axis;
  j["points"] = sweep.rows.size();
  std::size_t failed = 0;
  for (const auto& row : sweep.rows) failed += row.ok ? 0 : 1;
  j["failed"] = failed;
  ordered_json fams = ordered_json::object();
  for (const auto& fam : family_order) {
    ordered_json fj = ordered_json::object();
    for (const auto& [key, xs] : samples[fam]) {
      double mean = 0.0;
      for (double x : xs) mean += x;
      mean /= static_cast<double>(xs.size());
      double var = 0.0;
      for (double x : xs) var += (x - mean) * (x - mean);
      var = xs.size() > 1 ? var / static_cast<double>(xs.size() - 1) : 0.0;
      fj[key] = {{"mean", mean}, {"std", std::sqrt(var)}, {"count", xs.size()}};
    }
    fams[fam] = fj;
  }
  j["families"] = fams;
  return j.dump(2) + "\n";
}

SweepResult run_sweep_to_dir(const ScenarioConfig& config, const fs::path& out_dir,
                             const std::optional<std::string>& axis,
                             const std::optional<std::vector<double>>& values) {
  std::string ax = axis.value_or(config.sweep ? config.sweep->axis : std::string());
  std::vector<double> vals = values.value_or(config.sweep ? config.sweep->values : std::vector<double>{});
  if (ax.empty() || vals.empty()) {
    throw ParameterError("no sweep axis/values: add a \"sweep\" section or pass --axis and --values");
  }
  const int workers = config.sweep ? config.sweep->workers : 0;
  auto result = run_sweep(config, ax, vals, workers);
  fs::create_directories(out_dir);
  io::atomic_write(out_dir / "sweep.csv", sweep_to_csv(result));
  io::atomic_write(out_dir / "sweep_summary.json", sweep_summary_json(result));

  ScenarioConfig recorded = config;
  std::vector<std::string> artifacts{"sweep.csv", "sweep_summary.json"};
  if (config.scene.kind == SceneKind::Raster) {
    io::atomic_write(out_dir / "scene_mask.pgm", io::read_text(config.base_dir / config.scene.mask));
    io::atomic_write(out_dir / "scene_mask.json",
                     io::read_text(config.base_dir / config.scene.sidecar));
    artifacts.push_back("scene_mask.pgm");
    artifacts.push_back("scene_mask.json");
    recorded.scene.mask = "scene_mask.pgm";
    recorded.scene.sidecar = "scene_mask.json";
    recorded.base_dir = out_dir;
  }
  if (!recorded.sweep) recorded.sweep.emplace();
  recorded.sweep->axis = ax;
  recorded.sweep->values = vals;
  std::vector<std::string> warnings;
  for (const auto& row : result.rows) {
    if (!row.ok) {
      warnings.push_back(ax + "=" + io::format_double(row.value) + " " +
                         std::string(to_string(row.family)) + ": " + row.error);
    }
  }
  io::atomic_write(out_dir / "manifest.json", manifest_json(recorded, "sweep", artifacts, warnings));
  return result;
}

}  // namespace cosmic
