#include "cosmic/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

#include "cosmic/encoder.hpp"
#include "cosmic/error.hpp"
#include "cosmic/random.hpp"

namespace cosmic {

double ratio_to_db(double ratio) noexcept {
  if (std::isnan(ratio)) return std::numeric_limits<double>::quiet_NaN();
  if (!(ratio > 0.0)) return -kDbClamp;
  return std::clamp(10.0 * std::log10(ratio), -kDbClamp, kDbClamp);
}

double islr_db(std::span<const double> magnitude, int mainlobe_halfwidth,
               std::span<const int> peaks) {
  if (peaks.empty()) throw ParameterError("islr: at least one peak is required");
  if (mainlobe_halfwidth < 1) throw ParameterError("islr: mainlobe halfwidth must be >= 1 bin");
  const auto n = static_cast<int>(magnitude.size());
  std::vector<bool> in_main(magnitude.size(), false);
  for (int p : peaks) {
    if (p < 0 || p >= n) {
      throw ParameterError("islr: peak " + std::to_string(p) + " outside the profile");
    }
    for (int i = std::max(0, p - mainlobe_halfwidth); i <= std::min(n - 1, p + mainlobe_halfwidth);
         ++i) {
      in_main[i] = true;
    }
  }
  double main = 0.0;
  double side = 0.0;
  for (int i = 0; i < n; ++i) {
    const double e = magnitude[i] * magnitude[i];
    (in_main[i] ? main : side) += e;
  }
  if (!(main > 0.0)) throw ParameterError("islr: mainlobe energy is zero");
  return ratio_to_db(side / main);
}

std::vector<int> strongest_peaks(std::span<const double> magnitude, int count,
                                 int min_separation) {
  const auto n = static_cast<int>(magnitude.size());
  std::vector<int> candidates;
  for (int i = 0; i < n; ++i) {
    const double left = i > 0 ? magnitude[i - 1] : -1.0;
    const double right = i + 1 < n ? magnitude[i + 1] : -1.0;
    if (magnitude[i] >= left && magnitude[i] >= right) candidates.push_back(i);
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](int a, int b) { return magnitude[a] > magnitude[b]; });
  std::vector<int> picked;
  for (int c : candidates) {
    if (static_cast<int>(picked.size()) == count) break;
    const bool clear = std::all_of(picked.begin(), picked.end(),
                                   [&](int p) { return std::abs(p - c) >= min_separation; });
    if (clear) picked.push_back(c);
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

Eigen::VectorXd average_range_profile(const RangeCompressedCube& cube) {
  Eigen::VectorXd power = Eigen::VectorXd::Zero(cube.lag_count());
  for (int n = 0; n < cube.tx_count(); ++n) {
    for (int m = 0; m < cube.rx_count(); ++m) power += cube.profile(n, m).cwiseAbs2();
  }
  power /= static_cast<double>(cube.tx_count() * cube.rx_count());
  return power.cwiseSqrt();
}

std::size_t RegionMask::count(Region r) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), r));
}

RegionMask build_region_mask(const RasterScene& raster) {
  if (raster.values.size() != static_cast<std::size_t>(raster.rows) * raster.cols) {
    throw ParameterError("region mask: raster value count does not match rows * cols");
  }
  if (raster.noise_guard < 0.0) throw ParameterError("region mask: noise guard must be >= 0");
  RegionMask mask;
  mask.rows = raster.rows;
  mask.cols = raster.cols;
  mask.labels.assign(raster.values.size(), Region::Noise);
  for (int r = 0; r < raster.rows; ++r) {
    for (int c = 0; c < raster.cols; ++c) {
      if (raster.at(r, c) >= raster.signal_threshold) {
        mask.labels[static_cast<std::size_t>(r) * raster.cols + c] = Region::Signal;
      }
    }
  }
  if (raster.noise_guard == 0.0) return mask;

  const int reach_r = static_cast<int>(std::ceil(raster.noise_guard / raster.spacing_y));
  const int reach_c = static_cast<int>(std::ceil(raster.noise_guard / raster.spacing_x));
  const double guard_sq = raster.noise_guard * raster.noise_guard;
  auto labels = mask.labels;
  for (int r = 0; r < raster.rows; ++r) {
    for (int c = 0; c < raster.cols; ++c) {
      if (mask.at(r, c) != Region::Signal) continue;
      for (int rr = std::max(0, r - reach_r); rr <= std::min(raster.rows - 1, r + reach_r); ++rr) {
        for (int cc = std::max(0, c - reach_c); cc <= std::min(raster.cols - 1, c + reach_c);
             ++cc) {
          auto& l = labels[static_cast<std::size_t>(rr) * raster.cols + cc];
          if (l != Region::Noise) continue;
          const double dy = (rr - r) * raster.spacing_y;
          const double dx = (cc - c) * raster.spacing_x;
          if (dx * dx + dy * dy <= guard_sq) l = Region::Ignore;
        }
      }
    }
  }
  mask.labels = std::move(labels);
  return mask;
}

double image_snr_db(const RadarImage& image, const RegionMask& mask) {
  if (image.pixels.rows() != mask.rows || image.pixels.cols() != mask.cols) {
    throw ParameterError("image_snr: image is " + std::to_string(image.pixels.rows()) + "x" +
                         std::to_string(image.pixels.cols()) + " but the mask is " +
                         std::to_string(mask.rows) + "x" + std::to_string(mask.cols));
  }
  double signal = 0.0;
  double noise = 0.0;
  std::size_t n_signal = 0;
  std::size_t n_noise = 0;
  for (int r = 0; r < mask.rows; ++r) {
    for (int c = 0; c < mask.cols; ++c) {
      const double e = std::norm(image.pixels(r, c));
      switch (mask.at(r, c)) {
        case Region::Signal: signal += e; ++n_signal; break;
        case Region::Noise: noise += e; ++n_noise; break;
        case Region::Ignore: break;
      }
    }
  }
  if (n_signal == 0) throw ParameterError("image_snr: signal region is empty");
  if (n_noise == 0) throw ParameterError("image_snr: noise region is empty");
  if (noise == 0.0) return signal > 0.0 ? kDbClamp : -kDbClamp;
  return ratio_to_db(signal / noise);
}

double spectral_efficiency(std::span<const double> gain_sq, std::span<const double> power,
                           double noise_psd, double bandwidth, double beta, double eta) {
  if (gain_sq.size() != power.size()) {
    throw ParameterError("spectral_efficiency: one power per gain required");
  }
  if (!(beta > 0.0 && beta <= 1.0)) throw ParameterError("spectral_efficiency: beta must lie in (0, 1]");
  if (!(eta >= 0.0 && eta <= 1.0)) throw ParameterError("spectral_efficiency: eta must lie in [0, 1]");
  const double n0b = noise_psd * bandwidth;
  if (!(n0b > 0.0)) throw ParameterError("spectral_efficiency: N0 * B must be positive");
  double sum = 0.0;
  for (std::size_t n = 0; n < gain_sq.size(); ++n) {
    if (gain_sq[n] < 0.0 || power[n] < 0.0) {
      throw ParameterError("spectral_efficiency: gains and powers must be >= 0");
    }
    sum += std::log2(1.0 + gain_sq[n] * power[n] / (beta * n0b));
  }
  return beta * eta * sum;
}

double spectral_efficiency_from_snr(int antennas, double snr_db, double beta, double eta) {
  if (antennas < 1) throw ParameterError("spectral_efficiency: antennas must be >= 1");
  const std::vector<double> g(antennas, std::pow(10.0, snr_db / 10.0));
  const std::vector<double> p(antennas, 1.0);
  return spectral_efficiency(g, p, 1.0, 1.0, beta, eta);
}

namespace {

// Point target straight ahead of co-located antennas, at an integer delay.
double single_target_islr(const std::vector<WaveformSet>& trials, const CapacitySweepConfig& cfg) {
  const int n_tx = trials.front().antenna_count();
  RadarGeometry geom;
  geom.tx.assign(n_tx, Point2(0.0, 0.0));
  geom.rx.assign(1, Point2(0.0, 0.0));
  SceneModel scene;
  const double range = cfg.target_bin * geom.range_resolution();
  scene.scatterers.push_back({Point2(0.0, range), Complex(1.0, 0.0)});

  ImagingChannelOptions ch;
  ch.lag_count = cfg.lag_count;
  RangeCompressionOptions rc;
  rc.lag_count = cfg.lag_count;
  rc.oversampling = 1;
  rc.lag_spacing = geom.sampling_interval();

  Eigen::VectorXd power = Eigen::VectorXd::Zero(cfg.lag_count);
  for (const auto& set : trials) {
    const auto rx = imaging_receive(set, geom, scene, ch);
    const auto cube = range_compress(rx.rx, set, rc);
    power += average_range_profile(cube).cwiseAbs2();
  }
  const Eigen::VectorXd mag = power.cwiseSqrt();
  const int peak[] = {cfg.target_bin};
  return islr_db({mag.data(), static_cast<std::size_t>(mag.size())}, cfg.mainlobe_halfwidth, peak);
}

}  // namespace

std::vector<CapacityRow> symbol_capacity_vs_n(const CapacitySweepConfig& config) {
  if (config.trials < 1) throw ParameterError("capacity sweep: trials must be >= 1");
  if (config.target_bin < 0 || config.target_bin >= config.lag_count) {
    throw ParameterError("capacity sweep: target bin must lie inside the lag window");
  }
  std::vector<CapacityRow> rows;
  for (int n_ant : config.antennas) {
    if (n_ant < 1) throw ParameterError("capacity sweep: antenna counts must be >= 1");
    CapacityRow row;
    row.antennas = n_ant;
    row.subbasis_size = config.length / n_ant;

    CosmicConfig cc;
    cc.length = config.length;
    cc.antennas = n_ant;
    cc.subbasis_size = row.subbasis_size;
    cc.zone_length = config.zone_length;
    cc.mode = config.mode;
    cc.basis = config.basis;
    cc.seed = config.seed;
    cc.constellation = config.constellation;

    const auto plan = plan_ofdm(config.length, n_ant, config.allocation);
    std::vector<WaveformSet> cosmic_sets;
    std::vector<WaveformSet> ofdm_sets;
    for (int t = 0; t < config.trials; ++t) {
      const auto bit_seed = mix_seed(config.seed, 1000 + static_cast<std::uint64_t>(t));
      auto result = generate_cosmic_set(cc, bit_seed);
      if (t == 0) {
        row.cosmic_capacity = result.set.meta.capacity;
        for (int d : result.set.meta.capacity) row.cosmic_symbols += d;
        for (int d : result.set.meta.predicted_capacity) row.cosmic_predicted += d;
      }
      cosmic_sets.push_back(std::move(result.set));
      ofdm_sets.push_back(generate_ofdm_set(plan, config.constellation, bit_seed));
    }
    row.ofdm_symbols = plan.antennas() * plan.per_antenna();
    row.cosmic_islr_db = single_target_islr(cosmic_sets, config);
    row.ofdm_islr_db = single_target_islr(ofdm_sets, config);
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::string MetricsReport::to_json() const {
  nlohmann::ordered_json j;
  j["family"] = family;
  j["config_hash"] = config_hash;
  auto put = [&](const char* key, const std::optional<double>& v) {
    if (v) j[key] = *v;
  };
  put("islr_db", islr_db);
  put("snr_image_db", snr_image_db);
  put("se_bits_per_s_per_hz", se_bits_per_s_per_hz);
  put("ser", ser);
  put("ber", ber);
  put("eta", eta);
  put("residual_max", residual_max);
  if (total_symbols) j["total_symbols"] = *total_symbols;
  for (const auto& [k, v] : extras) j[k] = v;
  return j.dump(2);
}

std::vector<std::string> MetricsReport::csv_columns() {
  return {"family", "config_hash", "islr_db", "snr_image_db", "se_bits_per_s_per_hz",
          "ser",    "ber",         "eta",     "residual_max", "total_symbols"};
}

std::vector<std::string> MetricsReport::csv_values() const {
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  std::vector<std::string> out{family,
                               config_hash,
                               opt(islr_db),
                               opt(snr_image_db),
                               opt(se_bits_per_s_per_hz),
                               opt(ser),
                               opt(ber),
                               opt(eta),
                               opt(residual_max),
                               total_symbols ? std::to_string(*total_symbols) : std::string()};
  for (const auto& e : extras) out.push_back(format_number(e.second));
  return out;
}

}  // namespace cosmic
