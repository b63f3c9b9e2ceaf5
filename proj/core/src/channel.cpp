#include "cosmic/channel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cosmic/error.hpp"
#include "cosmic/random.hpp"
#include "fft.hpp"

namespace cosmic {

std::vector<Point2> RadarGeometry::virtual_positions() const {
  std::vector<Point2> out;
  out.reserve(tx.size() * rx.size());
  for (const auto& t : tx) {
    for (const auto& r : rx) out.emplace_back((t + r) / 2.0);
  }
  return out;
}

RadarGeometry RadarGeometry::uniform_virtual_array(int tx_count, int rx_count,
                                                   double carrier_frequency, double bandwidth) {
  if (tx_count < 1 || rx_count < 1) throw ParameterError("array needs >= 1 Tx and Rx");
  if (!(carrier_frequency > 0.0) || !(bandwidth > 0.0)) {
    throw ParameterError("carrier frequency and bandwidth must be positive");
  }
  RadarGeometry g;
  g.carrier_frequency = carrier_frequency;
  g.bandwidth = bandwidth;
  const double half = g.wavelength() / 2.0;
  for (int m = 0; m < rx_count; ++m) g.rx.emplace_back(m * half, 0.0);
  for (int n = 0; n < tx_count; ++n) g.tx.emplace_back(n * rx_count * half, 0.0);
  // Virtual element (n, m) sits at (n*M + m) * lambda/4; center the array.
  const double center = (tx_count * rx_count - 1) * half / 4.0;
  for (auto& p : g.rx) p.x() -= center;
  for (auto& p : g.tx) p.x() -= center;
  return g;
}

SceneModel scene_from_raster(const RasterScene& raster, bool speckle, std::uint64_t speckle_seed) {
  if (raster.rows < 0 || raster.cols < 0 ||
      raster.values.size() != static_cast<std::size_t>(raster.rows) * raster.cols) {
    throw ParameterError("raster scene: value count does not match rows * cols");
  }
  SceneModel scene;
  scene.raster = raster;
  auto gen = make_stream(speckle_seed, 0x737065636b6c65ULL);  // "speckle"
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  for (int r = 0; r < raster.rows; ++r) {
    for (int c = 0; c < raster.cols; ++c) {
      const double v = raster.at(r, c);
      // Draw for every cell so one cell's phase does not depend on others' values.
      const double phi = phase(gen);
      if (v == 0.0) continue;
      scene.scatterers.push_back(
          {raster.cell_center(r, c), speckle ? std::polar(v, phi) : Complex(v, 0.0)});
    }
  }
  return scene;
}

double two_way_delay(const Point2& tx, const Point2& p, const Point2& rx) noexcept {
  return ((p - tx).norm() + (p - rx).norm()) / kSpeedOfLight;
}

std::vector<std::string> scene_range_warnings(const SceneModel& scene, const RadarGeometry& geom,
                                              double max_delay_bins) {
  std::vector<std::string> warnings;
  std::size_t outside = 0;
  double worst = 0.0;
  for (const auto& t : scene.scatterers) {
    double bins = 0.0;
    for (const auto& tx : geom.tx) {
      for (const auto& rx : geom.rx) {
        bins = std::max(bins, two_way_delay(tx, t.position, rx) * geom.bandwidth);
      }
    }
    if (bins > max_delay_bins) {
      ++outside;
      worst = std::max(worst, bins);
    }
  }
  if (outside > 0) {
    std::ostringstream os;
    os << outside << " scatterer(s) beyond the unambiguous zone: two-way delay up to " << worst
       << " bins > " << max_delay_bins;
    warnings.push_back(os.str());
  }
  return warnings;
}

std::string_view to_string(PathLossModel m) noexcept {
  return m == PathLossModel::Simplified ? "simplified" : "friis";
}

PathLossModel pathloss_model_from_string(std::string_view name) {
  if (name == "friis") return PathLossModel::FriisStandard;
  if (name == "simplified") return PathLossModel::Simplified;
  throw ParameterError("unknown path-loss model '" + std::string(name) + "'");
}

namespace {

double pathloss_power_ratio(double antenna_gain, double wavelength, double distance,
                            PathLossModel model) {
  if (!(distance > 0.0)) throw ParameterError("path loss: distance must be positive");
  if (!(wavelength > 0.0)) throw ParameterError("path loss: wavelength must be positive");
  if (!(antenna_gain > 0.0)) throw ParameterError("path loss: antenna gain must be positive");
  const double num = antenna_gain * wavelength * wavelength;
  if (model == PathLossModel::Simplified) return num / (4.0 * kPi * distance * distance);
  const double d = 4.0 * kPi * distance;
  return num / (d * d);
}

}  // namespace

Complex pathloss_gain(double antenna_gain, double wavelength, double distance,
                      PathLossModel model) {
  return {std::sqrt(pathloss_power_ratio(antenna_gain, wavelength, distance, model)), 0.0};
}

double pathloss_db(double antenna_gain, double wavelength, double distance, PathLossModel model) {
  return -10.0 * std::log10(pathloss_power_ratio(antenna_gain, wavelength, distance, model));
}

ComplexVector comm_receive(const WaveformSet& set, std::span<const Complex> gains,
                           double noise_variance, std::uint64_t noise_seed) {
  if (static_cast<int>(gains.size()) != set.antenna_count()) {
    throw ParameterError("comm_receive: one gain per transmit antenna required");
  }
  if (noise_variance < 0.0) throw ParameterError("noise variance must be >= 0");
  const int length = set.length();
  ComplexVector y = ComplexVector::Zero(length);
  for (int n = 0; n < set.antenna_count(); ++n) {
    if (set.waveforms[n].size() != length) throw ParameterError("waveforms differ in length");
    y += gains[n] * set.waveforms[n];
  }
  if (noise_variance > 0.0) {
    auto gen = make_stream(noise_seed, 0);
    y += complex_gaussian(length, noise_variance, gen);
  }
  return y;
}

double noise_variance_for_snr(double snr_db, int length, double gain_sq) noexcept {
  return gain_sq / static_cast<double>(length) / std::pow(10.0, snr_db / 10.0);
}

namespace {

// Accumulates coeff * exp(-j 2 pi f_k delay) over the FFT grid, f_k in
// cycles/sample, with a phasor recurrence restarted at the negative half.
void accumulate_delay_response(ComplexVector& acc, Complex coeff, double delay) {
  const Eigen::Index n = acc.size();
  const Eigen::Index half = (n + 1) / 2;  // first bin with negative frequency
  const double w = -2.0 * kPi * delay / static_cast<double>(n);
  const Complex step = std::polar(1.0, w);
  constexpr Eigen::Index kReanchor = 256;
  Complex ph = coeff;
  for (Eigen::Index k = 0; k < half; ++k) {
    if (k % kReanchor == 0) ph = coeff * std::polar(1.0, w * static_cast<double>(k));
    acc[k] += ph;
    ph *= step;
  }
  for (Eigen::Index k = half; k < n; ++k) {
    const Eigen::Index signed_k = k - n;
    if ((k - half) % kReanchor == 0) ph = coeff * std::polar(1.0, w * static_cast<double>(signed_k));
    acc[k] += ph;
    ph *= step;
  }
}

}  // namespace

ComplexVector fractional_delay(const ComplexVector& s, double delay_samples,
                               Eigen::Index out_length) {
  const Eigen::Index span =
      out_length + s.size() + static_cast<Eigen::Index>(std::ceil(std::abs(delay_samples)));
  const Eigen::Index nfft = detail::good_fft_size(span);
  ComplexVector response = ComplexVector::Zero(nfft);
  accumulate_delay_response(response, Complex(1.0, 0.0), delay_samples);
  const ComplexVector spectrum = detail::fft(s, nfft).cwiseProduct(response);
  return detail::ifft(spectrum).head(out_length);
}

ImagingReceive imaging_receive(const WaveformSet& set, const RadarGeometry& geom,
                               const SceneModel& scene, const ImagingChannelOptions& options) {
  const int length = set.length();
  const int n_tx = set.antenna_count();
  if (static_cast<int>(geom.tx.size()) != n_tx) {
    throw ParameterError("geometry has " + std::to_string(geom.tx.size()) +
                         " Tx positions but the waveform set has " + std::to_string(n_tx));
  }
  if (options.lag_count < 1) throw ParameterError("lag_count must be >= 1");
  const Eigen::Index raw_length = length + options.lag_count;
  const Eigen::Index nfft = detail::good_fft_size(2 * raw_length);

  ImagingReceive out;
  out.sampling_interval = geom.sampling_interval();
  out.warnings = scene_range_warnings(scene, geom, static_cast<double>(options.lag_count - 1));

  std::vector<ComplexVector> spectra;
  spectra.reserve(n_tx);
  for (const auto& s : set.waveforms) spectra.push_back(detail::fft(s, nfft));

  const double f0 = geom.carrier_frequency;
  for (std::size_t m = 0; m < geom.rx.size(); ++m) {
    ComplexVector acc = ComplexVector::Zero(nfft);
    for (int n = 0; n < n_tx; ++n) {
      ComplexVector response = ComplexVector::Zero(nfft);
      for (const auto& target : scene.scatterers) {
        const double d_tx = (target.position - geom.tx[n]).norm();
        const double d_rx = (target.position - geom.rx[m]).norm();
        const double tau = (d_tx + d_rx) / kSpeedOfLight;
        const Complex alpha = options.amplitude_calibration * target.reflectivity / (d_tx * d_rx);
        // Carrier phase reduced modulo one cycle before forming the phasor.
        const double cycles = f0 * tau;
        const double frac = cycles - std::floor(cycles);
        const Complex coeff = alpha * std::polar(1.0, -2.0 * kPi * frac);
        accumulate_delay_response(response, coeff, tau * geom.bandwidth);
      }
      acc += spectra[n].cwiseProduct(response);
    }
    ComplexVector y = detail::ifft(acc).head(raw_length);
    if (options.noise_variance > 0.0) {
      auto gen = make_stream(options.noise_seed, m);
      y += complex_gaussian(raw_length, options.noise_variance, gen);
    }
    out.rx.push_back(std::move(y));
  }
  return out;
}

}  // namespace cosmic
