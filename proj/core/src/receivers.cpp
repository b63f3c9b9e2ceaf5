#include "cosmic/receivers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <json.hpp>

#include "cosmic/encoder.hpp"
#include "cosmic/error.hpp"
#include "fft.hpp"

namespace cosmic {

ComplexVector comm_project(const ComplexVector& y, const SubBasis& cn) {
  if (y.size() != cn.columns.rows()) {
    throw ParameterError("comm_project: observation length " + std::to_string(y.size()) +
                         " differs from sub-basis length " + std::to_string(cn.columns.rows()));
  }
  return cn.columns.adjoint() * y;
}

ComplexVector pilot_symbols(Constellation c) {
  // Corner points walk around the constellation so every quadrant is used.
  const auto points = constellation_points(c);
  const int corners[2][kPilotSymbols] = {{0, 1, 3, 2}, {0, 2, 10, 8}};
  const auto& idx = corners[c == Constellation::Qpsk ? 0 : 1];
  ComplexVector out(kPilotSymbols);
  for (int i = 0; i < kPilotSymbols; ++i) out[i] = points[idx[i]];
  return out;
}

BitVector with_pilot_prefix(const BitVector& payload, Constellation c) {
  const auto pilots = pilot_symbols(c);
  BitVector bits = demap_symbols(pilots, c);
  bits.insert(bits.end(), payload.begin(), payload.end());
  return bits;
}

namespace {

void check_metadata(const WaveformMetadata& meta) {
  const auto n = static_cast<std::size_t>(meta.antennas);
  if (meta.antennas < 1 || meta.columns.size() != n || meta.capacity.size() != n ||
      meta.scale.size() != n) {
    throw DecodeError("waveform metadata is incomplete: columns, capacity and scale must list " +
                      std::to_string(meta.antennas) + " antennas");
  }
  std::set<int> seen;
  for (int a = 0; a < meta.antennas; ++a) {
    for (int c : meta.columns[a]) {
      if (c < 0 || c >= meta.length) {
        throw DecodeError("basis column " + std::to_string(c) + " outside [0, K)");
      }
      if (!seen.insert(c).second) {
        throw InfeasibleError(
            "antennas share basis column " + std::to_string(c) +
                ": the projections C_n^H y mix several transmitters and cannot be separated",
            a);
      }
    }
  }
}

Complex resolve_gain(const DecodeOptions& options, int antenna, const ComplexVector& raw,
                     Constellation c) {
  if (options.gain_mode == GainEstimation::Pilot) {
    if (raw.size() < kPilotSymbols) {
      throw DecodeError("antenna " + std::to_string(antenna + 1) + " carries fewer than " +
                        std::to_string(kPilotSymbols) + " symbols; pilot estimation impossible");
    }
    const auto pilots = pilot_symbols(c);
    // Least squares: h = p^H r / p^H p.
    return pilots.dot(raw.head(kPilotSymbols)) / pilots.squaredNorm();
  }
  if (options.known_gains) {
    if (static_cast<int>(options.known_gains->size()) <= antenna) {
      throw ParameterError("known_gains lists fewer gains than antennas");
    }
    return (*options.known_gains)[antenna];
  }
  return {1.0, 0.0};
}

AntennaDecode finish(ComplexVector raw, const DecodeOptions& options, int antenna,
                     Constellation c, int rank) {
  AntennaDecode out;
  out.gain_estimate = resolve_gain(options, antenna, raw, c);
  if (std::abs(out.gain_estimate) == 0.0) {
    throw DecodeError("antenna " + std::to_string(antenna + 1) + " has zero channel gain");
  }
  out.soft = raw / out.gain_estimate;
  out.decided = make_frame(demap_symbols(out.soft, c), c);
  out.constraint_rank = rank;
  return out;
}

}  // namespace

std::vector<AntennaDecode> comm_decode(const ComplexVector& y, const WaveformMetadata& meta,
                                       const DecodeOptions& options) {
  if (meta.family == WaveformFamily::ZeroShift) {
    throw DecodeError("zero-shift waveform sets carry no data");
  }
  check_metadata(meta);
  if (y.size() != meta.length) {
    throw DecodeError("observation has " + std::to_string(y.size()) + " samples, expected " +
                      std::to_string(meta.length));
  }
  const auto master = build_master_basis(meta.length, meta.basis, meta.seed);
  const Constellation c = meta.constellation;
  std::vector<AntennaDecode> out;

  if (meta.family == WaveformFamily::Ofdm) {
    for (int n = 0; n < meta.antennas; ++n) {
      const auto cn = select_columns(master, meta.columns[n], n);
      ComplexVector raw = comm_project(y, cn) / meta.scale[n];
      out.push_back(finish(std::move(raw), options, n, c, 0));
    }
    return out;
  }

  const LagWindow zone = zone_window(meta.zone_length, meta.mode);
  std::vector<ComplexVector> estimates;
  for (int n = 0; n < meta.antennas; ++n) {
    const auto cn = select_columns(master, meta.columns[n], n);
    const ComplexVector xp = comm_project(y, cn);
    const auto constraints = assemble_constraints(estimates, cn, zone);
    const int ks = static_cast<int>(cn.columns.cols());
    const int dimension = meta.capacity[n];
    if (dimension < 1 || dimension > ks) {
      throw DecodeError("antenna " + std::to_string(n + 1) + " advertises " +
                        std::to_string(dimension) + " symbols but K_s = " + std::to_string(ks));
    }
    const auto basis = null_space_of_dimension(constraints, dimension);
    // A structurally smaller rank than advertised means the metadata does
    // not describe this set (wrong zone, mode or seed).
    if (basis.rank > 0) {
      Eigen::BDCSVD<ComplexMatrix> svd(constraints.blocks);
      const auto& sv = svd.singularValues();
      if (sv[basis.rank - 1] <= meta.rel_tol * sv[0]) {
        throw DecodeError("antenna " + std::to_string(n + 1) +
                          ": recomputed constraint rank is below the advertised K_s - D_n = " +
                          std::to_string(basis.rank));
      }
    }
    ComplexVector raw = basis.columns.adjoint() * xp / meta.scale[n];
    estimates.push_back(cn.columns * xp);
    out.push_back(finish(std::move(raw), options, n, c, basis.rank));
  }
  return out;
}

double DecodeReport::ser() const noexcept {
  return symbols == 0 ? 0.0 : static_cast<double>(symbol_errors) / symbols;
}

double DecodeReport::ber() const noexcept {
  return bits == 0 ? 0.0 : static_cast<double>(bit_errors) / bits;
}

double DecodeReport::eta() const noexcept {
  int slots = 0;
  for (const auto& a : antennas) slots += a.slots;
  return slots == 0 ? 0.0 : static_cast<double>(symbols - symbol_errors) / slots;
}

std::string DecodeReport::to_json() const {
  nlohmann::ordered_json j;
  auto per = nlohmann::ordered_json::array();
  for (std::size_t n = 0; n < antennas.size(); ++n) {
    const auto& a = antennas[n];
    per.push_back({{"antenna", n + 1},
                   {"symbols", a.symbols},
                   {"symbol_errors", a.symbol_errors},
                   {"ser", a.symbols ? static_cast<double>(a.symbol_errors) / a.symbols : 0.0},
                   {"bits", a.bits},
                   {"bit_errors", a.bit_errors},
                   {"ber", a.bits ? static_cast<double>(a.bit_errors) / a.bits : 0.0},
                   {"slots", a.slots}});
  }
  j["antennas"] = per;
  j["symbols"] = symbols;
  j["symbol_errors"] = symbol_errors;
  j["ser"] = ser();
  j["bits"] = bits;
  j["bit_errors"] = bit_errors;
  j["ber"] = ber();
  j["eta"] = eta();
  return j.dump(2);
}

DecodeReport score_decode(std::span<const AntennaDecode> decoded,
                          std::span<const SymbolFrame> transmitted, std::span<const int> slots) {
  if (decoded.size() != transmitted.size()) {
    throw ParameterError("score_decode: decoded and transmitted antenna counts differ");
  }
  if (!slots.empty() && slots.size() != decoded.size()) {
    throw ParameterError("score_decode: one slot count per antenna required");
  }
  DecodeReport report;
  for (std::size_t n = 0; n < decoded.size(); ++n) {
    const auto& rx = decoded[n].decided;
    const auto& tx = transmitted[n];
    if (rx.size() != tx.size() || rx.bits.size() != tx.bits.size()) {
      throw DecodeError("antenna " + std::to_string(n + 1) + ": decoded " +
                        std::to_string(rx.size()) + " symbols, transmitted " +
                        std::to_string(tx.size()));
    }
    AntennaScore a;
    a.symbols = static_cast<int>(tx.size());
    a.bits = static_cast<int>(tx.bits.size());
    const int bps = bits_per_symbol(tx.constellation);
    for (int k = 0; k < a.symbols; ++k) {
      bool wrong = false;
      for (int b = 0; b < bps; ++b) {
        const auto i = static_cast<std::size_t>(k) * bps + b;
        if (rx.bits[i] != tx.bits[i]) {
          ++a.bit_errors;
          wrong = true;
        }
      }
      if (wrong) ++a.symbol_errors;
    }
    a.slots = slots.empty() ? a.symbols : slots[n];
    report.symbols += a.symbols;
    report.symbol_errors += a.symbol_errors;
    report.bits += a.bits;
    report.bit_errors += a.bit_errors;
    report.antennas.push_back(a);
  }
  return report;
}

std::vector<int> nominal_slots(const WaveformMetadata& meta) {
  std::vector<int> out;
  for (int n = 0; n < meta.antennas; ++n) {
    switch (meta.family) {
      case WaveformFamily::Cosmic: out.push_back(meta.subbasis_size); break;
      case WaveformFamily::Ofdm:
        out.push_back(n < static_cast<int>(meta.predicted_capacity.size())
                          ? meta.predicted_capacity[n]
                          : meta.subbasis_size);
        break;
      case WaveformFamily::ZeroShift: out.push_back(0); break;
    }
  }
  return out;
}

// ---- imaging ---------------------------------------------------------------

std::string_view to_string(Taper t) noexcept { return t == Taper::Hann ? "hann" : "none"; }

Taper taper_from_string(std::string_view name) {
  if (name == "none") return Taper::None;
  if (name == "hann") return Taper::Hann;
  throw ParameterError("unknown taper '" + std::string(name) + "'");
}

RangeCompressedCube::RangeCompressedCube(int tx_count, int rx_count, int lag_count,
                                         int oversampling, double lag_spacing)
    : tx_count_(tx_count),
      rx_count_(rx_count),
      lag_count_(lag_count),
      oversampling_(oversampling),
      lag_spacing_(lag_spacing) {
  if (tx_count < 1 || rx_count < 1 || lag_count < 1 || oversampling < 1) {
    throw ParameterError("cube dimensions and oversampling must be positive");
  }
  const auto channels = static_cast<std::size_t>(tx_count) * rx_count;
  profiles_.assign(channels, ComplexVector::Zero(lag_count));
  fine_.assign(channels, ComplexVector::Zero(static_cast<Eigen::Index>(lag_count) * oversampling));
}

RangeCompressedCube range_compress(std::span<const ComplexVector> raw, const WaveformSet& set,
                                   const RangeCompressionOptions& options) {
  const int k = set.length();
  if (raw.empty()) throw ParameterError("range_compress: no receive channels");
  Eigen::Index longest = 0;
  for (const auto& y : raw) {
    if (y.size() < k) {
      throw ParameterError("raw sequence of " + std::to_string(y.size()) +
                           " samples is shorter than K = " + std::to_string(k));
    }
    longest = std::max(longest, y.size());
  }
  RangeCompressedCube cube(set.antenna_count(), static_cast<int>(raw.size()), options.lag_count,
                           options.oversampling, options.lag_spacing);
  const Eigen::Index nfft = detail::good_fft_size(longest + k);
  const Eigen::Index fine_n = nfft * options.oversampling;
  const Eigen::Index half = nfft / 2;
  const Eigen::Index fine_len = static_cast<Eigen::Index>(options.lag_count) * options.oversampling;

  ComplexVector weight = ComplexVector::Ones(nfft);
  if (options.taper == Taper::Hann) {
    for (Eigen::Index b = 0; b < nfft; ++b) {
      weight[b] = 0.5 * (1.0 + std::cos(2.0 * kPi * detail::bin_frequency(b, nfft)));
    }
  }

  std::vector<ComplexVector> tx_spectra;
  for (const auto& s : set.waveforms) tx_spectra.push_back(detail::fft(s, nfft).conjugate());

  for (std::size_t m = 0; m < raw.size(); ++m) {
    const ComplexVector y_spec = detail::fft(raw[m], nfft);
    for (int n = 0; n < set.antenna_count(); ++n) {
      const ComplexVector product =
          tx_spectra[n].cwiseProduct(y_spec).cwiseProduct(weight);
      cube.profile(n, static_cast<int>(m)) = detail::ifft(product).head(options.lag_count);

      // Zero-pad the spectrum around its center; an even-length buffer's
      // Nyquist bin is split between the two halves.
      ComplexVector padded = ComplexVector::Zero(fine_n);
      const Eigen::Index pos = (nfft + 1) / 2;
      padded.head(pos) = product.head(pos);
      padded.tail(nfft - pos) = product.tail(nfft - pos);
      if (nfft % 2 == 0) {
        padded[half] = 0.5 * product[half];
        padded[fine_n - half] = 0.5 * product[half];
      }
      cube.fine_profile(n, static_cast<int>(m)) =
          detail::ifft(padded).head(fine_len) * static_cast<double>(options.oversampling);
    }
  }
  return cube;
}

ImageGrid ImageGrid::from_raster(const RasterScene& raster) {
  ImageGrid g;
  g.x_min = raster.origin.x();
  g.y_min = raster.origin.y();
  g.dx = raster.spacing_x;
  g.dy = raster.spacing_y;
  g.nx = raster.cols;
  g.ny = raster.rows;
  return g;
}

ImageGrid ImageGrid::from_bounds(double x_min, double x_max, double y_min, double y_max,
                                 double spacing) {
  if (!(spacing > 0.0) || !(x_max >= x_min) || !(y_max >= y_min)) {
    throw ParameterError("image grid needs spacing > 0 and max >= min");
  }
  ImageGrid g;
  g.x_min = x_min;
  g.y_min = y_min;
  g.dx = spacing;
  g.dy = spacing;
  g.nx = static_cast<int>(std::floor((x_max - x_min) / spacing + 1e-9)) + 1;
  g.ny = static_cast<int>(std::floor((y_max - y_min) / spacing + 1e-9)) + 1;
  return g;
}

RadarImage backproject(const RangeCompressedCube& cube, const RadarGeometry& geom,
                       const ImageGrid& grid, Taper apodization) {
  const int n_tx = cube.tx_count();
  const int n_rx = cube.rx_count();
  if (static_cast<int>(geom.tx.size()) != n_tx || static_cast<int>(geom.rx.size()) != n_rx) {
    throw ParameterError("backproject: geometry does not match the cube's channel count");
  }
  if (grid.nx < 1 || grid.ny < 1) throw ParameterError("backproject: empty image grid");

  // Hann weights over virtual elements ranked by their x position.
  const auto virt = geom.virtual_positions();
  const int v_count = static_cast<int>(virt.size());
  std::vector<double> weight(virt.size(), 1.0);
  if (apodization == Taper::Hann) {
    std::vector<int> order(virt.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return virt[a].x() < virt[b].x(); });
    for (int r = 0; r < v_count; ++r) {
      weight[order[r]] = 0.5 * (1.0 - std::cos(2.0 * kPi * (r + 1) / (v_count + 1)));
    }
  }

  RadarImage img;
  img.grid = grid;
  img.pixels = ComplexMatrix::Zero(grid.ny, grid.nx);
  const double fine_rate = geom.bandwidth * cube.oversampling();  // fine bins per second
  const double f0 = geom.carrier_frequency;
  for (int row = 0; row < grid.ny; ++row) {
    for (int col = 0; col < grid.nx; ++col) {
      const Point2 p = grid.pixel(row, col);
      Complex acc(0.0, 0.0);
      for (int n = 0; n < n_tx; ++n) {
        const double d_tx = (p - geom.tx[n]).norm();
        for (int m = 0; m < n_rx; ++m) {
          const double tau = (d_tx + (p - geom.rx[m]).norm()) / kSpeedOfLight;
          const auto& prof = cube.fine_profile(n, m);
          const double pos = tau * fine_rate;
          const auto i0 = static_cast<Eigen::Index>(std::floor(pos));
          if (i0 < 0 || i0 + 1 >= prof.size()) {
            ++img.clipped;
            continue;
          }
          const double frac = pos - static_cast<double>(i0);
          const Complex v = (1.0 - frac) * prof[i0] + frac * prof[i0 + 1];
          const double cycles = f0 * tau;
          const double phase = 2.0 * kPi * (cycles - std::floor(cycles));
          acc += weight[static_cast<std::size_t>(n) * n_rx + m] * v * std::polar(1.0, phase);
        }
      }
      img.pixels(row, col) = acc;
    }
  }
  return img;
}

}  // namespace cosmic
