#include "cosmic/io.hpp"

#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cosmic/error.hpp"

namespace cosmic::io {

using nlohmann::json;
using nlohmann::ordered_json;

void atomic_write(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

// Splits CSV text into rows of fields, skipping the header and blank lines.
std::vector<std::vector<std::string>> csv_rows(const std::string& text,
                                               const std::string& expected_header) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError("CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected_header) {
    throw IoError("CSV header '" + line + "' differs from '" + expected_header + "'");
  }
  const auto columns = std::count(expected_header.begin(), expected_header.end(), ',') + 1;
  std::vector<std::vector<std::string>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (static_cast<long>(fields.size()) != columns) {
      throw IoError("CSV line " + std::to_string(line_no) + ": expected " +
                    std::to_string(columns) + " fields");
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

long parse_int(const std::string& s) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    throw IoError("not an integer: '" + s + "'");
  }
  if (pos != s.size()) throw IoError("not an integer: '" + s + "'");
  return v;
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw IoError("not a number: '" + s + "'");
  }
  if (pos != s.size() || !std::isfinite(v)) throw IoError("not a finite number: '" + s + "'");
  return v;
}

// Rows of (group, index, re, im) into dense per-group vectors.
std::vector<ComplexVector> complex_groups(const std::vector<std::vector<std::string>>& rows,
                                          const char* what) {
  std::vector<std::vector<std::pair<long, Complex>>> groups;
  for (const auto& r : rows) {
    const long g = parse_int(r[0]);
    const long i = parse_int(r[1]);
    if (g < 0 || i < 0) throw IoError(std::string(what) + ": negative index");
    if (static_cast<std::size_t>(g) >= groups.size()) groups.resize(g + 1);
    groups[g].emplace_back(i, Complex(parse_double(r[2]), parse_double(r[3])));
  }
  std::vector<ComplexVector> out;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    auto& items = groups[g];
    std::sort(items.begin(), items.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    ComplexVector v(static_cast<Eigen::Index>(items.size()));
    for (std::size_t k = 0; k < items.size(); ++k) {
      if (items[k].first != static_cast<long>(k)) {
        throw IoError(std::string(what) + " " + std::to_string(g) + ": sample indices are not 0.." +
                      std::to_string(items.size() - 1));
      }
      v[static_cast<Eigen::Index>(k)] = items[k].second;
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::string complex_rows(std::span<const ComplexVector> seqs, const char* header) {
  std::string out = header;
  out += '\n';
  for (std::size_t g = 0; g < seqs.size(); ++g) {
    for (Eigen::Index k = 0; k < seqs[g].size(); ++k) {
      out += std::to_string(g);
      out += ',';
      out += std::to_string(k);
      out += ',';
      out += format_double(seqs[g][k].real());
      out += ',';
      out += format_double(seqs[g][k].imag());
      out += '\n';
    }
  }
  return out;
}

}  // namespace

std::string metadata_to_json(const WaveformMetadata& meta) {
  ordered_json j;
  j["family"] = std::string(to_string(meta.family));
  j["K"] = meta.length;
  j["N"] = meta.antennas;
  j["K_s"] = meta.subbasis_size;
  j["K_z"] = meta.zone_length;
  j["mode"] = std::string(to_string(meta.mode));
  j["basis"] = std::string(to_string(meta.basis));
  j["partition"] = std::string(to_string(meta.partition));
  j["seed"] = meta.seed;
  j["rel_tol"] = meta.rel_tol;
  j["constellation"] = std::string(to_string(meta.constellation));
  j["capacity"] = meta.capacity;
  j["predicted_capacity"] = meta.predicted_capacity;
  j["scale"] = meta.scale;
  if (!meta.ofdm_allocation.empty()) j["ofdm_allocation"] = meta.ofdm_allocation;
  j["columns"] = meta.columns;
  return j.dump(2) + "\n";
}

WaveformMetadata metadata_from_json(const std::string& text) {
  WaveformMetadata m;
  try {
    const auto j = json::parse(text);
    m.family = waveform_family_from_string(j.at("family").get<std::string>());
    m.length = j.at("K").get<int>();
    m.antennas = j.at("N").get<int>();
    m.subbasis_size = j.at("K_s").get<int>();
    m.zone_length = j.at("K_z").get<int>();
    m.mode = zone_mode_from_string(j.at("mode").get<std::string>());
    m.basis = basis_family_from_string(j.at("basis").get<std::string>());
    m.partition = partition_from_string(j.at("partition").get<std::string>());
    m.seed = j.at("seed").get<std::uint64_t>();
    m.rel_tol = j.at("rel_tol").get<double>();
    m.constellation = constellation_from_string(j.at("constellation").get<std::string>());
    m.capacity = j.at("capacity").get<std::vector<int>>();
    m.predicted_capacity = j.at("predicted_capacity").get<std::vector<int>>();
    m.scale = j.at("scale").get<std::vector<double>>();
    m.columns = j.at("columns").get<std::vector<std::vector<int>>>();
    if (j.contains("ofdm_allocation")) m.ofdm_allocation = j["ofdm_allocation"].get<std::string>();
  } catch (const json::exception& e) {
    throw IoError(std::string("waveform metadata: ") + e.what());
  } catch (const ParameterError& e) {
    throw IoError(std::string("waveform metadata: ") + e.what());
  }
  return m;
}

std::string waveforms_to_csv(const WaveformSet& set) {
  return complex_rows(set.waveforms, "antenna,sample_index,re,im");
}

std::vector<ComplexVector> waveforms_from_csv(const std::string& text) {
  auto out = complex_groups(csv_rows(text, "antenna,sample_index,re,im"), "antenna");
  for (const auto& w : out) {
    if (w.size() != out.front().size()) throw IoError("waveforms differ in length");
  }
  return out;
}

void write_waveform_set(const fs::path& stem, const WaveformSet& set) {
  fs::path csv = stem;
  csv += ".csv";
  fs::path meta = stem;
  meta += ".json";
  atomic_write(csv, waveforms_to_csv(set));
  atomic_write(meta, metadata_to_json(set.meta));
}

WaveformSet read_waveform_set(const fs::path& stem) {
  fs::path csv = stem;
  csv += ".csv";
  fs::path meta = stem;
  meta += ".json";
  WaveformSet set;
  set.waveforms = waveforms_from_csv(read_text(csv));
  set.meta = metadata_from_json(read_text(meta));
  if (set.antenna_count() != set.meta.antennas || set.length() != set.meta.length) {
    throw IoError("waveform CSV shape does not match its metadata");
  }
  return set;
}

std::string bits_to_csv(std::span<const SymbolFrame> frames) {
  std::string out = "antenna,bit_index,bit\n";
  for (std::size_t n = 0; n < frames.size(); ++n) {
    for (std::size_t i = 0; i < frames[n].bits.size(); ++i) {
      out += std::to_string(n) + ',' + std::to_string(i) + ',' +
             static_cast<char>('0' + frames[n].bits[i]) + '\n';
    }
  }
  return out;
}

std::vector<BitVector> bits_from_csv(const std::string& text) {
  std::vector<BitVector> out;
  for (const auto& r : csv_rows(text, "antenna,bit_index,bit")) {
    const long n = parse_int(r[0]);
    const long i = parse_int(r[1]);
    const long b = parse_int(r[2]);
    if (n < 0 || b < 0 || b > 1) throw IoError("bits CSV: invalid row");
    if (static_cast<std::size_t>(n) >= out.size()) out.resize(n + 1);
    if (i != static_cast<long>(out[n].size())) throw IoError("bits CSV: indices out of order");
    out[n].push_back(static_cast<std::uint8_t>(b));
  }
  return out;
}

std::string raw_to_csv(std::span<const ComplexVector> rx) {
  return complex_rows(rx, "rx,sample,re,im");
}

std::vector<ComplexVector> raw_from_csv(const std::string& text) {
  return complex_groups(csv_rows(text, "rx,sample,re,im"), "rx");
}

namespace {

void append_le_float(std::string& out, float f) {
  std::uint32_t u = 0;
  std::memcpy(&u, &f, sizeof u);
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((u >> (8 * b)) & 0xffu));
}

float read_le_float(const std::string& bytes, std::size_t offset) {
  std::uint32_t u = 0;
  for (int b = 0; b < 4; ++b) {
    u |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[offset + b])) << (8 * b);
  }
  float f = 0;
  std::memcpy(&f, &u, sizeof f);
  return f;
}

}  // namespace

void write_raw_binary(const fs::path& stem, std::span<const ComplexVector> rx,
                      double sampling_interval) {
  const Eigen::Index samples = rx.empty() ? 0 : rx.front().size();
  std::string data;
  data.reserve(static_cast<std::size_t>(rx.size() * samples * 8));
  for (const auto& y : rx) {
    if (y.size() != samples) throw ParameterError("raw channels differ in length");
    for (Eigen::Index k = 0; k < samples; ++k) append_le_float(data, static_cast<float>(y[k].real()));
    for (Eigen::Index k = 0; k < samples; ++k) append_le_float(data, static_cast<float>(y[k].imag()));
  }
  ordered_json h;
  h["format"] = "float32le_planar";
  h["layout"] = "per rx: samples real parts, then samples imaginary parts";
  h["rx"] = rx.size();
  h["samples"] = samples;
  h["sampling_interval"] = sampling_interval;
  fs::path bin = stem;
  bin += ".bin";
  fs::path header = stem;
  header += ".json";
  atomic_write(bin, data);
  atomic_write(header, h.dump(2) + "\n");
}

std::vector<ComplexVector> read_raw_binary(const fs::path& stem) {
  fs::path bin = stem;
  bin += ".bin";
  fs::path header = stem;
  header += ".json";
  std::size_t n_rx = 0;
  std::size_t samples = 0;
  try {
    const auto h = json::parse(read_text(header));
    if (h.at("format").get<std::string>() != "float32le_planar") {
      throw IoError("raw header: unsupported format");
    }
    n_rx = h.at("rx").get<std::size_t>();
    samples = h.at("samples").get<std::size_t>();
  } catch (const json::exception& e) {
    throw IoError(std::string("raw header: ") + e.what());
  }
  const std::string data = read_text(bin);
  if (data.size() != n_rx * samples * 8) {
    throw IoError("raw binary holds " + std::to_string(data.size()) + " bytes, header implies " +
                  std::to_string(n_rx * samples * 8));
  }
  std::vector<ComplexVector> out;
  for (std::size_t m = 0; m < n_rx; ++m) {
    ComplexVector y(static_cast<Eigen::Index>(samples));
    const std::size_t base = m * samples * 8;
    for (std::size_t k = 0; k < samples; ++k) {
      y[static_cast<Eigen::Index>(k)] = Complex(read_le_float(data, base + 4 * k),
                                                read_le_float(data, base + 4 * (samples + k)));
    }
    out.push_back(std::move(y));
  }
  return out;
}

GrayImage parse_pgm(const std::string& bytes) {
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto next_int = [&]() -> long {
    skip_space();
    const std::size_t start = pos;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) ++pos;
    if (start == pos) throw IoError("PGM: expected an integer at byte " + std::to_string(start));
    return std::stol(bytes.substr(start, pos - start));
  };
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
    throw IoError("PGM: missing P2/P5 magic");
  }
  const bool binary = bytes[1] == '5';
  pos = 2;
  GrayImage img;
  img.cols = static_cast<int>(next_int());
  img.rows = static_cast<int>(next_int());
  img.maxval = static_cast<int>(next_int());
  if (img.cols < 1 || img.rows < 1 || img.maxval < 1 || img.maxval > 65535) {
    throw IoError("PGM: invalid dimensions or maxval");
  }
  const std::size_t count = static_cast<std::size_t>(img.rows) * img.cols;
  img.pixels.resize(count);
  if (binary) {
    ++pos;  // single whitespace after maxval
    const std::size_t width = img.maxval > 255 ? 2 : 1;
    if (bytes.size() < pos + count * width) throw IoError("PGM: truncated pixel data");
    for (std::size_t i = 0; i < count; ++i) {
      const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + pos + i * width);
      img.pixels[i] = width == 2 ? static_cast<std::uint16_t>((p[0] << 8) | p[1]) : p[0];
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const long v = next_int();
      if (v > img.maxval) throw IoError("PGM: pixel exceeds maxval");
      img.pixels[i] = static_cast<std::uint16_t>(v);
    }
  }
  for (auto v : img.pixels) {
    if (v > img.maxval) throw IoError("PGM: pixel exceeds maxval");
  }
  return img;
}

GrayImage read_pgm(const fs::path& path) { return parse_pgm(read_text(path)); }

std::string encode_pgm(const GrayImage& img) {
  std::string out = "P5\n" + std::to_string(img.cols) + " " + std::to_string(img.rows) + "\n" +
                    std::to_string(img.maxval) + "\n";
  for (auto v : img.pixels) {
    if (img.maxval > 255) out.push_back(static_cast<char>(v >> 8));
    out.push_back(static_cast<char>(v & 0xff));
  }
  return out;
}

RasterScene raster_from_pgm(const GrayImage& img, const std::string& sidecar_json) {
  RasterScene r;
  try {
    const auto j = json::parse(sidecar_json);
    const auto origin = j.at("origin").get<std::vector<double>>();
    if (origin.size() != 2) throw IoError("mask sidecar: origin needs two coordinates");
    r.origin = Point2(origin[0], origin[1]);
    const auto& sp = j.at("spacing");
    if (sp.is_array()) {
      const auto v = sp.get<std::vector<double>>();
      if (v.size() != 2) throw IoError("mask sidecar: spacing needs one or two values");
      r.spacing_x = v[0];
      r.spacing_y = v[1];
    } else {
      r.spacing_x = r.spacing_y = sp.get<double>();
    }
    r.signal_threshold = j.value("threshold", 0.5);
    r.noise_guard = j.value("noise_guard", 0.0);
  } catch (const json::exception& e) {
    throw IoError(std::string("mask sidecar: ") + e.what());
  }
  if (!(r.spacing_x > 0.0) || !(r.spacing_y > 0.0)) throw IoError("mask sidecar: spacing must be > 0");
  r.rows = img.rows;
  r.cols = img.cols;
  r.values.resize(img.pixels.size());
  for (int row = 0; row < img.rows; ++row) {
    const int file_row = img.rows - 1 - row;
    for (int c = 0; c < img.cols; ++c) {
      r.values[static_cast<std::size_t>(row) * img.cols + c] =
          static_cast<double>(img.pixels[static_cast<std::size_t>(file_row) * img.cols + c]) /
          img.maxval;
    }
  }
  return r;
}

RasterScene read_raster_scene(const fs::path& pgm_path, const fs::path& sidecar_path) {
  return raster_from_pgm(read_pgm(pgm_path), read_text(sidecar_path));
}

GrayImage image_to_gray(const RadarImage& img, double db_floor) {
  if (!(db_floor < 0.0)) throw ParameterError("image dB floor must be negative");
  GrayImage g;
  g.rows = static_cast<int>(img.pixels.rows());
  g.cols = static_cast<int>(img.pixels.cols());
  g.maxval = 255;
  g.pixels.resize(static_cast<std::size_t>(g.rows) * g.cols, 0);
  const double peak = img.pixels.cwiseAbs().maxCoeff();
  if (!(peak > 0.0)) return g;
  for (int row = 0; row < g.rows; ++row) {
    const int file_row = g.rows - 1 - row;
    for (int c = 0; c < g.cols; ++c) {
      const double mag = std::abs(img.pixels(row, c)) / peak;
      const double db = mag > 0.0 ? 20.0 * std::log10(mag) : db_floor;
      const double t = std::clamp((db - db_floor) / -db_floor, 0.0, 1.0);
      g.pixels[static_cast<std::size_t>(file_row) * g.cols + c] =
          static_cast<std::uint16_t>(std::lround(255.0 * t));
    }
  }
  return g;
}

std::string image_to_csv(const RadarImage& img) {
  std::string out = "row,col,x,y,re,im\n";
  for (int row = 0; row < img.pixels.rows(); ++row) {
    for (int c = 0; c < img.pixels.cols(); ++c) {
      const Point2 p = img.grid.pixel(row, c);
      out += std::to_string(row) + ',' + std::to_string(c) + ',' + format_double(p.x()) + ',' +
             format_double(p.y()) + ',' + format_double(img.pixels(row, c).real()) + ',' +
             format_double(img.pixels(row, c).imag()) + '\n';
    }
  }
  return out;
}

std::string image_sidecar_json(const RadarImage& img, double db_floor) {
  ordered_json j;
  j["x_min"] = img.grid.x_min;
  j["y_min"] = img.grid.y_min;
  j["dx"] = img.grid.dx;
  j["dy"] = img.grid.dy;
  j["nx"] = img.grid.nx;
  j["ny"] = img.grid.ny;
  j["pgm_top_row"] = "largest y";
  j["db_floor"] = db_floor;
  j["clipped"] = img.clipped;
  return j.dump(2) + "\n";
}

}  // namespace cosmic::io
