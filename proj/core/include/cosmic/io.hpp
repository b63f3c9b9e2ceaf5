#pragma once

// File formats. Every writer goes through atomic_write (temp file + rename)
// so readers never observe a half-written artifact. Numbers are printed
// with 17 significant digits, so a write/read cycle is lossless and
// repeated runs are byte-identical.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cosmic/channel.hpp"
#include "cosmic/modulation.hpp"
#include "cosmic/receivers.hpp"
#include "cosmic/waveform.hpp"

namespace cosmic::io {

namespace fs = std::filesystem;

void atomic_write(const fs::path& path, const std::string& content);
std::string read_text(const fs::path& path);

/// "%.17g".
std::string format_double(double v);

// ---- waveform sets: CSV `antenna,sample_index,re,im` + JSON sidecar --------

std::string metadata_to_json(const WaveformMetadata& meta);
WaveformMetadata metadata_from_json(const std::string& text);

std::string waveforms_to_csv(const WaveformSet& set);
/// Throws IoError on malformed rows, gaps in sample indices or antennas of
/// unequal length.
std::vector<ComplexVector> waveforms_from_csv(const std::string& text);

/// Writes <stem>.csv and <stem>.json.
void write_waveform_set(const fs::path& stem, const WaveformSet& set);
WaveformSet read_waveform_set(const fs::path& stem);

// ---- bits: CSV `antenna,bit_index,bit` ------------------------------------

std::string bits_to_csv(std::span<const SymbolFrame> frames);
std::vector<BitVector> bits_from_csv(const std::string& text);

// ---- raw receive data -------------------------------------------------------

/// CSV `rx,sample,re,im`.
std::string raw_to_csv(std::span<const ComplexVector> rx);
std::vector<ComplexVector> raw_from_csv(const std::string& text);

/// Little-endian float32, per receiver a block of real parts followed by a
/// block of imaginary parts; <stem>.bin plus a <stem>.json header.
void write_raw_binary(const fs::path& stem, std::span<const ComplexVector> rx,
                      double sampling_interval);
std::vector<ComplexVector> read_raw_binary(const fs::path& stem);

// ---- PGM ---------------------------------------------------------------------

struct GrayImage {
  int rows = 0;
  int cols = 0;
  int maxval = 255;
  std::vector<std::uint16_t> pixels;  // row-major, file order (row 0 = top)
};

/// Accepts P2 and P5 with maxval up to 65535 and '#' comments.
GrayImage parse_pgm(const std::string& bytes);
GrayImage read_pgm(const fs::path& path);
/// Binary P5.
std::string encode_pgm(const GrayImage& img);

/// Mask PGM plus JSON sidecar {"origin": [x, y], "spacing": s or [sx, sy],
/// "threshold": t, "noise_guard": g}. The top file row is the largest y;
/// values are pixel / maxval.
RasterScene raster_from_pgm(const GrayImage& img, const std::string& sidecar_json);
RasterScene read_raster_scene(const fs::path& pgm_path, const fs::path& sidecar_path);

// ---- images -------------------------------------------------------------------

/// 20 log10(|I| / max|I|) mapped linearly from [db_floor, 0] to [0, 255],
/// top row = largest y.
GrayImage image_to_gray(const RadarImage& img, double db_floor);
/// CSV `row,col,x,y,re,im`.
std::string image_to_csv(const RadarImage& img);
/// Grid description, clipping count and dB floor.
std::string image_sidecar_json(const RadarImage& img, double db_floor);

}  // namespace cosmic::io
