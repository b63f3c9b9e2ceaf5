#include "cosmic/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>

#include "cosmic/error.hpp"
#include "cosmic/random.hpp"

namespace cosmic {

LagWindow LagWindow::full(int length) {
  if (length < 1) throw ParameterError("sequence length must be >= 1");
  return {-(length - 1), length - 1};
}

std::string_view to_string(ZoneMode m) noexcept {
  return m == ZoneMode::Symmetric ? "symmetric" : "one_sided";
}

ZoneMode zone_mode_from_string(std::string_view name) {
  if (name == "one_sided") return ZoneMode::OneSided;
  if (name == "symmetric") return ZoneMode::Symmetric;
  throw ParameterError("unknown zone mode '" + std::string(name) + "'");
}

LagWindow zone_window(int zone_length, ZoneMode mode) {
  if (zone_length < 1) throw ParameterError("zone length must be >= 1");
  if (mode == ZoneMode::Symmetric) return {-(zone_length - 1), zone_length - 1};
  return {0, zone_length - 1};
}

Complex cross_correlation(const ComplexVector& s, const ComplexVector& x, int lag) {
  const Eigen::Index k_lo = std::max<Eigen::Index>(0, -lag);
  const Eigen::Index k_hi = std::min<Eigen::Index>(s.size(), x.size() - lag);
  if (k_hi <= k_lo) return {0.0, 0.0};
  return s.segment(k_lo, k_hi - k_lo).dot(x.segment(k_lo + lag, k_hi - k_lo));
}

ComplexVector CrossCorrelationMatrix::apply(const ComplexVector& x) const {
  if (x.size() != source_length_) {
    throw ParameterError("cross-correlation operand length " + std::to_string(x.size()) +
                         " != " + std::to_string(source_length_));
  }
  return rows_ * x;
}

CrossCorrelationMatrix build_crosscorr_matrix(const ComplexVector& s, LagWindow window) {
  const int length = static_cast<int>(s.size());
  const LagWindow valid = LagWindow::full(length);
  if (window.first > window.last || window.first < valid.first || window.last > valid.last) {
    throw ParameterError("lag window [" + std::to_string(window.first) + ", " +
                         std::to_string(window.last) + "] outside valid range [" +
                         std::to_string(valid.first) + ", " + std::to_string(valid.last) + "]");
  }
  // Row for lag l holds conj(s[k]) at column k + l: a convolution matrix of
  // the time-reversed conjugate sequence.
  ComplexMatrix rows = ComplexMatrix::Zero(window.size(), length);
  for (int r = 0; r < window.size(); ++r) {
    const int lag = window.first + r;
    const int k_lo = std::max(0, -lag);
    const int k_hi = std::min(length, length - lag);
    for (int k = k_lo; k < k_hi; ++k) rows(r, k + lag) = std::conj(s[k]);
  }
  return {std::move(rows), window, length};
}

std::string_view to_string(BasisFamily f) noexcept {
  switch (f) {
    case BasisFamily::RandomUnitary: return "random_unitary";
    case BasisFamily::InverseDft: return "inverse_dft";
    case BasisFamily::Hadamard: return "hadamard";
  }
  return "unknown";
}

BasisFamily basis_family_from_string(std::string_view name) {
  if (name == "random_unitary") return BasisFamily::RandomUnitary;
  if (name == "inverse_dft") return BasisFamily::InverseDft;
  if (name == "hadamard") return BasisFamily::Hadamard;
  throw ParameterError("unknown basis family '" + std::string(name) + "'");
}

bool is_hadamard_order(int length) noexcept {
  return length >= 1 && (length & (length - 1)) == 0;
}

namespace {

ComplexMatrix random_unitary(int length, std::uint64_t seed) {
  auto gen = make_stream(seed, 0x6d6173746572ULL);  // "master"
  const ComplexMatrix gaussian = complex_gaussian(length, length, 1.0, gen);
  Eigen::HouseholderQR<ComplexMatrix> qr(gaussian);
  ComplexMatrix q = qr.householderQ();
  const auto& r = qr.matrixQR();
  for (int c = 0; c < length; ++c) {
    const Complex d = r(c, c);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(c) *= d / mag;
  }
  return q;
}

ComplexMatrix inverse_dft(int length) {
  ComplexMatrix c(length, length);
  const double norm = 1.0 / std::sqrt(static_cast<double>(length));
  for (int col = 0; col < length; ++col) {
    for (int row = 0; row < length; ++row) {
      // Reduce r*c mod K first so the phase stays accurate for large K.
      const auto idx = (static_cast<long long>(row) * col) % length;
      const double phase = 2.0 * kPi * static_cast<double>(idx) / length;
      c(row, col) = std::polar(norm, phase);
    }
  }
  return c;
}

ComplexMatrix hadamard(int length) {
  RealMatrix h = RealMatrix::Ones(1, 1);
  while (h.rows() < length) {
    const Eigen::Index n = h.rows();
    RealMatrix next(2 * n, 2 * n);
    next << h, h, h, -h;
    h = std::move(next);
  }
  return h.cast<Complex>() / std::sqrt(static_cast<double>(length));
}

}  // namespace

namespace {

// The QR behind a random unitary basis dominates run time for large K and
// transmitter and receiver request the same matrix, so keep a few around.
ComplexMatrix cached_random_unitary(int length, std::uint64_t seed) {
  struct Entry {
    int length;
    std::uint64_t seed;
    std::shared_ptr<const ComplexMatrix> matrix;
  };
  constexpr std::size_t kCapacity = 4;
  static std::mutex mutex;
  static std::deque<Entry> entries;
  {
    std::lock_guard lock(mutex);
    for (const auto& e : entries) {
      if (e.length == length && e.seed == seed) return *e.matrix;
    }
  }
  auto matrix = std::make_shared<const ComplexMatrix>(random_unitary(length, seed));
  std::lock_guard lock(mutex);
  entries.push_front({length, seed, matrix});
  if (entries.size() > kCapacity) entries.pop_back();
  return *matrix;
}

}  // namespace

MasterBasis build_master_basis(int length, BasisFamily family, std::uint64_t seed) {
  if (length < 1) throw ParameterError("master basis length must be >= 1");
  MasterBasis basis;
  basis.family = family;
  basis.seed = seed;
  switch (family) {
    case BasisFamily::RandomUnitary:
      basis.columns = cached_random_unitary(length, seed);
      break;
    case BasisFamily::InverseDft:
      basis.columns = inverse_dft(length);
      break;
    case BasisFamily::Hadamard:
      if (!is_hadamard_order(length)) {
        throw ParameterError("Hadamard master basis needs a power-of-two length, got " +
                             std::to_string(length));
      }
      basis.columns = hadamard(length);
      break;
  }
  return basis;
}

std::string_view to_string(PartitionStrategy p) noexcept {
  return p == PartitionStrategy::Strided ? "strided" : "contiguous";
}

PartitionStrategy partition_from_string(std::string_view name) {
  if (name == "contiguous") return PartitionStrategy::ContiguousBlocks;
  if (name == "strided") return PartitionStrategy::Strided;
  throw ParameterError("unknown partition strategy '" + std::string(name) + "'");
}

std::vector<std::vector<int>> partition_indices(int length, int antennas, int subbasis_size,
                                                PartitionStrategy strategy) {
  if (antennas < 1 || subbasis_size < 1) {
    throw ParameterError("antenna count and sub-basis size must be >= 1");
  }
  if (static_cast<long long>(antennas) * subbasis_size > length) {
    throw InfeasibleError("cannot partition " + std::to_string(length) + " columns into " +
                          std::to_string(antennas) + " disjoint sets of " +
                          std::to_string(subbasis_size));
  }
  std::vector<std::vector<int>> sets(antennas, std::vector<int>(subbasis_size));
  for (int n = 0; n < antennas; ++n) {
    for (int j = 0; j < subbasis_size; ++j) {
      sets[n][j] = strategy == PartitionStrategy::ContiguousBlocks ? n * subbasis_size + j
                                                                   : j * antennas + n;
    }
  }
  return sets;
}

SubBasis select_columns(const MasterBasis& master, std::span<const int> indices, int antenna) {
  SubBasis sub;
  sub.antenna_index = antenna;
  sub.column_indices.assign(indices.begin(), indices.end());
  sub.columns.resize(master.length(), static_cast<Eigen::Index>(indices.size()));
  for (std::size_t j = 0; j < indices.size(); ++j) {
    if (indices[j] < 0 || indices[j] >= master.length()) {
      throw ParameterError("column index " + std::to_string(indices[j]) + " out of range");
    }
    sub.columns.col(static_cast<Eigen::Index>(j)) = master.columns.col(indices[j]);
  }
  return sub;
}

std::vector<SubBasis> partition_subbases(const MasterBasis& master, int antennas,
                                         int subbasis_size, PartitionStrategy strategy) {
  const auto sets = partition_indices(master.length(), antennas, subbasis_size, strategy);
  std::vector<SubBasis> out;
  out.reserve(sets.size());
  for (int n = 0; n < antennas; ++n) out.push_back(select_columns(master, sets[n], n));
  return out;
}

std::string_view to_string(WaveformFamily f) noexcept {
  switch (f) {
    case WaveformFamily::Cosmic: return "cosmic";
    case WaveformFamily::Ofdm: return "ofdm";
    case WaveformFamily::ZeroShift: return "zero_shift";
  }
  return "unknown";
}

WaveformFamily waveform_family_from_string(std::string_view name) {
  if (name == "cosmic") return WaveformFamily::Cosmic;
  if (name == "ofdm") return WaveformFamily::Ofdm;
  if (name == "zero_shift") return WaveformFamily::ZeroShift;
  throw ParameterError("unknown waveform family '" + std::string(name) + "'");
}

int WaveformSet::total_symbols() const noexcept {
  return std::accumulate(meta.capacity.begin(), meta.capacity.end(), 0);
}

RealMatrix zone_residual(std::span<const ComplexVector> waveforms, LagWindow window) {
  const auto count = static_cast<Eigen::Index>(waveforms.size());
  RealMatrix out = RealMatrix::Zero(count, count);
  if (count == 0) return out;
  const Eigen::Index length = waveforms.front().size();
  for (const auto& w : waveforms) {
    if (w.size() != length) throw ParameterError("zone_residual: sequences differ in length");
  }
  for (Eigen::Index n = 0; n < count; ++n) {
    const auto op = build_crosscorr_matrix(waveforms[n], window);
    for (Eigen::Index m = 0; m < count; ++m) {
      out(n, m) = op.apply(waveforms[m]).cwiseAbs().maxCoeff();
    }
  }
  return out;
}

RealMatrix zone_residual(const WaveformSet& set) {
  return zone_residual(set.waveforms, zone_window(set.meta.zone_length, set.meta.mode));
}

double constrained_pair_residual(const WaveformSet& set) {
  const RealMatrix r = zone_residual(set);
  const bool symmetric = set.meta.mode == ZoneMode::Symmetric;
  double worst = 0.0;
  for (Eigen::Index n = 0; n < r.rows(); ++n) {
    for (Eigen::Index m = 0; m < r.cols(); ++m) {
      if (n == m || (n > m && !symmetric)) continue;
      const double norm = set.waveforms[n].norm() * set.waveforms[m].norm();
      worst = std::max(worst, r(n, m) / norm);
    }
  }
  return worst;
}

double max_offdiagonal_residual(std::span<const ComplexVector> waveforms, LagWindow window) {
  const RealMatrix r = zone_residual(waveforms, window);
  double worst = 0.0;
  for (Eigen::Index n = 0; n < r.rows(); ++n) {
    for (Eigen::Index m = 0; m < r.cols(); ++m) {
      if (n == m) continue;
      worst = std::max(worst, r(n, m) / (waveforms[n].norm() * waveforms[m].norm()));
    }
  }
  return worst;
}

double unitarity_error(const ComplexMatrix& a) {
  const ComplexMatrix gram = a.adjoint() * a;
  return (gram - ComplexMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

}  // namespace cosmic
