#include "cosmic/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cosmic/error.hpp"
#include "cosmic/random.hpp"
#include "fft.hpp"

namespace cosmic {

std::string_view to_string(SubcarrierAllocation a) noexcept {
  return a == SubcarrierAllocation::Interleaved ? "interleaved" : "contiguous";
}

SubcarrierAllocation allocation_from_string(std::string_view name) {
  if (name == "contiguous") return SubcarrierAllocation::Contiguous;
  if (name == "interleaved") return SubcarrierAllocation::Interleaved;
  throw ParameterError("unknown subcarrier allocation '" + std::string(name) + "'");
}

OfdmPlan plan_ofdm(int length, int antennas, SubcarrierAllocation allocation) {
  if (length < 1 || antennas < 1) throw ParameterError("OFDM plan needs K >= 1 and N >= 1");
  if (antennas > length) throw ParameterError("more antennas than subcarriers");
  // Rank bins by frequency: rank r maps to bin (r + ceil(K/2)) mod K, which
  // starts at the most negative frequency.
  std::vector<int> by_frequency(length);
  const int half = (length + 1) / 2;
  for (int r = 0; r < length; ++r) by_frequency[r] = (r + half) % length;

  OfdmPlan plan;
  plan.length = length;
  plan.allocation = allocation;
  const int per = length / antennas;
  plan.subcarriers.assign(antennas, {});
  for (int n = 0; n < antennas; ++n) {
    for (int j = 0; j < per; ++j) {
      const int rank = allocation == SubcarrierAllocation::Contiguous ? n * per + j : j * antennas + n;
      plan.subcarriers[n].push_back(by_frequency[rank]);
    }
  }
  return plan;
}

WaveformSet generate_ofdm_set(const OfdmPlan& plan, std::span<const SymbolFrame> frames) {
  if (static_cast<int>(frames.size()) != plan.antennas()) {
    throw ParameterError("expected one frame per OFDM antenna");
  }
  WaveformSet set;
  auto& meta = set.meta;
  meta.family = WaveformFamily::Ofdm;
  meta.length = plan.length;
  meta.antennas = plan.antennas();
  meta.subbasis_size = plan.per_antenna();
  meta.basis = BasisFamily::InverseDft;
  meta.ofdm_allocation = std::string(to_string(plan.allocation));
  meta.constellation = frames.empty() ? Constellation::Qam16 : frames.front().constellation;

  const double unitary = std::sqrt(static_cast<double>(plan.length));
  for (int n = 0; n < plan.antennas(); ++n) {
    const auto& bins = plan.subcarriers[n];
    const auto& frame = frames[n];
    if (frame.size() > static_cast<Eigen::Index>(bins.size())) {
      throw ParameterError("antenna " + std::to_string(n + 1) + " has " +
                           std::to_string(bins.size()) + " subcarriers but " +
                           std::to_string(frame.size()) + " symbols");
    }
    ComplexVector spectrum = ComplexVector::Zero(plan.length);
    std::vector<int> used(bins.begin(), bins.begin() + frame.size());
    for (Eigen::Index j = 0; j < frame.size(); ++j) spectrum[bins[j]] = frame.symbols[j];
    // ifft carries 1/K; multiplying by sqrt(K) gives the unitary IDFT.
    ComplexVector s = detail::ifft(spectrum) * unitary;
    const double energy = s.norm();
    const double scale = energy > 0.0 ? 1.0 / energy : 1.0;
    s *= scale;
    set.waveforms.push_back(std::move(s));
    meta.columns.push_back(std::move(used));
    meta.capacity.push_back(static_cast<int>(frame.size()));
    meta.predicted_capacity.push_back(static_cast<int>(bins.size()));
    meta.scale.push_back(scale);
  }
  return set;
}

WaveformSet generate_ofdm_set(const OfdmPlan& plan, Constellation c, std::uint64_t bit_seed) {
  std::vector<SymbolFrame> frames;
  for (int n = 0; n < plan.antennas(); ++n) {
    frames.push_back(random_frame(plan.per_antenna(), c, mix_seed(bit_seed, n)));
  }
  return generate_ofdm_set(plan, frames);
}

std::vector<SubBasis> ofdm_subbases(const OfdmPlan& plan) {
  const auto master = build_master_basis(plan.length, BasisFamily::InverseDft, 0);
  std::vector<SubBasis> out;
  for (int n = 0; n < plan.antennas(); ++n) {
    out.push_back(select_columns(master, plan.subcarriers[n], n));
  }
  return out;
}

WaveformSet generate_zero_shift_set(int length, int antennas, std::uint64_t seed) {
  if (length < 1 || antennas < 1) throw ParameterError("zero-shift set needs K >= 1 and N >= 1");
  if (antennas > length) {
    throw ParameterError("zero-shift set: N = " + std::to_string(antennas) +
                         " exceeds K = " + std::to_string(length));
  }
  auto gen = make_stream(seed, 0x7a65726fULL);  // "zero"
  const ComplexMatrix gaussian = complex_gaussian(length, antennas, 1.0, gen);
  Eigen::HouseholderQR<ComplexMatrix> qr(gaussian);
  const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(length, antennas);

  WaveformSet set;
  auto& meta = set.meta;
  meta.family = WaveformFamily::ZeroShift;
  meta.length = length;
  meta.antennas = antennas;
  meta.seed = seed;
  for (int n = 0; n < antennas; ++n) {
    set.waveforms.emplace_back(q.col(n));
    meta.columns.emplace_back();
    meta.capacity.push_back(0);
    meta.predicted_capacity.push_back(0);
    meta.scale.push_back(1.0);
  }
  return set;
}

Complex circular_cross_correlation(const ComplexVector& s, const ComplexVector& x, int lag) {
  if (s.size() != x.size()) throw ParameterError("circular correlation needs equal lengths");
  const auto k = s.size();
  Complex acc{0.0, 0.0};
  const auto shift = ((lag % k) + k) % k;
  for (Eigen::Index i = 0; i < k; ++i) acc += std::conj(s[i]) * x[(i + shift) % k];
  return acc;
}

}  // namespace cosmic
