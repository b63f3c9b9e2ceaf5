#include "cosmic/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <json.hpp>

#include "cosmic/error.hpp"
#include "cosmic/random.hpp"

namespace cosmic {

ConstraintMatrix assemble_constraints(std::span<const ComplexVector> previous, const SubBasis& cn,
                                      LagWindow zone) {
  ConstraintMatrix out;
  out.antenna_index = cn.antenna_index;
  out.block_rows = zone.size();
  const auto ks = cn.columns.cols();
  out.blocks.resize(static_cast<Eigen::Index>(previous.size()) * zone.size(), ks);
  for (std::size_t i = 0; i < previous.size(); ++i) {
    if (previous[i].size() != cn.columns.rows()) {
      throw ParameterError("previous waveform length differs from sub-basis length");
    }
    const auto op = build_crosscorr_matrix(previous[i], zone);
    out.blocks.middleRows(static_cast<Eigen::Index>(i) * zone.size(), zone.size()).noalias() =
        op.rows() * cn.columns;
  }
  return out;
}

std::uint64_t null_space_reference_seed(int antenna, int subbasis_size) noexcept {
  return mix_seed(0x436f736d6963ULL + static_cast<std::uint64_t>(subbasis_size),
                  static_cast<std::uint64_t>(antenna));
}

namespace {

// Orthonormalizes the columns of a with positive-real R diagonal, which
// makes the result unique for full-column-rank input.
ComplexMatrix canonical_orthonormalize(const ComplexMatrix& a) {
  Eigen::HouseholderQR<ComplexMatrix> qr(a);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(a.rows(), a.cols());
  const auto& r = qr.matrixQR();
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    const Complex d = r(c, c);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(c) *= d / mag;
  }
  return q;
}

}  // namespace

namespace {

struct RowSpace {
  ComplexMatrix basis;  // right singular vectors, descending singular values
  Eigen::VectorXd singular_values;
};

RowSpace row_space_of(const ConstraintMatrix& b) {
  if (!b.blocks.allFinite()) throw ParameterError("constraint matrix has non-finite entries");
  RowSpace out;
  if (b.blocks.rows() == 0) return out;
  Eigen::BDCSVD<ComplexMatrix> svd(b.blocks, Eigen::ComputeThinV);
  out.singular_values = svd.singularValues();
  out.basis = svd.matrixV();
  return out;
}

// Null-space columns for a given rank: the complement projector applied to
// a seeded reference matrix, then canonical QR.
ComplexMatrix canonical_complement(const ConstraintMatrix& b, const RowSpace& rs, int rank) {
  const auto ks = b.blocks.cols();
  if (rank == 0) return ComplexMatrix::Identity(ks, ks);
  const auto dim = ks - rank;
  const ComplexMatrix v = rs.basis.leftCols(rank);
  auto gen = make_stream(null_space_reference_seed(b.antenna_index, static_cast<int>(ks)), 0);
  const ComplexMatrix reference = complex_gaussian(ks, dim, 1.0, gen);
  const ComplexMatrix projected = reference - v * (v.adjoint() * reference);
  return canonical_orthonormalize(projected);
}

}  // namespace

NullSpaceBasis null_space(const ConstraintMatrix& b, double rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw ParameterError("rel_tol must lie in (0, 1)");
  const auto rs = row_space_of(b);
  const auto ks = b.blocks.cols();
  NullSpaceBasis out;
  const auto& sv = rs.singular_values;
  const double sigma_max = sv.size() > 0 ? sv[0] : 0.0;
  out.singular_value_floor = rel_tol * sigma_max;
  if (sigma_max > 0.0) {
    while (out.rank < sv.size() && sv[out.rank] > out.singular_value_floor) ++out.rank;
  }
  if (ks - out.rank <= 0) {
    throw InfeasibleError("null space of the constraint matrix for antenna " +
                              std::to_string(b.antenna_index + 1) +
                              " is empty (rank " + std::to_string(out.rank) + " of " +
                              std::to_string(ks) +
                              " columns); use a smaller zone length or fewer antennas",
                          b.antenna_index);
  }
  out.columns = canonical_complement(b, rs, out.rank);
  return out;
}

NullSpaceBasis null_space_of_dimension(const ConstraintMatrix& b, int dimension) {
  const auto ks = static_cast<int>(b.blocks.cols());
  if (dimension < 1 || dimension > ks) {
    throw ParameterError("null-space dimension " + std::to_string(dimension) +
                         " outside [1, " + std::to_string(ks) + "]");
  }
  const int rank = ks - dimension;
  if (rank > b.blocks.rows()) {
    throw DecodeError("antenna " + std::to_string(b.antenna_index + 1) + ": constraint matrix has " +
                      std::to_string(b.blocks.rows()) + " rows, cannot have rank " +
                      std::to_string(rank));
  }
  const auto rs = row_space_of(b);
  NullSpaceBasis out;
  out.rank = rank;
  out.singular_value_floor = rank < rs.singular_values.size() ? rs.singular_values[rank] : 0.0;
  out.columns = canonical_complement(b, rs, rank);
  return out;
}

std::string FeasibilityReport::to_json() const {
  nlohmann::ordered_json j;
  j["config"] = {{"K", config.length},
                 {"N", config.antennas},
                 {"K_s", config.subbasis_size},
                 {"K_z", config.zone_length},
                 {"mode", std::string(to_string(config.mode))}};
  j["zone_lag_count"] = zone_lag_count;
  j["partition_fits"] = partition_fits;
  j["feasible"] = feasible;
  j["first_infeasible_antenna"] = first_infeasible_antenna;
  auto antennas_json = nlohmann::ordered_json::array();
  for (std::size_t n = 0; n < predicted.size(); ++n) {
    antennas_json.push_back({{"n", n + 1},
                             {"predicted_dimension", predicted[n]},
                             {"conservative_dimension", conservative[n]}});
  }
  j["antennas"] = antennas_json;
  j["notes"] = notes;
  return j.dump(2);
}

FeasibilityReport feasibility_check(const CosmicConfig& config) {
  FeasibilityReport report;
  report.config = config;
  const int k = config.length;
  const int n_ant = config.antennas;
  const int ks = config.subbasis_size;
  const int kz = config.zone_length;
  if (k < 1 || n_ant < 1 || ks < 1 || kz < 1) {
    report.feasible = false;
    report.partition_fits = false;
    report.notes.push_back("K, N, K_s and K_z must all be positive integers");
    return report;
  }
  const bool symmetric = config.mode == ZoneMode::Symmetric;
  report.zone_lag_count = symmetric ? 2 * kz - 1 : kz;
  const int loss = symmetric ? 2 * (kz - 1) : kz - 1;
  for (int n = 1; n <= n_ant; ++n) {
    report.predicted.push_back(ks - (n - 1) * loss);
    report.conservative.push_back(ks - (n - 1) * report.zone_lag_count);
  }
  report.partition_fits = static_cast<long long>(n_ant) * ks <= k;
  if (!report.partition_fits) {
    report.notes.push_back("N * K_s = " + std::to_string(static_cast<long long>(n_ant) * ks) +
                           " exceeds K = " + std::to_string(k) +
                           ": sub-bases cannot be disjoint");
  }
  if (kz > k) report.notes.push_back("zone length exceeds the waveform length");
  for (int n = 0; n < n_ant; ++n) {
    if (report.predicted[n] < 1) {
      report.first_infeasible_antenna = n + 1;
      report.notes.push_back("predicted null-space dimension of antenna " + std::to_string(n + 1) +
                             " is " + std::to_string(report.predicted[n]) +
                             "; reduce K_z, N or increase K_s");
      break;
    }
  }
  report.feasible = report.partition_fits && kz <= k && report.predicted.back() >= 1;
  return report;
}

CosmicResult generate_cosmic_set(const CosmicConfig& config, const FrameSource& frames) {
  if (config.zone_length < 1 || config.zone_length > config.length) {
    throw ParameterError("zone length must lie in [1, K]");
  }
  const auto master = build_master_basis(config.length, config.basis, config.seed);
  const auto subs =
      partition_subbases(master, config.antennas, config.subbasis_size, config.partition);
  const LagWindow zone = zone_window(config.zone_length, config.mode);
  const auto feasibility = feasibility_check(config);

  CosmicResult result;
  auto& meta = result.set.meta;
  meta.family = WaveformFamily::Cosmic;
  meta.length = config.length;
  meta.antennas = config.antennas;
  meta.subbasis_size = config.subbasis_size;
  meta.zone_length = config.zone_length;
  meta.mode = config.mode;
  meta.basis = config.basis;
  meta.partition = config.partition;
  meta.seed = config.seed;
  meta.rel_tol = config.rel_tol;
  meta.constellation = config.constellation;
  meta.predicted_capacity = feasibility.predicted;

  auto& waveforms = result.set.waveforms;
  for (int n = 0; n < config.antennas; ++n) {
    const auto constraints = assemble_constraints(waveforms, subs[n], zone);
    const auto basis = null_space(constraints, config.rel_tol);
    const int capacity = basis.dimension();

    SymbolFrame frame = frames(n, capacity);
    if (frame.size() != capacity) {
      throw ParameterError("antenna " + std::to_string(n + 1) + " can carry " +
                           std::to_string(capacity) + " symbols but the frame holds " +
                           std::to_string(frame.size()));
    }
    ComplexVector s = subs[n].columns * (basis.columns * frame.symbols);
    const double energy = s.norm();
    if (!(energy > 0.0)) {
      throw ParameterError("antenna " + std::to_string(n + 1) + " frame has zero energy");
    }
    const double scale = 1.0 / energy;
    s *= scale;

    waveforms.push_back(std::move(s));
    meta.columns.push_back(subs[n].column_indices);
    meta.capacity.push_back(capacity);
    meta.scale.push_back(scale);
    result.frames.push_back(std::move(frame));
  }
  return result;
}

CosmicResult generate_cosmic_set(const CosmicConfig& config, std::span<const SymbolFrame> frames) {
  if (static_cast<int>(frames.size()) != config.antennas) {
    throw ParameterError("expected " + std::to_string(config.antennas) + " frames, got " +
                         std::to_string(frames.size()));
  }
  return generate_cosmic_set(config, [&](int n, int) { return frames[n]; });
}

CosmicResult generate_cosmic_set(const CosmicConfig& config, std::uint64_t bit_seed) {
  return generate_cosmic_set(config, [&](int n, int capacity) {
    return random_frame(capacity, config.constellation,
                        mix_seed(bit_seed, static_cast<std::uint64_t>(n)));
  });
}

}  // namespace cosmic
