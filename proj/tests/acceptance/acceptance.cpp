// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances and budgets are fixed here.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cosmic/baseline.hpp"
#include "cosmic/encoder.hpp"
#include "cosmic/error.hpp"
#include "cosmic/io.hpp"
#include "cosmic/metrics.hpp"
#include "cosmic/pipeline.hpp"
#include "oracles.hpp"

using namespace cosmic;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failed = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("threw: ") + e.what()};
  }
  if (!o.pass) ++failed;
  std::printf("criterion %d %s  %s: %s\n", id, o.pass ? "PASS" : "FAIL", title.c_str(), o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ScenarioConfig preset(const std::string& name) {
  return load_scenario(fs::path(COSMIC_PRESET_DIR) / (name + ".json"));
}

ScenarioConfig with_family(ScenarioConfig c, WaveformFamily f) {
  c.waveform.family = f;
  return c;
}

// Feasible random COSMIC configs. Random-unitary masters above K = 1024 cost
// tens of seconds to factor, so K = 2048 draws use the structured bases.
std::vector<CosmicConfig> random_configs(int count, std::uint64_t seed, int max_length) {
  std::mt19937_64 gen(seed);
  const std::vector<int> lengths{256, 512, 1024, 2048};
  std::vector<CosmicConfig> out;
  while (static_cast<int>(out.size()) < count) {
    CosmicConfig c;
    c.length = lengths[gen() % lengths.size()];
    if (c.length > max_length) continue;
    c.antennas = 2 + static_cast<int>(gen() % 5);
    c.subbasis_size = c.length / c.antennas;
    c.zone_length = 2 + static_cast<int>(gen() % 31);
    c.mode = out.size() % 2 == 0 ? ZoneMode::OneSided : ZoneMode::Symmetric;
    if (c.length > 1024) c.basis = gen() % 2 ? BasisFamily::InverseDft : BasisFamily::Hadamard;
    c.partition = gen() % 3 == 0 ? PartitionStrategy::Strided : PartitionStrategy::ContiguousBlocks;
    c.seed = gen();
    const auto f = feasibility_check(c);
    if (!f.feasible || f.predicted.back() < 4) continue;
    out.push_back(c);
  }
  return out;
}

Outcome criterion1() {
  const auto t0 = Clock::now();
  const auto configs = random_configs(20, 20240601, 2048);
  double worst = 0.0;
  int large = 0;
  int sym = 0;
  for (const auto& c : configs) {
    const auto set = generate_cosmic_set(c, c.seed ^ 0x5a5a).set;
    worst = std::max(worst, constrained_pair_residual(set));
    large += c.length == 2048;
    sym += c.mode == ZoneMode::Symmetric;
  }
  const double t = seconds_since(t0);
  return {worst < 1e-8 && t < 60.0,
          fmt("max normalized zone residual %.3g over 20 configs (%d with K=2048, %d symmetric) in %.1f s; "
              "limits 1e-8, 60 s",
              worst, large, sym, t)};
}

Outcome criterion2() {
  const auto configs = random_configs(10, 777, 512);
  int exact = 0;
  int runs = 0;
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto c : configs) {
    for (auto con : {Constellation::Qam16, Constellation::Qpsk}) {
      c.constellation = con;
      const auto gen_set = generate_cosmic_set(c, c.seed + 1);
      std::vector<Complex> h(c.antennas, Complex(u(gen), u(gen)));
      DecodeOptions opt;
      opt.known_gains = h;
      const auto decoded = comm_decode(comm_receive(gen_set.set, h, 0.0, 0), gen_set.set.meta, opt);
      const auto score = score_decode(decoded, gen_set.frames);
      ++runs;
      if (score.bit_errors == 0 && score.symbol_errors == 0) ++exact;
    }
  }
  return {exact == runs, fmt("%d of %d noiseless decodes exact (10 configs x {16-QAM, QPSK})", exact, runs)};
}

Outcome criterion3() {
  const auto t0 = Clock::now();
  const auto base = preset("islr-targets");
  const double cosmic = *evaluate_scenario(with_family(base, WaveformFamily::Cosmic)).metrics.islr_db;
  const double zs = *evaluate_scenario(with_family(base, WaveformFamily::ZeroShift)).metrics.islr_db;
  const double t = seconds_since(t0);
  return {cosmic - zs <= -1.0 && t < 120.0,
          fmt("ISLR zone-compliant %.2f dB, zero-shift %.2f dB, difference %.2f dB (limit -1.0 dB), "
              "N=%d, %d strong + %d weak targets, %.1f s (limit 120 s)",
              cosmic, zs, cosmic - zs, base.waveform.antennas, int(base.scene.strong_bins.size()),
              base.scene.weak_count, t)};
}

Outcome criterion4() {
  const auto t0 = Clock::now();
  const auto base = preset("desk-imaging");
  const double c = *evaluate_scenario(with_family(base, WaveformFamily::Cosmic)).metrics.snr_image_db;
  const double z = *evaluate_scenario(with_family(base, WaveformFamily::ZeroShift)).metrics.snr_image_db;
  const double o = *evaluate_scenario(with_family(base, WaveformFamily::Ofdm)).metrics.snr_image_db;
  const double t = seconds_since(t0);
  return {c - z >= 1.0 && z - o >= 1.0 && t < 300.0,
          fmt("image SNR COSMIC %.2f dB > zero-shift %.2f dB > OFDM %.2f dB, gaps %.2f / %.2f dB (limit 1 dB), "
              "%.1f s (limit 300 s)",
              c, z, o, c - z, z - o, t)};
}

Outcome criterion5() {
  CapacitySweepConfig cfg;
  const auto rows = symbol_capacity_vs_n(cfg);
  double lo = 1e9, hi = -1e9;
  bool ofdm_increasing = true;
  bool ranks_ok = true;
  std::string table;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    lo = std::min(lo, r.cosmic_islr_db);
    hi = std::max(hi, r.cosmic_islr_db);
    if (i > 0 && !(r.ofdm_islr_db > rows[i - 1].ofdm_islr_db)) ofdm_increasing = false;

    CosmicConfig c;
    c.length = cfg.length;
    c.antennas = r.antennas;
    c.subbasis_size = r.subbasis_size;
    c.zone_length = cfg.zone_length;
    c.mode = cfg.mode;
    const auto predicted = feasibility_check(c).predicted;
    const int step = cfg.mode == ZoneMode::Symmetric ? 2 * (cfg.zone_length - 1) : cfg.zone_length - 1;
    for (int n = 0; n < r.antennas; ++n) {
      if (std::abs(r.cosmic_capacity[n] - predicted[n]) > 1) ranks_ok = false;
      if (n > 0 && std::abs((r.cosmic_capacity[n - 1] - r.cosmic_capacity[n]) - step) > 1) ranks_ok = false;
    }
    table += fmt(" N=%d: sum D=%d, COSMIC %.2f dB, OFDM %.2f dB;", r.antennas, r.cosmic_symbols,
                 r.cosmic_islr_db, r.ofdm_islr_db);
  }
  const bool pass = hi - lo <= 0.5 && ofdm_increasing && ranks_ok;
  return {pass, fmt("COSMIC ISLR spread %.2f dB (limit 0.5), OFDM increasing %s, D_n linear within +-1 %s;",
                    hi - lo, ofdm_increasing ? "yes" : "no", ranks_ok ? "yes" : "no") +
                    table};
}

double extra(const MetricsReport& m, const std::string& key) {
  for (const auto& [k, v] : m.extras)
    if (k == key) return v;
  throw std::runtime_error("missing " + key);
}

Outcome criterion6() {
  const auto base = preset("se-sweep");
  const std::vector<double> snrs{0, 5, 10, 15, 20, 25, 30};
  bool ok = true;
  std::string table;
  for (double snr : snrs) {
    const auto point = apply_axis(base, "snr_db", snr);
    const auto c = evaluate_scenario(with_family(point, WaveformFamily::Cosmic)).metrics;
    const auto o = evaluate_scenario(with_family(point, WaveformFamily::Ofdm)).metrics;
    const double bound = extra(c, "se_bound");
    const double sc = *c.se_bits_per_s_per_hz;
    const double so = *o.se_bits_per_s_per_hz;
    const bool strict = snr >= 25.0;
    const bool here = strict ? (bound > sc && sc > so) : (bound >= sc && sc >= so);
    ok = ok && here;
    table += fmt(" %g dB: %.2f >= %.2f >= %.2f;", snr, bound, sc, so);
  }
  return {ok, "SE bound >= COSMIC >= MIMO-OFDM (strict from 25 dB):" + table};
}

Outcome criterion7() {
  // (a) correlation matrix against the direct sum
  double conv_err = 0.0;
  for (int k = 1; k <= 32; ++k) {
    const auto s = oracle::random_vector(k, 100 + k);
    const auto x = oracle::random_vector(k, 200 + k);
    const auto w = LagWindow::full(k);
    const auto y = build_crosscorr_matrix(s, w).apply(x);
    for (int l = w.first; l <= w.last; ++l) conv_err = std::max(conv_err, std::abs(y[l - w.first] - oracle::xcorr(s, x, l)));
  }

  // (b) ||B v||_inf for null-space columns and the transmitted coefficients
  double bv = 0.0;
  for (const auto& c : random_configs(4, 31, 512)) {
    const auto set = generate_cosmic_set(c, 9).set;
    const auto master = build_master_basis(c.length, c.basis, c.seed);
    const auto zone = zone_window(c.zone_length, c.mode);
    for (int n = 1; n < c.antennas; ++n) {
      const auto cn = select_columns(master, set.meta.columns[n], n);
      const std::vector<ComplexVector> previous(set.waveforms.begin(), set.waveforms.begin() + n);
      const auto b = assemble_constraints(previous, cn, zone);
      const auto ns = null_space(b, c.rel_tol);
      bv = std::max(bv, (b.blocks * ns.columns).cwiseAbs().maxCoeff());
      const ComplexVector v = cn.columns.adjoint() * set.waveforms[n];
      bv = std::max(bv, (b.blocks * v).cwiseAbs().maxCoeff());
    }
  }

  // (c) back-projection of single targets
  CosmicConfig cc;
  cc.length = 512;
  cc.antennas = 4;
  cc.subbasis_size = 128;
  cc.zone_length = 8;
  cc.mode = ZoneMode::Symmetric;
  const auto set = generate_cosmic_set(cc, 2).set;
  const auto geom = RadarGeometry::uniform_virtual_array(4, 4);
  const double half_cell = geom.range_resolution() / 2.0;
  double worst_offset = 0.0;
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> ux(-1.5, 1.5), uy(3.0, 8.0);
  for (int t = 0; t < 5; ++t) {
    const Point2 truth(ux(gen), uy(gen));
    SceneModel scene;
    scene.scatterers.push_back({truth, Complex(1, 0)});
    ImagingChannelOptions ch;
    ch.lag_count = 32;
    RangeCompressionOptions rc;
    rc.lag_count = 32;
    rc.lag_spacing = geom.sampling_interval();
    const auto cube = range_compress(imaging_receive(set, geom, scene, ch).rx, set, rc);
    const auto grid = ImageGrid::from_bounds(truth.x() - 1.5, truth.x() + 1.5, truth.y() - 1.5, truth.y() + 1.5, 0.02);
    const auto img = backproject(cube, geom, grid);
    Eigen::Index r = 0, c = 0;
    img.pixels.cwiseAbs().maxCoeff(&r, &c);
    worst_offset = std::max(worst_offset, (grid.pixel(int(r), int(c)) - truth).norm());
  }

  const bool pass = conv_err < 1e-12 && bv < 1e-8 && worst_offset < half_cell;
  return {pass, fmt("correlation matrix vs direct sum %.2g (limit 1e-12, K<=32); ||Bv||_inf %.2g (limit 1e-8); "
                    "back-projection offset %.3f m (limit %.3f m, half a range cell)",
                    conv_err, bv, worst_offset, half_cell)};
}

Outcome criterion8() {
  const auto config = load_scenario(fs::path(COSMIC_PRESET_DIR) / "budget-overrun.json", false);
  const auto report = feasibility_check(cosmic_config(config));
  const auto json = report.to_json();
  const auto golden = io::read_text(fs::path(COSMIC_GOLDEN_DIR) / "budget_overrun_feasibility.json");
  std::string budget;
  for (std::size_t n = 0; n < report.predicted.size(); ++n) budget += " " + std::to_string(report.predicted[n]);
  const bool pass = !report.feasible && report.first_infeasible_antenna == 5 && json + "\n" == golden;
  return {pass, fmt("K=3000 N=12 K_s=250 K_z=67 infeasible=%s, first infeasible antenna %d, golden report %s; "
                    "per-antenna budget:",
                    report.feasible ? "no" : "yes", report.first_infeasible_antenna,
                    json + "\n" == golden ? "matches" : "DIFFERS") +
                    budget};
}

}  // namespace

int main() {
  std::printf("cosmic %s acceptance\n", std::string(toolkit_version()).c_str());
  report(1, "zone orthogonality", criterion1);
  report(2, "noiseless round trip", criterion2);
  report(3, "ISLR vs zero-shift", criterion3);
  report(4, "image SNR ordering", criterion4);
  report(5, "ISLR and capacity vs N", criterion5);
  report(6, "spectral efficiency ordering", criterion6);
  report(7, "oracle equivalences", criterion7);
  report(8, "feasibility of the K=3000 tuple", criterion8);
  std::printf("%d of 8 criteria passed\n", 8 - failed);
  return failed == 0 ? 0 : 1;
}
