#include <doctest.h>

#include "cosmic/baseline.hpp"
#include "cosmic/encoder.hpp"
#include "cosmic/error.hpp"
#include "cosmic/receivers.hpp"
#include "oracles.hpp"

using namespace cosmic;

namespace {

CosmicConfig comm_config(Constellation c, ZoneMode mode) {
  CosmicConfig cfg;
  cfg.length = 256;
  cfg.antennas = 3;
  cfg.subbasis_size = 64;
  cfg.zone_length = 8;
  cfg.mode = mode;
  cfg.seed = 17;
  cfg.constellation = c;
  return cfg;
}

}  // namespace

TEST_SUITE("receivers") {
  TEST_CASE("noiseless COSMIC round trip is exact") {
    for (auto c : {Constellation::Qpsk, Constellation::Qam16}) {
      for (auto mode : {ZoneMode::OneSided, ZoneMode::Symmetric}) {
        const auto gen = generate_cosmic_set(comm_config(c, mode), 4);
        const std::vector<Complex> h(3, Complex(0.7, -0.2));
        DecodeOptions opt;
        opt.known_gains = h;
        const auto decoded = comm_decode(comm_receive(gen.set, h, 0.0, 0), gen.set.meta, opt);
        REQUIRE(decoded.size() == 3);
        for (int n = 0; n < 3; ++n) {
          CHECK(decoded[n].decided.bits == gen.frames[n].bits);
          CHECK((decoded[n].soft - gen.frames[n].symbols).cwiseAbs().maxCoeff() < 1e-8);
          CHECK(decoded[n].constraint_rank == gen.set.meta.subbasis_size - gen.set.meta.capacity[n]);
        }
        const auto report = score_decode(decoded, gen.frames, nominal_slots(gen.set.meta));
        CHECK(report.symbol_errors == 0);
        CHECK(report.ser() == 0.0);
      }
    }
  }

  TEST_CASE("pilot gain estimation recovers an unknown gain") {
    const auto cfg = comm_config(Constellation::Qam16, ZoneMode::OneSided);
    const auto gen = generate_cosmic_set(cfg, [&](int n, int d) {
      return make_frame(with_pilot_prefix(random_bits((d - kPilotSymbols) * 4, 60 + n), cfg.constellation),
                        cfg.constellation);
    });
    const std::vector<Complex> h(3, std::polar(2e-3, 1.1));
    DecodeOptions opt;
    opt.gain_mode = GainEstimation::Pilot;
    const auto decoded = comm_decode(comm_receive(gen.set, h, 0.0, 0), gen.set.meta, opt);
    for (int n = 0; n < 3; ++n) {
      CHECK(std::abs(decoded[n].gain_estimate - h[n]) < 1e-12);
      CHECK(decoded[n].decided.bits == gen.frames[n].bits);
    }
  }

  TEST_CASE("noiseless OFDM round trip") {
    const auto plan = plan_ofdm(64, 4, SubcarrierAllocation::Contiguous);
    std::vector<SymbolFrame> frames;
    for (int n = 0; n < 4; ++n) frames.push_back(random_frame(16, Constellation::Qam16, n));
    const auto set = generate_ofdm_set(plan, frames);
    const auto decoded = comm_decode(comm_receive(set, std::vector<Complex>(4, 1.0), 0.0, 0), set.meta);
    for (int n = 0; n < 4; ++n) CHECK(decoded[n].decided.bits == frames[n].bits);
  }

  TEST_CASE("zero-shift sets carry no data") {
    const auto set = generate_zero_shift_set(32, 2, 1);
    CHECK_THROWS_AS(comm_decode(ComplexVector::Zero(32), set.meta), DecodeError);
  }

  TEST_CASE("scoring counts symbol and bit errors") {
    auto sent = random_frame(4, Constellation::Qpsk, 3);
    AntennaDecode d;
    d.decided = sent;
    d.decided.bits[0] ^= 1;  // symbol 0
    d.decided.bits[2] ^= 1;  // symbol 1
    const std::vector<AntennaDecode> decoded{d};
    const std::vector<SymbolFrame> tx{sent};
    const std::vector<int> slots{8};
    const auto r = score_decode(decoded, tx, slots);
    CHECK(r.symbol_errors == 2);
    CHECK(r.bit_errors == 2);
    CHECK(r.ser() == doctest::Approx(0.5));
    CHECK(r.ber() == doctest::Approx(0.25));
    CHECK(r.eta() == doctest::Approx(2.0 / 8.0));
  }

  TEST_CASE("range compression equals the direct correlation") {
    const auto set = generate_zero_shift_set(48, 2, 5);
    std::vector<ComplexVector> raw{oracle::random_vector(60, 1), oracle::random_vector(60, 2),
                                   oracle::random_vector(60, 3)};
    RangeCompressionOptions opt;
    opt.lag_count = 12;
    const auto cube = range_compress(raw, set, opt);
    CHECK(cube.tx_count() == 2);
    CHECK(cube.rx_count() == 3);
    for (int n = 0; n < 2; ++n)
      for (int m = 0; m < 3; ++m)
        for (int l = 0; l < 12; ++l) CHECK(std::abs(cube.at(n, m, l) - oracle::xcorr(set.waveforms[n], raw[m], l)) < 1e-10);

    // fine profile interpolates the critical samples
    for (int l = 0; l < 12; ++l) CHECK(std::abs(cube.fine_profile(1, 2)[l * 4] - cube.at(1, 2, l)) < 1e-10);

    std::vector<ComplexVector> short_raw{oracle::random_vector(40, 1)};
    CHECK_THROWS_AS(range_compress(short_raw, set, opt), ParameterError);
  }

  TEST_CASE("back-projection localizes a point target within half a cell") {
    CosmicConfig cfg;
    cfg.length = 512;
    cfg.antennas = 4;
    cfg.subbasis_size = 128;
    cfg.zone_length = 8;
    cfg.mode = ZoneMode::Symmetric;
    const auto set = generate_cosmic_set(cfg, 2).set;
    const auto geom = RadarGeometry::uniform_virtual_array(4, 4);
    const Point2 truth(0.37, 5.23);
    SceneModel scene;
    scene.scatterers.push_back({truth, Complex(1, 0)});
    ImagingChannelOptions ch;
    ch.lag_count = 24;
    const auto rx = imaging_receive(set, geom, scene, ch);
    RangeCompressionOptions rc;
    rc.lag_count = 24;
    rc.lag_spacing = geom.sampling_interval();
    const auto cube = range_compress(rx.rx, set, rc);
    const auto grid = ImageGrid::from_bounds(-2, 2, 3, 7, 0.02);
    const auto img = backproject(cube, geom, grid);
    Eigen::Index r = 0, c = 0;
    img.pixels.cwiseAbs().maxCoeff(&r, &c);
    const Point2 peak = grid.pixel(int(r), int(c));
    CHECK(std::abs(peak.norm() - truth.norm()) < geom.range_resolution() / 2);
    CHECK((peak - truth).norm() < geom.range_resolution() / 2);
    CHECK(img.clipped == 0);
  }

  TEST_CASE("image grid helpers") {
    const auto g = ImageGrid::from_bounds(-1, 1, 2, 3, 0.5);
    CHECK(g.nx == 5);
    CHECK(g.ny == 3);
    CHECK(g.pixel(2, 4).isApprox(Point2(1, 3)));
    CHECK(taper_from_string(to_string(Taper::Hann)) == Taper::Hann);
  }
}
