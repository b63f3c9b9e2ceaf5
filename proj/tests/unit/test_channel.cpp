#include <doctest.h>

#include "cosmic/baseline.hpp"
#include "cosmic/channel.hpp"
#include "cosmic/error.hpp"
#include "oracles.hpp"

using namespace cosmic;

TEST_SUITE("channel") {
  TEST_CASE("path loss at 77 GHz and 10 m (frozen)") {
    const double lambda = kSpeedOfLight / 77e9;
    CHECK(pathloss_db(1.0, lambda, 10.0) == doctest::Approx(90.17759772533302).epsilon(1e-12));
    CHECK(pathloss_db(1.0, lambda, 10.0, PathLossModel::Simplified) ==
          doctest::Approx(79.18549908511204).epsilon(1e-12));
    CHECK(std::abs(pathloss_gain(1.0, lambda, 10.0)) == doctest::Approx(3.098276077426586e-05).epsilon(1e-12));
    CHECK_THROWS_AS(pathloss_gain(1.0, lambda, 0.0), ParameterError);
    CHECK_THROWS_AS(pathloss_gain(0.0, lambda, 1.0), ParameterError);
    CHECK_THROWS_AS(pathloss_gain(1.0, -1.0, 1.0), ParameterError);
  }

  TEST_CASE("uniform virtual array is contiguous at quarter wavelength") {
    const auto g = RadarGeometry::uniform_virtual_array(3, 4);
    auto v = g.virtual_positions();
    REQUIRE(v.size() == 12);
    std::sort(v.begin(), v.end(), [](const Point2& a, const Point2& b) { return a.x() < b.x(); });
    for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i].x() - v[i - 1].x() == doctest::Approx(g.wavelength() / 4));
    CHECK(v.front().x() == doctest::Approx(-v.back().x()));
    CHECK(g.range_resolution() == doctest::Approx(0.74948114500000001));
  }

  TEST_CASE("two-way delay") {
    CHECK(two_way_delay({0, 0}, {0, 3}, {0, 0}) == doctest::Approx(6.0 / kSpeedOfLight));
    CHECK(two_way_delay({-4, 0}, {0, 3}, {4, 0}) == doctest::Approx(10.0 / kSpeedOfLight));
  }

  TEST_CASE("noiseless comm channel sums the gained waveforms") {
    const auto set = generate_zero_shift_set(16, 3, 2);
    const std::vector<Complex> h{{1, 0}, {0, 2}, {-0.5, 0.5}};
    const auto y = comm_receive(set, h, 0.0, 1);
    ComplexVector want = ComplexVector::Zero(16);
    for (int n = 0; n < 3; ++n) want += h[n] * set.waveforms[n];
    CHECK((y - want).norm() < 1e-15);
  }

  TEST_CASE("noise variance matches the requested SNR") {
    CHECK(noise_variance_for_snr(0.0, 100) == doctest::Approx(0.01));
    CHECK(noise_variance_for_snr(20.0, 10, 4.0) == doctest::Approx(4e-3));
    const auto set = generate_zero_shift_set(4096, 1, 2);
    const std::vector<Complex> h{{0, 0}};
    const auto w = comm_receive(set, h, 0.5, 9);
    CHECK(w.squaredNorm() / 4096 == doctest::Approx(0.5).epsilon(0.05));
  }

  TEST_CASE("integer fractional_delay is an exact shift") {
    const auto s = oracle::random_vector(20, 4);
    const auto d = fractional_delay(s, 3.0, 26);
    REQUIRE(d.size() == 26);
    for (int k = 0; k < 26; ++k) {
      const Complex want = (k >= 3 && k < 23) ? s[k - 3] : Complex(0.0);
      CHECK(std::abs(d[k] - want) < 1e-12);
    }
  }

  TEST_CASE("half-sample delay of a slow tone") {
    const int k_len = 256;
    ComplexVector s(k_len);
    for (int k = 0; k < k_len; ++k) s[k] = std::polar(1.0, 2.0 * oracle::pi * 0.03 * k);
    const auto d = fractional_delay(s, 0.5, k_len);
    for (int k = 64; k < 192; ++k) CHECK(std::abs(d[k] - std::polar(1.0, 2.0 * oracle::pi * 0.03 * (k - 0.5))) < 2e-2);
  }

  TEST_CASE("imaging echo of one scatterer against the direct model") {
    RadarGeometry g;
    g.tx = {Point2(0, 0), Point2(0, 0)};
    g.rx = {Point2(0, 0)};
    const auto set = generate_zero_shift_set(64, 2, 3);
    const int bins = 5;
    const double range = bins * kSpeedOfLight / (2.0 * g.bandwidth);
    SceneModel scene;
    scene.scatterers.push_back({Point2(0, range), Complex(0.3, -0.4)});
    ImagingChannelOptions opt;
    opt.lag_count = 8;
    const auto rx = imaging_receive(set, g, scene, opt);
    REQUIRE(rx.rx.size() == 1);
    REQUIRE(rx.rx[0].size() == 72);
    const double tau = 2.0 * range / kSpeedOfLight;
    const Complex alpha = Complex(0.3, -0.4) / (range * range) * std::polar(1.0, -2.0 * oracle::pi * g.carrier_frequency * tau);
    for (int k = 0; k < 72; ++k) {
      Complex want = 0.0;
      for (int n = 0; n < 2; ++n)
        if (k - bins >= 0 && k - bins < 64) want += alpha * set.waveforms[n][k - bins];
      CHECK(std::abs(rx.rx[0][k] - want) < 1e-9 * std::abs(alpha));
    }
  }

  TEST_CASE("raster scene keeps nonzero cells") {
    RasterScene r;
    r.rows = 2;
    r.cols = 3;
    r.values = {0, 1, 0, 0.5, 0, 0};
    const auto plain = scene_from_raster(r, false, 0);
    REQUIRE(plain.scatterers.size() == 2);
    CHECK(plain.scatterers[0].reflectivity == Complex(1.0, 0.0));
    CHECK(plain.scatterers[0].position.isApprox(r.cell_center(0, 1)));
    const auto speckled = scene_from_raster(r, true, 4);
    CHECK(std::abs(speckled.scatterers[1].reflectivity) == doctest::Approx(0.5));
  }

  TEST_CASE("scatterers past the window are reported") {
    const auto g = RadarGeometry::uniform_virtual_array(1, 1);
    SceneModel scene;
    scene.scatterers.push_back({Point2(0, 30.0), Complex(1, 0)});
    CHECK_FALSE(scene_range_warnings(scene, g, 20.0).empty());
    CHECK(scene_range_warnings(scene, g, 100.0).empty());
  }
}
