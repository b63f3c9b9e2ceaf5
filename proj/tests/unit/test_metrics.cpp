#include <doctest.h>

#include "cosmic/error.hpp"
#include "cosmic/metrics.hpp"

using namespace cosmic;

TEST_SUITE("metrics") {
  TEST_CASE("ratio_to_db clamps") {
    CHECK(ratio_to_db(100.0) == doctest::Approx(20.0));
    CHECK(ratio_to_db(0.0) == -kDbClamp);
    CHECK(ratio_to_db(std::numeric_limits<double>::infinity()) == kDbClamp);
  }

  TEST_CASE("ISLR of a hand-made profile") {
    const std::vector<double> p{0, 1, 10, 1, 0, 2};
    const std::vector<int> peak{2};
    CHECK(islr_db(p, 1, peak) == doctest::Approx(10.0 * std::log10(4.0 / 102.0)));
    // overlapping mainlobes are counted once
    const std::vector<int> two{2, 3};
    CHECK(islr_db(p, 1, two) == doctest::Approx(10.0 * std::log10(4.0 / 102.0)));
    const std::vector<int> apart{2, 5};
    CHECK(islr_db(p, 1, apart) == -kDbClamp);
    const std::vector<int> none;
    CHECK_THROWS_AS(islr_db(p, 1, none), ParameterError);
    CHECK_THROWS_AS(islr_db(p, 0, peak), ParameterError);
    const std::vector<int> outside{6};
    CHECK_THROWS_AS(islr_db(p, 1, outside), ParameterError);
  }

  TEST_CASE("strongest peaks") {
    const std::vector<double> p{0, 5, 1, 0, 3, 4, 0, 9};
    CHECK(strongest_peaks(p, 2, 1) == std::vector<int>{1, 7});
    CHECK(strongest_peaks(p, 3, 2) == std::vector<int>{1, 5, 7});
    CHECK(strongest_peaks(p, 3, 3) == std::vector<int>{1, 7});
  }

  TEST_CASE("region mask guard is Euclidean") {
    RasterScene r;
    r.rows = 5;
    r.cols = 5;
    r.spacing_x = r.spacing_y = 1.0;
    r.values.assign(25, 0.0);
    r.values[12] = 1.0;  // center
    r.noise_guard = 1.0;
    const auto m = build_region_mask(r);
    CHECK(m.at(2, 2) == Region::Signal);
    CHECK(m.at(2, 3) == Region::Ignore);
    CHECK(m.at(3, 3) == Region::Noise);  // sqrt(2) > 1
    CHECK(m.count(Region::Signal) == 1);
    CHECK(m.count(Region::Ignore) == 4);
    CHECK(m.count(Region::Noise) == 20);
  }

  TEST_CASE("image SNR sums region energies") {
    RasterScene r;
    r.rows = 1;
    r.cols = 3;
    r.values = {1, 0, 0};
    RadarImage img;
    img.pixels.resize(1, 3);
    img.pixels << Complex(3, 0), Complex(0, 1), Complex(1, 0);
    CHECK(image_snr_db(img, build_region_mask(r)) == doctest::Approx(10.0 * std::log10(9.0 / 2.0)));
    RadarImage wrong;
    wrong.pixels.resize(2, 2);
    CHECK_THROWS_AS(image_snr_db(wrong, build_region_mask(r)), ParameterError);
  }

  TEST_CASE("spectral efficiency") {
    const std::vector<double> g{1.0, 1.0};
    const std::vector<double> p{1.0, 3.0};
    // log2(2) + log2(4)
    CHECK(spectral_efficiency(g, p, 1.0, 1.0, 1.0, 1.0) == doctest::Approx(3.0));
    // beta = 1/2: 0.5 * (log2(3) + log2(7))
    CHECK(spectral_efficiency(g, p, 1.0, 1.0, 0.5, 1.0) ==
          doctest::Approx(0.5 * (std::log2(3.0) + std::log2(7.0))));
    CHECK(spectral_efficiency_from_snr(4, 10.0, 1.0, 0.5) == doctest::Approx(2.0 * std::log2(11.0)));
    CHECK_THROWS_AS(spectral_efficiency(g, p, 1.0, 1.0, 0.0, 1.0), ParameterError);
    CHECK_THROWS_AS(spectral_efficiency(g, p, 1.0, 1.0, 1.0, 1.5), ParameterError);
    CHECK_THROWS_AS(spectral_efficiency(g, p, 0.0, 1.0, 1.0, 1.0), ParameterError);
    const std::vector<double> short_p{1.0};
    CHECK_THROWS_AS(spectral_efficiency(g, short_p, 1.0, 1.0, 1.0, 1.0), ParameterError);
  }

  TEST_CASE("capacity sweep: ranks and OFDM ISLR trend") {
    CapacitySweepConfig c;
    c.length = 256;
    c.zone_length = 8;
    c.antennas = {1, 2, 4};
    c.trials = 2;
    c.lag_count = 15;
    c.target_bin = 7;
    const auto rows = symbol_capacity_vs_n(c);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].cosmic_symbols == 256);
    CHECK(rows[1].cosmic_symbols == 128 + 128 - 14);
    CHECK(rows[2].cosmic_predicted == 4 * 64 - 14 * 6);
    CHECK(rows[2].cosmic_symbols == rows[2].cosmic_predicted);
    CHECK(rows[0].ofdm_islr_db < rows[1].ofdm_islr_db);
    CHECK(rows[1].ofdm_islr_db < rows[2].ofdm_islr_db);
  }

  TEST_CASE("metrics report columns") {
    MetricsReport r;
    r.family = "cosmic";
    r.islr_db = -3.5;
    r.extras.emplace_back("antennas", 4);
    const auto cols = MetricsReport::csv_columns();
    const auto vals = r.csv_values();
    CHECK(vals.size() == cols.size() + 1);
    CHECK(vals[2] == "-3.5");
    CHECK(vals[3].empty());
    CHECK(r.to_json().find("\"antennas\": 4") != std::string::npos);
  }
}
