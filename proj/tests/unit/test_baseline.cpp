#include <doctest.h>

#include <set>

#include "cosmic/baseline.hpp"
#include "cosmic/error.hpp"
#include "oracles.hpp"

using namespace cosmic;

TEST_SUITE("baseline") {
  TEST_CASE("OFDM plans are disjoint and floor(K/N) wide") {
    for (auto a : {SubcarrierAllocation::Contiguous, SubcarrierAllocation::Interleaved}) {
      const auto plan = plan_ofdm(50, 3, a);
      CHECK(plan.antennas() == 3);
      CHECK(plan.per_antenna() == 16);
      std::set<int> seen;
      for (const auto& bins : plan.subcarriers)
        for (int b : bins) CHECK(seen.insert(b).second);
    }
    CHECK(allocation_from_string(to_string(SubcarrierAllocation::Interleaved)) ==
          SubcarrierAllocation::Interleaved);
  }

  TEST_CASE("contiguous blocks are adjacent in frequency") {
    const auto plan = plan_ofdm(16, 2, SubcarrierAllocation::Contiguous);
    // ranked from -B/2 upwards: bins 8..15 are the negative frequencies
    CHECK(plan.subcarriers[0] == std::vector<int>{8, 9, 10, 11, 12, 13, 14, 15});
    CHECK(plan.subcarriers[1] == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
    const auto comb = plan_ofdm(8, 2, SubcarrierAllocation::Interleaved);
    CHECK(comb.subcarriers[0] == std::vector<int>{4, 6, 0, 2});
  }

  TEST_CASE("OFDM waveform is the IDFT of its symbols") {
    const auto plan = plan_ofdm(32, 4, SubcarrierAllocation::Interleaved);
    const auto set = generate_ofdm_set(plan, Constellation::Qpsk, 6);
    REQUIRE(set.antenna_count() == 4);
    for (int n = 0; n < 4; ++n) {
      CHECK(set.waveforms[n].norm() == doctest::Approx(1.0).epsilon(1e-12));
      const auto spec = oracle::dft(set.waveforms[n]);
      std::set<int> own(plan.subcarriers[n].begin(), plan.subcarriers[n].end());
      for (int f = 0; f < 32; ++f) {
        if (!own.count(f)) CHECK(std::abs(spec[f]) < 1e-12);
        else CHECK(std::abs(spec[f]) == doctest::Approx(1.0 / std::sqrt(8.0)).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("OFDM cross-correlation: zero circularly, not aperiodically") {
    const auto plan = plan_ofdm(64, 2, SubcarrierAllocation::Contiguous);
    const auto set = generate_ofdm_set(plan, Constellation::Qam16, 2);
    double aperiodic = 0.0;
    for (int l = -63; l <= 63; ++l) {
      CHECK(std::abs(circular_cross_correlation(set.waveforms[0], set.waveforms[1], l)) < 1e-12);
      aperiodic = std::max(aperiodic, std::abs(oracle::xcorr(set.waveforms[0], set.waveforms[1], l)));
    }
    CHECK(std::abs(oracle::xcorr(set.waveforms[0], set.waveforms[1], 0)) < 1e-12);
    CHECK(aperiodic > 1e-3);
  }

  TEST_CASE("circular correlation against the direct sum") {
    const auto s = oracle::random_vector(13, 1);
    const auto x = oracle::random_vector(13, 2);
    for (int l = -15; l <= 15; ++l)
      CHECK(std::abs(circular_cross_correlation(s, x, l) - oracle::circular_xcorr(s, x, l)) < 1e-12);
  }

  TEST_CASE("oversized OFDM frames are rejected") {
    const auto plan = plan_ofdm(16, 2, SubcarrierAllocation::Contiguous);
    std::vector<SymbolFrame> frames(2, random_frame(9, Constellation::Qpsk, 1));
    CHECK_THROWS_AS(generate_ofdm_set(plan, frames), ParameterError);
  }

  TEST_CASE("zero-shift set is orthonormal at lag 0 only") {
    const auto set = generate_zero_shift_set(64, 4, 8);
    CHECK(set.total_symbols() == 0);
    double off_zero = 0.0;
    for (int i = 0; i < 4; ++i) {
      CHECK(set.waveforms[i].norm() == doctest::Approx(1.0).epsilon(1e-12));
      for (int j = 0; j < 4; ++j) {
        if (i == j) continue;
        CHECK(std::abs(oracle::xcorr(set.waveforms[i], set.waveforms[j], 0)) < 1e-12);
        off_zero = std::max(off_zero, std::abs(oracle::xcorr(set.waveforms[i], set.waveforms[j], 1)));
      }
    }
    CHECK(off_zero > 1e-3);
    CHECK_THROWS_AS(generate_zero_shift_set(4, 5, 1), ParameterError);
  }
}
