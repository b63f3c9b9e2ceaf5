#include <doctest.h>

#include <bit>

#include "cosmic/error.hpp"
#include "cosmic/modulation.hpp"

using namespace cosmic;

namespace {

int label_distance(int a, int b) { return std::popcount(static_cast<unsigned>(a ^ b)); }

}  // namespace

TEST_SUITE("modulation") {
  TEST_CASE("constellation labels") {
    const auto q = constellation_points(Constellation::Qpsk);
    REQUIRE(q.size() == 4);
    const double r2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(q[0] - Complex(r2, r2)) < 1e-15);
    CHECK(std::abs(q[1] - Complex(r2, -r2)) < 1e-15);
    CHECK(std::abs(q[2] - Complex(-r2, r2)) < 1e-15);
    CHECK(std::abs(q[3] - Complex(-r2, -r2)) < 1e-15);

    const auto m = constellation_points(Constellation::Qam16);
    REQUIRE(m.size() == 16);
    const double s = 1.0 / std::sqrt(10.0);
    CHECK(std::abs(m[0b0000] - Complex(-3 * s, -3 * s)) < 1e-15);
    CHECK(std::abs(m[0b0111] - Complex(-1 * s, 1 * s)) < 1e-15);
    CHECK(std::abs(m[0b1010] - Complex(3 * s, 3 * s)) < 1e-15);
  }

  TEST_CASE("unit average energy") {
    for (auto c : {Constellation::Qpsk, Constellation::Qam16}) {
      double e = 0.0;
      for (auto p : constellation_points(c)) e += std::norm(p);
      CHECK(e / constellation_points(c).size() == doctest::Approx(1.0).epsilon(1e-14));
    }
  }

  TEST_CASE("Gray labelling: nearest neighbours differ in one bit") {
    for (auto c : {Constellation::Qpsk, Constellation::Qam16}) {
      const auto pts = constellation_points(c);
      double dmin = 1e9;
      for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a + 1; b < pts.size(); ++b) dmin = std::min(dmin, std::abs(pts[a] - pts[b]));
      for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a + 1; b < pts.size(); ++b)
          if (std::abs(pts[a] - pts[b]) < dmin * 1.01) CHECK(label_distance(int(a), int(b)) == 1);
    }
  }

  TEST_CASE("map and demap round trip") {
    for (auto c : {Constellation::Qpsk, Constellation::Qam16}) {
      const auto bits = random_bits(400 * bits_per_symbol(c), 12);
      const auto sym = map_bits_to_symbols(bits, c);
      CHECK(sym.size() == 400);
      CHECK(demap_symbols(sym, c) == bits);
    }
  }

  TEST_CASE("nearest_point equals exhaustive search") {
    const auto pts = constellation_points(Constellation::Qam16);
    for (double re = -1.3; re <= 1.3; re += 0.11) {
      for (double im = -1.3; im <= 1.3; im += 0.13) {
        const Complex z(re, im);
        int best = 0;
        for (int i = 1; i < 16; ++i)
          if (std::abs(z - pts[i]) < std::abs(z - pts[best])) best = i;
        CHECK(nearest_point(z, Constellation::Qam16) == best);
      }
    }
  }

  TEST_CASE("bad bit strings") {
    BitVector odd{1, 0, 1};
    CHECK_THROWS_AS(map_bits_to_symbols(odd, Constellation::Qpsk), ParameterError);
    BitVector two{2, 0};
    CHECK_THROWS_AS(map_bits_to_symbols(two, Constellation::Qpsk), ParameterError);
    CHECK_THROWS_AS(constellation_from_string("64qam"), ParameterError);
  }

  TEST_CASE("random bits and frames are seeded") {
    CHECK(random_bits(64, 3) == random_bits(64, 3));
    CHECK(random_bits(64, 3) != random_bits(64, 4));
    const auto f = random_frame(10, Constellation::Qam16, 8);
    CHECK(f.size() == 10);
    CHECK(f.bits.size() == 40);
  }
}
