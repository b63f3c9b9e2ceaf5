#include <doctest.h>

#include "cosmic/error.hpp"
#include "cosmic/scenario.hpp"

using namespace cosmic;

namespace {

std::vector<std::string> problems_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ValidationError& e) {
    return e.problems();
  }
  return {};
}

bool mentions(const std::vector<std::string>& problems, const std::string& what) {
  for (const auto& p : problems)
    if (p.find(what) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_SUITE("scenario") {
  TEST_CASE("defaults") {
    const auto c = parse_scenario("{}");
    CHECK(c.waveform.family == WaveformFamily::Cosmic);
    CHECK(c.waveform.length == 1024);
    CHECK(c.waveform.resolved_subbasis_size() == 256);
    CHECK(c.seed == 1);
    CHECK_FALSE(c.comm.enabled);
  }

  TEST_CASE("every problem is reported at once") {
    const auto p = problems_of(R"({"waveform": {"K": -4, "mode": "sideways", "colour": 1}, "bogus": true})");
    CHECK(p.size() >= 4);
    CHECK(mentions(p, "bogus"));
    CHECK(mentions(p, "colour"));
    CHECK(mentions(p, "sideways"));
    CHECK(mentions(p, "K"));
  }

  TEST_CASE("malformed JSON is a validation error") {
    CHECK_THROWS_AS(parse_scenario("{\"waveform\": "), ValidationError);
    CHECK_THROWS_AS(parse_scenario("[1, 2]"), ValidationError);
  }

  TEST_CASE("infeasible COSMIC budgets are rejected unless cross checks are off") {
    const std::string text =
        R"({"waveform": {"K": 3000, "N": 12, "K_s": 250, "K_z": 67}})";
    const auto p = problems_of(text);
    CHECK(mentions(p, "infeasible"));
    const auto c = parse_scenario(text, {}, false);
    CHECK(c.waveform.antennas == 12);
    CHECK_FALSE(validate_scenario(c).empty());
  }

  TEST_CASE("custom geometry counts must match") {
    const auto p = problems_of(
        R"({"waveform": {"N": 2}, "geometry": {"M": 1, "layout": "custom", "tx": [[0, 0]], "rx": [[0, 0]]}})");
    CHECK(mentions(p, "tx"));
  }

  TEST_CASE("config hash ignores formatting, key order and the name") {
    const auto a = parse_scenario(R"({"name": "a", "seed": 3, "waveform": {"K": 512, "N": 2}})");
    const auto b = parse_scenario("{\n  \"waveform\": {\"N\": 2, \"K\": 512},\n  \"seed\": 3, \"name\": \"b\"\n}");
    const auto c = parse_scenario(R"({"seed": 4, "waveform": {"K": 512, "N": 2}})");
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a) != config_hash(c));
    CHECK(config_hash(a).size() == 16);
  }

  TEST_CASE("round trip through scenario_to_json") {
    const auto a = parse_scenario(R"({"seed": 9, "waveform": {"K": 256, "N": 2, "mode": "symmetric"},
                                      "comm": {"enabled": true, "snr_db": 12.5}})");
    const auto b = parse_scenario(scenario_to_json(a));
    CHECK(config_hash(a) == config_hash(b));
    CHECK(b.comm.snr_db == 12.5);
  }

  TEST_CASE("seeds derive from the top-level seed unless given") {
    const auto a = parse_scenario(R"({"seed": 5})");
    const auto b = parse_scenario(R"({"seed": 6})");
    const auto sa = resolve_seeds(a);
    CHECK(sa.waveform != resolve_seeds(b).waveform);
    CHECK(sa.waveform != sa.bits);
    const auto c = parse_scenario(R"({"seed": 5, "waveform": {"seed": 77}})");
    CHECK(resolve_seeds(c).waveform == 77);
    CHECK(resolve_seeds(c).bits == sa.bits);
  }

  TEST_CASE("sweep axes") {
    const auto c = parse_scenario(R"({"waveform": {"K": 256, "N": 2}})");
    CHECK(apply_axis(c, "antennas", 4).waveform.antennas == 4);
    CHECK(apply_axis(c, "snr_db", 7).comm.snr_db == 7.0);
    CHECK(apply_axis(c, "zone_length", 3).waveform.zone_length == 3);
    CHECK(is_sweep_axis("distance"));
    CHECK_FALSE(is_sweep_axis("colour"));
    CHECK_THROWS_AS(apply_axis(c, "colour", 1), ParameterError);
  }

  TEST_CASE("fnv1a reference values") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  }
}
