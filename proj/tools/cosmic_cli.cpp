// cosmic: command-line front end of the toolkit.
//
// Exit codes: 0 success, 2 the configuration or arguments were rejected,
// 3 the run failed (I/O, decoding, numerics).

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cosmic/error.hpp"
#include "cosmic/io.hpp"
#include "cosmic/pipeline.hpp"
#include "cosmic/receivers.hpp"
#include "cosmic/scenario.hpp"

namespace fs = std::filesystem;
using namespace cosmic;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Common& c, bool needs_out) {
  cmd->add_option("--config", c.config, "scenario JSON or run manifest")->required()->check(CLI::ExistingFile);
  auto* out = cmd->add_option("--out", c.out, "output directory");
  if (needs_out) out->required();
  cmd->add_option("--seed", c.seed, "overrides the top-level seed");
}

ScenarioConfig load(const Common& c, bool cross_checks = true) {
  auto config = load_scenario(c.config, cross_checks);
  if (c.seed) config.seed = *c.seed;
  return config;
}

void print_warnings(const fs::path& out_dir) {
  const auto manifest = nlohmann::json::parse(io::read_text(out_dir / "manifest.json"));
  for (const auto& w : manifest.value("warnings", nlohmann::json::array()))
    std::cerr << "warning: " << w.get<std::string>() << "\n";
}

int run_stage(const Common& c, Stage stage) {
  const auto config = load(c);
  const auto artifacts = run_scenario(config, c.out, stage);
  print_warnings(c.out);
  std::cout << to_string(stage) << ": " << artifacts.size() << " artifacts in " << c.out
            << " (config " << config_hash(config) << ")\n";
  return 0;
}

int run_check(const Common& c) {
  const auto config = load(c, false);
  int status = 0;
  if (config.waveform.family == WaveformFamily::Cosmic) {
    const auto report = feasibility_check(cosmic_config(config));
    std::cout << report.to_json() << "\n";
    if (!report.feasible) status = kExitValidation;
  }
  const auto problems = validate_scenario(config);
  for (const auto& p : problems) std::cerr << "invalid: " << p << "\n";
  if (!problems.empty()) status = kExitValidation;
  if (!c.out.empty()) {
    fs::create_directories(c.out);
    io::atomic_write(fs::path(c.out) / "manifest.json", manifest_json(config, "check", {}, problems));
  }
  if (status == 0) std::cerr << "ok: " << config.name << " (config " << config_hash(config) << ")\n";
  return status;
}

// Decodes received.csv from an earlier `simulate` run instead of
// re-simulating. Scored when bits.csv is present.
int run_decode_input(const Common& c, const fs::path& in) {
  const auto config = load(c);
  const auto set = io::read_waveform_set(in / "waveforms");
  const auto rx = io::raw_from_csv(io::read_text(in / "received.csv"));
  if (rx.size() != 1) throw IoError("received.csv: expected one receiver, got " + std::to_string(rx.size()));

  const auto& cc = config.comm;
  const Complex h = pathloss_gain(cc.antenna_gain, kSpeedOfLight / config.geometry.carrier_frequency,
                                  cc.distance, cc.pathloss);
  DecodeOptions opt;
  opt.gain_mode = cc.gain_estimation;
  opt.known_gains = std::vector<Complex>(set.antenna_count(), h);
  const auto decoded = comm_decode(rx.front(), set.meta, opt);

  fs::create_directories(c.out);
  const fs::path out(c.out);
  std::vector<std::string> artifacts;
  std::vector<SymbolFrame> decided;
  for (const auto& d : decoded) decided.push_back(d.decided);
  io::atomic_write(out / "decoded_bits.csv", io::bits_to_csv(decided));
  artifacts.push_back("decoded_bits.csv");

  if (fs::exists(in / "bits.csv")) {
    const auto bits = io::bits_from_csv(io::read_text(in / "bits.csv"));
    std::vector<SymbolFrame> sent;
    for (auto& b : bits) sent.push_back(make_frame(b, set.meta.constellation));
    const auto report = score_decode(decoded, sent, nominal_slots(set.meta));
    io::atomic_write(out / "decode.json", report.to_json() + "\n");
    artifacts.push_back("decode.json");
    std::cout << "ser " << report.ser() << " ber " << report.ber() << " eta " << report.eta() << "\n";
  }
  io::atomic_write(out / "manifest.json", manifest_json(config, "decode", artifacts, {}));
  return 0;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto token = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != token.size()) throw ValidationError({"--values: bad number '" + token + "'"});
    values.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"COSMIC waveform toolkit"};
  app.set_version_flag("--version", std::string(toolkit_version()));
  app.require_subcommand(1);

  Common common;
  std::string input, axis, values;

  auto* generate = app.add_subcommand("generate", "waveforms, bits and the feasibility budget");
  auto* check = app.add_subcommand("check", "validate a config and print the feasibility report");
  auto* simulate = app.add_subcommand("simulate", "waveforms through the radar and comm channels");
  auto* image = app.add_subcommand("image", "range compression and back-projection");
  auto* decode = app.add_subcommand("decode", "communication receiver");
  auto* metrics = app.add_subcommand("metrics", "full run plus metrics.json/csv");
  auto* sweep = app.add_subcommand("sweep", "metrics over one axis");

  for (auto* cmd : {generate, simulate, image, decode, metrics, sweep}) add_common(cmd, common, true);
  add_common(check, common, false);
  decode->add_option("--input", input, "decode received.csv of an earlier simulate run")
      ->check(CLI::ExistingDirectory);
  sweep->add_option("--axis", axis, "antennas, snr_db, zone_length, distance or seed");
  sweep->add_option("--values", values, "comma-separated axis values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }

  try {
    if (*check) return run_check(common);
    if (*generate) return run_stage(common, Stage::Generate);
    if (*simulate) return run_stage(common, Stage::Simulate);
    if (*image) return run_stage(common, Stage::Image);
    if (*decode) return input.empty() ? run_stage(common, Stage::Decode) : run_decode_input(common, input);
    if (*metrics) {
      const int rc = run_stage(common, Stage::Metrics);
      std::cout << io::read_text(fs::path(common.out) / "metrics.json");
      return rc;
    }
    if (*sweep) {
      const auto config = load(common);
      std::optional<std::string> ax;
      std::optional<std::vector<double>> vals;
      if (!axis.empty()) ax = axis;
      if (!values.empty()) vals = parse_values(values);
      if (!config.sweep && (!ax || !vals))
        throw ValidationError({"sweep needs a sweep section or both --axis and --values"});
      if (ax && !is_sweep_axis(*ax)) throw ValidationError({"--axis: unknown axis '" + *ax + "'"});
      const auto result = run_sweep_to_dir(config, common.out, ax, vals);
      int failed = 0;
      for (const auto& row : result.rows) {
        if (!row.ok) {
          ++failed;
          std::cerr << "point " << row.value << " (" << to_string(row.family) << "): " << row.error << "\n";
        }
      }
      std::cout << "sweep " << result.axis << ": " << result.rows.size() << " points, " << failed
                << " failed, results in " << common.out << "\n";
      return failed == 0 ? 0 : kExitRuntime;
    }
  } catch (const ValidationError& e) {
    std::cerr << "invalid configuration:\n";
    for (const auto& p : e.problems()) std::cerr << "  " << p << "\n";
    return kExitValidation;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
