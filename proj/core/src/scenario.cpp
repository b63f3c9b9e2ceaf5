#include "cosmic/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <set>

#include <json.hpp>

#include "cosmic/error.hpp"
#include "cosmic/io.hpp"
#include "cosmic/random.hpp"

namespace cosmic {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
  std::string s = "invalid scenario (" + std::to_string(problems.size()) + " problem" +
                  (problems.size() == 1 ? "" : "s") + ")";
  for (const auto& p : problems) s += "\n  - " + p;
  return s;
}

}  // namespace

}  // namespace cosmic

cosmic::ValidationError::ValidationError(std::vector<std::string> problems)
    : Error(join_problems(problems)), problems_(std::move(problems)) {}

namespace cosmic {

namespace {

// Reads one JSON object, recording problems instead of throwing so that a
// single pass reports everything wrong with a config.
class Section {
 public:
  Section(const json* node, std::string path, std::vector<std::string>& problems)
      : node_(node), path_(std::move(path)), problems_(problems) {
    if (node_ && !node_->is_object()) {
      problem("", "must be an object");
      node_ = nullptr;
    }
  }

  bool present() const { return node_ != nullptr; }

  const json* child(const std::string& key) {
    seen_.insert(key);
    if (!node_) return nullptr;
    auto it = node_->find(key);
    return it == node_->end() ? nullptr : &*it;
  }

  Section object(const std::string& key) { return Section(child(key), name(key), problems_); }

  void problem(const std::string& key, const std::string& what) {
    problems_.push_back((key.empty() ? path_ : name(key)) + ": " + what);
  }

  std::string name(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  template <class T>
  void number(const std::string& key, T& out, double lo, double hi) {
    const json* v = child(key);
    if (!v) return;
    if (!v->is_number()) return problem(key, "must be a number");
    if constexpr (std::is_integral_v<T>) {
      if (!v->is_number_integer() && !v->is_number_unsigned()) {
        return problem(key, "must be an integer");
      }
    }
    const double d = v->get<double>();
    if (!std::isfinite(d) || d < lo || d > hi) {
      return problem(key, "must lie in [" + fmt(lo) + ", " + fmt(hi) + "], got " + fmt(d));
    }
    if constexpr (std::is_same_v<T, std::uint64_t>) {
      out = v->get<std::uint64_t>();
    } else {
      out = v->get<T>();
    }
  }

  template <class T>
  void optional_number(const std::string& key, std::optional<T>& out, double lo, double hi) {
    if (!child(key)) return;
    T value{};
    const auto before = problems_.size();
    number(key, value, lo, hi);
    if (problems_.size() == before) out = value;
  }

  void seed(const std::string& key, std::optional<std::uint64_t>& out) {
    const json* v = child(key);
    if (!v) return;
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0)) {
      return problem(key, "must be a non-negative integer");
    }
    out = v->get<std::uint64_t>();
  }

  void boolean(const std::string& key, bool& out) {
    const json* v = child(key);
    if (!v) return;
    if (!v->is_boolean()) return problem(key, "must be true or false");
    out = v->get<bool>();
  }

  void string(const std::string& key, std::string& out) {
    const json* v = child(key);
    if (!v) return;
    if (!v->is_string()) return problem(key, "must be a string");
    out = v->get<std::string>();
  }

  template <class E>
  void enumeration(const std::string& key, E& out, const std::function<E(std::string_view)>& parse) {
    const json* v = child(key);
    if (!v) return;
    if (!v->is_string()) return problem(key, "must be a string");
    try {
      out = parse(v->get<std::string>());
    } catch (const ParameterError& e) {
      problem(key, e.what());
    }
  }

  void numbers(const std::string& key, std::vector<double>& out, std::size_t min_count,
               std::size_t max_count) {
    const json* v = child(key);
    if (!v) return;
    if (!v->is_array()) return problem(key, "must be an array of numbers");
    std::vector<double> tmp;
    for (const auto& e : *v) {
      if (!e.is_number() || !std::isfinite(e.get<double>())) {
        return problem(key, "must be an array of finite numbers");
      }
      tmp.push_back(e.get<double>());
    }
    if (tmp.size() < min_count || tmp.size() > max_count) {
      return problem(key, "needs " + (min_count == max_count
                                          ? std::to_string(min_count)
                                          : "between " + std::to_string(min_count) + " and " +
                                                std::to_string(max_count)) +
                              " values");
    }
    out = std::move(tmp);
  }

  void points(const std::string& key, std::vector<Point2>& out) {
    const json* v = child(key);
    if (!v) return;
    if (!v->is_array()) return problem(key, "must be an array of [x, y] pairs");
    for (const auto& e : *v) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        return problem(key, "must be an array of [x, y] pairs");
      }
      out.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
  }

  /// Call after all reads: any key not consumed is rejected.
  void reject_unknown() {
    if (!node_) return;
    for (auto it = node_->begin(); it != node_->end(); ++it) {
      if (!seen_.count(it.key())) problem(it.key(), "unknown key");
    }
  }

  static std::string fmt(double d) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", d);
    return buf;
  }

 private:
  const json* node_;
  std::string path_;
  std::vector<std::string>& problems_;
  std::set<std::string> seen_;
};

constexpr double kBig = 1e300;

template <class E>
std::function<E(std::string_view)> parser(E (*fn)(std::string_view)) {
  return fn;
}

ArrayLayout layout_from_string(std::string_view s) {
  if (s == "uniform") return ArrayLayout::Uniform;
  if (s == "colocated") return ArrayLayout::Colocated;
  if (s == "custom") return ArrayLayout::Custom;
  throw ParameterError("unknown layout '" + std::string(s) + "' (uniform, colocated, custom)");
}

std::string_view to_string(ArrayLayout l) {
  switch (l) {
    case ArrayLayout::Colocated: return "colocated";
    case ArrayLayout::Custom: return "custom";
    default: return "uniform";
  }
}

SceneKind scene_kind_from_string(std::string_view s) {
  if (s == "none") return SceneKind::None;
  if (s == "points") return SceneKind::Points;
  if (s == "raster") return SceneKind::Raster;
  if (s == "targets") return SceneKind::Targets;
  throw ParameterError("unknown scene type '" + std::string(s) + "' (none, points, raster, targets)");
}

std::string_view to_string(SceneKind k) {
  switch (k) {
    case SceneKind::Points: return "points";
    case SceneKind::Raster: return "raster";
    case SceneKind::Targets: return "targets";
    default: return "none";
  }
}

GainEstimation gain_mode_from_string(std::string_view s) {
  if (s == "genie") return GainEstimation::Genie;
  if (s == "pilot") return GainEstimation::Pilot;
  throw ParameterError("unknown gain estimation '" + std::string(s) + "' (genie, pilot)");
}

CubeFormat cube_format_from_string(std::string_view s) {
  if (s == "csv") return CubeFormat::Csv;
  if (s == "binary") return CubeFormat::Binary;
  throw ParameterError("unknown cube format '" + std::string(s) + "' (csv, binary)");
}

void parse_waveform(Section s, WaveformSection& w) {
  s.enumeration<WaveformFamily>("family", w.family, parser(&waveform_family_from_string));
  s.number("K", w.length, 1, 1 << 16);
  s.number("N", w.antennas, 1, 1024);
  if (const json* ks = s.child("K_s"); ks && !(ks->is_string() && *ks == "auto")) {
    if (!ks->is_number_integer() || ks->get<long long>() < 1) {
      s.problem("K_s", "must be a positive integer or \"auto\"");
    } else {
      w.subbasis_size = ks->get<int>();
    }
  }
  s.number("K_z", w.zone_length, 1, 1 << 16);
  s.enumeration<ZoneMode>("mode", w.mode, parser(&zone_mode_from_string));
  s.enumeration<BasisFamily>("basis", w.basis, parser(&basis_family_from_string));
  s.enumeration<PartitionStrategy>("partition", w.partition, parser(&partition_from_string));
  s.seed("seed", w.seed);
  s.seed("bit_seed", w.bit_seed);
  s.number("rel_tol", w.rel_tol, 1e-300, 0.999999);
  s.enumeration<Constellation>("constellation", w.constellation,
                               parser(&constellation_from_string));
  s.enumeration<SubcarrierAllocation>("ofdm_allocation", w.ofdm_allocation,
                                      parser(&allocation_from_string));
  s.reject_unknown();
}

void parse_geometry(Section s, GeometrySection& g) {
  s.number("f0", g.carrier_frequency, 1.0, kBig);
  s.number("B", g.bandwidth, 1.0, kBig);
  s.number("M", g.rx_count, 1, 1024);
  s.enumeration<ArrayLayout>("layout", g.layout, parser(&layout_from_string));
  s.points("tx", g.tx);
  s.points("rx", g.rx);
  s.reject_unknown();
}

void parse_scene(Section s, SceneSection& sc) {
  s.enumeration<SceneKind>("type", sc.kind, parser(&scene_kind_from_string));
  if (const json* pts = s.child("points")) {
    if (!pts->is_array()) {
      s.problem("points", "must be an array of {x, y, re, im} objects");
    } else {
      std::vector<std::string> nested;
      for (std::size_t i = 0; i < pts->size(); ++i) {
        Section p(&(*pts)[i], s.name("points[" + std::to_string(i) + "]"), nested);
        PointScatterer t{Point2::Zero(), Complex(1.0, 0.0)};
        double x = 0, y = 0, re = 1, im = 0;
        p.number("x", x, -kBig, kBig);
        p.number("y", y, -kBig, kBig);
        p.number("re", re, -kBig, kBig);
        p.number("im", im, -kBig, kBig);
        if (!p.child("x") || !p.child("y")) p.problem("", "needs x and y");
        p.reject_unknown();
        t.position = Point2(x, y);
        t.reflectivity = Complex(re, im);
        sc.points.push_back(t);
      }
      for (auto& n : nested) s.problem("points", n);
    }
  }
  std::string mask, sidecar;
  s.string("mask", mask);
  s.string("sidecar", sidecar);
  sc.mask = mask;
  sc.sidecar = sidecar;
  s.boolean("speckle", sc.speckle);
  s.seed("speckle_seed", sc.speckle_seed);
  s.number("amplitude", sc.amplitude, 0.0, kBig);
  s.boolean("range_compensation", sc.range_compensation);
  s.numbers("strong_bins", sc.strong_bins, 0, 1000);
  s.number("strong_amplitude", sc.strong_amplitude, 0.0, kBig);
  s.number("weak_count", sc.weak_count, 0, 1000000);
  std::vector<double> range;
  s.numbers("weak_amplitude", range, 2, 2);
  if (range.size() == 2) {
    sc.weak_amplitude_min = range[0];
    sc.weak_amplitude_max = range[1];
    if (range[0] < 0 || range[1] < range[0]) s.problem("weak_amplitude", "needs 0 <= min <= max");
  }
  range.clear();
  s.numbers("weak_bins", range, 2, 2);
  if (range.size() == 2) {
    sc.weak_bin_min = range[0];
    sc.weak_bin_max = range[1];
    if (range[0] < 0 || range[1] < range[0]) s.problem("weak_bins", "needs 0 <= min <= max");
  }
  s.number("angle_span_deg", sc.angle_span_deg, 0.0, 180.0);
  s.seed("seed", sc.target_seed);
  s.reject_unknown();
}

void parse_imaging(Section s, ImagingSection& im) {
  s.boolean("enabled", im.enabled);
  s.number("lag_count", im.lag_count, 1, 1 << 16);
  s.number("oversampling", im.oversampling, 1, 64);
  s.enumeration<Taper>("range_taper", im.range_taper, parser(&taper_from_string));
  s.enumeration<Taper>("apodization", im.apodization, parser(&taper_from_string));
  Section g = s.object("grid");
  if (g.present()) {
    GridSpec spec;
    std::vector<double> xr, yr;
    g.numbers("x", xr, 2, 2);
    g.numbers("y", yr, 2, 2);
    g.number("spacing", spec.spacing, 1e-9, kBig);
    if (xr.size() == 2 && yr.size() == 2) {
      spec.x_min = xr[0];
      spec.x_max = xr[1];
      spec.y_min = yr[0];
      spec.y_max = yr[1];
      if (xr[1] < xr[0] || yr[1] < yr[0]) g.problem("", "grid ranges need min <= max");
      im.grid = spec;
    } else {
      g.problem("", "needs x and y ranges");
    }
    g.reject_unknown();
  }
  s.number("noise_variance", im.noise_variance, 0.0, kBig);
  s.seed("noise_seed", im.noise_seed);
  s.number("calibration", im.calibration, 0.0, kBig);
  s.number("mainlobe_halfwidth", im.mainlobe_halfwidth, 1, 1 << 16);
  s.number("peak_fraction", im.peak_fraction, 0.0, 1.0);
  s.number("trials", im.trials, 1, 10000);
  s.reject_unknown();
}

void parse_comm(Section s, CommSection& c) {
  s.boolean("enabled", c.enabled);
  s.number("snr_db", c.snr_db, -100.0, 200.0);
  s.optional_number("noise_psd", c.noise_psd, 1e-300, kBig);
  s.number("tx_power", c.tx_power, 1e-300, kBig);
  s.number("distance", c.distance, 1e-300, kBig);
  s.number("antenna_gain", c.antenna_gain, 1e-300, kBig);
  s.enumeration<PathLossModel>("pathloss", c.pathloss, parser(&pathloss_model_from_string));
  s.enumeration<GainEstimation>("gain_estimation", c.gain_estimation,
                                parser(&gain_mode_from_string));
  s.seed("noise_seed", c.noise_seed);
  s.reject_unknown();
}

void parse_metrics(Section s, MetricsSection& m) {
  s.boolean("islr", m.islr);
  s.boolean("image_snr", m.image_snr);
  s.boolean("se", m.se);
  s.boolean("residual", m.residual);
  s.reject_unknown();
}

void parse_sweep(Section s, SweepSection& sw) {
  s.string("axis", sw.axis);
  if (sw.axis.empty()) {
    s.problem("axis", "is required");
  } else if (!is_sweep_axis(sw.axis)) {
    s.problem("axis", "'" + sw.axis + "' is not sweepable (antennas, snr_db, zone_length, distance, seed)");
  }
  s.numbers("values", sw.values, 1, 100000);
  if (sw.values.empty()) s.problem("values", "at least one value is required");
  if (const json* f = s.child("families")) {
    if (!f->is_array()) {
      s.problem("families", "must be an array of family names");
    } else {
      for (const auto& e : *f) {
        try {
          sw.families.push_back(waveform_family_from_string(e.get<std::string>()));
        } catch (const std::exception& ex) {
          s.problem("families", ex.what());
        }
      }
    }
  }
  s.number("workers", sw.workers, 0, 1024);
  s.reject_unknown();
}

void parse_output(Section s, OutputSection& o) {
  s.enumeration<CubeFormat>("cube_format", o.cube_format, parser(&cube_format_from_string));
  s.number("db_floor", o.db_floor, -300.0, -1e-9);
  s.reject_unknown();
}

}  // namespace

SeedPlan resolve_seeds(const ScenarioConfig& c) {
  SeedPlan p;
  p.waveform = c.waveform.seed.value_or(mix_seed(c.seed, 1));
  p.bits = c.waveform.bit_seed.value_or(mix_seed(c.seed, 2));
  p.imaging_noise = c.imaging.noise_seed.value_or(mix_seed(c.seed, 3));
  p.comm_noise = c.comm.noise_seed.value_or(mix_seed(c.seed, 4));
  p.speckle = c.scene.speckle_seed.value_or(mix_seed(c.seed, 5));
  p.targets = c.scene.target_seed.value_or(mix_seed(c.seed, 6));
  return p;
}

ScenarioConfig parse_scenario(const std::string& json_text, const fs::path& base_dir,
                              bool cross_checks) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError({std::string("config is not valid JSON: ") + e.what()});
  }
  std::vector<std::string> problems;
  ScenarioConfig c;
  c.base_dir = base_dir;
  Section top(&root, "", problems);
  if (!top.present()) throw ValidationError(problems);
  top.string("name", c.name);
  {
    std::optional<std::uint64_t> seed;
    top.seed("seed", seed);
    if (seed) c.seed = *seed;
  }
  parse_waveform(top.object("waveform"), c.waveform);
  parse_geometry(top.object("geometry"), c.geometry);
  parse_scene(top.object("scene"), c.scene);
  parse_imaging(top.object("imaging"), c.imaging);
  parse_comm(top.object("comm"), c.comm);
  parse_metrics(top.object("metrics"), c.metrics);
  Section sweep = top.object("sweep");
  if (sweep.present()) {
    c.sweep.emplace();
    parse_sweep(sweep, *c.sweep);
  }
  parse_output(top.object("output"), c.output);
  top.reject_unknown();
  if (problems.empty() && cross_checks) problems = validate_scenario(c);
  if (!problems.empty()) throw ValidationError(problems);
  return c;
}

ScenarioConfig load_scenario(const fs::path& path, bool cross_checks) {
  std::string text;
  try {
    text = io::read_text(path);
  } catch (const IoError& e) {
    throw ValidationError({e.what()});
  }
  // A run manifest embeds its full config; accept it directly.
  const auto root = json::parse(text, nullptr, false);
  if (root.is_object() && root.contains("manifest_version") && root.contains("config")) {
    text = root["config"].dump();
  }
  return parse_scenario(text, path.parent_path(), cross_checks);
}

CosmicConfig cosmic_config(const ScenarioConfig& c) {
  CosmicConfig cc;
  cc.length = c.waveform.length;
  cc.antennas = c.waveform.antennas;
  cc.subbasis_size = c.waveform.resolved_subbasis_size();
  cc.zone_length = c.waveform.zone_length;
  cc.mode = c.waveform.mode;
  cc.basis = c.waveform.basis;
  cc.partition = c.waveform.partition;
  cc.seed = resolve_seeds(c).waveform;
  cc.rel_tol = c.waveform.rel_tol;
  cc.constellation = c.waveform.constellation;
  return cc;
}

std::vector<std::string> validate_scenario(const ScenarioConfig& c) {
  std::vector<std::string> problems;
  const auto& w = c.waveform;
  const int ks = w.resolved_subbasis_size();
  if (ks < 1) problems.push_back("waveform.K_s: floor(K/N) is zero; reduce N or increase K");
  if (w.zone_length > w.length) problems.push_back("waveform.K_z: exceeds K");
  if (w.family == WaveformFamily::Cosmic && ks >= 1) {
    const auto report = feasibility_check(cosmic_config(c));
    if (!report.feasible) {
      for (const auto& note : report.notes) problems.push_back("waveform: infeasible: " + note);
    }
  }
  if (w.basis == BasisFamily::Hadamard && !is_hadamard_order(w.length)) {
    problems.push_back("waveform.basis: hadamard needs K to be a power of two");
  }
  if (w.family == WaveformFamily::ZeroShift && w.antennas > w.length) {
    problems.push_back("waveform.N: zero-shift sets need N <= K");
  }

  const auto& g = c.geometry;
  if (g.layout == ArrayLayout::Custom) {
    if (static_cast<int>(g.tx.size()) != w.antennas) {
      problems.push_back("geometry.tx: custom layout lists " + std::to_string(g.tx.size()) +
                         " positions but N = " + std::to_string(w.antennas));
    }
    if (static_cast<int>(g.rx.size()) != g.rx_count) {
      problems.push_back("geometry.rx: custom layout lists " + std::to_string(g.rx.size()) +
                         " positions but M = " + std::to_string(g.rx_count));
    }
  } else if (!g.tx.empty() || !g.rx.empty()) {
    problems.push_back("geometry: tx/rx positions are only allowed with layout \"custom\"");
  }

  const auto& s = c.scene;
  switch (s.kind) {
    case SceneKind::Points:
      if (s.points.empty()) problems.push_back("scene.points: at least one scatterer required");
      break;
    case SceneKind::Raster:
      for (const auto& [key, p] : {std::pair{"mask", s.mask}, std::pair{"sidecar", s.sidecar}}) {
        if (p.empty()) {
          problems.push_back(std::string("scene.") + key + ": required for raster scenes");
        } else if (!fs::exists(c.base_dir / p)) {
          problems.push_back(std::string("scene.") + key + ": file not found: " +
                             (c.base_dir / p).string());
        }
      }
      break;
    case SceneKind::Targets:
      if (s.strong_bins.empty() && s.weak_count == 0) {
        problems.push_back("scene: targets scene needs strong_bins or weak_count");
      }
      break;
    case SceneKind::None: break;
  }
  if (c.imaging.oversampling < 1) problems.push_back("imaging.oversampling: must be >= 1");
  if (c.sweep && c.sweep->axis == "antennas" && g.layout == ArrayLayout::Custom) {
    problems.push_back("sweep.axis: antennas cannot be swept with a custom array layout");
  }
  return problems;
}

namespace {

json points_json(const std::vector<Point2>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back({p.x(), p.y()});
  return a;
}

json scenario_json(const ScenarioConfig& c, bool canonical) {
  json j;
  j["name"] = c.name;
  j["seed"] = c.seed;
  const auto& w = c.waveform;
  json wj = {{"family", std::string(to_string(w.family))},
             {"K", w.length},
             {"N", w.antennas},
             {"K_z", w.zone_length},
             {"mode", std::string(to_string(w.mode))},
             {"basis", std::string(to_string(w.basis))},
             {"partition", std::string(to_string(w.partition))},
             {"rel_tol", w.rel_tol},
             {"constellation", std::string(to_string(w.constellation))},
             {"ofdm_allocation", std::string(to_string(w.ofdm_allocation))}};
  if (w.subbasis_size) {
    wj["K_s"] = *w.subbasis_size;
  } else {
    wj["K_s"] = "auto";
  }
  if (w.seed) wj["seed"] = *w.seed;
  if (w.bit_seed) wj["bit_seed"] = *w.bit_seed;
  j["waveform"] = wj;

  const auto& g = c.geometry;
  json gj = {{"f0", g.carrier_frequency},
             {"B", g.bandwidth},
             {"M", g.rx_count},
             {"layout", std::string(to_string(g.layout))}};
  if (g.layout == ArrayLayout::Custom) {
    gj["tx"] = points_json(g.tx);
    gj["rx"] = points_json(g.rx);
  }
  j["geometry"] = gj;

  const auto& s = c.scene;
  json sj = {{"type", std::string(to_string(s.kind))}};
  if (s.kind == SceneKind::Points) {
    json pts = json::array();
    for (const auto& p : s.points) {
      pts.push_back({{"x", p.position.x()},
                     {"y", p.position.y()},
                     {"re", p.reflectivity.real()},
                     {"im", p.reflectivity.imag()}});
    }
    sj["points"] = pts;
  } else if (s.kind == SceneKind::Raster) {
    if (canonical) {
      // Content, not location, identifies the scene.
      sj["mask"] = fnv1a_hex(io::read_text(c.base_dir / s.mask));
      sj["sidecar"] = json::parse(io::read_text(c.base_dir / s.sidecar)).dump();
    } else {
      sj["mask"] = s.mask.generic_string();
      sj["sidecar"] = s.sidecar.generic_string();
    }
    sj["speckle"] = s.speckle;
    if (s.speckle_seed) sj["speckle_seed"] = *s.speckle_seed;
    sj["amplitude"] = s.amplitude;
    sj["range_compensation"] = s.range_compensation;
  } else if (s.kind == SceneKind::Targets) {
    sj["strong_bins"] = s.strong_bins;
    sj["strong_amplitude"] = s.strong_amplitude;
    sj["weak_count"] = s.weak_count;
    sj["weak_amplitude"] = {s.weak_amplitude_min, s.weak_amplitude_max};
    sj["weak_bins"] = {s.weak_bin_min, s.weak_bin_max};
    sj["angle_span_deg"] = s.angle_span_deg;
    if (s.target_seed) sj["seed"] = *s.target_seed;
  }
  j["scene"] = sj;

  const auto& im = c.imaging;
  json ij = {{"enabled", im.enabled},
             {"lag_count", im.lag_count},
             {"oversampling", im.oversampling},
             {"range_taper", std::string(to_string(im.range_taper))},
             {"apodization", std::string(to_string(im.apodization))},
             {"noise_variance", im.noise_variance},
             {"calibration", im.calibration},
             {"mainlobe_halfwidth", im.mainlobe_halfwidth},
             {"peak_fraction", im.peak_fraction},
             {"trials", im.trials}};
  if (im.grid) {
    ij["grid"] = {{"x", {im.grid->x_min, im.grid->x_max}},
                  {"y", {im.grid->y_min, im.grid->y_max}},
                  {"spacing", im.grid->spacing}};
  }
  if (im.noise_seed) ij["noise_seed"] = *im.noise_seed;
  j["imaging"] = ij;

  const auto& cm = c.comm;
  json cj = {{"enabled", cm.enabled},
             {"snr_db", cm.snr_db},
             {"tx_power", cm.tx_power},
             {"distance", cm.distance},
             {"antenna_gain", cm.antenna_gain},
             {"pathloss", std::string(to_string(cm.pathloss))},
             {"gain_estimation", cm.gain_estimation == GainEstimation::Pilot ? "pilot" : "genie"}};
  if (cm.noise_psd) cj["noise_psd"] = *cm.noise_psd;
  if (cm.noise_seed) cj["noise_seed"] = *cm.noise_seed;
  j["comm"] = cj;

  j["metrics"] = {{"islr", c.metrics.islr},
                  {"image_snr", c.metrics.image_snr},
                  {"se", c.metrics.se},
                  {"residual", c.metrics.residual}};
  if (c.sweep) {
    json fam = json::array();
    for (auto f : c.sweep->families) fam.push_back(std::string(to_string(f)));
    j["sweep"] = {{"axis", c.sweep->axis}, {"values", c.sweep->values}, {"families", fam}};
    // Worker count does not change results, so it stays out of the hash.
    if (!canonical) j["sweep"]["workers"] = c.sweep->workers;
  }
  j["output"] = {{"cube_format", c.output.cube_format == CubeFormat::Binary ? "binary" : "csv"},
                 {"db_floor", c.output.db_floor}};
  if (canonical) j.erase("name");
  return j;
}

}  // namespace

std::string scenario_to_json(const ScenarioConfig& config) {
  return scenario_json(config, false).dump(2) + "\n";
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const ScenarioConfig& config) {
  return fnv1a_hex(scenario_json(config, true).dump());
}

bool is_sweep_axis(const std::string& axis) {
  return axis == "antennas" || axis == "snr_db" || axis == "zone_length" || axis == "distance" ||
         axis == "seed";
}

ScenarioConfig apply_axis(const ScenarioConfig& config, const std::string& axis, double value) {
  ScenarioConfig c = config;
  auto as_int = [&](double lo) {
    if (value != std::floor(value) || value < lo) {
      throw ParameterError("axis " + axis + " needs integers >= " + Section::fmt(lo) + ", got " +
                           Section::fmt(value));
    }
    return value;
  };
  if (axis == "antennas") {
    c.waveform.antennas = static_cast<int>(as_int(1));
  } else if (axis == "snr_db") {
    c.comm.snr_db = value;
    c.comm.noise_psd.reset();
  } else if (axis == "zone_length") {
    c.waveform.zone_length = static_cast<int>(as_int(1));
  } else if (axis == "distance") {
    if (!(value > 0.0)) throw ParameterError("axis distance needs positive values");
    c.comm.distance = value;
  } else if (axis == "seed") {
    c.seed = static_cast<std::uint64_t>(as_int(0));
    c.waveform.seed.reset();
    c.waveform.bit_seed.reset();
    c.imaging.noise_seed.reset();
    c.comm.noise_seed.reset();
    c.scene.speckle_seed.reset();
    c.scene.target_seed.reset();
  } else {
    throw ParameterError("'" + axis + "' is not a sweepable axis");
  }
  return c;
}

}  // namespace cosmic
