#include "berry/preset.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <toml.hpp>

#include "berry/theory.hpp"
#include "berry/units.hpp"

namespace berry {

namespace {

using nlohmann::json;

std::vector<double> log_space(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  v.front() = lo;
  v.back() = hi;
  return v;
}

RunSettings reference_base() {
  RunSettings s;
  s.detuning_mhz = -50.0;
  s.solid_angle_pi = 7.0 / 16.0;
  s.tau_ns = 100.0;
  s.noise = NoiseSettings{NoiseKind::radial, 1.0 / 15.0, 10.0, NoiseWindow::plateau};
  s.realizations = 300;
  s.seed = 1;
  return s;
}

struct Geometry {
  double theta = 0.0;
  double b = 0.0;
  double omega = 0.0;
};

Geometry geometry_of(const LoopSpec& loop) {
  Geometry g;
  g.omega = loop.omega;
  g.b = field_magnitude(loop);
  g.theta = g.b > 0.0 ? polar_angle(loop.omega, loop.delta) : 0.0;
  return g;
}

std::string fmt_double(double v) { return fmt::format("{}", v); }

}  // namespace

ExperimentPreset make_preset(const std::string& name) {
  ExperimentPreset p;
  p.name = name;
  p.base = reference_base();
  if (name == "fig2") {
    p.noise_kinds = {NoiseKind::radial, NoiseKind::angular};
    SweepAxis axis{"solid_angle_pi", {}};
    for (int k = 1; k <= 15; ++k) axis.values.push_back(k / 16.0);
    p.sweep = axis;
  } else if (name == "fig3-berry" || name == "fig3-dynamic") {
    p.base.sequence = name == "fig3-berry" ? SequenceKind::berry_echo : SequenceKind::dynamic_echo;
    p.noise_kinds = {NoiseKind::radial, NoiseKind::angular};
    p.sweep = SweepAxis{"s", log_space(0.01, 1.0, 13)};
  } else if (name == "fig4") {
    p.base.solid_angle_pi = 0.37;
    p.sequences = {SequenceKind::berry_echo, SequenceKind::dynamic_echo};
    SweepAxis axis{"tau_ns", log_space(5.0, 300.0, 14)};
    const LoopSpec loop = resolve(p.base).sequence.loop;
    const Geometry g = geometry_of(loop);
    axis.values.push_back(crossover_time(g.theta, g.b));
    std::sort(axis.values.begin(), axis.values.end());
    p.sweep = axis;
  } else if (name == "custom") {
    // Filled from a config file by the caller.
  } else {
    throw std::invalid_argument("unknown preset '" + name +
                                "' (expected fig2, fig3-berry, fig3-dynamic, fig4, custom)");
  }
  return p;
}

RunSettings apply_sweep(RunSettings base, const std::string& parameter, double value) {
  if (parameter == "solid_angle_pi") {
    base.solid_angle_pi = value;
    base.drive_mhz.reset();
  } else if (parameter == "s") {
    if (!base.noise) throw std::invalid_argument("sweep over s needs a [noise] table");
    base.noise->s = value;
  } else if (parameter == "tau_ns") {
    base.tau_ns = value;
  } else {
    throw std::invalid_argument("unsupported sweep parameter '" + parameter + "'");
  }
  return base;
}

std::vector<RunSettings> expand(const ExperimentPreset& preset) {
  std::vector<RunSettings> points;
  const std::vector<SequenceKind> sequences =
      preset.sequences.empty() ? std::vector<SequenceKind>{preset.base.sequence} : preset.sequences;
  for (SequenceKind seq : sequences) {
    std::vector<std::optional<NoiseSettings>> noises;
    if (preset.noise_kinds.empty()) {
      noises.push_back(preset.base.noise);
    } else {
      for (NoiseKind kind : preset.noise_kinds) {
        NoiseSettings n = preset.base.noise.value_or(NoiseSettings{});
        n.kind = kind;
        noises.push_back(n);
      }
    }
    for (const auto& noise : noises) {
      RunSettings s = preset.base;
      s.sequence = seq;
      s.noise = noise;
      if (preset.sweep) {
        for (double v : preset.sweep->values) points.push_back(apply_sweep(s, preset.sweep->parameter, v));
      } else {
        points.push_back(s);
      }
    }
  }
  return points;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> columns{
      "preset",        "sequence",     "kind",        "A",
      "theta",         "omega",        "delta",       "tau_ns",
      "s",             "bandwidth_mhz", "realizations", "master_seed",
      "coherence",     "coherence_norm", "mean_radius", "mean_phase",
      "reference_phase", "delta_gamma", "sigma",       "sigma_se",
      "gaussian_p",    "saturated",    "theory_sigma", "theory_sigma_geometric",
      "theory_sigma_dynamic", "theory_coherence", "tau_star_ns"};
  return columns;
}

ExperimentPreset with_overrides(ExperimentPreset preset, const PresetRunOptions& options) {
  if (options.seed) preset.base.seed = *options.seed;
  if (options.realizations) preset.base.realizations = *options.realizations;
  if (options.dt_ns) preset.base.dt_ns = *options.dt_ns;
  if (options.workers) preset.base.workers = *options.workers;
  return preset;
}

PresetRunOutput run_preset(const ExperimentPreset& preset, const std::filesystem::path& out_dir) {
  const auto start = std::chrono::steady_clock::now();
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + out_dir.string() + ": " + ec.message());

  PresetRunOutput output;
  output.csv = out_dir / (preset.name + ".csv");
  output.manifest = out_dir / (preset.name + ".manifest.json");
  std::ofstream csv(output.csv, std::ios::binary);
  if (!csv) throw std::runtime_error("cannot write " + output.csv.string());

  const auto& columns = csv_columns();
  for (std::size_t i = 0; i < columns.size(); ++i) csv << (i ? "," : "") << columns[i];
  csv << '\n';

  json resolved_points = json::array();
  for (const RunSettings& point : expand(preset)) {
    const EnsembleConfig config = resolve(point);
    const LoopSpec& loop = config.sequence.loop;
    const EnsembleStats stats = run_ensemble(config);
    const Geometry g = geometry_of(loop);
    const int multiplier = phase_multiplier(config.sequence.kind);

    const double s = config.sequence.noise ? config.sequence.noise->amplitude : 0.0;
    double theory_geometric = 0.0;
    double theory_dynamic = 0.0;
    double bandwidth = 0.0;
    if (config.sequence.noise) {
      bandwidth = units::rad_per_ns_to_mhz(config.sequence.noise->rate);
      if (g.omega > 0.0) {
        const TheoryInput in{g.theta, g.b, loop.tau, config.sequence.noise->rate,
                             normalized_amplitude_to_power(s, NoiseKind::radial, g.omega)};
        theory_geometric = std::sqrt(variance_geometric(in));
        theory_dynamic = std::sqrt(variance_dynamic(in));
      }
    }
    const bool radial = config.sequence.noise && config.sequence.noise->kind == NoiseKind::radial;
    const double theory_sigma =
        radial ? (config.sequence.kind == SequenceKind::berry_echo ? theory_geometric : theory_dynamic)
               : 0.0;
    const std::string kind =
        config.sequence.noise ? std::string(to_string(config.sequence.noise->kind)) : "none";

    const std::vector<std::string> row{
        preset.name,
        std::string(to_string(config.sequence.kind)),
        kind,
        fmt_double(g.omega > 0.0 ? solid_angle(g.theta) : 0.0),
        fmt_double(g.theta),
        fmt_double(loop.omega),
        fmt_double(loop.delta),
        fmt_double(loop.tau),
        fmt_double(s),
        fmt_double(bandwidth),
        std::to_string(config.realizations),
        std::to_string(config.master_seed),
        fmt_double(stats.coherence),
        fmt_double(stats.coherence_normalized),
        fmt_double(stats.mean_radius),
        fmt_double(stats.mean_phase),
        fmt_double(stats.reference_phase),
        fmt_double(stats.mean_phase - stats.reference_phase),
        fmt_double(stats.sigma),
        fmt_double(stats.sigma / std::sqrt(2.0 * static_cast<double>(config.realizations))),
        stats.gaussian_fit ? fmt_double(stats.gaussian_fit->p_value) : std::string("nan"),
        stats.saturated ? "1" : "0",
        fmt_double(theory_sigma),
        fmt_double(theory_geometric),
        fmt_double(theory_dynamic),
        fmt_double(coherence_from_sigma(theory_sigma, multiplier)),
        fmt_double(g.b > 0.0 ? crossover_time(g.theta, g.b) : 0.0)};
    for (std::size_t i = 0; i < row.size(); ++i) csv << (i ? "," : "") << row[i];
    csv << '\n';
    resolved_points.push_back(to_json(config));
    ++output.rows;
  }
  csv.close();
  if (!csv) throw std::runtime_error("failed writing " + output.csv.string());

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json manifest = preset_to_json(preset);
  manifest["tool"] = "berrysim";
  manifest["version"] = BERRY_VERSION;
  manifest["master_seed"] = preset.base.seed;
  manifest["realizations"] = preset.base.realizations;
  manifest["csv"] = output.csv.filename().string();
  manifest["columns"] = csv_columns();
  manifest["resolved_points"] = resolved_points;
  manifest["wall_time_s"] = wall;
  std::ofstream out(output.manifest);
  if (!out) throw std::runtime_error("cannot write " + output.manifest.string());
  out << manifest.dump(2) << '\n';
  return output;
}

json preset_to_json(const ExperimentPreset& preset) {
  json j;
  j["preset"] = preset.name;
  j["base"] = to_json(preset.base);
  j["noise_kinds"] = json::array();
  for (NoiseKind k : preset.noise_kinds) j["noise_kinds"].push_back(to_string(k));
  j["sequences"] = json::array();
  for (SequenceKind k : preset.sequences) j["sequences"].push_back(to_string(k));
  if (preset.sweep) {
    j["sweep"] = {{"parameter", preset.sweep->parameter}, {"values", preset.sweep->values}};
  }
  return j;
}

ExperimentPreset preset_from_json(const json& j) {
  ExperimentPreset p;
  p.name = j.at("preset").get<std::string>();
  p.base = settings_from_json(j.at("base"));
  for (const auto& k : j.value("noise_kinds", json::array())) {
    p.noise_kinds.push_back(parse_noise_kind(k.get<std::string>()));
  }
  for (const auto& k : j.value("sequences", json::array())) {
    p.sequences.push_back(parse_sequence_kind(k.get<std::string>()));
  }
  if (j.contains("sweep")) {
    p.sweep = SweepAxis{j["sweep"].at("parameter").get<std::string>(),
                        j["sweep"].at("values").get<std::vector<double>>()};
  }
  return p;
}

ExperimentPreset preset_from_manifest(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw std::runtime_error("cannot read " + manifest.string());
  return preset_from_json(json::parse(in));
}

std::optional<SweepAxis> parse_sweep(std::string_view toml_text) {
  const toml::table root = toml::parse(toml_text);
  const toml::table* sweep = root["sweep"].as_table();
  if (sweep == nullptr) return std::nullopt;
  SweepAxis axis;
  axis.parameter = sweep->get("parameter")->value_or(std::string{});
  if (const toml::array* values = sweep->get_as<toml::array>("values")) {
    for (const auto& v : *values) axis.values.push_back(v.value_or(0.0));
  }
  return axis;
}

}  // namespace berry
