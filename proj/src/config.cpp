#include "berry/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <toml.hpp>

#include "berry/units.hpp"

namespace berry {

namespace {

using nlohmann::json;

// Collects issues while reading typed values out of a TOML table.
class TableReader {
 public:
  TableReader(const toml::table& table, std::string prefix, std::vector<ConfigIssue>& issues)
      : table_(table), prefix_(std::move(prefix)), issues_(issues) {}

  void allow_only(const std::set<std::string>& keys) {
    for (const auto& [key, node] : table_) {
      if (!keys.contains(std::string(key.str()))) {
        add(std::string(key.str()), "unknown key");
      }
    }
  }

  std::optional<double> number(const std::string& key) {
    const toml::node* node = table_.get(key);
    if (node == nullptr) return std::nullopt;
    if (auto v = node->value<double>(); v && (node->is_floating_point() || node->is_integer())) {
      return *v;
    }
    add(key, "expected a number");
    return std::nullopt;
  }

  std::optional<std::int64_t> integer(const std::string& key) {
    const toml::node* node = table_.get(key);
    if (node == nullptr) return std::nullopt;
    if (node->is_integer()) return node->value<std::int64_t>();
    add(key, "expected an integer");
    return std::nullopt;
  }

  std::optional<std::string> string(const std::string& key) {
    const toml::node* node = table_.get(key);
    if (node == nullptr) return std::nullopt;
    if (node->is_string()) return node->value<std::string>();
    add(key, "expected a string");
    return std::nullopt;
  }

  void add(const std::string& key, const std::string& message) {
    issues_.push_back({prefix_ + "." + key, message});
  }

 private:
  const toml::table& table_;
  std::string prefix_;
  std::vector<ConfigIssue>& issues_;
};

const toml::table* subtable(const toml::table& root, const std::string& name,
                            std::vector<ConfigIssue>& issues) {
  const toml::node* node = root.get(name);
  if (node == nullptr) return nullptr;
  if (const toml::table* t = node->as_table()) return t;
  issues.push_back({name, "expected a table"});
  return nullptr;
}

template <typename Enum, typename Parse>
std::optional<Enum> parse_enum(TableReader& reader, const std::string& key, Parse parse) {
  auto text = reader.string(key);
  if (!text) return std::nullopt;
  try {
    return parse(*text);
  } catch (const std::invalid_argument& e) {
    reader.add(key, e.what());
    return std::nullopt;
  }
}

NoiseWindow parse_window(std::string_view text) {
  if (text == "plateau") return NoiseWindow::plateau;
  if (text == "full") return NoiseWindow::full;
  throw std::invalid_argument("unknown noise window '" + std::string(text) + "'");
}

std::string_view window_name(NoiseWindow w) { return w == NoiseWindow::full ? "full" : "plateau"; }

}  // namespace

ConfigParseResult parse_config(std::string_view toml_text) {
  ConfigParseResult out;
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    out.issues.push_back({"", fmt::format("TOML syntax error at line {}: {}",
                                          e.source().begin.line, e.description())});
    return out;
  }

  for (const auto& [key, node] : root) {
    static const std::set<std::string> tables{"loop", "noise", "sequence", "run", "sweep"};
    if (!tables.contains(std::string(key.str()))) {
      out.issues.push_back({std::string(key.str()), "unknown key"});
    }
  }

  RunSettings s;
  if (const toml::table* t = subtable(root, "loop", out.issues)) {
    TableReader r(*t, "loop", out.issues);
    r.allow_only({"detuning_mhz", "drive_mhz", "solid_angle_pi", "tau_ns", "orientation",
                  "ramp_ns", "dt_ns"});
    if (auto v = r.number("detuning_mhz")) s.detuning_mhz = *v;
    s.drive_mhz = r.number("drive_mhz");
    s.solid_angle_pi = r.number("solid_angle_pi");
    if (auto v = r.number("tau_ns")) s.tau_ns = *v;
    if (auto v = r.integer("orientation")) s.orientation = static_cast<int>(*v);
    s.ramp_ns = r.number("ramp_ns");
    s.dt_ns = r.number("dt_ns");
  } else {
    out.issues.push_back({"loop", "missing required table"});
  }

  if (const toml::table* t = subtable(root, "noise", out.issues)) {
    TableReader r(*t, "noise", out.issues);
    r.allow_only({"kind", "s", "bandwidth_mhz", "window"});
    auto kind = r.string("kind");
    if (!kind || *kind != "none") {
      NoiseSettings n;
      if (kind) {
        try {
          n.kind = parse_noise_kind(*kind);
        } catch (const std::invalid_argument& e) {
          r.add("kind", e.what());
        }
      }
      if (auto v = r.number("s")) n.s = *v;
      if (auto v = r.number("bandwidth_mhz")) n.bandwidth_mhz = *v;
      if (auto w = parse_enum<NoiseWindow>(r, "window", parse_window)) n.window = *w;
      s.noise = n;
    }
  }

  if (const toml::table* t = subtable(root, "sequence", out.issues)) {
    TableReader r(*t, "sequence", out.issues);
    r.allow_only({"kind", "shots"});
    if (auto k = parse_enum<SequenceKind>(r, "kind", parse_sequence_kind)) s.sequence = *k;
    if (auto v = r.integer("shots")) {
      if (*v < 1) {
        r.add("shots", "must be >= 1");
      } else {
        s.shots = static_cast<std::uint64_t>(*v);
      }
    }
  }

  if (const toml::table* t = subtable(root, "run", out.issues)) {
    TableReader r(*t, "run", out.issues);
    r.allow_only({"realizations", "seed", "workers"});
    if (auto v = r.integer("realizations")) {
      if (*v < 1) {
        r.add("realizations", "must be >= 1");
      } else {
        s.realizations = static_cast<std::size_t>(*v);
      }
    }
    if (auto v = r.integer("seed")) s.seed = static_cast<std::uint64_t>(*v);
    if (auto v = r.integer("workers")) {
      if (*v < 1) {
        r.add("workers", "must be >= 1");
      } else {
        s.workers = static_cast<unsigned>(*v);
      }
    }
  }

  if (const toml::table* t = subtable(root, "sweep", out.issues)) {
    TableReader r(*t, "sweep", out.issues);
    r.allow_only({"parameter", "values"});
    auto parameter = r.string("parameter");
    if (!parameter) {
      r.add("parameter", "missing");
    } else if (*parameter != "solid_angle_pi" && *parameter != "s" && *parameter != "tau_ns") {
      r.add("parameter", "must be one of solid_angle_pi, s, tau_ns");
    }
    const toml::array* values = t->get_as<toml::array>("values");
    if (values == nullptr || values->empty()) {
      r.add("values", "expected a non-empty array of numbers");
    } else {
      for (std::size_t i = 0; i < values->size(); ++i) {
        auto v = values->get(i)->value<double>();
        if (!v || !std::isfinite(*v)) r.add(fmt::format("values[{}]", i), "expected a finite number");
      }
    }
  }

  auto checks = check_settings(s);
  out.issues.insert(out.issues.end(), checks.begin(), checks.end());
  out.settings = s;
  return out;
}

ConfigParseResult validate_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    ConfigParseResult out;
    out.issues.push_back({"", "cannot read " + file.string()});
    return out;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::vector<ConfigIssue> check_settings(const RunSettings& s) {
  std::vector<ConfigIssue> issues;
  auto add = [&](std::string path, std::string message) {
    issues.push_back({std::move(path), std::move(message)});
  };
  if (!std::isfinite(s.detuning_mhz)) add("loop.detuning_mhz", "must be finite");
  if (!std::isfinite(s.tau_ns) || s.tau_ns <= 0.0) add("loop.tau_ns", "must be > 0");
  if (s.drive_mhz && s.solid_angle_pi) {
    add("loop", "give either drive_mhz or solid_angle_pi, not both");
  }
  if (!s.drive_mhz && !s.solid_angle_pi) add("loop", "one of drive_mhz or solid_angle_pi is required");
  if (s.drive_mhz && (!std::isfinite(*s.drive_mhz) || *s.drive_mhz < 0.0)) {
    add("loop.drive_mhz", "must be >= 0");
  }
  if (s.solid_angle_pi) {
    if (!std::isfinite(*s.solid_angle_pi) || *s.solid_angle_pi < 0.0 || *s.solid_angle_pi >= 2.0) {
      add("loop.solid_angle_pi", "must lie in [0, 2)");
    }
    if (s.detuning_mhz == 0.0) add("loop.detuning_mhz", "must be non-zero when solid_angle_pi is given");
  }
  if (s.orientation != 1 && s.orientation != -1) add("loop.orientation", "must be +1 or -1");
  if (s.ramp_ns && (!std::isfinite(*s.ramp_ns) || *s.ramp_ns < 0.0)) add("loop.ramp_ns", "must be >= 0");
  if (s.dt_ns) {
    if (!std::isfinite(*s.dt_ns) || *s.dt_ns <= 0.0) {
      add("loop.dt_ns", "must be > 0");
    } else if (s.tau_ns > 0.0 && *s.dt_ns > s.tau_ns / 100.0) {
      add("loop.dt_ns", "must not exceed tau_ns / 100");
    }
  }
  if (s.noise) {
    if (!std::isfinite(s.noise->s) || s.noise->s < 0.0) add("noise.s", "must be >= 0");
    if (!std::isfinite(s.noise->bandwidth_mhz) || s.noise->bandwidth_mhz <= 0.0) {
      add("noise.bandwidth_mhz", "must be > 0");
    }
    const bool zero_drive = (s.drive_mhz && *s.drive_mhz == 0.0) ||
                            (s.solid_angle_pi && *s.solid_angle_pi == 0.0);
    if (s.noise->kind == NoiseKind::radial && zero_drive) {
      add("noise.kind", "radial noise is normalized by the drive and needs a non-zero drive");
    }
  }
  if (s.realizations < 1) add("run.realizations", "must be >= 1");
  if (s.workers < 1) add("run.workers", "must be >= 1");
  return issues;
}

EnsembleConfig resolve(const RunSettings& s) {
  if (auto issues = check_settings(s); !issues.empty()) {
    throw std::invalid_argument(issues.front().path + ": " + issues.front().message);
  }
  EnsembleConfig out;
  LoopSpec& loop = out.sequence.loop;
  loop.delta = units::mhz_to_rad_per_ns(s.detuning_mhz);
  loop.omega = s.drive_mhz ? units::mhz_to_rad_per_ns(*s.drive_mhz)
                           : drive_for_solid_angle(*s.solid_angle_pi * units::kPi, loop.delta);
  loop.tau = s.tau_ns;
  loop.orientation = s.orientation;
  loop.ramp_time = s.ramp_ns.value_or(kDefaultRampNs);

  std::optional<double> rate;
  if (s.noise) {
    rate = units::mhz_to_rad_per_ns(s.noise->bandwidth_mhz);
    out.sequence.noise =
        NoiseModel{s.noise->kind, s.noise->s, *rate, s.noise->window};
  }
  if (s.dt_ns) {
    loop.dt = s.tau_ns / std::ceil(s.tau_ns / *s.dt_ns - 1e-9);
  } else {
    loop.dt = default_dt(s.tau_ns, field_magnitude(loop), rate);
  }
  validate(loop);

  out.sequence.kind = s.sequence;
  out.sequence.shots = s.shots;
  out.realizations = s.realizations;
  out.master_seed = s.seed;
  out.workers = s.workers;
  return out;
}

double resolved_solid_angle(const RunSettings& settings) {
  const EnsembleConfig c = resolve(settings);
  if (c.sequence.loop.omega == 0.0) return 0.0;
  return solid_angle(polar_angle(c.sequence.loop.omega, c.sequence.loop.delta));
}

json to_json(const RunSettings& s) {
  json loop{{"detuning_mhz", s.detuning_mhz}, {"tau_ns", s.tau_ns}, {"orientation", s.orientation}};
  if (s.drive_mhz) loop["drive_mhz"] = *s.drive_mhz;
  if (s.solid_angle_pi) loop["solid_angle_pi"] = *s.solid_angle_pi;
  if (s.ramp_ns) loop["ramp_ns"] = *s.ramp_ns;
  if (s.dt_ns) loop["dt_ns"] = *s.dt_ns;
  json j{{"loop", loop}};
  if (s.noise) {
    j["noise"] = {{"kind", to_string(s.noise->kind)},
                  {"s", s.noise->s},
                  {"bandwidth_mhz", s.noise->bandwidth_mhz},
                  {"window", window_name(s.noise->window)}};
  }
  j["sequence"] = {{"kind", to_string(s.sequence)}};
  if (s.shots) j["sequence"]["shots"] = *s.shots;
  j["run"] = {{"realizations", s.realizations}, {"seed", s.seed}, {"workers", s.workers}};
  return j;
}

RunSettings settings_from_json(const json& j) {
  RunSettings s;
  const json& loop = j.at("loop");
  s.detuning_mhz = loop.at("detuning_mhz").get<double>();
  s.tau_ns = loop.at("tau_ns").get<double>();
  s.orientation = loop.value("orientation", 1);
  if (loop.contains("drive_mhz")) s.drive_mhz = loop["drive_mhz"].get<double>();
  if (loop.contains("solid_angle_pi")) s.solid_angle_pi = loop["solid_angle_pi"].get<double>();
  if (loop.contains("ramp_ns")) s.ramp_ns = loop["ramp_ns"].get<double>();
  if (loop.contains("dt_ns")) s.dt_ns = loop["dt_ns"].get<double>();
  if (j.contains("noise")) {
    const json& n = j["noise"];
    NoiseSettings ns;
    ns.kind = parse_noise_kind(n.at("kind").get<std::string>());
    ns.s = n.at("s").get<double>();
    ns.bandwidth_mhz = n.at("bandwidth_mhz").get<double>();
    ns.window = parse_window(n.value("window", std::string("plateau")));
    s.noise = ns;
  }
  const json& seq = j.at("sequence");
  s.sequence = parse_sequence_kind(seq.at("kind").get<std::string>());
  if (seq.contains("shots")) s.shots = seq["shots"].get<std::uint64_t>();
  const json& run = j.at("run");
  s.realizations = run.at("realizations").get<std::size_t>();
  s.seed = run.at("seed").get<std::uint64_t>();
  s.workers = run.value("workers", 1u);
  return s;
}

json to_json(const EnsembleConfig& c) {
  const LoopSpec& loop = c.sequence.loop;
  const StepLayout layout = step_layout(loop);
  json j;
  j["loop"] = {{"omega_rad_per_ns", loop.omega},
               {"delta_rad_per_ns", loop.delta},
               {"tau_ns", loop.tau},
               {"orientation", loop.orientation},
               {"ramp_ns", static_cast<double>(layout.ramp) * loop.dt},
               {"dt_ns", loop.dt},
               {"steps_per_arm", layout.total()}};
  if (loop.omega != 0.0 || loop.delta != 0.0) {
    const double theta = polar_angle(loop.omega, loop.delta);
    j["geometry"] = {{"theta_rad", theta},
                     {"solid_angle_sr", solid_angle(theta)},
                     {"field_rad_per_ns", field_magnitude(loop)}};
  }
  if (c.sequence.noise) {
    const NoiseModel& n = *c.sequence.noise;
    j["noise"] = {{"kind", to_string(n.kind)},
                  {"s", n.amplitude},
                  {"rate_per_ns", n.rate},
                  {"power", normalized_amplitude_to_power(n.amplitude, n.kind, loop.omega)},
                  {"window", window_name(n.window)}};
  }
  j["sequence"] = {{"kind", to_string(c.sequence.kind)},
                   {"phase_multiplier", phase_multiplier(c.sequence.kind)}};
  if (c.sequence.shots) j["sequence"]["shots"] = *c.sequence.shots;
  j["run"] = {{"realizations", c.realizations}, {"master_seed", c.master_seed}, {"workers", c.workers}};
  return j;
}

}  // namespace berry
