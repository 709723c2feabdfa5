#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "berry/ensemble.hpp"

namespace berry {

/// Noise settings in user units.
struct NoiseSettings {
  NoiseKind kind = NoiseKind::radial;
  double s = 1.0 / 15.0;
  double bandwidth_mhz = 10.0;  ///< cyclic
  NoiseWindow window = NoiseWindow::plateau;
};

/// Ramp length used when none is given. Long enough to stay adiabatic for
/// every tau, including the short-loop end of the crossover sweep.
inline constexpr double kDefaultRampNs = 50.0;

/// Experiment settings as written in a config file: MHz (cyclic) and ns.
/// `resolve` turns them into an EnsembleConfig in rad/ns.
struct RunSettings {
  double detuning_mhz = -50.0;
  std::optional<double> drive_mhz;       ///< Omega / 2 pi
  std::optional<double> solid_angle_pi;  ///< A / pi; alternative to drive_mhz
  double tau_ns = 100.0;
  int orientation = +1;
  std::optional<double> ramp_ns;  ///< default kDefaultRampNs
  std::optional<double> dt_ns;    ///< default from the step rule
  std::optional<NoiseSettings> noise;
  SequenceKind sequence = SequenceKind::berry_echo;
  std::optional<std::uint64_t> shots;
  std::size_t realizations = 300;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

/// One problem found while reading a config; `path` is dotted, e.g. "loop.tau_ns".
struct ConfigIssue {
  std::string path;
  std::string message;
};

struct ConfigParseResult {
  std::optional<RunSettings> settings;
  std::vector<ConfigIssue> issues;

  bool ok() const { return issues.empty() && settings.has_value(); }
};

/// Parses TOML text. Every violation is collected rather than stopping at the first.
ConfigParseResult parse_config(std::string_view toml_text);

/// Reads and parses a config file.
ConfigParseResult validate_config(const std::filesystem::path& file);

/// Checks a settings struct; returns all violations.
std::vector<ConfigIssue> check_settings(const RunSettings& settings);

/// Unit conversion and defaults. Throws std::invalid_argument on invalid settings.
EnsembleConfig resolve(const RunSettings& settings);

/// Solid angle (steradians) enclosed by the resolved loop.
double resolved_solid_angle(const RunSettings& settings);

nlohmann::json to_json(const RunSettings& settings);
RunSettings settings_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EnsembleConfig& config);

}  // namespace berry
