#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "berry/config.hpp"

namespace berry {

/// Numeric sweep axis. Supported parameters: solid_angle_pi, s, tau_ns.
struct SweepAxis {
  std::string parameter;
  std::vector<double> values;
};

struct ExperimentPreset {
  std::string name;  ///< fig2 | fig3-berry | fig3-dynamic | fig4 | custom
  RunSettings base;
  std::vector<NoiseKind> noise_kinds;  ///< empty: keep base.noise
  std::vector<SequenceKind> sequences; ///< empty: keep base.sequence
  std::optional<SweepAxis> sweep;      ///< absent: a single point
};

/// Built-in presets at their default scale (N = 300, seed 1).
ExperimentPreset make_preset(const std::string& name);

/// The settings of every sweep point, in CSV row order.
std::vector<RunSettings> expand(const ExperimentPreset& preset);

/// Applies one sweep value to a copy of `base`.
RunSettings apply_sweep(RunSettings base, const std::string& parameter, double value);

/// Fixed CSV column order.
const std::vector<std::string>& csv_columns();

struct PresetRunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> realizations;
  std::optional<double> dt_ns;
  std::optional<unsigned> workers;
};

struct PresetRunOutput {
  std::filesystem::path csv;
  std::filesystem::path manifest;
  std::size_t rows = 0;
};

/// Applies overrides to the preset base settings.
ExperimentPreset with_overrides(ExperimentPreset preset, const PresetRunOptions& options);

/// Runs every sweep point, writes <name>.csv and <name>.manifest.json into
/// `out_dir`. Throws on unwritable output.
PresetRunOutput run_preset(const ExperimentPreset& preset, const std::filesystem::path& out_dir);

nlohmann::json preset_to_json(const ExperimentPreset& preset);
ExperimentPreset preset_from_json(const nlohmann::json& j);

/// Reconstructs the preset recorded in a manifest.
ExperimentPreset preset_from_manifest(const std::filesystem::path& manifest);

/// Reads an optional [sweep] table from a custom config.
std::optional<SweepAxis> parse_sweep(std::string_view toml_text);

}  // namespace berry
