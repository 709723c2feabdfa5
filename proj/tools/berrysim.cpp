// berrysim: Monte Carlo dephasing of Berry and dynamic phases under
// Ornstein-Uhlenbeck control-field noise.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "berry/config.hpp"
#include "berry/preset.hpp"
#include "berry/theory.hpp"
#include "berry/units.hpp"

namespace {

using namespace berry;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void print_issues(const std::vector<ConfigIssue>& issues) {
  for (const auto& issue : issues) {
    std::cerr << "error: " << (issue.path.empty() ? "<file>" : issue.path) << ": " << issue.message
              << '\n';
  }
}

int report(const PresetRunOutput& out) {
  std::cout << "wrote " << out.csv.string() << " (" << out.rows << " rows)\n"
            << "wrote " << out.manifest.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"berrysim - geometric vs dynamic dephasing under control-field noise"};
  app.require_subcommand(1);

  std::string preset_name;
  std::string config_file;
  std::string out_dir = "results";
  berry::PresetRunOptions options;
  auto* run = app.add_subcommand("run", "Run a preset sweep and write CSV + JSON manifest");
  run->add_option("preset", preset_name, "fig2 | fig3-berry | fig3-dynamic | fig4 | custom")->required();
  run->add_option("--config", config_file, "TOML config (required for custom)");
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--seed", options.seed, "Master seed");
  run->add_option("--realizations", options.realizations, "Noise realizations per point");
  run->add_option("--dt", options.dt_ns, "Integration step in ns");
  run->add_option("--workers", options.workers, "Worker threads");

  std::string manifest_file;
  std::optional<unsigned> replay_workers;
  auto* replay = app.add_subcommand("replay", "Re-run the sweep recorded in a manifest");
  replay->add_option("manifest", manifest_file)->required();
  replay->add_option("--out", out_dir, "Output directory");
  replay->add_option("--workers", replay_workers, "Worker threads");

  std::string validate_file;
  auto* validate_cmd = app.add_subcommand("validate", "Check a TOML config and echo it resolved");
  validate_cmd->add_option("config", validate_file)->required();

  double detuning_mhz = -50.0;
  std::optional<double> solid_angle_pi;
  std::optional<double> drive_mhz;
  double tau_ns = 100.0;
  double bandwidth_mhz = 10.0;
  double s = 1.0 / 15.0;
  auto* theory = app.add_subcommand("theory", "Closed-form variances, coherences and crossover time");
  theory->add_option("--detuning-mhz", detuning_mhz, "Detuning (cyclic MHz)");
  auto* sa = theory->add_option("--solid-angle-pi", solid_angle_pi, "Solid angle A / pi");
  theory->add_option("--drive-mhz", drive_mhz, "Drive amplitude (cyclic MHz)")->excludes(sa);
  theory->add_option("--tau-ns", tau_ns, "Loop time (ns)");
  theory->add_option("--bandwidth-mhz", bandwidth_mhz, "Noise bandwidth (cyclic MHz)");
  theory->add_option("--s", s, "Normalized radial noise amplitude");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      ExperimentPreset preset;
      if (preset_name == "custom") {
        if (config_file.empty()) {
          std::cerr << "error: the custom preset needs --config FILE\n";
          return 2;
        }
        const std::string text = read_file(config_file);
        const auto parsed = parse_config(text);
        if (!parsed.ok()) {
          print_issues(parsed.issues);
          return 2;
        }
        preset = make_preset("custom");
        preset.base = *parsed.settings;
        preset.sweep = parse_sweep(text);
      } else {
        if (!config_file.empty()) {
          std::cerr << "error: --config is only accepted with the custom preset\n";
          return 2;
        }
        preset = make_preset(preset_name);
      }
      return report(run_preset(with_overrides(preset, options), out_dir));
    }

    if (*replay) {
      ExperimentPreset preset = preset_from_manifest(manifest_file);
      if (replay_workers) preset.base.workers = *replay_workers;
      return report(run_preset(preset, out_dir));
    }

    if (*validate_cmd) {
      const auto parsed = validate_config(validate_file);
      if (!parsed.ok()) {
        print_issues(parsed.issues);
        return 2;
      }
      nlohmann::json echo;
      echo["settings"] = to_json(*parsed.settings);
      echo["resolved"] = to_json(resolve(*parsed.settings));
      std::cout << echo.dump(2) << '\n';
      return 0;
    }

    if (*theory) {
      RunSettings settings;
      settings.detuning_mhz = detuning_mhz;
      settings.tau_ns = tau_ns;
      settings.drive_mhz = drive_mhz;
      settings.solid_angle_pi = solid_angle_pi;
      if (!drive_mhz && !solid_angle_pi) settings.solid_angle_pi = 7.0 / 16.0;
      settings.noise = NoiseSettings{NoiseKind::radial, s, bandwidth_mhz, NoiseWindow::plateau};
      const EnsembleConfig config = resolve(settings);
      const LoopSpec& loop = config.sequence.loop;
      const double theta = polar_angle(loop.omega, loop.delta);
      const double b = field_magnitude(loop);
      const TheoryInput in{theta, b, loop.tau, config.sequence.noise->rate,
                           normalized_amplitude_to_power(s, NoiseKind::radial, loop.omega)};
      const double var_g = variance_geometric(in);
      const double var_d = variance_dynamic(in);
      fmt::print("theta_rad             {:.6g}\n", theta);
      fmt::print("solid_angle_sr        {:.6g}\n", solid_angle(theta));
      fmt::print("berry_phase_rad       {:.6g}\n", berry_phase_ideal(solid_angle(theta)));
      fmt::print("omega_rad_per_ns      {:.6g}\n", loop.omega);
      fmt::print("field_rad_per_ns      {:.6g}\n", b);
      fmt::print("gamma_per_ns          {:.6g}\n", in.gamma_rate);
      fmt::print("power_rad2_per_ns2    {:.6g}\n", in.power);
      fmt::print("sigma_geometric_rad   {:.6g}\n", std::sqrt(var_g));
      fmt::print("sigma_dynamic_rad     {:.6g}\n", std::sqrt(var_d));
      fmt::print("coherence_geometric   {:.6g}\n", coherence_from_sigma(std::sqrt(var_g)));
      fmt::print("crossover_tau_ns      {:.6g}\n", crossover_time(theta, b));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
