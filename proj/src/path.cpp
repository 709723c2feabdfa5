#include "berry/path.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "berry/errors.hpp"
#include "berry/units.hpp"

namespace berry {

double polar_angle(double omega, double delta) {
  if (omega == 0.0 && delta == 0.0) {
    throw DegenerateFieldError("polar_angle: field vanishes (omega = delta = 0)");
  }
  return std::atan2(std::abs(omega), std::abs(delta));
}

double solid_angle(double theta) { return units::kTwoPi * (1.0 - std::cos(theta)); }

double drive_for_solid_angle(double solid_angle, double delta) {
  if (!(solid_angle >= 0.0) || solid_angle >= units::kTwoPi) {
    throw std::invalid_argument("drive_for_solid_angle: solid angle must lie in [0, 2 pi)");
  }
  if (delta == 0.0) {
    throw std::invalid_argument("drive_for_solid_angle: detuning must be non-zero");
  }
  const double cos_theta = 1.0 - solid_angle / units::kTwoPi;
  const double sin_theta = std::sqrt((1.0 - cos_theta) * (1.0 + cos_theta));
  return std::abs(delta) * sin_theta / cos_theta;
}

double field_magnitude(const LoopSpec& spec) { return std::hypot(spec.omega, spec.delta); }

double default_dt(double tau, double b_max, std::optional<double> noise_rate) {
  if (!(tau > 0.0)) throw std::invalid_argument("default_dt: tau must be > 0");
  double target = tau / 2000.0;
  if (b_max > 0.0) target = std::min(target, 0.05 / b_max);
  if (noise_rate && *noise_rate > 0.0) target = std::min(target, 0.1 / *noise_rate);
  auto steps = static_cast<std::size_t>(std::ceil(tau / target - 1e-9));
  steps += steps % 2;  // keeps tau / 2 on the grid
  return tau / static_cast<double>(steps);
}

void validate(const LoopSpec& spec) {
  auto fail = [](const std::string& what) { throw std::invalid_argument("LoopSpec: " + what); };
  if (!std::isfinite(spec.omega) || spec.omega < 0.0) fail("omega must be finite and >= 0");
  if (!std::isfinite(spec.delta)) fail("delta must be finite");
  if (!std::isfinite(spec.tau) || spec.tau <= 0.0) fail("tau must be > 0");
  if (spec.orientation != 1 && spec.orientation != -1) fail("orientation must be +1 or -1");
  if (!std::isfinite(spec.ramp_time) || spec.ramp_time < 0.0) fail("ramp_time must be >= 0");
  if (!std::isfinite(spec.dt) || spec.dt <= 0.0) fail("dt must be > 0");
  if (spec.dt > spec.tau / 100.0 * (1.0 + 1e-12)) fail("dt must not exceed tau / 100");
}

StepLayout step_layout(const LoopSpec& spec) {
  validate(spec);
  StepLayout layout;
  layout.plateau = static_cast<std::size_t>(std::llround(spec.tau / spec.dt));
  layout.ramp = static_cast<std::size_t>(std::llround(spec.ramp_time / spec.dt));
  return layout;
}

namespace {

struct PolarSample {
  double rho;
  double phi;
};

// Noiseless cylindrical field on the quantized grid.
PolarSample polar_at(const LoopSpec& spec, const StepLayout& layout, ArmShape shape, double t) {
  const double ramp = static_cast<double>(layout.ramp) * spec.dt;
  const double plateau = static_cast<double>(layout.plateau) * spec.dt;
  const double sweep = shape == ArmShape::loop ? spec.orientation * units::kTwoPi : 0.0;
  if (t < ramp) return {spec.omega * t / ramp, 0.0};
  if (t < ramp + plateau) return {spec.omega, sweep * (t - ramp) / plateau};
  const double down = ramp > 0.0 ? std::max(0.0, 1.0 - (t - ramp - plateau) / ramp) : 0.0;
  return {spec.omega * down, sweep};
}

}  // namespace

Eigen::Vector3d field_at(const LoopSpec& spec, ArmShape shape, double t) {
  const auto p = polar_at(spec, step_layout(spec), shape, t);
  return {p.rho * std::cos(p.phi), p.rho * std::sin(p.phi), spec.delta};
}

FieldTrace build_field_trace(const LoopSpec& spec, const NoiseTrace* injection,
                             NoiseWindow window, ArmShape shape) {
  const StepLayout layout = step_layout(spec);
  const std::size_t steps = layout.total();
  if (injection != nullptr) {
    if (std::abs(injection->dt - spec.dt) > 1e-12 * spec.dt) {
      throw std::invalid_argument("build_field_trace: noise dt differs from loop dt");
    }
    if (injection->size() != steps) {
      throw std::invalid_argument("build_field_trace: noise trace has " +
                                  std::to_string(injection->size()) + " samples, arm needs " +
                                  std::to_string(steps));
    }
  }

  FieldTrace trace;
  trace.dt = spec.dt;
  trace.samples.reserve(2 * steps);
  const std::size_t first = window == NoiseWindow::full ? 0 : layout.ramp;
  const std::size_t last = window == NoiseWindow::full ? steps : layout.ramp + layout.plateau;
  for (std::size_t k = 0; k < steps; ++k) {
    const double offset =
        (injection != nullptr && k >= first && k < last) ? injection->samples[k] : 0.0;
    for (double node : {kGaussNodeLow, kGaussNodeHigh}) {
      const double t = (static_cast<double>(k) + node) * spec.dt;
      PolarSample p = polar_at(spec, layout, shape, t);
      if (injection != nullptr) {
        if (injection->params.kind == NoiseKind::radial) {
          p.rho += offset;
        } else {
          p.phi += offset;
        }
      }
      trace.samples.emplace_back(p.rho * std::cos(p.phi), p.rho * std::sin(p.phi), spec.delta);
    }
  }
  return trace;
}

FieldTrace build_idle_trace(double delta, double dt, std::size_t steps) {
  if (!(dt > 0.0)) throw std::invalid_argument("build_idle_trace: dt must be > 0");
  FieldTrace trace;
  trace.dt = dt;
  trace.samples.assign(2 * steps, Eigen::Vector3d(0.0, 0.0, delta));
  return trace;
}

NoiseTrace plateau_slice(const NoiseTrace& arm_trace, const LoopSpec& spec) {
  const StepLayout layout = step_layout(spec);
  if (arm_trace.size() < layout.ramp + layout.plateau) {
    throw std::invalid_argument("plateau_slice: trace shorter than ramp + plateau");
  }
  NoiseTrace out;
  out.dt = arm_trace.dt;
  out.params = arm_trace.params;
  const auto begin = arm_trace.samples.begin() + static_cast<std::ptrdiff_t>(layout.ramp);
  out.samples.assign(begin, begin + static_cast<std::ptrdiff_t>(layout.plateau));
  return out;
}

double normalized_amplitude_to_power(double s, NoiseKind kind, double b_rho) {
  if (!std::isfinite(s) || s < 0.0) {
    throw std::invalid_argument("normalized amplitude must be finite and >= 0");
  }
  if (kind == NoiseKind::angular) return s * s;
  if (!(b_rho > 0.0)) {
    throw std::invalid_argument("radial noise needs a positive in-plane field B_rho");
  }
  return (s * b_rho) * (s * b_rho);
}

}  // namespace berry
