#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "berry/noise.hpp"

namespace berry {

/// Circular control loop of the rotating-frame field
/// B(t) = (Omega cos phi, Omega sin phi, Delta).
///
/// The drive amplitude ramps linearly 0 -> omega over `ramp_time` at phi = 0,
/// the azimuth then advances by orientation * 2 pi over `tau`, and the
/// amplitude ramps back to zero at the final azimuth.
struct LoopSpec {
  double omega = 0.0;      ///< drive amplitude, rad/ns
  double delta = 0.0;      ///< detuning, rad/ns (signed)
  double tau = 100.0;      ///< loop duration, ns
  int orientation = +1;    ///< +1 or -1
  double ramp_time = 0.0;  ///< ns
  double dt = 0.05;        ///< integration step, ns
};

/// Where injected noise acts along an arm.
enum class NoiseWindow { plateau, full };

/// Azimuth behaviour of an arm: a full loop, or a hold at phi = 0.
enum class ArmShape { loop, hold };

/// Step counts of one arm. Durations are quantized to the dt grid.
struct StepLayout {
  std::size_t ramp = 0;
  std::size_t plateau = 0;

  std::size_t total() const { return 2 * ramp + plateau; }
};

/// Field sampled at the two Gauss-Legendre nodes of every integration step;
/// `samples[2k]` and `samples[2k + 1]` belong to step k.
struct FieldTrace {
  std::vector<Eigen::Vector3d> samples;
  double dt = 0.0;

  std::size_t steps() const { return samples.size() / 2; }
};

/// Offsets of the two Gauss-Legendre nodes inside a step, as fractions of dt.
inline constexpr double kGaussNodeLow = 0.5 - 0.28867513459481287;
inline constexpr double kGaussNodeHigh = 0.5 + 0.28867513459481287;

/// arctan(omega / |delta|) in [0, pi/2]. Throws DegenerateFieldError when
/// both components vanish.
double polar_angle(double omega, double delta);

/// 2 pi (1 - cos theta).
double solid_angle(double theta);

/// Drive amplitude whose loop at detuning `delta` encloses `solid_angle`.
/// Valid for solid angles in [0, 2 pi).
double drive_for_solid_angle(double solid_angle, double delta);

/// |B| on the plateau.
double field_magnitude(const LoopSpec& spec);

/// Integration step: min(tau / 2000, 0.05 / b_max, 0.1 / rate), shrunk so that
/// tau is an integer number of steps.
double default_dt(double tau, double b_max, std::optional<double> noise_rate = std::nullopt);

/// Throws std::invalid_argument naming the first violated constraint.
void validate(const LoopSpec& spec);

StepLayout step_layout(const LoopSpec& spec);

/// Noiseless field at time t (ns) since the start of the arm.
Eigen::Vector3d field_at(const LoopSpec& spec, ArmShape shape, double t);

/// Samples one arm of the path. A present injection must have the same dt as
/// the loop and cover ramp + plateau + ramp; radial noise adds to the in-plane
/// magnitude, angular noise to the azimuth. B_z is never perturbed.
FieldTrace build_field_trace(const LoopSpec& spec, const NoiseTrace* injection = nullptr,
                             NoiseWindow window = NoiseWindow::plateau,
                             ArmShape shape = ArmShape::loop);

/// Bare detuning (omega = 0) held for `steps` steps of length dt.
FieldTrace build_idle_trace(double delta, double dt, std::size_t steps);

/// Plateau portion of an arm-length noise trace.
NoiseTrace plateau_slice(const NoiseTrace& arm_trace, const LoopSpec& spec);

/// Normalized amplitude to OU power: radial (s * b_rho)^2, angular s^2.
double normalized_amplitude_to_power(double s, NoiseKind kind, double b_rho);

}  // namespace berry
