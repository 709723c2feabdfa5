#pragma once

#include "berry/noise.hpp"

namespace berry {

/// Parameters of the closed-form variance expressions.
struct TheoryInput {
  double theta = 0.0;       ///< polar angle, rad
  double b = 0.0;           ///< |B|, rad/ns
  double tau = 0.0;         ///< loop time, ns
  double gamma_rate = 0.0;  ///< OU rate, 1/ns
  double power = 0.0;       ///< P_rho, (rad/ns)^2
};

/// Magnitude A/2 of the per-loop Berry phase. The state that starts in |0>
/// with Delta > 0 and a positively oriented loop acquires -A/2.
double berry_phase_ideal(double solid_angle);

/// (Gamma tau - 1 + exp(-Gamma tau)) / Gamma^2, i.e. the double integral of
/// exp(-Gamma |t - t'|) over [0, tau]^2 divided by 2. Accurate for small
/// Gamma tau.
double ou_integral_kernel(double rate, double tau);

/// First-order Berry phase deviation
/// -(pi/tau) sin(theta) (cos(theta)/b) sum_k delta_rho_k dt over the first
/// tau of the trace.
double delta_gamma_first_order(const NoiseTrace& delta_rho, double theta, double b, double tau);

/// First-order dynamic phase deviation sin(theta) sum_k delta_rho_k dt.
double delta_dynamic_first_order(const NoiseTrace& delta_rho, double theta, double tau);

/// sigma_gamma^2 = 2 P (pi cos sin / (B tau))^2 (Gamma tau - 1 + e^{-Gamma tau}) / Gamma^2.
double variance_geometric(const TheoryInput& in);

/// sigma_delta^2 = 2 P sin^2 (Gamma tau - 1 + e^{-Gamma tau}) / Gamma^2.
double variance_dynamic(const TheoryInput& in);

/// Loop time at which both variances coincide: pi cos(theta) / b.
double crossover_time(double theta, double b);

/// Coherence of a Berry echo with per-loop phase spread sigma: exp(-(4 sigma)^2 / 2).
double coherence_from_sigma(double sigma);

/// exp(-(multiplier sigma)^2 / 2) for an arbitrary phase multiplier.
double coherence_from_sigma(double sigma, int multiplier);

}  // namespace berry
