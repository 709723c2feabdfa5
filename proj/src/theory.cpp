#include "berry/theory.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace berry {

namespace {

constexpr double kPi = std::numbers::pi;

void check(const TheoryInput& in) {
  if (!(in.b > 0.0) || !(in.tau > 0.0) || !(in.gamma_rate > 0.0) || !(in.power >= 0.0) ||
      !std::isfinite(in.theta)) {
    throw std::invalid_argument("TheoryInput: b, tau, gamma_rate must be > 0 and power >= 0");
  }
}

// Sum of delta_rho_k * dt over the first tau of the trace.
double plateau_integral(const NoiseTrace& trace, double tau) {
  if (!(trace.dt > 0.0)) throw std::invalid_argument("noise trace has no time step");
  const auto steps = static_cast<std::size_t>(std::llround(tau / trace.dt));
  if (trace.size() < steps || steps == 0) {
    throw std::invalid_argument("noise trace shorter than the loop time");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < steps; ++k) sum += trace.samples[k];
  return sum * trace.dt;
}

}  // namespace

double berry_phase_ideal(double solid_angle) { return 0.5 * solid_angle; }

double ou_integral_kernel(double rate, double tau) {
  const double x = rate * tau;
  double g;
  if (x < 0.1) {
    // x^2/2 - x^3/6 + x^4/24 - ... ; terms fall below 1e-17 relative by n = 14.
    double term = x * x / 2.0;
    g = 0.0;
    for (int n = 2; n < 16; ++n) {
      g += term;
      term *= -x / (n + 1);
    }
  } else {
    g = x + std::expm1(-x);
  }
  return g / (rate * rate);
}

double delta_gamma_first_order(const NoiseTrace& delta_rho, double theta, double b, double tau) {
  if (!(b > 0.0) || !(tau > 0.0)) throw std::invalid_argument("b and tau must be > 0");
  const double integral = plateau_integral(delta_rho, tau);
  return -(kPi / tau) * std::sin(theta) * (std::cos(theta) / b) * integral;
}

double delta_dynamic_first_order(const NoiseTrace& delta_rho, double theta, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  return std::sin(theta) * plateau_integral(delta_rho, tau);
}

double variance_geometric(const TheoryInput& in) {
  check(in);
  const double prefactor = kPi * std::cos(in.theta) * std::sin(in.theta) / (in.b * in.tau);
  return 2.0 * in.power * prefactor * prefactor * ou_integral_kernel(in.gamma_rate, in.tau);
}

double variance_dynamic(const TheoryInput& in) {
  check(in);
  const double s = std::sin(in.theta);
  return 2.0 * in.power * s * s * ou_integral_kernel(in.gamma_rate, in.tau);
}

double crossover_time(double theta, double b) {
  if (!(b > 0.0)) throw std::invalid_argument("crossover_time: b must be > 0");
  return kPi * std::cos(theta) / b;
}

double coherence_from_sigma(double sigma) { return coherence_from_sigma(sigma, 4); }

double coherence_from_sigma(double sigma, int multiplier) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("coherence_from_sigma: sigma must be >= 0");
  const double spread = multiplier * sigma;
  return std::exp(-0.5 * spread * spread);
}

}  // namespace berry
